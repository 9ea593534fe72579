// Copyright 2026 The iacsmell Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Test double for the external scorer protocol. Usage: fake_scorer MODE [ARG]
//   constant P     answer P for every request
//   magic          answer x when the target or context contains "fp=x", else 0.1
//   reverse        answer each burst of requests in reverse order
//   sleep MS       sleep before every answer
//   exit-after N   answer N requests, then exit
//   error-on N     answer request number N with an error record
//   malformed      answer with a line that is not JSON
//   unknown-id     answer with an id that was never sent
//   duplicate      answer the first request twice
//   out-of-range   answer 1.5
//   no-handshake   exit without greeting
//   bad-handshake  greet with ready=false

#include <poll.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

namespace {

std::string pending;

// Next complete line from stdin, waiting at most wait_ms (-1 forever).
std::optional<std::string> next_line(int wait_ms, bool* eof) {
  for (;;) {
    const auto nl = pending.find('\n');
    if (nl != std::string::npos) {
      std::string line = pending.substr(0, nl);
      pending.erase(0, nl + 1);
      return line;
    }
    pollfd pfd{STDIN_FILENO, POLLIN, 0};
    if (::poll(&pfd, 1, wait_ms) <= 0) return std::nullopt;
    char buf[4096];
    const ssize_t n = ::read(STDIN_FILENO, buf, sizeof buf);
    if (n <= 0) {
      *eof = true;
      return std::nullopt;
    }
    pending.append(buf, static_cast<std::size_t>(n));
  }
}

void emit(const nlohmann::json& record) { std::cout << record.dump() << std::endl; }

double magic_probability(const nlohmann::json& request) {
  for (const char* field : {"target", "context"}) {
    const std::string text = request.value(field, "");
    const auto at = text.find("fp=");
    if (at != std::string::npos) return std::strtod(text.c_str() + at + 3, nullptr);
  }
  return 0.1;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string mode = argc > 1 ? argv[1] : "constant";
  const std::string arg = argc > 2 ? argv[2] : "";
  if (mode == "no-handshake") return 0;
  if (mode == "bad-handshake") {
    emit({{"ready", false}});
    return 0;
  }
  emit({{"ready", true}, {"scorer_id", "fake-" + mode}});

  long answered = 0;
  bool eof = false;
  while (!eof) {
    std::vector<nlohmann::json> burst;
    if (auto line = next_line(-1, &eof)) burst.push_back(nlohmann::json::parse(*line));
    if (mode == "reverse") {
      while (auto more = next_line(100, &eof)) burst.push_back(nlohmann::json::parse(*more));
      std::reverse(burst.begin(), burst.end());
    }
    for (const auto& request : burst) {
      const long long id = request.at("id").get<long long>();
      ++answered;
      if (mode == "constant") {
        emit({{"id", id}, {"fp_probability", std::strtod(arg.c_str(), nullptr)}});
      } else if (mode == "magic" || mode == "reverse") {
        emit({{"id", id}, {"fp_probability", magic_probability(request)}});
      } else if (mode == "sleep") {
        std::this_thread::sleep_for(std::chrono::milliseconds(std::atol(arg.c_str())));
        emit({{"id", id}, {"fp_probability", 0.2}});
      } else if (mode == "exit-after") {
        if (answered > std::atol(arg.c_str())) return 0;
        emit({{"id", id}, {"fp_probability", 0.2}});
      } else if (mode == "error-on") {
        if (answered == std::atol(arg.c_str())) {
          emit({{"id", id}, {"error", "cannot score"}});
        } else {
          emit({{"id", id}, {"fp_probability", 0.2}});
        }
      } else if (mode == "malformed") {
        std::cout << "this is not json" << std::endl;
      } else if (mode == "unknown-id") {
        emit({{"id", id + 1000}, {"fp_probability", 0.2}});
      } else if (mode == "duplicate") {
        emit({{"id", id}, {"fp_probability", 0.2}});
        if (answered == 1) emit({{"id", id}, {"fp_probability", 0.2}});
      } else if (mode == "out-of-range") {
        emit({{"id", id}, {"fp_probability", 1.5}});
      } else {
        std::cerr << "unknown mode " << mode << "\n";
        return 3;
      }
    }
  }
  return 0;
}
