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


#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstring>
#include <map>
#include <thread>

#include "json.hpp"

#include "iacsmell/errors.hpp"
#include "iacsmell/pruner.hpp"

namespace iacsmell::pruner {

namespace {

using Clock = std::chrono::steady_clock;

int remaining_ms(Clock::time_point deadline) {
  const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
  return left <= 0 ? 0 : static_cast<int>(std::min<long long>(left, 1 << 30));
}

std::string seq_label(long long id) { return "sequence id " + std::to_string(id); }

}  // namespace

ExternalScorer::ExternalScorer(std::string command, std::chrono::milliseconds timeout)
    : command_(std::move(command)), timeout_(timeout) {
  int fds[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, fds) != 0) {
    throw PrunerError(std::string("socketpair failed: ") + std::strerror(errno));
  }
  const pid_t pid = ::fork();
  if (pid < 0) {
    ::close(fds[0]);
    ::close(fds[1]);
    throw PrunerError(std::string("fork failed: ") + std::strerror(errno));
  }
  if (pid == 0) {
    ::dup2(fds[1], STDIN_FILENO);
    ::dup2(fds[1], STDOUT_FILENO);
    ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(fds[1]);
  fd_ = fds[0];
  pid_ = pid;

  const auto deadline = Clock::now() + timeout_;
  try {
    const std::string line = read_line(deadline, 0);
    nlohmann::json hello;
    try {
      hello = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
      throw PrunerError("malformed handshake from external scorer: " + line);
    }
    if (!hello.is_object() || !hello.contains("ready") || hello["ready"] != true) {
      throw PrunerError("external scorer handshake lacks ready=true: " + line);
    }
    scorer_id_ = hello.contains("scorer_id") && hello["scorer_id"].is_string()
                     ? hello["scorer_id"].get<std::string>()
                     : std::string("external");
  } catch (...) {
    shutdown_child();
    throw;
  }
}

ExternalScorer::~ExternalScorer() { shutdown_child(); }

void ExternalScorer::shutdown_child() {
  if (fd_ >= 0) {
    ::shutdown(fd_, SHUT_WR);
  }
  if (pid_ > 0) {
    int status = 0;
    const auto deadline = Clock::now() + std::chrono::milliseconds(1000);
    bool reaped = false;
    while (Clock::now() < deadline) {
      const pid_t r = ::waitpid(pid_, &status, WNOHANG);
      if (r == pid_ || r < 0) {
        reaped = true;
        break;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    if (!reaped) {
      ::kill(pid_, SIGKILL);
      ::waitpid(pid_, &status, 0);
    }
    pid_ = -1;
  }
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

std::string ExternalScorer::read_line(Clock::time_point deadline, long long pending_id) {
  for (;;) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      return line;
    }
    if (fd_ < 0) throw PrunerError("external scorer is not running");
    pollfd pfd{fd_, POLLIN, 0};
    const int ms = remaining_ms(deadline);
    const int rc = ::poll(&pfd, 1, ms);
    if (rc < 0 && errno == EINTR) continue;
    if (rc == 0) {
      throw PrunerError("external scorer timed out" +
                        (pending_id > 0 ? " waiting for " + seq_label(pending_id) : std::string(" during handshake")));
    }
    char chunk[4096];
    const ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      throw PrunerError("external scorer exited" +
                        (pending_id > 0 ? " before answering " + seq_label(pending_id) : std::string(" before handshake")));
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

std::vector<double> ExternalScorer::score(const std::vector<Instance>& batch) {
  if (batch.empty()) return {};
  if (fd_ < 0) throw PrunerError("external scorer is not running");

  std::vector<std::string> lines;
  std::map<long long, std::size_t> slot;
  const long long first = next_id_;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const long long id = next_id_++;
    slot[id] = i;
    nlohmann::json req = {{"id", id},
                          {"target", batch[i].target},
                          {"context", batch[i].context},
                          {"smell", std::string(rules::smell_name(batch[i].smell))},
                          {"technology", std::string(ir::technology_name(batch[i].technology))}};
    lines.push_back(req.dump() + "\n");
  }

  std::vector<double> out(batch.size(), 0.0);
  std::vector<bool> seen(batch.size(), false);
  std::size_t answered = 0;
  std::size_t sent_lines = 0;
  std::size_t sent_off = 0;
  auto deadline = Clock::now() + timeout_;

  auto lowest_pending = [&]() {
    for (const auto& [id, idx] : slot) {
      if (!seen[idx]) return id;
    }
    return first;
  };

  auto fail = [&](const std::string& message) {
    shutdown_child();
    throw PrunerError(message);
  };

  auto handle_line = [&](const std::string& line) {
    nlohmann::json resp;
    try {
      resp = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
      fail("malformed response from external scorer while awaiting " + seq_label(lowest_pending()) + ": " + line);
    }
    if (!resp.is_object() || !resp.contains("id") || !resp["id"].is_number_integer()) {
      fail("response without an integer id while awaiting " + seq_label(lowest_pending()) + ": " + line);
    }
    const long long id = resp["id"].get<long long>();
    const auto it = slot.find(id);
    if (it == slot.end() || seen[it->second]) {
      fail("unexpected response for " + seq_label(id));
    }
    if (resp.contains("error")) {
      const std::string msg = resp["error"].is_string() ? resp["error"].get<std::string>() : resp["error"].dump();
      fail("external scorer reported an error for " + seq_label(id) + ": " + msg);
    }
    if (!resp.contains("fp_probability") || !resp["fp_probability"].is_number()) {
      fail("response for " + seq_label(id) + " lacks fp_probability");
    }
    const double p = resp["fp_probability"].get<double>();
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
      fail("fp_probability out of range for " + seq_label(id));
    }
    out[it->second] = p;
    seen[it->second] = true;
    ++answered;
    deadline = Clock::now() + timeout_;
  };

  while (answered < batch.size()) {
    for (auto nl = buffer_.find('\n'); nl != std::string::npos && answered < batch.size(); nl = buffer_.find('\n')) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      handle_line(line);
    }
    if (answered == batch.size()) break;

    pollfd pfd{fd_, POLLIN, 0};
    if (sent_lines < lines.size()) pfd.events |= POLLOUT;
    const int rc = ::poll(&pfd, 1, remaining_ms(deadline));
    if (rc < 0 && errno == EINTR) continue;
    if (rc < 0) fail(std::string("poll failed: ") + std::strerror(errno));
    if (rc == 0) fail("external scorer timed out waiting for " + seq_label(lowest_pending()));

    if (pfd.revents & POLLIN) {
      char chunk[4096];
      const ssize_t n = ::recv(fd_, chunk, sizeof chunk, MSG_DONTWAIT);
      if (n == 0) fail("external scorer exited before answering " + seq_label(lowest_pending()));
      if (n > 0) buffer_.append(chunk, static_cast<std::size_t>(n));
      if (n < 0 && errno != EAGAIN && errno != EINTR) {
        fail("external scorer exited before answering " + seq_label(lowest_pending()));
      }
    } else if (pfd.revents & (POLLHUP | POLLERR)) {
      fail("external scorer exited before answering " + seq_label(lowest_pending()));
    }
    if ((pfd.revents & POLLOUT) && sent_lines < lines.size()) {
      const std::string& cur = lines[sent_lines];
      const ssize_t n = ::send(fd_, cur.data() + sent_off, cur.size() - sent_off, MSG_NOSIGNAL | MSG_DONTWAIT);
      if (n < 0 && errno != EAGAIN && errno != EINTR) {
        fail("external scorer exited before receiving " + seq_label(first + static_cast<long long>(sent_lines)));
      }
      if (n > 0) {
        sent_off += static_cast<std::size_t>(n);
        if (sent_off == cur.size()) {
          ++sent_lines;
          sent_off = 0;
        }
      }
    }
  }
  return out;
}

}  // namespace iacsmell::pruner
