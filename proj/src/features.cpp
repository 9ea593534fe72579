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


#include <algorithm>
#include <cctype>

#include "iacsmell/builtin_model.hpp"

namespace iacsmell::pruner {

std::vector<std::string> word_tokens(std::string_view text) {
  std::vector<std::string> words;
  std::string current;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_') {
      current += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!current.empty()) {
      words.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

std::vector<std::string> char_trigrams(std::string_view word) {
  std::vector<std::string> grams;
  for (std::size_t i = 0; i + 3 <= word.size(); ++i) grams.emplace_back(word.substr(i, 3));
  return grams;
}

namespace {

void add_text(std::string_view text, const std::string& word_prefix, const std::string& gram_prefix,
              std::vector<std::string>& out) {
  for (const auto& word : word_tokens(text)) {
    out.push_back(word_prefix + word);
    for (const auto& gram : char_trigrams(word)) out.push_back(gram_prefix + gram);
  }
}

}  // namespace

std::vector<std::string> feature_tokens(const Instance& instance) {
  std::vector<std::string> out;
  add_text(instance.target, "w:", "g:", out);
  add_text(instance.context, "cw:", "cg:", out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SparseFeatures extract_features(const BuiltinModel& model, const Instance& instance) {
  SparseFeatures x;
  for (const auto& token : feature_tokens(instance)) {
    if (auto it = model.index.find(token); it != model.index.end()) x.indices.push_back(it->second);
  }
  x.indices.push_back(model.smell_offset() + static_cast<std::size_t>(rules::smell_index(instance.smell)));
  std::sort(x.indices.begin(), x.indices.end());
  return x;
}

}  // namespace iacsmell::pruner
