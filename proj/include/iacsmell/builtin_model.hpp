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


#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "iacsmell/instance.hpp"

namespace iacsmell::pruner {

// Lowercased runs of letters, digits and underscores.
std::vector<std::string> word_tokens(std::string_view text);
// Character trigrams of one word; empty for words shorter than three.
std::vector<std::string> char_trigrams(std::string_view word);

// Sorted, unique lexical feature names of an instance. Target features carry
// the prefixes "w:" (word) and "g:" (trigram); context features "cw:" and
// "cg:".
std::vector<std::string> feature_tokens(const Instance& instance);

inline constexpr std::size_t kSmellCount = rules::kAllSmells.size();

// Logistic regression over binary lexical features plus a one-hot block
// for the smell type at the tail of the weight vector.
struct BuiltinModel {
  static constexpr std::string_view kFormat = "iacsmell-builtin-model";
  static constexpr std::string_view kVersion = "v1";

  std::vector<std::string> vocabulary;  // sorted
  std::unordered_map<std::string, std::size_t> index;
  std::vector<double> weights;  // vocabulary.size() + kSmellCount
  double bias = 0.0;

  static BuiltinModel with_vocabulary(std::vector<std::string> vocabulary);
  std::size_t smell_offset() const { return vocabulary.size(); }
  std::size_t dimension() const { return vocabulary.size() + kSmellCount; }
};

// Active feature indices, ascending; all values are 1.
struct SparseFeatures {
  std::vector<std::size_t> indices;
  friend bool operator==(const SparseFeatures&, const SparseFeatures&) = default;
};

SparseFeatures extract_features(const BuiltinModel& model, const Instance& instance);

double sigmoid(double z);
double linear_score(const BuiltinModel& model, const SparseFeatures& x);
double score_builtin(const BuiltinModel& model, const Instance& instance);

// Binary cross-entropy with target y (FP = 1) plus (l2 / 2) * |w|^2; the
// bias is not regularized.
double example_loss(const BuiltinModel& model, const SparseFeatures& x, double y, double l2);

struct Gradient {
  std::vector<double> weights;
  double bias = 0.0;
};
Gradient example_gradient(const BuiltinModel& model, const SparseFeatures& x, double y, double l2);

struct TrainOptions {
  int epochs = 50;
  double learning_rate = 0.1;
  double l2 = 1e-4;
  std::uint64_t seed = 7;
};

struct EpochStat {
  int epoch = 0;
  double mean_loss = 0.0;
  double val_f1 = 0.0;
};

struct TrainResult {
  BuiltinModel model;
  int best_epoch = 0;
  double best_val_f1 = 0.0;
  std::vector<EpochStat> history;
};

// F1 of the FP class with decision p >= 0.5.
double fp_class_f1(const BuiltinModel& model, const std::vector<Instance>& labeled);

// SGD on the cross-entropy objective; returns the epoch snapshot with the
// best validation F1 (training data stands in for an empty validation set).
// Throws DegenerateDataError when training data is empty or single-class.
TrainResult train_builtin(const std::vector<Instance>& train, const std::vector<Instance>& val,
                          const TrainOptions& options = {});

std::string serialize_model(const BuiltinModel& model);
BuiltinModel parse_model(std::string_view content);
void save_model(const std::filesystem::path& path, const BuiltinModel& model);
BuiltinModel load_model(const std::filesystem::path& path);

}  // namespace iacsmell::pruner
