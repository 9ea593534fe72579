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
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "iacsmell/builtin_model.hpp"
#include "iacsmell/errors.hpp"
#include "iacsmell/text.hpp"

namespace iacsmell::pruner {

BuiltinModel BuiltinModel::with_vocabulary(std::vector<std::string> vocabulary) {
  std::sort(vocabulary.begin(), vocabulary.end());
  vocabulary.erase(std::unique(vocabulary.begin(), vocabulary.end()), vocabulary.end());
  BuiltinModel model;
  model.vocabulary = std::move(vocabulary);
  for (std::size_t i = 0; i < model.vocabulary.size(); ++i) model.index.emplace(model.vocabulary[i], i);
  model.weights.assign(model.dimension(), 0.0);
  return model;
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double linear_score(const BuiltinModel& model, const SparseFeatures& x) {
  double z = model.bias;
  for (std::size_t i : x.indices) z += model.weights[i];
  return z;
}

double score_builtin(const BuiltinModel& model, const Instance& instance) {
  return sigmoid(linear_score(model, extract_features(model, instance)));
}

namespace {

double softplus(double a) { return std::max(a, 0.0) + std::log1p(std::exp(-std::abs(a))); }

double target_of(const Instance& inst) {
  if (!inst.label) throw DegenerateDataError("instance " + inst.id + " has no label");
  return *inst.label == Label::FP ? 1.0 : 0.0;
}

}  // namespace

double example_loss(const BuiltinModel& model, const SparseFeatures& x, double y, double l2) {
  const double z = linear_score(model, x);
  const double ce = y * softplus(-z) + (1.0 - y) * softplus(z);
  double norm = 0.0;
  for (double w : model.weights) norm += w * w;
  return ce + 0.5 * l2 * norm;
}

Gradient example_gradient(const BuiltinModel& model, const SparseFeatures& x, double y, double l2) {
  const double residual = sigmoid(linear_score(model, x)) - y;
  Gradient g;
  g.weights.resize(model.weights.size());
  for (std::size_t i = 0; i < model.weights.size(); ++i) g.weights[i] = l2 * model.weights[i];
  for (std::size_t i : x.indices) g.weights[i] += residual;
  g.bias = residual;
  return g;
}

double fp_class_f1(const BuiltinModel& model, const std::vector<Instance>& labeled) {
  int tp = 0;
  int fp = 0;
  int fn = 0;
  for (const auto& inst : labeled) {
    const bool actual_fp = target_of(inst) == 1.0;
    const bool predicted_fp = score_builtin(model, inst) >= 0.5;
    if (predicted_fp && actual_fp) ++tp;
    if (predicted_fp && !actual_fp) ++fp;
    if (!predicted_fp && actual_fp) ++fn;
  }
  const int denom = 2 * tp + fp + fn;
  return denom == 0 ? 0.0 : 2.0 * tp / denom;
}

TrainResult train_builtin(const std::vector<Instance>& train, const std::vector<Instance>& val,
                          const TrainOptions& options) {
  if (train.empty()) throw DegenerateDataError("training set is empty");
  std::set<double> classes;
  for (const auto& inst : train) classes.insert(target_of(inst));
  if (classes.size() < 2) throw DegenerateDataError("training set contains a single class");
  for (const auto& inst : val) target_of(inst);
  if (options.epochs < 1) throw Error("epochs must be positive");

  std::vector<std::string> vocabulary;
  for (const auto& inst : train) {
    for (auto& tok : feature_tokens(inst)) vocabulary.push_back(std::move(tok));
  }
  BuiltinModel model = BuiltinModel::with_vocabulary(std::move(vocabulary));

  std::vector<SparseFeatures> features;
  std::vector<double> targets;
  for (const auto& inst : train) {
    features.push_back(extract_features(model, inst));
    targets.push_back(target_of(inst));
  }
  const std::vector<Instance>& selection = val.empty() ? train : val;

  std::mt19937_64 rng(options.seed);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  const double decay = 1.0 - options.learning_rate * options.l2;

  TrainResult result;
  result.best_val_f1 = -1.0;
  for (int epoch = 1; epoch <= options.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double total_loss = 0.0;
    for (std::size_t k : order) {
      const SparseFeatures& x = features[k];
      const double z = linear_score(model, x);
      const double y = targets[k];
      total_loss += y * softplus(-z) + (1.0 - y) * softplus(z);
      const double step = options.learning_rate * (sigmoid(z) - y);
      if (options.l2 != 0.0) {
        for (double& w : model.weights) w *= decay;
      }
      for (std::size_t i : x.indices) model.weights[i] -= step;
      model.bias -= step;
    }
    EpochStat stat;
    stat.epoch = epoch;
    stat.mean_loss = total_loss / static_cast<double>(train.size());
    stat.val_f1 = fp_class_f1(model, selection);
    result.history.push_back(stat);
    if (stat.val_f1 > result.best_val_f1) {
      result.best_val_f1 = stat.val_f1;
      result.best_epoch = epoch;
      result.model = model;
    }
  }
  return result;
}

std::string serialize_model(const BuiltinModel& model) {
  std::string out;
  out += std::string(BuiltinModel::kFormat) + " " + std::string(BuiltinModel::kVersion) +
         " vocab=" + std::to_string(model.vocabulary.size()) + " smells=" + std::to_string(kSmellCount) + "\n";
  out += "vocab\n";
  for (const auto& tok : model.vocabulary) out += tok + "\n";
  out += "weights\n";
  for (double w : model.weights) out += text::format_double(w) + "\n";
  out += "bias " + text::format_double(model.bias) + "\n";
  return out;
}

BuiltinModel parse_model(std::string_view content) {
  const auto lines = text::split_lines(content);
  std::size_t at = 0;
  auto next = [&](const char* what) -> const std::string& {
    if (at >= lines.size()) throw FormatError(std::string("model file truncated before ") + what);
    return lines[at++];
  };
  std::istringstream header(next("header"));
  std::string format;
  std::string version;
  std::string vocab_field;
  std::string smells_field;
  header >> format >> version >> vocab_field >> smells_field;
  if (format != BuiltinModel::kFormat) throw FormatError("not a builtin model file");
  if (version != BuiltinModel::kVersion) throw FormatError("unsupported model version '" + version + "'");
  if (vocab_field.rfind("vocab=", 0) != 0 || smells_field != "smells=" + std::to_string(kSmellCount)) {
    throw FormatError("malformed model header");
  }
  std::size_t vocab_size = 0;
  try {
    vocab_size = std::stoul(vocab_field.substr(6));
  } catch (const std::exception&) {
    throw FormatError("malformed vocabulary size in model header");
  }
  if (next("vocab") != "vocab") throw FormatError("model file lacks the vocab section");
  std::vector<std::string> vocabulary;
  for (std::size_t i = 0; i < vocab_size; ++i) vocabulary.push_back(next("end of vocabulary"));
  if (!std::is_sorted(vocabulary.begin(), vocabulary.end()) ||
      std::adjacent_find(vocabulary.begin(), vocabulary.end()) != vocabulary.end()) {
    throw FormatError("model vocabulary is not sorted and unique");
  }
  BuiltinModel model = BuiltinModel::with_vocabulary(std::move(vocabulary));
  if (next("weights") != "weights") throw FormatError("model file lacks the weights section");
  for (double& w : model.weights) w = text::parse_double(next("end of weights"));
  const std::string& bias = next("bias");
  if (bias.rfind("bias ", 0) != 0) throw FormatError("model file lacks the bias line");
  model.bias = text::parse_double(bias.substr(5));
  while (at < lines.size()) {
    if (!text::trim(lines[at++]).empty()) throw FormatError("trailing content in model file");
  }
  return model;
}

void save_model(const std::filesystem::path& path, const BuiltinModel& model) {
  text::write_file(path, serialize_model(model));
}

BuiltinModel load_model(const std::filesystem::path& path) { return parse_model(text::read_file(path)); }

}  // namespace iacsmell::pruner
