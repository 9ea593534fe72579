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


#include <cmath>
#include <cstring>
#include <random>

#include "doctest.h"
#include "iacsmell/builtin_model.hpp"
#include "iacsmell/errors.hpp"
#include "iacsmell/text.hpp"
#include "support.hpp"

using namespace iacsmell;
using namespace iacsmell::pruner;

TEST_CASE("sigmoid of the linear score") {
  const auto inst = testsupport::separable_set(1, 0)[0];
  BuiltinModel zero = BuiltinModel::with_vocabulary(feature_tokens(inst));
  CHECK(score_builtin(zero, inst) == 0.5);
  zero.bias = 40.0;
  CHECK(score_builtin(zero, inst) > 1.0 - 1e-12);
  zero.bias = -800.0;
  const double p = score_builtin(zero, inst);
  CHECK(p >= 0.0);
  CHECK(p < 1e-300);
  CHECK(std::isfinite(sigmoid(-1e308)));
}

TEST_CASE("weights carry one slot per vocabulary entry plus one per smell") {
  const auto model = BuiltinModel::with_vocabulary({"b", "a", "b"});
  CHECK(model.vocabulary == std::vector<std::string>{"a", "b"});
  CHECK(model.weights.size() == 2 + kSmellCount);
  CHECK(model.index.at("b") == 1);
}

TEST_CASE("analytic gradient matches central differences") {
  for (std::uint64_t probe = 0; probe < 20; ++probe) {
    CAPTURE(probe);
    CHECK(testsupport::gradient_probe(1000 + probe) < 1e-5);
  }
}

TEST_CASE("single-class or unlabeled training data is rejected") {
  auto insts = testsupport::separable_set(10, 0);
  std::vector<Instance> tp_only;
  for (const auto& i : insts) {
    if (i.label == Label::TP) tp_only.push_back(i);
  }
  CHECK_THROWS_AS(train_builtin(tp_only, {}), DegenerateDataError);
  CHECK_THROWS_AS(train_builtin({}, {}), DegenerateDataError);
  insts[3].label.reset();
  CHECK_THROWS_AS(train_builtin(insts, {}), DegenerateDataError);
}

TEST_CASE("separable set is learned exactly and deterministically") {
  const auto train = testsupport::separable_set(40, 0);
  const auto val = testsupport::separable_set(20, 1000);
  TrainOptions options;
  options.epochs = 50;
  options.seed = 3;
  const auto first = train_builtin(train, val, options);
  const auto second = train_builtin(train, val, options);
  CHECK(first.best_val_f1 == 1.0);
  CHECK(first.best_epoch >= 1);
  CHECK(first.best_epoch <= 50);
  CHECK(first.history.size() == 50);
  CHECK(serialize_model(first.model) == serialize_model(second.model));

  const auto held_out = testsupport::separable_set(4, 5000);
  for (const auto& inst : held_out) {
    const double p = score_builtin(first.model, inst);
    CHECK((inst.label == Label::FP) == (p > 0.5));
  }
  CHECK(fp_class_f1(first.model, val) == 1.0);

  options.seed = 4;
  const auto other_seed = train_builtin(train, val, options);
  CHECK(other_seed.best_val_f1 == 1.0);
}

TEST_CASE("model files reload bit-exactly") {
  const auto trained = train_builtin(testsupport::separable_set(30, 0), testsupport::separable_set(10, 400)).model;
  const std::string text = serialize_model(trained);
  const auto reloaded = parse_model(text);
  CHECK(reloaded.vocabulary == trained.vocabulary);
  REQUIRE(reloaded.weights.size() == trained.weights.size());
  CHECK(std::memcmp(reloaded.weights.data(), trained.weights.data(), trained.weights.size() * sizeof(double)) == 0);
  CHECK(std::memcmp(&reloaded.bias, &trained.bias, sizeof(double)) == 0);
  CHECK(serialize_model(reloaded) == text);

  testsupport::TempDir dir;
  save_model(dir.path() / "m.txt", trained);
  CHECK(serialize_model(load_model(dir.path() / "m.txt")) == text);

  // Awkward doubles survive the text form.
  std::mt19937_64 rng(9);
  BuiltinModel model = BuiltinModel::with_vocabulary({"x"});
  for (double& w : model.weights) {
    std::uint64_t bits = rng();
    std::memcpy(&w, &bits, sizeof w);
    if (!std::isfinite(w)) w = 1e-310;
  }
  model.bias = 0.1 + 0.2;
  const auto again = parse_model(serialize_model(model));
  CHECK(std::memcmp(again.weights.data(), model.weights.data(), model.weights.size() * sizeof(double)) == 0);
  CHECK(again.bias == model.bias);

  CHECK_THROWS_AS(parse_model(""), FormatError);
  CHECK_THROWS_AS(parse_model("something else\n"), FormatError);
  std::string wrong_version = text;
  wrong_version.replace(wrong_version.find(" v1 "), 4, " v9 ");
  CHECK_THROWS_AS(parse_model(wrong_version), FormatError);
  CHECK_THROWS_AS(parse_model(text.substr(0, text.size() / 2)), FormatError);
}
