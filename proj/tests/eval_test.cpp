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


#include "doctest.h"
#include "iacsmell/errors.hpp"
#include "iacsmell/eval.hpp"
#include "iacsmell/text.hpp"
#include "simulators.hpp"
#include "support.hpp"

using namespace iacsmell;
using namespace iacsmell::eval;
using rules::SmellType;

namespace {

Finding pred(const std::string& file, int line, SmellType smell, double confidence = 1.0) {
  Finding f;
  f.file_path = file;
  f.line = line;
  f.smell = smell;
  f.confidence = confidence;
  return f;
}

}  // namespace

TEST_CASE("oracle files") {
  const auto entries = parse_oracle("file_path,line,smell\n# note\n\na.pp,3,WeakCrypto\n b.yml , 1 , HttpWithoutTls\n");
  REQUIRE(entries.size() == 2);
  CHECK(entries[0] == OracleEntry{"a.pp", 3, SmellType::WeakCrypto});
  CHECK(entries[1] == OracleEntry{"b.yml", 1, SmellType::HttpWithoutTls});
  CHECK(parse_oracle(write_oracle(entries)) == entries);
  CHECK(parse_oracle("a.pp,3,WeakCrypto\n").size() == 1);
  CHECK_THROWS_AS(parse_oracle("a.pp,3\n"), FormatError);
  CHECK_THROWS_AS(parse_oracle("a.pp,x,WeakCrypto\n"), FormatError);
  CHECK_THROWS_AS(parse_oracle("a.pp,0,WeakCrypto\n"), FormatError);
  CHECK_THROWS_AS(parse_oracle("a.pp,2,Smelly\n"), FormatError);
  CHECK_THROWS_AS(parse_oracle("a.pp,1,WeakCrypto\nb.pp,line,WeakCrypto\n"), FormatError);
  CHECK(load_oracle(testsupport::fixture("oracle.csv")).size() == 41);
}

TEST_CASE("match examples") {
  const std::vector<OracleEntry> oracle = {{"a", 1, SmellType::WeakCrypto}, {"a", 2, SmellType::WeakCrypto}};
  const auto same = match({pred("a", 1, SmellType::WeakCrypto), pred("a", 2, SmellType::WeakCrypto)}, oracle);
  CHECK(same.tp == 2);
  CHECK(same.fp == 0);
  CHECK(same.fn == 0);

  std::vector<Finding> three;
  for (int i = 1; i <= 3; ++i) three.push_back(pred("p", i, SmellType::EmptyPassword));
  std::vector<OracleEntry> five;
  for (int i = 1; i <= 5; ++i) five.push_back({"o", i, SmellType::EmptyPassword});
  const auto disjoint = match(three, five);
  CHECK(disjoint.tp == 0);
  CHECK(disjoint.fp == 3);
  CHECK(disjoint.fn == 5);
  CHECK(disjoint.per_smell.at(SmellType::EmptyPassword).fn == 5);

  // Same line, other smell is not a match.
  const auto other = match({pred("a", 1, SmellType::HttpWithoutTls)}, oracle);
  CHECK(other.tp == 0);
  CHECK(other.fp == 1);
}

TEST_CASE("precision, recall and F1 conventions") {
  const auto zero = prf1(Counts{0, 0, 0});
  CHECK(zero.precision == 0.0);
  CHECK(zero.recall == 0.0);
  CHECK(zero.f1 == 0.0);
  const auto half = prf1(Counts{1, 1, 1});
  CHECK(half.precision == 0.5);
  CHECK(half.recall == 0.5);
  CHECK(half.f1 == 0.5);
  CHECK(prf1(Counts{65, 90, 0}).precision == doctest::Approx(0.419).epsilon(0.001));
  CHECK(std::abs(prf1(Counts{61, 85, 4}).precision - 0.418) <= 0.001);
}

TEST_CASE("macro F1") {
  using ir::Technology;
  CHECK(std::abs(macro_f1({{Technology::Puppet, 0.846}, {Technology::Ansible, 0.878}, {Technology::Chef, 0.768}}) -
                 0.831) <= 0.0005);
  CHECK(macro_f1({{Technology::Puppet, 1}, {Technology::Ansible, 1}, {Technology::Chef, 1}}) == 1.0);
  CHECK(macro_f1({{Technology::Puppet, 0}, {Technology::Ansible, 0}, {Technology::Chef, 0.9}}) ==
        doctest::Approx(0.3).epsilon(1e-12));
  CHECK_THROWS_AS(macro_f1({{Technology::Puppet, 1}, {Technology::Chef, 1}}), MissingTechnologyError);
}

TEST_CASE("effort at recall examples") {
  std::vector<OracleEntry> oracle;
  for (int i = 1; i <= 10; ++i) oracle.push_back({"f", i, SmellType::WeakCrypto});
  std::vector<Finding> ranking;
  for (int i = 1; i <= 6; ++i) ranking.push_back(pred("f", i, SmellType::WeakCrypto));
  CHECK(effort_at_recall(ranking, oracle, 0.6, 1000) == 100.0 * 6 / 1000);

  // A second smell on an inspected line costs nothing extra.
  std::vector<Finding> doubled = {pred("f", 1, SmellType::HttpWithoutTls)};
  for (int i = 1; i <= 6; ++i) doubled.push_back(pred("f", i, SmellType::WeakCrypto));
  CHECK(effort_at_recall(doubled, oracle, 0.6, 1000) == 100.0 * 6 / 1000);

  const std::vector<Finding> half(ranking.begin(), ranking.begin() + 5);
  CHECK_FALSE(effort_at_recall(half, oracle, 0.6, 1000).has_value());
  CHECK(effort_at_recall(half, oracle, 0.0, 1000) == 0.0);
  CHECK_THROWS_AS(effort_at_recall(ranking, {}, 0.6, 1000), EmptyOracleError);
  CHECK_THROWS_AS(effort_at_recall(ranking, oracle, 0.6, 0), Error);

  const auto curve = effort_curve(doubled, oracle);
  REQUIRE(curve.size() == doubled.size());
  for (std::size_t i = 1; i < curve.size(); ++i) {
    CHECK(curve[i].loc_inspected >= curve[i - 1].loc_inspected);
    CHECK(curve[i].cumulative_recall >= curve[i - 1].cumulative_recall);
  }
  CHECK(curve.back().loc_inspected == 6);
  CHECK(curve.back().cumulative_recall == 0.6);
}

TEST_CASE("F1 within a LOC budget examples") {
  std::vector<OracleEntry> oracle;
  for (int i = 1; i <= 4; ++i) oracle.push_back({"f", i, SmellType::WeakCrypto});
  std::vector<Finding> ranking;
  for (int i = 1; i <= 4; ++i) ranking.push_back(pred("f", i, SmellType::WeakCrypto));
  ranking.push_back(pred("g", 1, SmellType::WeakCrypto));
  CHECK(f1_at_loc(ranking, oracle, 0.01, 400) == 1.0);
  CHECK(f1_at_loc({pred("g", 1, SmellType::WeakCrypto)}, oracle, 0.01, 400) == 0.0);
  // Budget floor is one line.
  CHECK(f1_at_loc(ranking, oracle, 0.01, 10) == doctest::Approx(2 * 1.0 * 0.25 / 1.25));
  CHECK_THROWS_AS(f1_at_loc(ranking, {}, 0.01, 400), EmptyOracleError);
}

TEST_CASE("metrics agree with brute-force simulators") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    CAPTURE(seed);
    CHECK(simulators::check_match(seed).empty());
    CHECK(simulators::check_effort(seed).empty());
    CHECK(simulators::check_f1_budget(seed).empty());
  }
}

TEST_CASE("metric invariants on random cases") {
  for (std::uint64_t seed = 500; seed < 700; ++seed) {
    const auto c = simulators::random_metric_case(seed, false);
    // Symmetric identity and conservation.
    std::vector<Finding> as_predictions;
    for (const auto& e : c.oracle) as_predictions.push_back(pred(e.file_path, e.line, e.smell));
    const auto self = match(as_predictions, c.oracle);
    CHECK(self.fp == 0);
    CHECK(self.fn == 0);
    const auto m = match(c.ranking, c.oracle);
    CHECK(m.tp + m.fn == static_cast<long>(c.oracle.size()));
    CHECK(m.tp + m.fp == static_cast<long>(c.ranking.size()));

    // Effort is non-decreasing in the target recall.
    std::optional<double> last = 0.0;
    for (double t : {0.1, 0.3, 0.6, 0.8, 1.0}) {
      const auto e = effort_at_recall(c.ranking, c.oracle, t, c.total_loc);
      if (!last) {
        CHECK_FALSE(e.has_value());
      } else if (e) {
        CHECK(*e >= *last);
      }
      last = e;
    }

    // Recall inside the budget grows with the budget.
    double previous_recall = 0.0;
    for (double f : {0.0, 0.01, 0.05, 0.2, 0.5, 1.0}) {
      const long budget = std::max<long>(1, static_cast<long>(std::floor(f * c.total_loc + 1e-9)));
      std::set<std::pair<std::string, int>> lines;
      long tp = 0;
      std::set<simulators::Key> gold;
      for (const auto& e : c.oracle) gold.insert(simulators::key(e));
      for (const auto& r : c.ranking) {
        if (!lines.count({r.file_path, r.line}) && static_cast<long>(lines.size()) == budget) break;
        lines.insert({r.file_path, r.line});
        tp += gold.count(simulators::key(r)) ? 1 : 0;
      }
      const double recall = static_cast<double>(tp) / static_cast<double>(c.oracle.size());
      CHECK(recall >= previous_recall);
      previous_recall = recall;
    }

    // Permuting equal-confidence findings changes nothing once re-ranked.
    std::vector<Finding> shuffled = c.ranking;
    std::mt19937_64 rng(seed);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto reranked = rank_by_confidence(shuffled);
    CHECK(reranked == c.ranking);
    CHECK(effort_at_recall(reranked, c.oracle, 0.6, c.total_loc) ==
          effort_at_recall(c.ranking, c.oracle, 0.6, c.total_loc));
  }
}

TEST_CASE("per-smell report") {
  CHECK(testsupport::fixture_table() == text::read_file(testsupport::fixture("expected_table.csv")));

  const auto rows = per_smell_report(match({}, {}), {"clean.pp"}, {}, {});
  REQUIRE(rows.size() == 10);
  CHECK(rows[0].counts == Counts{0, 0, 0});
  CHECK(rows[0].scores.f1 == 0.0);
  CHECK(rows[9].name == "NoSmell");
  CHECK(rows[9].counts == Counts{1, 0, 0});
  CHECK(rows[9].scores.precision == 1.0);
}

TEST_CASE("evaluation summary over the fixture corpus") {
  const auto loaded = parsers::load_project(testsupport::fixture("corpus"));
  const auto findings = rules::detect(loaded.project, rules::RuleConfig::defaults());
  const auto oracle = load_oracle(testsupport::fixture("oracle.csv"));
  CorpusInfo corpus;
  for (const auto& [path, source] : loaded.sources) {
    corpus.file_technology[path] = *parsers::technology_from_extension(path);
    corpus.file_loc[path] = text::count_lines(source);
  }
  const auto summary = evaluate(findings, oracle, corpus);
  CHECK(summary.overall.counts == Counts{41, 9, 0});
  CHECK(summary.per_technology.size() == 3);
  REQUIRE(summary.macro_f1.has_value());
  double sum = 0;
  for (const auto& [tech, s] : summary.per_technology) sum += s.scores.f1;
  CHECK(*summary.macro_f1 == doctest::Approx(sum / 3));
  CHECK(summary.overall.effort_at_60_recall.has_value());
  const auto json = summary_to_json(summary);
  CHECK(json["overall"]["tp"] == 41);
  CHECK(json["per_smell"].size() == 10);

  CorpusInfo puppet_only;
  for (const auto& [path, tech] : corpus.file_technology) {
    if (tech == ir::Technology::Puppet) {
      puppet_only.file_technology[path] = tech;
      puppet_only.file_loc[path] = corpus.file_loc[path];
    }
  }
  const auto partial = evaluate(findings, oracle, puppet_only);
  CHECK_FALSE(partial.macro_f1.has_value());
  CHECK(summary_to_json(partial)["macro_f1"].is_null());
}
