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


#include <chrono>

#include "doctest.h"
#include "iacsmell/errors.hpp"
#include "iacsmell/pruner.hpp"
#include "support.hpp"

using namespace iacsmell;
using namespace iacsmell::pruner;
using rules::Finding;

namespace {

class ConstantScorer final : public Scorer {
 public:
  explicit ConstantScorer(double p) : p_(p) {}
  std::string id() const override { return "constant"; }
  std::vector<double> score(const std::vector<Instance>& batch) override {
    ++calls;
    largest = std::max(largest, batch.size());
    return std::vector<double>(batch.size(), p_);
  }
  int calls = 0;
  std::size_t largest = 0;

 private:
  double p_;
};

class ShortScorer final : public Scorer {
 public:
  std::string id() const override { return "short"; }
  std::vector<double> score(const std::vector<Instance>&) override { return {}; }
};

Finding make(const std::string& file, int line, rules::SmellType smell, double confidence = 1.0) {
  Finding f;
  f.file_path = file;
  f.line = line;
  f.smell = smell;
  f.confidence = confidence;
  return f;
}

ScoredFinding scored(const std::string& file, int line, rules::SmellType smell, double confidence) {
  ScoredFinding s;
  s.finding = make(file, line, smell, confidence);
  s.smell_confidence = confidence;
  s.fp_probability = 1.0 - confidence;
  return s;
}

// Two-line sources whose text carries magic probabilities for the test double.
ir::SourceMap magic_sources() {
  return {{"a.pp", "$password = 'x' # fp=0.9\n$token = 'y' # fp=0.2\n"},
          {"b.pp", "# TODO fp=0.6\nfile { 'x': }\n"}};
}

std::vector<Finding> magic_findings() {
  return {make("a.pp", 1, rules::SmellType::HardCodedSecret), make("a.pp", 2, rules::SmellType::HardCodedSecret),
          make("b.pp", 1, rules::SmellType::SuspiciousComment), make("b.pp", 2, rules::SmellType::MissingDefaultCase)};
}

}  // namespace

TEST_CASE("targeted smell defaults") {
  CHECK(default_targeted_smells() ==
        std::set<rules::SmellType>{rules::SmellType::HardCodedSecret, rules::SmellType::SuspiciousComment,
                                   rules::SmellType::HttpWithoutTls, rules::SmellType::WeakCrypto});
  CHECK(kDefaultThreshold == 0.5);
  CHECK(kDefaultBatchSize == 32);
}

TEST_CASE("passthrough keeps everything; certain scorer drops exactly the targeted findings") {
  const auto findings = magic_findings();
  PassthroughScorer pass;
  const auto all = prune(findings, magic_sources(), pass, default_targeted_smells());
  CHECK(all.kept.size() == 4);
  CHECK(all.dropped.empty());

  ConstantScorer certain(1.0);
  const auto split = prune(findings, magic_sources(), certain, default_targeted_smells());
  REQUIRE(split.kept.size() == 1);
  CHECK(split.kept[0].finding == findings[3]);
  CHECK(split.kept[0].scorer_id == kRuleOnlyScorer);
  REQUIRE(split.dropped.size() == 3);
  for (const auto& d : split.dropped) {
    CHECK(d.fp_probability == 1.0);
    CHECK(d.smell_confidence == 0.0);
    CHECK(d.finding.confidence == 0.0);
    CHECK(d.scorer_id == "constant");
  }
}

TEST_CASE("random cases keep the partition and leave non-targeted findings untouched") {
  int failures = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const std::string why = testsupport::check_prune_case(seed);
    if (!why.empty()) {
      ++failures;
      INFO("seed " << seed << ": " << why);
      CHECK(why.empty());
    }
  }
  CHECK(failures == 0);
}

TEST_CASE("raising the threshold never shrinks the kept set") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto c = testsupport::random_case(seed);
    testsupport::HashScorer scorer(seed);
    std::size_t previous = 0;
    for (double t : {0.0, 0.1, 0.25, 0.5, 0.5000001, 0.75, 0.999, 1.0}) {
      const auto r = prune(c.findings, c.sources, scorer, c.targeted, t, c.batch);
      CHECK(r.kept.size() >= previous);
      previous = r.kept.size();
    }
  }
}

TEST_CASE("passthrough then rank equals ranking the raw findings") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto c = testsupport::random_case(seed);
    PassthroughScorer pass;
    const auto ranked = rank_findings(prune(c.findings, c.sources, pass, c.targeted, 0.5).kept);
    std::vector<Finding> raw = c.findings;
    std::stable_sort(raw.begin(), raw.end(), rules::finding_key_less);
    REQUIRE(ranked.size() == raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
      CHECK(ranked[i].finding.file_path == raw[i].file_path);
      CHECK(ranked[i].finding.line == raw[i].line);
      CHECK(ranked[i].finding.smell == raw[i].smell);
      CHECK(ranked[i].finding.confidence == 1.0);
    }
  }
}

TEST_CASE("ranking by confidence with key tie-breaks") {
  CHECK(rank_findings({}).empty());
  const auto two = rank_findings({scored("a", 1, rules::SmellType::WeakCrypto, 0.4),
                                  scored("b", 1, rules::SmellType::WeakCrypto, 0.9)});
  CHECK(two[0].smell_confidence == 0.9);
  CHECK(two[1].smell_confidence == 0.4);
  const auto ties = rank_findings({scored("b", 1, rules::SmellType::WeakCrypto, 1.0),
                                   scored("a", 2, rules::SmellType::AdminByDefault, 1.0),
                                   scored("a", 1, rules::SmellType::WeakCrypto, 1.0),
                                   scored("a", 1, rules::SmellType::EmptyPassword, 1.0)});
  CHECK(ties[0].finding == make("a", 1, rules::SmellType::EmptyPassword));
  CHECK(ties[1].finding == make("a", 1, rules::SmellType::WeakCrypto));
  CHECK(ties[2].finding == make("a", 2, rules::SmellType::AdminByDefault));
  CHECK(ties[3].finding == make("b", 1, rules::SmellType::WeakCrypto));
}

TEST_CASE("batching and scorer contract violations") {
  std::vector<Finding> many;
  ir::SourceMap sources{{"a.pp", "x\n"}};
  for (int i = 0; i < 70; ++i) many.push_back(make("a.pp", 1, rules::SmellType::WeakCrypto));
  ConstantScorer counting(0.2);
  prune(many, sources, counting, default_targeted_smells());
  CHECK(counting.calls == 3);
  CHECK(counting.largest == 32);

  ShortScorer short_scorer;
  CHECK_THROWS_AS(prune(many, sources, short_scorer, default_targeted_smells()), PrunerError);
  ConstantScorer nan_scorer(std::nan(""));
  CHECK_THROWS_AS(prune(many, sources, nan_scorer, default_targeted_smells()), PrunerError);
  ConstantScorer above(1.5);
  CHECK_THROWS_AS(prune(many, sources, above, default_targeted_smells()), PrunerError);

  PassthroughScorer pass;
  CHECK_THROWS_AS(prune(many, sources, pass, default_targeted_smells(), 1.5), PrunerError);
  CHECK_THROWS_AS(prune(many, sources, pass, default_targeted_smells(), -0.1), PrunerError);
  CHECK_THROWS_AS(prune({make("a.pp", 5, rules::SmellType::WeakCrypto)}, sources, pass, default_targeted_smells()),
                  PrunerError);
  CHECK_THROWS_AS(prune({make("zz.pp", 1, rules::SmellType::WeakCrypto)}, sources, pass, default_targeted_smells()),
                  PrunerError);
  // Non-targeted findings never need their source.
  CHECK(prune({make("zz.pp", 1, rules::SmellType::AdminByDefault)}, sources, pass, default_targeted_smells())
            .kept.size() == 1);
}

TEST_CASE("external scorer round trips the protocol") {
  const auto findings = magic_findings();
  SUBCASE("constant zero keeps everything") {
    ExternalScorer ext(testsupport::fake_scorer("constant 0.0"));
    CHECK(ext.id() == "fake-constant");
    const auto r = prune(findings, magic_sources(), ext, default_targeted_smells());
    CHECK(r.kept.size() == 4);
  }
  SUBCASE("magic values come back for the right instances") {
    ExternalScorer ext(testsupport::fake_scorer("magic"));
    const auto s = score_findings(findings, magic_sources(), ext, default_targeted_smells(), 2);
    CHECK(s[0].fp_probability == 0.9);
    CHECK(s[1].fp_probability == 0.2);
    CHECK(s[2].fp_probability == 0.6);
    CHECK(s[3].scorer_id == kRuleOnlyScorer);
    // The channel stays usable for further batches.
    const auto again = score_findings(findings, magic_sources(), ext, default_targeted_smells(), 32);
    CHECK(again == s);
  }
  SUBCASE("responses in any order are correlated by id") {
    ExternalScorer ext(testsupport::fake_scorer("reverse"));
    const auto s = score_findings(findings, magic_sources(), ext, default_targeted_smells(), 32);
    CHECK(s[0].fp_probability == 0.9);
    CHECK(s[1].fp_probability == 0.2);
    CHECK(s[2].fp_probability == 0.6);
  }
}

TEST_CASE("external scorer failures raise PrunerError with the sequence id") {
  const auto findings = magic_findings();
  auto fails_with = [&](const std::string& mode, const std::string& needle, int timeout_ms = 5000) {
    CAPTURE(mode);
    try {
      ExternalScorer ext(testsupport::fake_scorer(mode), std::chrono::milliseconds(timeout_ms));
      prune(findings, magic_sources(), ext, default_targeted_smells());
      FAIL("no error");
    } catch (const PrunerError& e) {
      CAPTURE(e.what());
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  fails_with("exit-after 1", "sequence id 2");
  fails_with("error-on 2", "sequence id 2");
  fails_with("malformed", "sequence id");
  fails_with("unknown-id", "sequence id");
  fails_with("duplicate", "sequence id");
  fails_with("out-of-range", "sequence id 1");
  fails_with("sleep 2000", "sequence id 1", 200);
  fails_with("no-handshake", "handshake");
  fails_with("bad-handshake", "handshake");
  CHECK_THROWS_AS(ExternalScorer("/nonexistent/scorer"), PrunerError);
}
