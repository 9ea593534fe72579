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

#include <stdlib.h>

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <functional>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"

#include "iacsmell/builtin_model.hpp"
#include "iacsmell/cli.hpp"
#include "iacsmell/dataset.hpp"
#include "iacsmell/eval.hpp"
#include "iacsmell/instance.hpp"
#include "iacsmell/parsers.hpp"
#include "iacsmell/pruner.hpp"
#include "iacsmell/rules.hpp"
#include "iacsmell/text.hpp"

namespace testsupport {

namespace fs = std::filesystem;

inline fs::path fixture(const std::string& rel) { return fs::path(IACSMELL_FIXTURE_DIR) / rel; }

inline std::string fake_scorer(const std::string& mode) { return std::string(IACSMELL_FAKE_SCORER) + " " + mode; }

class TempDir {
 public:
  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "iacsmell-test-XXXXXX").string();
    if (::mkdtemp(tmpl.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path write(const std::string& rel, const std::string& content) const {
    const fs::path p = path_ / rel;
    fs::create_directories(p.parent_path());
    iacsmell::text::write_file(p, content);
    return p;
  }

 private:
  fs::path path_;
};

using Triple = std::tuple<std::string, int, std::string>;

// file_path,line,smell rows after a header line.
inline std::set<Triple> read_triples(const fs::path& path) {
  std::set<Triple> out;
  std::istringstream in(iacsmell::text::read_file(path));
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto parts = iacsmell::text::split(line, ',');
    out.insert({parts.at(0), std::stoi(parts.at(1)), parts.at(2)});
  }
  return out;
}

inline std::set<Triple> triples_of(const std::vector<iacsmell::rules::Finding>& findings) {
  std::set<Triple> out;
  for (const auto& f : findings) out.insert({f.file_path, f.line, std::string(iacsmell::rules::smell_name(f.smell))});
  return out;
}

struct SmellExample {
  std::string file_name;
  std::string content;
  iacsmell::rules::SmellType smell;
  int line;
};

// One snippet per smell, as listed in the smell catalog.
inline std::vector<SmellExample> catalog_examples() {
  using iacsmell::rules::SmellType;
  return {
      {"admin.pp", "user { 'app': groups => ['sudo'] }", SmellType::AdminByDefault, 1},
      {"empty.yml", "vars:\n  db_password: \"\"", SmellType::EmptyPassword, 2},
      {"secret.rb", "default['db']['password'] = \"P@ssw0rd!\"", SmellType::HardCodedSecret, 1},
      {"case.pp", "case $osfamily { 'Debian': { } }", SmellType::MissingDefaultCase, 1},
      {"integ.yml", "- get_url: url=http://ex.com/pkg.rpm dest=/tmp/pkg.rpm", SmellType::NoIntegrityCheck, 1},
      {"comment.pp", "# TODO: temporary insecure rule", SmellType::SuspiciousComment, 1},
      {"bind.yml", "listen_address: 0.0.0.0", SmellType::InvalidIpBinding, 1},
      {"http.yml", "- get_url: url=http://ex.com/file.tgz", SmellType::HttpWithoutTls, 1},
      {"weak.pp", "file { '/tmp/x': checksum => 'md5' }", SmellType::WeakCrypto, 1},
  };
}

inline std::vector<iacsmell::rules::Finding> detect_snippet(const std::string& file_name, const std::string& content,
                                                            const iacsmell::rules::RuleConfig& config) {
  const auto tech = *iacsmell::parsers::technology_from_extension(file_name);
  const auto report = iacsmell::parsers::parse_source(content, file_name, tech);
  return iacsmell::rules::detect_block(report.block, config);
}

// The named smell is reported at the expected line and nowhere else; other
// smells may share that line (one construct can carry several smells).
inline bool example_holds(const SmellExample& ex, const std::vector<iacsmell::rules::Finding>& findings) {
  bool hit = false;
  for (const auto& f : findings) {
    if (f.line != ex.line) return false;
    if (f.smell == ex.smell) hit = true;
  }
  return hit;
}

// Labeled set where FP holds exactly when the target mentions example.com.
inline std::vector<iacsmell::Instance> separable_set(int count, int offset) {
  std::vector<iacsmell::Instance> out;
  const char* hosts[] = {"corp.net", "internal.lan", "repo.acme.io", "pkgs.mirror.org"};
  for (int i = 0; i < count; ++i) {
    const int k = i + offset;
    iacsmell::Instance inst;
    inst.technology = static_cast<iacsmell::ir::Technology>(k % 3);
    inst.file_path = "separable/" + std::to_string(k);
    inst.line = 1;
    inst.smell = iacsmell::rules::SmellType::HttpWithoutTls;
    const bool fp = k % 2 == 0;
    inst.target = fp ? "url = 'http://example.com/item" + std::to_string(k) + "'"
                     : "url = 'http://" + std::string(hosts[k % 4]) + "/item" + std::to_string(k) + "'";
    inst.context = inst.target;
    inst.rationale = "plain http";
    inst.label = fp ? iacsmell::Label::FP : iacsmell::Label::TP;
    inst.id = iacsmell::instance_id(inst.target, inst.smell);
    out.push_back(inst);
  }
  return out;
}

// Largest relative error between the analytic cross-entropy gradient and
// central differences of the loss over one random (weights, instance) probe.
inline double gradient_probe(std::uint64_t seed) {
  using namespace iacsmell::pruner;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::string> vocab;
  for (int i = 0; i < 30; ++i) vocab.push_back("t" + std::to_string(i));
  BuiltinModel model = BuiltinModel::with_vocabulary(vocab);
  for (double& w : model.weights) w = normal(rng);
  model.bias = normal(rng);

  std::set<std::size_t> active;
  while (active.size() < 6) active.insert(rng() % model.dimension());
  SparseFeatures x;
  x.indices.assign(active.begin(), active.end());
  const double y = static_cast<double>(rng() % 2);
  const double l2 = 0.1;
  const double h = 1e-5;

  const Gradient g = example_gradient(model, x, y, l2);
  auto rel = [](double a, double n) { return std::abs(a - n) / std::max({std::abs(a), std::abs(n), 1e-10}); };

  std::vector<std::size_t> probe(active.begin(), active.end());
  for (int k = 0; k < 4; ++k) probe.push_back(rng() % model.dimension());
  double worst = 0.0;
  for (std::size_t i : probe) {
    BuiltinModel plus = model;
    BuiltinModel minus = model;
    plus.weights[i] += h;
    minus.weights[i] -= h;
    const double numeric = (example_loss(plus, x, y, l2) - example_loss(minus, x, y, l2)) / (2 * h);
    worst = std::max(worst, rel(g.weights[i], numeric));
  }
  BuiltinModel plus = model;
  BuiltinModel minus = model;
  plus.bias += h;
  minus.bias -= h;
  const double numeric = (example_loss(plus, x, y, l2) - example_loss(minus, x, y, l2)) / (2 * h);
  return std::max(worst, rel(g.bias, numeric));
}

// Deterministic pseudo-random probabilities keyed on the instance id; hits
// the endpoints 0 and 1 and the common threshold 0.5 exactly.
class HashScorer final : public iacsmell::pruner::Scorer {
 public:
  explicit HashScorer(std::uint64_t salt) : salt_(salt) {}
  std::string id() const override { return "hash"; }
  std::vector<double> score(const std::vector<iacsmell::Instance>& batch) override {
    std::vector<double> out;
    for (const auto& inst : batch) {
      const std::uint64_t h = std::hash<std::string>{}(inst.id) ^ salt_;
      const std::uint64_t bucket = h % 23;
      out.push_back(bucket == 0 ? 0.0 : bucket == 1 ? 1.0 : bucket == 2 ? 0.5 : static_cast<double>(h % 1000) / 999.0);
    }
    return out;
  }

 private:
  std::uint64_t salt_;
};

struct RandomCase {
  std::vector<iacsmell::rules::Finding> findings;
  iacsmell::ir::SourceMap sources;
  std::set<iacsmell::rules::SmellType> targeted;
  double threshold = 0.5;
  std::size_t batch = 1;
};

inline RandomCase random_case(std::uint64_t seed) {
  using namespace iacsmell;
  std::mt19937_64 rng(seed);
  RandomCase c;
  const int files = 1 + static_cast<int>(rng() % 3);
  for (int f = 0; f < files; ++f) {
    std::string body;
    for (int l = 1; l <= 12; ++l) body += "line " + std::to_string(rng() % 50) + " of file " + std::to_string(f) + "\n";
    c.sources["f" + std::to_string(f) + ".pp"] = body;
  }
  const int n = static_cast<int>(rng() % 40);
  for (int i = 0; i < n; ++i) {
    rules::Finding fd;
    fd.file_path = "f" + std::to_string(rng() % files) + ".pp";
    fd.line = 1 + static_cast<int>(rng() % 12);
    fd.smell = rules::kAllSmells[rng() % rules::kAllSmells.size()];
    fd.technology = static_cast<ir::Technology>(rng() % 3);
    fd.rationale = "rule " + std::to_string(rng() % 100);
    fd.evidence = "e";
    c.findings.push_back(fd);
  }
  if (rng() % 3 == 0) {
    c.targeted = pruner::default_targeted_smells();
  } else {
    for (auto s : rules::kAllSmells) {
      if (rng() % 2 == 0) c.targeted.insert(s);
    }
  }
  const std::uint64_t pick = rng() % 10;
  c.threshold = pick == 0 ? 0.0 : pick == 1 ? 1.0 : pick == 2 ? 0.5 : static_cast<double>(rng() % 1001) / 1000.0;
  c.batch = 1 + rng() % 8;
  return c;
}

// Partition, order preservation and non-targeted immunity for one case.
// Returns an empty string on success, else a description of the violation.
inline std::string check_prune_case(std::uint64_t seed) {
  using namespace iacsmell;
  const RandomCase c = random_case(seed);
  HashScorer scorer(seed);
  const auto result = pruner::prune(c.findings, c.sources, scorer, c.targeted, c.threshold, c.batch);
  if (result.kept.size() + result.dropped.size() != c.findings.size()) return "partition size";

  // Walk the input once, matching kept and dropped as ordered subsequences.
  std::size_t k = 0;
  std::size_t d = 0;
  for (const auto& in : c.findings) {
    const bool targeted = c.targeted.count(in.smell) == 1;
    const pruner::ScoredFinding* sf = nullptr;
    bool kept = false;
    auto same_site = [&](const pruner::ScoredFinding& s) {
      return s.finding.file_path == in.file_path && s.finding.line == in.line && s.finding.smell == in.smell &&
             s.finding.rationale == in.rationale;
    };
    if (k < result.kept.size() && same_site(result.kept[k])) {
      sf = &result.kept[k++];
      kept = true;
    } else if (d < result.dropped.size() && same_site(result.dropped[d])) {
      sf = &result.dropped[d++];
    } else {
      return "order not preserved";
    }
    if (sf->fp_probability + sf->smell_confidence != 1.0) return "confidence sum";
    if (!targeted) {
      if (!kept) return "non-targeted finding dropped";
      if (!(sf->finding == in)) return "non-targeted finding changed";
      if (std::memcmp(&sf->finding.confidence, &in.confidence, sizeof(double)) != 0) return "confidence bits";
      if (sf->fp_probability != 0.0 || sf->scorer_id != pruner::kRuleOnlyScorer) return "rule-only marking";
    } else {
      if (kept != (sf->fp_probability < c.threshold)) return "threshold rule";
      if (sf->scorer_id != "hash") return "scorer id";
    }
  }
  return "";
}

inline iacsmell::dataset::SplitSpec toy_split_spec() {
  using iacsmell::ir::Technology;
  using iacsmell::rules::SmellType;
  iacsmell::dataset::SplitSpec spec;
  spec.targets[{Technology::Puppet, SmellType::HardCodedSecret}] = 9;
  spec.targets[{Technology::Ansible, SmellType::HttpWithoutTls}] = 9;
  spec.targets[{Technology::Chef, SmellType::SuspiciousComment}] = 9;
  return spec;
}

// Runs the toy split and compares it with the hand simulation. Returns an
// empty string when counts, excluded ids and strata all agree.
inline std::string check_toy_split(std::uint64_t seed) {
  using namespace iacsmell;
  const auto pool = load_instances(fixture("split_toy_pool.jsonl"));
  const auto oracle = load_instances(fixture("split_toy_oracle.jsonl"));
  const auto expected = nlohmann::json::parse(text::read_file(fixture("split_toy_expected.json")));
  const auto result = dataset::make_splits(pool, toy_split_spec(), seed, oracle);
  if (static_cast<long>(result.train.size()) != expected["train"].get<long>()) return "train count";
  if (static_cast<long>(result.val.size()) != expected["val"].get<long>()) return "val count";
  if (result.excluded_ids != expected["excluded_ids"].get<std::vector<std::string>>()) return "excluded ids";
  if (result.strata.size() != expected["strata"].size()) return "strata count";
  for (std::size_t i = 0; i < result.strata.size(); ++i) {
    const auto& got = result.strata[i];
    const auto& want = expected["strata"][i];
    if (ir::technology_name(got.stratum.first) != want["technology"].get<std::string>() ||
        rules::smell_name(got.stratum.second) != want["smell"].get<std::string>() ||
        got.pool != want["pool"].get<int>() || got.target != want["target"].get<int>() ||
        got.train != want["train"].get<int>() || got.val != want["val"].get<int>() ||
        got.shortfall != want["shortfall"].get<int>()) {
      return "stratum " + std::to_string(i);
    }
  }
  return "";
}

// Per-smell table for the analyzer's findings on the fixture corpus.
inline std::string fixture_table() {
  using namespace iacsmell;
  const auto loaded = parsers::load_project(fixture("corpus"));
  const auto findings = rules::detect(loaded.project, rules::RuleConfig::defaults());
  const auto oracle = eval::load_oracle(fixture("oracle.csv"));
  std::vector<std::string> files;
  for (const auto& [path, source] : loaded.sources) files.push_back(path);
  return eval::format_report(eval::per_smell_report(eval::match(findings, oracle), files, findings, oracle));
}

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

inline CliResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "iacsmell");
  std::ostringstream out;
  std::ostringstream err;
  CliResult r;
  r.code = iacsmell::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

}  // namespace testsupport
