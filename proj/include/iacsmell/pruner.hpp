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

#include <chrono>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "iacsmell/builtin_model.hpp"
#include "iacsmell/instance.hpp"
#include "iacsmell/ir.hpp"
#include "iacsmell/rules.hpp"

namespace iacsmell::pruner {

using rules::Finding;
using rules::SmellType;

std::set<SmellType> default_targeted_smells();

inline constexpr double kDefaultThreshold = 0.5;
inline constexpr std::size_t kDefaultBatchSize = 32;
inline constexpr std::string_view kRuleOnlyScorer = "rule-only";

struct ScoredFinding {
  Finding finding;
  double fp_probability = 0.0;
  double smell_confidence = 1.0;
  std::string scorer_id;

  friend bool operator==(const ScoredFinding&, const ScoredFinding&) = default;
};

// Produces one false-positive probability per instance, in order.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual std::string id() const = 0;
  virtual std::vector<double> score(const std::vector<Instance>& batch) = 0;
};

class PassthroughScorer final : public Scorer {
 public:
  std::string id() const override { return "passthrough"; }
  std::vector<double> score(const std::vector<Instance>& batch) override;
};

class BuiltinScorer final : public Scorer {
 public:
  explicit BuiltinScorer(BuiltinModel model, std::string id = "builtin");
  std::string id() const override { return id_; }
  std::vector<double> score(const std::vector<Instance>& batch) override;

 private:
  BuiltinModel model_;
  std::string id_;
};

// Child process speaking newline-delimited JSON on stdin/stdout.
//   request:   {"id", "target", "context", "smell", "technology"}
//   response:  {"id", "fp_probability"} or {"id", "error"}
//   handshake: {"ready": true, "scorer_id": "..."} emitted once at startup
class ExternalScorer final : public Scorer {
 public:
  explicit ExternalScorer(std::string command,
                          std::chrono::milliseconds timeout = std::chrono::milliseconds(30000));
  ~ExternalScorer() override;
  ExternalScorer(const ExternalScorer&) = delete;
  ExternalScorer& operator=(const ExternalScorer&) = delete;

  std::string id() const override { return scorer_id_; }
  std::vector<double> score(const std::vector<Instance>& batch) override;

 private:
  std::string read_line(std::chrono::steady_clock::time_point deadline, long long pending_id);
  void shutdown_child();

  std::string command_;
  std::chrono::milliseconds timeout_;
  int fd_ = -1;
  int pid_ = -1;
  std::string buffer_;
  long long next_id_ = 1;
  std::string scorer_id_;
};

// Scores every targeted finding; non-targeted findings pass through
// unchanged. Throws PrunerError naming the instance that failed.
std::vector<ScoredFinding> score_findings(const std::vector<Finding>& findings, const ir::SourceMap& sources,
                                          Scorer& scorer, const std::set<SmellType>& targeted,
                                          std::size_t batch_size = kDefaultBatchSize);

struct PruneResult {
  std::vector<ScoredFinding> kept;
  std::vector<ScoredFinding> dropped;
};

// Keeps findings whose false-positive probability is below the threshold.
// Rule-only findings are always kept, even at threshold 0.
PruneResult prune(const std::vector<Finding>& findings, const ir::SourceMap& sources, Scorer& scorer,
                  const std::set<SmellType>& targeted, double threshold = kDefaultThreshold,
                  std::size_t batch_size = kDefaultBatchSize);

PruneResult split_by_threshold(const std::vector<ScoredFinding>& scored, double threshold);

// Descending smell confidence; ties by (file_path, line, smell).
std::vector<ScoredFinding> rank_findings(std::vector<ScoredFinding> scored);

}  // namespace iacsmell::pruner
