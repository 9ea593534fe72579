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
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "iacsmell/eval.hpp"
#include "iacsmell/instance.hpp"
#include "iacsmell/rules.hpp"

namespace iacsmell::dataset {

using ir::Technology;
using rules::SmellType;

struct MineOptions {
  int min_warnings = 20;
  int max_lines = 200;
  std::set<SmellType> targeted;  // empty means the pruner's default set
};

struct MineResult {
  std::vector<Instance> instances;
  std::vector<std::string> warnings;
  int files_seen = 0;
  int files_kept = 0;
};

// Files with at least min_warnings targeted findings and at most max_lines
// lines contribute one unlabeled instance per targeted finding.
MineResult mine_candidates(const std::filesystem::path& corpus_root, const rules::RuleConfig& config,
                           const MineOptions& options = {});

std::string build_prompt(const Instance& instance);

// Reads the first "DECISION:" line. Throws UnparseableResponse.
Label parse_teacher_response(std::string_view response);

// Drops candidates whose bytes match an oracle file, and repeated candidates
// (first occurrence wins). Order of survivors follows the input.
std::vector<std::filesystem::path> dedup_files(const std::vector<std::filesystem::path>& candidates,
                                               const std::vector<std::filesystem::path>& oracle_files);

std::string normalize_snippet(std::string_view code);

// (normalized target, smell name) joined by a unit separator.
std::string snippet_key(const Instance& instance);

struct SnippetDedupResult {
  std::vector<Instance> train;
  std::vector<Instance> val;
  std::vector<std::string> removed_ids;  // in removal order
};

// Priority oracle > val > train; later duplicates within a split are removed.
SnippetDedupResult dedup_snippets(const std::vector<Instance>& train, const std::vector<Instance>& val,
                                  const std::vector<Instance>& oracle);

using Stratum = std::pair<Technology, SmellType>;

struct SplitSpec {
  int train_ratio = 8;
  int val_ratio = 1;
  std::map<Stratum, int> targets;  // strata without a target use their pool size
};

struct StratumReport {
  Stratum stratum;
  int pool = 0;
  int target = 0;
  int train = 0;
  int val = 0;
  int shortfall = 0;
};

struct SplitResult {
  std::vector<Instance> train;
  std::vector<Instance> val;
  std::vector<std::string> excluded_ids;  // sorted, unique
  std::vector<StratumReport> strata;
};

// Stratified by (technology, smell), shuffled with one generator seeded by
// `seed`, split at the given ratio, deduplicated against `oracle` and across
// splits, then backfilled from the unused pool.
SplitResult make_splits(const std::vector<Instance>& instances, const SplitSpec& spec, std::uint64_t seed,
                        const std::vector<Instance>& oracle = {});

// TP iff an oracle entry has the same (file, line, smell).
std::vector<Instance> label_oracle_detections(const std::vector<rules::Finding>& findings,
                                              const ir::SourceMap& sources,
                                              const std::vector<eval::OracleEntry>& oracle);

}  // namespace iacsmell::dataset
