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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "iacsmell/ir.hpp"
#include "iacsmell/rules.hpp"

namespace iacsmell::eval {

using ir::Technology;
using rules::Finding;
using rules::SmellType;

// Ground-truth smell occurrence.
struct OracleEntry {
  std::string file_path;
  int line = 1;
  SmellType smell = SmellType::HardCodedSecret;

  friend bool operator==(const OracleEntry&, const OracleEntry&) = default;
  friend auto operator<=>(const OracleEntry&, const OracleEntry&) = default;
};

// One entry per line: file_path,line,smell_name. Blank lines, '#' comments
// and a leading "file_path,line,smell" header are ignored.
std::vector<OracleEntry> parse_oracle(std::string_view content);
std::vector<OracleEntry> load_oracle(const std::filesystem::path& path);
std::string write_oracle(const std::vector<OracleEntry>& entries);

struct Counts {
  long tp = 0;
  long fp = 0;
  long fn = 0;

  friend bool operator==(const Counts&, const Counts&) = default;
};

struct MatchCounts {
  long tp = 0;
  long fp = 0;
  long fn = 0;
  std::map<SmellType, Counts> per_smell;  // all nine smells present
};

// Exact (file, line, smell) matching, one-to-one.
MatchCounts match(const std::vector<Finding>& predictions, const std::vector<OracleEntry>& oracle);

struct Scores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

Scores prf1(const Counts& counts);
Scores prf1(const MatchCounts& counts);

// Unweighted mean over Puppet, Ansible and Chef. Throws
// MissingTechnologyError when one is absent.
double macro_f1(const std::map<Technology, double>& f1s);

// Descending confidence, ties by (file_path, line, smell).
std::vector<Finding> rank_by_confidence(std::vector<Finding> findings);

struct EffortPoint {
  long loc_inspected = 0;
  double cumulative_recall = 0.0;
  double cumulative_precision = 0.0;
};

// One point per finding walked; each distinct (file, line) costs one LOC.
std::vector<EffortPoint> effort_curve(const std::vector<Finding>& ranking, const std::vector<OracleEntry>& oracle);

// Percentage of total_loc inspected until ceil(target_recall * |oracle|)
// oracle entries are matched; nullopt when the ranking runs out first.
// Throws EmptyOracleError on an empty oracle.
std::optional<double> effort_at_recall(const std::vector<Finding>& ranking, const std::vector<OracleEntry>& oracle,
                                       double target_recall, long total_loc);

// F1 over the findings that fit in max(1, floor(budget_fraction * total_loc))
// distinct inspected lines. Throws EmptyOracleError on an empty oracle.
double f1_at_loc(const std::vector<Finding>& ranking, const std::vector<OracleEntry>& oracle, double budget_fraction,
                 long total_loc);

struct ReportRow {
  std::string name;
  Counts counts;
  Scores scores;
};

inline constexpr std::string_view kNoSmellRow = "NoSmell";

// Nine smell rows in canonical order, then the NoSmell row. For the latter a
// clean file with no predictions is a TP, a clean file with predictions an
// FP, and a smelly file with no predictions an FN.
std::vector<ReportRow> per_smell_report(const MatchCounts& counts, const std::vector<std::string>& clean_files,
                                        const std::vector<Finding>& predictions,
                                        const std::vector<OracleEntry>& oracle);

// Comma-separated: smell,tp,fp,fn,precision,recall,f1 (4 decimals).
std::string format_report(const std::vector<ReportRow>& rows);

struct CorpusInfo {
  std::map<std::string, Technology> file_technology;
  std::map<std::string, long> file_loc;
};

struct TechnologySummary {
  Counts counts;
  Scores scores;
  long total_loc = 0;
  long oracle_size = 0;
  std::optional<double> effort_at_60_recall;
  std::optional<double> f1_at_1_loc;
};

struct EvalSummary {
  std::map<Technology, TechnologySummary> per_technology;
  TechnologySummary overall;
  std::optional<double> macro_f1;
  std::vector<ReportRow> per_smell;
};

inline constexpr double kTargetRecall = 0.60;
inline constexpr double kBudgetFraction = 0.01;

// Predictions are ranked with rank_by_confidence before the effort metrics.
// Oracle entries whose file is not in the corpus count under the overall
// figures only.
EvalSummary evaluate(const std::vector<Finding>& predictions, const std::vector<OracleEntry>& oracle,
                     const CorpusInfo& corpus);

nlohmann::json summary_to_json(const EvalSummary& summary);

}  // namespace iacsmell::eval
