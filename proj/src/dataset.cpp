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


#include "iacsmell/dataset.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "iacsmell/errors.hpp"
#include "iacsmell/parsers.hpp"
#include "iacsmell/pruner.hpp"
#include "iacsmell/text.hpp"

namespace iacsmell::dataset {

namespace fs = std::filesystem;

MineResult mine_candidates(const fs::path& corpus_root, const rules::RuleConfig& config,
                           const MineOptions& options) {
  MineResult result;
  const std::set<SmellType> targeted =
      options.targeted.empty() ? pruner::default_targeted_smells() : options.targeted;
  const parsers::LoadedProject loaded = parsers::load_project(corpus_root);
  result.warnings = loaded.warnings;
  for (const ir::UnitBlock* block : ir::file_blocks(loaded.project)) {
    ++result.files_seen;
    const auto src = loaded.sources.find(block->name);
    if (src == loaded.sources.end()) continue;
    if (text::count_lines(src->second) > options.max_lines) continue;
    std::vector<rules::Finding> hits;
    for (auto& f : rules::detect_block(*block, config)) {
      if (targeted.count(f.smell)) hits.push_back(std::move(f));
    }
    if (static_cast<int>(hits.size()) < options.min_warnings) continue;
    ++result.files_kept;
    for (const auto& f : hits) result.instances.push_back(make_instance(f, src->second));
  }
  return result;
}

std::string build_prompt(const Instance& instance) {
  std::ostringstream out;
  const std::string smell(rules::smell_name(instance.smell));
  std::string cwes;
  for (int cwe : rules::smell_cwes(instance.smell)) {
    if (!cwes.empty()) cwes += ", ";
    cwes += "CWE-" + std::to_string(cwe);
  }

  out << "## System role\n"
      << "You are an infrastructure-as-code security analyst. You review warnings produced by a rule-based "
         "security smell detector and decide whether each warning is a true positive (TP) or a false "
         "positive (FP).\n\n";

  out << "## Task\n"
      << "Technology: " << ir::technology_name(instance.technology) << "\n"
      << "File: " << instance.file_path << "\n"
      << "Line: " << instance.line << "\n"
      << "Flagged line: " << instance.target << "\n"
      << "Smell: " << smell << " (" << cwes << ")\n"
      << "Definition: " << rules::smell_description(instance.smell) << "\n"
      << "Rule rationale: " << instance.rationale << "\n"
      << "Code window (the flagged line is marked with >>>):\n";
  const auto lines = text::split_lines(instance.context);
  const int first = std::max(1, instance.line - kContextRadius);
  const int marked = instance.line - first;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    out << (static_cast<int>(i) == marked ? ">>> " : "    ") << lines[i] << "\n";
  }
  out << "\n";

  out << "## Output constraints\n"
      << "Answer with exactly two lines. The first line is the verdict, either `DECISION: TP` if the warning "
         "is a real " << smell << " or `DECISION: FP` if it is a false positive. The second line is a one-line "
         "justification.\n";
  return out.str();
}

Label parse_teacher_response(std::string_view response) {
  for (const auto& raw : text::split_lines(response)) {
    std::string line;
    for (char c : raw) {
      if (c != '*' && c != '`') line += c;
    }
    const std::string_view trimmed = text::trim(line);
    constexpr std::string_view kTag = "decision:";
    if (trimmed.size() < kTag.size() || text::to_lower(trimmed.substr(0, kTag.size())) != kTag) continue;
    std::string verdict = text::to_lower(text::trim(trimmed.substr(kTag.size())));
    while (!verdict.empty() && (verdict.back() == '.' || verdict.back() == '!')) verdict.pop_back();
    if (const auto label = label_from_name(verdict)) return *label;
    throw UnparseableResponse("unrecognized verdict: " + std::string(trimmed));
  }
  throw UnparseableResponse("no DECISION line in teacher response");
}

std::vector<fs::path> dedup_files(const std::vector<fs::path>& candidates, const std::vector<fs::path>& oracle_files) {
  std::set<std::string> seen;
  for (const auto& p : oracle_files) seen.insert(text::md5_hex(text::read_file(p)));
  std::vector<fs::path> survivors;
  for (const auto& p : candidates) {
    if (seen.insert(text::md5_hex(text::read_file(p))).second) survivors.push_back(p);
  }
  return survivors;
}

std::string normalize_snippet(std::string_view code) { return text::normalize_whitespace(code); }

std::string snippet_key(const Instance& instance) {
  return normalize_snippet(instance.target) + '\x1f' + std::string(rules::smell_name(instance.smell));
}

SnippetDedupResult dedup_snippets(const std::vector<Instance>& train, const std::vector<Instance>& val,
                                  const std::vector<Instance>& oracle) {
  SnippetDedupResult result;
  std::set<std::string> oracle_keys;
  for (const auto& inst : oracle) oracle_keys.insert(snippet_key(inst));
  std::set<std::string> val_keys;
  for (const auto& inst : val) {
    const std::string key = snippet_key(inst);
    if (oracle_keys.count(key) || !val_keys.insert(key).second) {
      result.removed_ids.push_back(inst.id);
    } else {
      result.val.push_back(inst);
    }
  }
  std::set<std::string> train_keys;
  for (const auto& inst : train) {
    const std::string key = snippet_key(inst);
    if (oracle_keys.count(key) || val_keys.count(key) || !train_keys.insert(key).second) {
      result.removed_ids.push_back(inst.id);
    } else {
      result.train.push_back(inst);
    }
  }
  return result;
}

SplitResult make_splits(const std::vector<Instance>& instances, const SplitSpec& spec, std::uint64_t seed,
                        const std::vector<Instance>& oracle) {
  if (spec.train_ratio <= 0 || spec.val_ratio <= 0) throw Error("split ratios must be positive");
  SplitResult result;

  std::map<Stratum, std::vector<Instance>> pools;
  for (const auto& inst : instances) pools[{inst.technology, inst.smell}].push_back(inst);
  for (const auto& [stratum, target] : spec.targets) pools.try_emplace(stratum);

  struct Plan {
    Stratum stratum;
    std::vector<Instance> pool;
    int target = 0;
    int want_val = 0;
    int want_train = 0;
    std::size_t sliced = 0;
    std::vector<std::size_t> val;
    std::vector<std::size_t> train;
  };
  std::vector<Plan> plans;

  std::mt19937_64 rng(seed);
  const int total_ratio = spec.train_ratio + spec.val_ratio;
  for (auto& [stratum, pool] : pools) {
    Plan plan;
    plan.stratum = stratum;
    plan.pool = pool;
    std::shuffle(plan.pool.begin(), plan.pool.end(), rng);
    const auto t = spec.targets.find(stratum);
    plan.target = t == spec.targets.end() ? static_cast<int>(plan.pool.size()) : t->second;
    plan.want_val = (2 * plan.target * spec.val_ratio + total_ratio) / (2 * total_ratio);
    plan.want_train = plan.target - plan.want_val;
    plans.push_back(std::move(plan));
  }

  std::set<std::string> oracle_keys;
  for (const auto& inst : oracle) oracle_keys.insert(snippet_key(inst));
  std::set<std::string> val_keys;
  std::set<std::string> train_keys;

  // Initial slice: the first want_val shuffled items go to val, the next
  // want_train to train. Val is deduplicated across all strata before train.
  std::vector<std::vector<std::size_t>> train_slice(plans.size());
  for (auto& plan : plans) {
    const std::size_t n = plan.pool.size();
    const std::size_t val_end = std::min<std::size_t>(n, static_cast<std::size_t>(plan.want_val));
    plan.sliced = std::min<std::size_t>(n, val_end + static_cast<std::size_t>(plan.want_train));
    for (std::size_t i = 0; i < val_end; ++i) {
      const std::string key = snippet_key(plan.pool[i]);
      if (!oracle_keys.count(key) && val_keys.insert(key).second) plan.val.push_back(i);
    }
  }
  for (auto& plan : plans) {
    const std::size_t val_end = std::min<std::size_t>(plan.pool.size(), static_cast<std::size_t>(plan.want_val));
    for (std::size_t i = val_end; i < plan.sliced; ++i) {
      const std::string key = snippet_key(plan.pool[i]);
      if (!oracle_keys.count(key) && !val_keys.count(key) && train_keys.insert(key).second) plan.train.push_back(i);
    }
  }

  // Backfill from the unused remainder, val first.
  for (auto& plan : plans) {
    for (std::size_t i = plan.sliced; i < plan.pool.size(); ++i) {
      const bool val_full = static_cast<int>(plan.val.size()) >= plan.want_val;
      const bool train_full = static_cast<int>(plan.train.size()) >= plan.want_train;
      if (val_full && train_full) break;
      const std::string key = snippet_key(plan.pool[i]);
      if (oracle_keys.count(key) || val_keys.count(key) || train_keys.count(key)) continue;
      if (!val_full) {
        val_keys.insert(key);
        plan.val.push_back(i);
      } else {
        train_keys.insert(key);
        plan.train.push_back(i);
      }
    }
  }

  // Excluded: unselected pool items whose key is taken by the oracle or by a
  // selected item.
  std::set<std::string> excluded;
  for (const auto& plan : plans) {
    std::vector<bool> chosen(plan.pool.size(), false);
    for (std::size_t i : plan.val) chosen[i] = true;
    for (std::size_t i : plan.train) chosen[i] = true;
    for (std::size_t i = 0; i < plan.pool.size(); ++i) {
      if (chosen[i]) continue;
      const std::string key = snippet_key(plan.pool[i]);
      if (oracle_keys.count(key) || val_keys.count(key) || train_keys.count(key)) excluded.insert(plan.pool[i].id);
    }

    StratumReport report;
    report.stratum = plan.stratum;
    report.pool = static_cast<int>(plan.pool.size());
    report.target = plan.target;
    report.val = static_cast<int>(plan.val.size());
    report.train = static_cast<int>(plan.train.size());
    report.shortfall = std::max(0, plan.target - report.val - report.train);
    result.strata.push_back(report);
    for (std::size_t i : plan.val) result.val.push_back(plan.pool[i]);
    for (std::size_t i : plan.train) result.train.push_back(plan.pool[i]);
  }
  result.excluded_ids.assign(excluded.begin(), excluded.end());
  return result;
}

std::vector<Instance> label_oracle_detections(const std::vector<rules::Finding>& findings,
                                              const ir::SourceMap& sources,
                                              const std::vector<eval::OracleEntry>& oracle) {
  std::set<std::tuple<std::string, int, SmellType>> truth;
  for (const auto& e : oracle) truth.insert({e.file_path, e.line, e.smell});
  std::vector<Instance> out;
  for (const auto& f : findings) {
    const auto src = sources.find(f.file_path);
    if (src == sources.end()) throw LocationError("no source text for " + f.file_path);
    Instance inst = make_instance(f, src->second);
    inst.label = truth.count({f.file_path, f.line, f.smell}) ? Label::TP : Label::FP;
    out.push_back(std::move(inst));
  }
  return out;
}

}  // namespace iacsmell::dataset
