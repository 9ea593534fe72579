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


#include "iacsmell/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <tuple>

#include "iacsmell/errors.hpp"
#include "iacsmell/text.hpp"

namespace iacsmell::eval {

namespace {

using Key = std::tuple<std::string, int, SmellType>;
using LineKey = std::pair<std::string, int>;

Key key_of(const Finding& f) { return {f.file_path, f.line, f.smell}; }
Key key_of(const OracleEntry& e) { return {e.file_path, e.line, e.smell}; }

std::map<Key, long> oracle_multiset(const std::vector<OracleEntry>& oracle) {
  std::map<Key, long> remaining;
  for (const auto& e : oracle) ++remaining[key_of(e)];
  return remaining;
}

bool consume(std::map<Key, long>& remaining, const Finding& f) {
  auto it = remaining.find(key_of(f));
  if (it == remaining.end() || it->second == 0) return false;
  --it->second;
  return true;
}

double ratio(long num, long den) { return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den); }

double harmonic(double p, double r) { return (p == 0.0 && r == 0.0) ? 0.0 : 2.0 * p * r / (p + r); }

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

std::vector<OracleEntry> parse_oracle(std::string_view content) {
  std::vector<OracleEntry> entries;
  const auto lines = text::split_lines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = text::trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = text::split(line, ',');
    const std::string where = "oracle line " + std::to_string(i + 1);
    if (fields.size() != 3) throw FormatError(where + ": expected file_path,line,smell");
    const std::string path(text::trim(fields[0]));
    const std::string line_field(text::trim(fields[1]));
    const std::string smell_field(text::trim(fields[2]));
    if (entries.empty() && line_field == "line") continue;
    if (path.empty()) throw FormatError(where + ": empty file path");
    int line_no = 0;
    try {
      std::size_t used = 0;
      line_no = std::stoi(line_field, &used);
      if (used != line_field.size()) throw FormatError(where + ": bad line number");
    } catch (const std::logic_error&) {
      throw FormatError(where + ": bad line number '" + line_field + "'");
    }
    if (line_no < 1) throw FormatError(where + ": line must be >= 1");
    const auto smell = rules::smell_from_name(smell_field);
    if (!smell) throw FormatError(where + ": unknown smell '" + smell_field + "'");
    entries.push_back(OracleEntry{path, line_no, *smell});
  }
  return entries;
}

std::vector<OracleEntry> load_oracle(const std::filesystem::path& path) { return parse_oracle(text::read_file(path)); }

std::string write_oracle(const std::vector<OracleEntry>& entries) {
  std::string out = "file_path,line,smell\n";
  for (const auto& e : entries) {
    out += e.file_path + "," + std::to_string(e.line) + "," + std::string(rules::smell_name(e.smell)) + "\n";
  }
  return out;
}

MatchCounts match(const std::vector<Finding>& predictions, const std::vector<OracleEntry>& oracle) {
  MatchCounts counts;
  for (SmellType s : rules::kAllSmells) counts.per_smell[s] = Counts{};
  auto remaining = oracle_multiset(oracle);
  for (const auto& f : predictions) {
    if (consume(remaining, f)) {
      ++counts.tp;
      ++counts.per_smell[f.smell].tp;
    } else {
      ++counts.fp;
      ++counts.per_smell[f.smell].fp;
    }
  }
  for (const auto& [key, left] : remaining) {
    counts.fn += left;
    counts.per_smell[std::get<2>(key)].fn += left;
  }
  return counts;
}

Scores prf1(const Counts& counts) {
  Scores s;
  s.precision = ratio(counts.tp, counts.tp + counts.fp);
  s.recall = ratio(counts.tp, counts.tp + counts.fn);
  s.f1 = harmonic(s.precision, s.recall);
  return s;
}

Scores prf1(const MatchCounts& counts) { return prf1(Counts{counts.tp, counts.fp, counts.fn}); }

double macro_f1(const std::map<Technology, double>& f1s) {
  double sum = 0.0;
  for (Technology t : {Technology::Puppet, Technology::Ansible, Technology::Chef}) {
    auto it = f1s.find(t);
    if (it == f1s.end()) {
      throw MissingTechnologyError("no F1 for " + std::string(ir::technology_name(t)));
    }
    sum += it->second;
  }
  return sum / 3.0;
}

std::vector<Finding> rank_by_confidence(std::vector<Finding> findings) {
  std::stable_sort(findings.begin(), findings.end(), [](const Finding& a, const Finding& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    return rules::finding_key_less(a, b);
  });
  return findings;
}

std::vector<EffortPoint> effort_curve(const std::vector<Finding>& ranking, const std::vector<OracleEntry>& oracle) {
  std::vector<EffortPoint> curve;
  auto remaining = oracle_multiset(oracle);
  std::set<LineKey> seen;
  long loc = 0;
  long matched = 0;
  long walked = 0;
  for (const auto& f : ranking) {
    if (seen.insert({f.file_path, f.line}).second) ++loc;
    if (consume(remaining, f)) ++matched;
    ++walked;
    curve.push_back(EffortPoint{loc, ratio(matched, static_cast<long>(oracle.size())), ratio(matched, walked)});
  }
  return curve;
}

std::optional<double> effort_at_recall(const std::vector<Finding>& ranking, const std::vector<OracleEntry>& oracle,
                                       double target_recall, long total_loc) {
  if (oracle.empty()) throw EmptyOracleError("effort_at_recall needs a non-empty oracle");
  if (total_loc <= 0) throw Error("total LOC must be positive");
  const long needed = static_cast<long>(std::ceil(target_recall * static_cast<double>(oracle.size()) - 1e-9));
  if (needed <= 0) return 0.0;
  auto remaining = oracle_multiset(oracle);
  std::set<LineKey> seen;
  long loc = 0;
  long matched = 0;
  for (const auto& f : ranking) {
    if (seen.insert({f.file_path, f.line}).second) ++loc;
    if (consume(remaining, f)) ++matched;
    if (matched >= needed) return 100.0 * static_cast<double>(loc) / static_cast<double>(total_loc);
  }
  return std::nullopt;
}

double f1_at_loc(const std::vector<Finding>& ranking, const std::vector<OracleEntry>& oracle, double budget_fraction,
                 long total_loc) {
  if (oracle.empty()) throw EmptyOracleError("f1_at_loc needs a non-empty oracle");
  if (total_loc <= 0) throw Error("total LOC must be positive");
  const long budget =
      std::max<long>(1, static_cast<long>(std::floor(budget_fraction * static_cast<double>(total_loc) + 1e-9)));
  auto remaining = oracle_multiset(oracle);
  std::set<LineKey> seen;
  long tp = 0;
  long within = 0;
  for (const auto& f : ranking) {
    const LineKey line{f.file_path, f.line};
    if (seen.count(line) == 0) {
      if (static_cast<long>(seen.size()) == budget) break;
      seen.insert(line);
    }
    ++within;
    if (consume(remaining, f)) ++tp;
  }
  const double precision = ratio(tp, within);
  const double recall = ratio(tp, static_cast<long>(oracle.size()));
  return harmonic(precision, recall);
}

std::vector<ReportRow> per_smell_report(const MatchCounts& counts, const std::vector<std::string>& clean_files,
                                        const std::vector<Finding>& predictions,
                                        const std::vector<OracleEntry>& oracle) {
  std::vector<ReportRow> rows;
  for (SmellType s : rules::kAllSmells) {
    auto it = counts.per_smell.find(s);
    const Counts c = it == counts.per_smell.end() ? Counts{} : it->second;
    rows.push_back(ReportRow{std::string(rules::smell_name(s)), c, prf1(c)});
  }
  std::set<std::string> predicted;
  for (const auto& f : predictions) predicted.insert(f.file_path);
  std::set<std::string> smelly;
  for (const auto& e : oracle) smelly.insert(e.file_path);
  Counts none;
  for (const auto& file : std::set<std::string>(clean_files.begin(), clean_files.end())) {
    if (smelly.count(file)) continue;
    if (predicted.count(file)) {
      ++none.fp;
    } else {
      ++none.tp;
    }
  }
  for (const auto& file : smelly) {
    if (!predicted.count(file)) ++none.fn;
  }
  rows.push_back(ReportRow{std::string(kNoSmellRow), none, prf1(none)});
  return rows;
}

std::string format_report(const std::vector<ReportRow>& rows) {
  std::string out = "smell,tp,fp,fn,precision,recall,f1\n";
  for (const auto& r : rows) {
    out += r.name + "," + std::to_string(r.counts.tp) + "," + std::to_string(r.counts.fp) + "," +
           std::to_string(r.counts.fn) + "," + fixed4(r.scores.precision) + "," + fixed4(r.scores.recall) + "," +
           fixed4(r.scores.f1) + "\n";
  }
  return out;
}

namespace {

TechnologySummary summarize(const std::vector<Finding>& ranked, const std::vector<OracleEntry>& oracle, long loc) {
  TechnologySummary s;
  const MatchCounts m = match(ranked, oracle);
  s.counts = Counts{m.tp, m.fp, m.fn};
  s.scores = prf1(s.counts);
  s.total_loc = loc;
  s.oracle_size = static_cast<long>(oracle.size());
  if (!oracle.empty() && loc > 0) {
    s.effort_at_60_recall = effort_at_recall(ranked, oracle, kTargetRecall, loc);
    s.f1_at_1_loc = f1_at_loc(ranked, oracle, kBudgetFraction, loc);
  }
  return s;
}

nlohmann::json optional_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

nlohmann::json tech_json(const TechnologySummary& s) {
  return {{"tp", s.counts.tp},
          {"fp", s.counts.fp},
          {"fn", s.counts.fn},
          {"precision", s.scores.precision},
          {"recall", s.scores.recall},
          {"f1", s.scores.f1},
          {"total_loc", s.total_loc},
          {"oracle_size", s.oracle_size},
          {"effort_at_60_recall", optional_json(s.effort_at_60_recall)},
          {"f1_at_1_loc", optional_json(s.f1_at_1_loc)}};
}

}  // namespace

EvalSummary evaluate(const std::vector<Finding>& predictions, const std::vector<OracleEntry>& oracle,
                     const CorpusInfo& corpus) {
  EvalSummary summary;
  const std::vector<Finding> ranked = rank_by_confidence(predictions);

  long all_loc = 0;
  for (const auto& [file, loc] : corpus.file_loc) all_loc += loc;
  summary.overall = summarize(ranked, oracle, all_loc);

  std::map<Technology, double> f1s;
  for (Technology t : {Technology::Puppet, Technology::Ansible, Technology::Chef}) {
    auto in_tech = [&](const std::string& file) {
      auto it = corpus.file_technology.find(file);
      return it != corpus.file_technology.end() && it->second == t;
    };
    bool present = false;
    long loc = 0;
    for (const auto& [file, tech] : corpus.file_technology) {
      if (tech != t) continue;
      present = true;
      auto it = corpus.file_loc.find(file);
      if (it != corpus.file_loc.end()) loc += it->second;
    }
    if (!present) continue;
    std::vector<Finding> tech_ranked;
    for (const auto& f : ranked) {
      if (in_tech(f.file_path)) tech_ranked.push_back(f);
    }
    std::vector<OracleEntry> tech_oracle;
    for (const auto& e : oracle) {
      if (in_tech(e.file_path)) tech_oracle.push_back(e);
    }
    summary.per_technology[t] = summarize(tech_ranked, tech_oracle, loc);
    f1s[t] = summary.per_technology[t].scores.f1;
  }
  try {
    summary.macro_f1 = macro_f1(f1s);
  } catch (const MissingTechnologyError&) {
    summary.macro_f1.reset();
  }

  std::vector<std::string> clean;
  std::set<std::string> smelly;
  for (const auto& e : oracle) smelly.insert(e.file_path);
  for (const auto& [file, tech] : corpus.file_technology) {
    if (!smelly.count(file)) clean.push_back(file);
  }
  summary.per_smell = per_smell_report(match(ranked, oracle), clean, ranked, oracle);
  return summary;
}

nlohmann::json summary_to_json(const EvalSummary& summary) {
  nlohmann::json out;
  out["overall"] = tech_json(summary.overall);
  nlohmann::json per_tech = nlohmann::json::object();
  for (const auto& [tech, s] : summary.per_technology) per_tech[std::string(ir::technology_name(tech))] = tech_json(s);
  out["per_technology"] = per_tech;
  out["macro_f1"] = optional_json(summary.macro_f1);
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : summary.per_smell) {
    rows.push_back({{"smell", r.name},
                    {"tp", r.counts.tp},
                    {"fp", r.counts.fp},
                    {"fn", r.counts.fn},
                    {"precision", r.scores.precision},
                    {"recall", r.scores.recall},
                    {"f1", r.scores.f1}});
  }
  out["per_smell"] = rows;
  return out;
}

}  // namespace iacsmell::eval
