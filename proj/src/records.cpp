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


#include "iacsmell/records.hpp"

#include <cstdio>

#include "iacsmell/errors.hpp"
#include "iacsmell/text.hpp"

namespace iacsmell::records {

nlohmann::json record_to_json(const Record& record) {
  const rules::Finding& f = record.scored.finding;
  return {{"file", f.file_path},
          {"line", f.line},
          {"smell", std::string(rules::smell_name(f.smell))},
          {"technology", std::string(ir::technology_name(f.technology))},
          {"rationale", f.rationale},
          {"evidence", f.evidence},
          {"confidence", record.scored.smell_confidence},
          {"fp_probability", record.scored.fp_probability},
          {"scorer", record.scored.scorer_id},
          {"kept", record.kept}};
}

Record record_from_json(const nlohmann::json& json) {
  try {
    Record r;
    rules::Finding& f = r.scored.finding;
    f.file_path = json.at("file").get<std::string>();
    f.line = json.at("line").get<int>();
    const std::string smell = json.at("smell").get<std::string>();
    const auto parsed = rules::smell_from_name(smell);
    if (!parsed) throw FormatError("unknown smell '" + smell + "'");
    f.smell = *parsed;
    if (json.contains("technology")) {
      const std::string tech = json.at("technology").get<std::string>();
      const auto t = ir::technology_from_name(tech);
      if (!t) throw FormatError("unknown technology '" + tech + "'");
      f.technology = *t;
    }
    f.rationale = json.value("rationale", std::string());
    f.evidence = json.value("evidence", std::string());
    r.scored.smell_confidence = json.value("confidence", 1.0);
    r.scored.fp_probability = json.value("fp_probability", 1.0 - r.scored.smell_confidence);
    r.scored.scorer_id = json.value("scorer", std::string(pruner::kRuleOnlyScorer));
    f.confidence = r.scored.smell_confidence;
    r.kept = json.value("kept", true);
    if (f.line < 1) throw FormatError("line must be >= 1");
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad record: ") + e.what());
  }
}

std::string write_records(const std::vector<pruner::ScoredFinding>& kept,
                          const std::vector<pruner::ScoredFinding>& dropped) {
  std::string out;
  for (const auto& sf : kept) out += record_to_json(Record{sf, true}).dump() + "\n";
  for (const auto& sf : dropped) out += record_to_json(Record{sf, false}).dump() + "\n";
  return out;
}

std::vector<Record> read_records(std::string_view content) {
  std::vector<Record> out;
  const auto lines = text::split_lines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (text::trim(lines[i]).empty()) continue;
    try {
      out.push_back(record_from_json(nlohmann::json::parse(lines[i])));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("records line " + std::to_string(i + 1) + ": " + e.what());
    } catch (const FormatError& e) {
      throw FormatError("records line " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

std::vector<rules::Finding> kept_findings(const std::vector<Record>& records) {
  std::vector<rules::Finding> out;
  for (const auto& r : records) {
    if (r.kept) out.push_back(r.scored.finding);
  }
  return out;
}

namespace {

void append_rows(std::string& out, const std::vector<pruner::ScoredFinding>& rows, const char* status) {
  int rank = 0;
  for (const auto& sf : rows) {
    char conf[32];
    std::snprintf(conf, sizeof conf, "%.3f", sf.smell_confidence);
    out += std::to_string(++rank) + "\t" + conf + "\t" + status + "\t" + sf.finding.file_path + ":" +
           std::to_string(sf.finding.line) + "\t" + std::string(rules::smell_name(sf.finding.smell)) + "\t" +
           sf.finding.rationale + "\n";
  }
}

}  // namespace

std::string format_table(const std::vector<pruner::ScoredFinding>& kept,
                         const std::vector<pruner::ScoredFinding>& dropped, bool show_dropped) {
  if (kept.empty() && (!show_dropped || dropped.empty())) return "";
  std::string out = "rank\tconfidence\tstatus\tlocation\tsmell\trationale\n";
  append_rows(out, kept, "kept");
  if (show_dropped) append_rows(out, dropped, "dropped");
  return out;
}

}  // namespace iacsmell::records
