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

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "iacsmell/pruner.hpp"

namespace iacsmell::records {

// One line of analyzer output.
struct Record {
  pruner::ScoredFinding scored;
  bool kept = true;
};

nlohmann::json record_to_json(const Record& record);
Record record_from_json(const nlohmann::json& json);

// Newline-delimited, keys sorted, kept findings first (each list in the
// order given).
std::string write_records(const std::vector<pruner::ScoredFinding>& kept,
                          const std::vector<pruner::ScoredFinding>& dropped);
std::vector<Record> read_records(std::string_view content);

// Kept findings with their confidence, for evaluation.
std::vector<rules::Finding> kept_findings(const std::vector<Record>& records);

// Human-readable table of ranked findings.
std::string format_table(const std::vector<pruner::ScoredFinding>& kept,
                         const std::vector<pruner::ScoredFinding>& dropped, bool show_dropped);

}  // namespace iacsmell::records
