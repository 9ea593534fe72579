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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "iacsmell/ir.hpp"
#include "iacsmell/rules.hpp"

namespace iacsmell {

enum class Label { TP, FP };

std::string_view label_name(Label label);
std::optional<Label> label_from_name(std::string_view name);  // case-insensitive

// One pruner example: a flagged line plus its surrounding window.
struct Instance {
  std::string id;
  ir::Technology technology = ir::Technology::Puppet;
  std::string file_path;
  int line = 1;
  rules::SmellType smell = rules::SmellType::HardCodedSecret;
  std::string target;
  std::string context;
  std::string rationale;
  std::optional<Label> label;

  friend bool operator==(const Instance&, const Instance&) = default;
};

// MD5 over the whitespace-normalized target and the smell name.
std::string instance_id(std::string_view target, rules::SmellType smell);

// Window radius around the flagged line.
inline constexpr int kContextRadius = 2;

// Throws LocationError when the finding's line is outside the file.
Instance make_instance(const rules::Finding& finding, std::string_view file_text);

nlohmann::json instance_to_json(const Instance& instance);
Instance instance_from_json(const nlohmann::json& record);

// Newline-delimited records, one instance per line.
std::string write_instances_jsonl(const std::vector<Instance>& instances);
std::vector<Instance> read_instances_jsonl(std::string_view content);
void save_instances(const std::filesystem::path& path, const std::vector<Instance>& instances);
std::vector<Instance> load_instances(const std::filesystem::path& path);

}  // namespace iacsmell
