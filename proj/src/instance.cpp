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


#include "iacsmell/instance.hpp"

#include <algorithm>

#include "iacsmell/errors.hpp"
#include "iacsmell/text.hpp"

namespace iacsmell {

using nlohmann::json;

std::string_view label_name(Label label) { return label == Label::TP ? "TP" : "FP"; }

std::optional<Label> label_from_name(std::string_view name) {
  const std::string lower = text::to_lower(text::trim(name));
  if (lower == "tp") return Label::TP;
  if (lower == "fp") return Label::FP;
  return std::nullopt;
}

std::string instance_id(std::string_view target, rules::SmellType smell) {
  std::string key = text::normalize_whitespace(target);
  key += '\x1f';
  key += rules::smell_name(smell);
  return text::md5_hex(key);
}

Instance make_instance(const rules::Finding& finding, std::string_view file_text) {
  const auto lines = text::split_lines(file_text);
  const int total = static_cast<int>(lines.size());
  if (finding.line < 1 || finding.line > total) {
    throw LocationError(finding.file_path + ": line " + std::to_string(finding.line) +
                        " is outside the file (" + std::to_string(total) + " lines)");
  }
  Instance inst;
  inst.technology = finding.technology;
  inst.file_path = finding.file_path;
  inst.line = finding.line;
  inst.smell = finding.smell;
  inst.target = lines[finding.line - 1];
  const int first = std::max(1, finding.line - kContextRadius);
  const int last = std::min(total, finding.line + kContextRadius);
  for (int i = first; i <= last; ++i) {
    if (i > first) inst.context += '\n';
    inst.context += lines[i - 1];
  }
  inst.rationale = finding.rationale;
  inst.id = instance_id(inst.target, inst.smell);
  return inst;
}

json instance_to_json(const Instance& inst) {
  json j;
  j["id"] = inst.id;
  j["technology"] = std::string(ir::technology_name(inst.technology));
  j["file_path"] = inst.file_path;
  j["line"] = inst.line;
  j["smell"] = std::string(rules::smell_name(inst.smell));
  j["target"] = inst.target;
  j["context"] = inst.context;
  j["rationale"] = inst.rationale;
  if (inst.label) j["label"] = std::string(label_name(*inst.label));
  return j;
}

namespace {

template <class T>
T required(const json& j, const char* key) {
  if (!j.contains(key)) throw FormatError(std::string("instance record lacks '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw FormatError(std::string("instance record has a malformed '") + key + "'");
  }
}

}  // namespace

Instance instance_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("instance record is not an object");
  Instance inst;
  const auto tech = ir::technology_from_name(required<std::string>(j, "technology"));
  if (!tech) throw FormatError("instance record has an unknown technology");
  const auto smell = rules::smell_from_name(required<std::string>(j, "smell"));
  if (!smell) throw FormatError("instance record has an unknown smell");
  inst.technology = *tech;
  inst.smell = *smell;
  inst.file_path = required<std::string>(j, "file_path");
  inst.line = required<int>(j, "line");
  inst.target = required<std::string>(j, "target");
  inst.context = required<std::string>(j, "context");
  inst.rationale = j.contains("rationale") ? required<std::string>(j, "rationale") : std::string();
  inst.id = j.contains("id") ? required<std::string>(j, "id") : instance_id(inst.target, inst.smell);
  if (j.contains("label") && !j.at("label").is_null()) {
    inst.label = label_from_name(required<std::string>(j, "label"));
    if (!inst.label) throw FormatError("instance record has a label other than TP/FP");
  }
  if (inst.line < 1) throw FormatError("instance record has a non-positive line");
  return inst;
}

std::string write_instances_jsonl(const std::vector<Instance>& instances) {
  std::string out;
  for (const auto& inst : instances) {
    out += instance_to_json(inst).dump();
    out += '\n';
  }
  return out;
}

std::vector<Instance> read_instances_jsonl(std::string_view content) {
  std::vector<Instance> out;
  const auto lines = text::split_lines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (text::trim(lines[i]).empty()) continue;
    try {
      out.push_back(instance_from_json(json::parse(lines[i])));
    } catch (const json::exception& e) {
      throw FormatError("instance line " + std::to_string(i + 1) + ": " + e.what());
    } catch (const FormatError& e) {
      throw FormatError("instance line " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

void save_instances(const std::filesystem::path& path, const std::vector<Instance>& instances) {
  text::write_file(path, write_instances_jsonl(instances));
}

std::vector<Instance> load_instances(const std::filesystem::path& path) {
  return read_instances_jsonl(text::read_file(path));
}

}  // namespace iacsmell
