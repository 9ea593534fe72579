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


#include <algorithm>
#include <regex>
#include <system_error>

#include "iacsmell/errors.hpp"
#include "iacsmell/parsers.hpp"
#include "iacsmell/text.hpp"

namespace iacsmell::parsers {

namespace fs = std::filesystem;

std::optional<Technology> technology_from_extension(std::string_view path) {
  const std::string ext = text::to_lower(fs::path(std::string(path)).extension().string());
  if (ext == ".pp") return Technology::Puppet;
  if (ext == ".yml" || ext == ".yaml") return Technology::Ansible;
  if (ext == ".rb") return Technology::Chef;
  return std::nullopt;
}

namespace {

bool looks_like_ansible(std::string_view content) {
  for (const auto& raw : text::split_lines(content)) {
    const std::string_view line = text::trim(raw);
    if (line.substr(0, 3) == "---") return true;
    if (line.substr(0, 7) == "- name:" || line.substr(0, 8) == "- hosts:") return true;
  }
  return false;
}

bool looks_like_chef(std::string_view content) {
  if (content.find("default[") != std::string_view::npos) return true;
  bool opener = false;
  bool closer = false;
  for (const auto& raw : text::split_lines(content)) {
    const std::string_view line = text::trim(raw);
    if (line == "end") closer = true;
    if ((line.size() > 3 && line.substr(line.size() - 3) == " do") ||
        line.find(" do |") != std::string_view::npos) {
      opener = true;
    }
  }
  return opener && closer;
}

bool looks_like_puppet(std::string_view content) {
  static const std::regex kResourceOpen(R"(\{\s*['"])");
  const std::string s(content);
  return std::regex_search(s, kResourceOpen) && s.find("=>") != std::string::npos;
}

// Weaker signals, consulted only when none of the markers above match.
bool looks_like_ruby_case(std::string_view content) {
  bool when = false;
  bool closer = false;
  for (const auto& raw : text::split_lines(content)) {
    const std::string_view line = text::trim(raw);
    if (line.substr(0, 5) == "when ") when = true;
    if (line == "end") closer = true;
  }
  return when && closer;
}

bool looks_like_puppet_statement(std::string_view content) {
  static const std::regex kStatement(R"((^|\n)\s*(\$[A-Za-z_][\w:]*\s*=[^=>~]|case\s+\$|(class|define|node)\s+[\w:'"]+[^\n]*[({]))");
  const std::string s(content);
  return std::regex_search(s, kStatement);
}

}  // namespace

Technology detect_technology(std::string_view path, std::string_view content) {
  if (auto tech = technology_from_extension(path)) return *tech;
  if (looks_like_ansible(content)) return Technology::Ansible;
  if (looks_like_chef(content)) return Technology::Chef;
  if (looks_like_puppet(content)) return Technology::Puppet;
  if (looks_like_ruby_case(content)) return Technology::Chef;
  if (looks_like_puppet_statement(content)) return Technology::Puppet;
  throw UnknownTechnology("cannot determine technology of '" + std::string(path) + "'");
}

ParseReport parse_source(std::string_view content, std::string_view path, Technology tech) {
  switch (tech) {
    case Technology::Puppet:
      return parse_puppet(content, path);
    case Technology::Ansible:
      return parse_ansible(content, path);
    case Technology::Chef:
      return parse_chef(content, path);
  }
  throw UnknownTechnology("unsupported technology");
}

namespace {

bool hidden(const fs::path& p) {
  const std::string name = p.filename().string();
  return !name.empty() && name[0] == '.';
}

// modules/<name>/..., roles/<name>/..., cookbooks/<name>/...
std::optional<std::string> module_of(const std::string& rel) {
  const auto parts = text::split(rel, '/');
  for (std::size_t i = 0; i + 2 < parts.size(); ++i) {
    if (parts[i] == "modules" || parts[i] == "roles" || parts[i] == "cookbooks") return parts[i + 1];
  }
  return std::nullopt;
}

bool under_roles(const std::string& rel) {
  for (const auto& part : text::split(rel, '/')) {
    if (part == "roles") return true;
  }
  return false;
}

}  // namespace

LoadedProject load_project(const fs::path& root, const LoadOptions& options) {
  std::error_code ec;
  if (!fs::exists(root, ec)) throw Error("root does not exist: " + root.string());
  LoadedProject loaded;
  loaded.project.root = root.generic_string();

  std::vector<std::pair<std::string, fs::path>> files;
  if (fs::is_regular_file(root, ec)) {
    files.emplace_back(root.filename().generic_string(), root);
  } else {
    fs::recursive_directory_iterator it(root, fs::directory_options::none, ec);
    if (ec) throw Error("cannot read root: " + root.string() + ": " + ec.message());
    for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
      if (ec) throw Error("cannot read root: " + root.string() + ": " + ec.message());
      const fs::path& p = it->path();
      if (hidden(p)) {
        if (it->is_directory(ec)) it.disable_recursion_pending();
        continue;
      }
      if (!it->is_regular_file(ec)) continue;
      if (!technology_from_extension(p.string())) continue;
      files.emplace_back(fs::relative(p, root).generic_string(), p);
    }
  }
  std::sort(files.begin(), files.end());

  for (const auto& [rel, full] : files) {
    std::string content;
    try {
      content = text::read_file(full);
    } catch (const std::exception& e) {
      loaded.warnings.push_back(rel + ": " + e.what());
      continue;
    }
    const Technology tech = options.technology_override ? *options.technology_override
                                                        : detect_technology(rel, content);
    ParseReport report;
    try {
      report = parse_source(content, rel, tech);
    } catch (const ParseError& e) {
      loaded.warnings.push_back(rel + ": " + e.what());
      continue;
    }
    report.block.name = rel;
    if (tech == Technology::Ansible && under_roles(rel)) report.block.kind = ir::BlockKind::Role;
    for (const auto& issue : report.parse_errors) {
      loaded.warnings.push_back(rel + ": line " + std::to_string(issue.line) + ": " + issue.message);
    }
    if (auto mod = module_of(rel)) {
      auto found = std::find_if(loaded.project.modules.begin(), loaded.project.modules.end(),
                                [&](const ir::ModuleUnit& m) { return m.name == *mod; });
      if (found == loaded.project.modules.end()) {
        loaded.project.modules.push_back(ir::ModuleUnit{*mod, {}});
        found = loaded.project.modules.end() - 1;
      }
      found->blocks.push_back(report.block);
    } else {
      loaded.project.blocks.push_back(report.block);
    }
    loaded.sources.emplace(rel, std::move(content));
    loaded.reports.emplace_back(rel, std::move(report));
  }
  return loaded;
}

}  // namespace iacsmell::parsers
