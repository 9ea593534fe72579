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

// Front ends for Puppet manifests, Ansible playbooks and Chef recipes.
// Each parser is a pure function of (content, path) and recognizes a subset
// of its dialect; anything else is recorded as a skipped region.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iacsmell/ir.hpp"

namespace iacsmell::parsers {

using ir::Technology;

struct SkippedRegion {
  int first_line = 0;
  int last_line = 0;
  std::string reason;
};

struct ParseIssue {
  int line = 0;
  std::string message;
};

struct ParseReport {
  ir::UnitBlock block;
  std::vector<SkippedRegion> skipped_regions;  // disjoint, ascending
  int comment_count = 0;
  std::vector<ParseIssue> parse_errors;  // recoverable problems
};

std::optional<Technology> technology_from_extension(std::string_view path);

// Extension first; otherwise content sniffing in this order: YAML document
// marker or "- name:" => Ansible; a "do" ... "end" block or "default[" =>
// Chef; "{ '" together with "=>" => Puppet. Failing those, a Ruby
// "when" ... "end" case => Chef, then a Puppet variable assignment, case on
// a variable, or class/define/node header => Puppet. Throws
// UnknownTechnology.
Technology detect_technology(std::string_view path, std::string_view content);

// All three throw ParseError when the input cannot be recovered.
ParseReport parse_puppet(std::string_view content, std::string_view path);
ParseReport parse_ansible(std::string_view content, std::string_view path);
ParseReport parse_chef(std::string_view content, std::string_view path);

ParseReport parse_source(std::string_view content, std::string_view path, Technology tech);

struct LoadOptions {
  std::optional<Technology> technology_override;
};

struct LoadedProject {
  ir::Project project;
  ir::SourceMap sources;
  std::vector<std::string> warnings;  // unreadable or unparseable files
  std::vector<std::pair<std::string, ParseReport>> reports;
};

// Walks `root` (hidden entries skipped) in sorted path order. Only
// .pp/.yml/.yaml/.rb files are considered; a technology override forces how
// they are parsed. A root that is a regular file is parsed alone. Files under
// modules/<name>/, roles/<name>/, cookbooks/<name>/ or
// site-cookbooks/<name>/ are grouped into a ModuleUnit named <name>.
// Throws Error when root does not exist.
LoadedProject load_project(const std::filesystem::path& root, const LoadOptions& options = {});

}  // namespace iacsmell::parsers
