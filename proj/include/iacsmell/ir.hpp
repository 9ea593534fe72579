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

// Technology-agnostic intermediate representation shared by the three
// front ends. Trees are built once by a parser and never mutated.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

namespace iacsmell::ir {

enum class Technology { Puppet, Ansible, Chef };

std::string_view technology_name(Technology tech);
// Case-insensitive; accepts "puppet", "ansible", "chef".
std::optional<Technology> technology_from_name(std::string_view name);

struct SourceLocation {
  std::string file_path;  // relative, forward slashes
  int line = 1;           // 1-based
  int column = 0;         // 1-based, 0 when unknown

  friend bool operator==(const SourceLocation&, const SourceLocation&) = default;
};

enum class ValueKind { String, Integer, Boolean, Reference, Null };

std::string_view value_kind_name(ValueKind kind);

struct Value {
  ValueKind kind = ValueKind::Null;
  std::string raw_text;  // verbatim source text, quotes included
  bool has_variable = false;
  // Line on which raw_text starts. A value can begin below its key (YAML
  // block sequences); 0 means "same line as the owning node".
  int line = 0;

  friend bool operator==(const Value&, const Value&) = default;
};

struct Attribute {
  std::string name;
  Value value;
  SourceLocation location;
};

struct Variable {
  std::string name;  // sigil stripped
  Value value;
  SourceLocation location;
};

struct AtomicUnit {
  std::string unit_type;
  std::string title;
  std::vector<Attribute> attributes;  // source order
  SourceLocation location;
};

struct Comment {
  std::string text;  // without the comment-start token
  SourceLocation location;
};

struct Node;

struct ConditionBranch {
  std::string guard;  // raw guard text, e.g. "'Debian'" or "default"
  std::vector<Node> body;
};

struct ConditionBlock {
  Value subject;
  std::vector<ConditionBranch> branches;
  bool has_default_branch = false;
  SourceLocation location;
};

enum class BlockKind { Script, Class, Recipe, Play, Role };

std::string_view block_kind_name(BlockKind kind);

struct UnitBlock {
  std::string name;
  BlockKind kind = BlockKind::Script;
  std::vector<Node> children;
  Technology technology = Technology::Puppet;
  SourceLocation location;
};

struct Node {
  using Item = std::variant<AtomicUnit, Variable, Attribute, ConditionBlock, Comment, UnitBlock>;

  template <class T>
    requires(!std::is_same_v<std::decay_t<T>, Node>)
  Node(T&& value) : item(std::forward<T>(value)) {}  // NOLINT(google-explicit-constructor)

  const SourceLocation& location() const;

  Item item;
};

struct ModuleUnit {
  std::string name;
  std::vector<UnitBlock> blocks;
};

struct Project {
  std::string root;
  std::vector<ModuleUnit> modules;
  std::vector<UnitBlock> blocks;
};

// File path (as stored in SourceLocation) to raw file content.
using SourceMap = std::map<std::string, std::string>;

// One element of a depth-first walk. Project itself is not emitted.
using NodeRef = std::variant<const ModuleUnit*, const UnitBlock*, const AtomicUnit*,
                             const Attribute*, const Variable*, const ConditionBlock*,
                             const Comment*>;

// Pre-order walk: parents before children, siblings in source order.
// Modules come first (in project order), then project-level blocks.
std::vector<NodeRef> iterate_depth_first(const Project& project);

void walk_block(const UnitBlock& block, const std::function<void(const NodeRef&)>& visit);

// Every per-file block of the project, module blocks first.
std::vector<const UnitBlock*> file_blocks(const Project& project);

// nullptr for ModuleUnit, which has no source position.
const SourceLocation* node_location(const NodeRef& node);

// Verbatim source line of the node. Throws LocationError when the node's
// line is outside `source` or the node has no location.
std::string node_line_text(const NodeRef& node, std::string_view source);

// Interpolation markers of each dialect: Puppet "${...}" or "$ident" inside
// double quotes, Ansible "{{ ... }}", Chef "#{...}".
bool has_interpolation(std::string_view raw_text, Technology tech);

}  // namespace iacsmell::ir
