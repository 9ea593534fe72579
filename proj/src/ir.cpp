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

#include "iacsmell/ir.hpp"

#include <cctype>

#include "iacsmell/errors.hpp"
#include "iacsmell/text.hpp"

namespace iacsmell::ir {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void walk_nodes(const std::vector<Node>& nodes, const std::function<void(const NodeRef&)>& visit);

void walk_node(const Node& node, const std::function<void(const NodeRef&)>& visit) {
  std::visit(Overloaded{
                 [&](const AtomicUnit& unit) {
                   visit(&unit);
                   for (const auto& attr : unit.attributes) visit(&attr);
                 },
                 [&](const Variable& var) { visit(&var); },
                 [&](const Attribute& attr) { visit(&attr); },
                 [&](const ConditionBlock& cond) {
                   visit(&cond);
                   for (const auto& branch : cond.branches) walk_nodes(branch.body, visit);
                 },
                 [&](const Comment& comment) { visit(&comment); },
                 [&](const UnitBlock& block) { walk_block(block, visit); },
             },
             node.item);
}

void walk_nodes(const std::vector<Node>& nodes, const std::function<void(const NodeRef&)>& visit) {
  for (const auto& node : nodes) walk_node(node, visit);
}

}  // namespace

std::string_view technology_name(Technology tech) {
  switch (tech) {
    case Technology::Puppet: return "Puppet";
    case Technology::Ansible: return "Ansible";
    case Technology::Chef: return "Chef";
  }
  return "Unknown";
}

std::optional<Technology> technology_from_name(std::string_view name) {
  const auto lower = text::to_lower(name);
  if (lower == "puppet") return Technology::Puppet;
  if (lower == "ansible") return Technology::Ansible;
  if (lower == "chef") return Technology::Chef;
  return std::nullopt;
}

std::string_view value_kind_name(ValueKind kind) {
  switch (kind) {
    case ValueKind::String: return "String";
    case ValueKind::Integer: return "Integer";
    case ValueKind::Boolean: return "Boolean";
    case ValueKind::Reference: return "Reference";
    case ValueKind::Null: return "Null";
  }
  return "Unknown";
}

std::string_view block_kind_name(BlockKind kind) {
  switch (kind) {
    case BlockKind::Script: return "Script";
    case BlockKind::Class: return "Class";
    case BlockKind::Recipe: return "Recipe";
    case BlockKind::Play: return "Play";
    case BlockKind::Role: return "Role";
  }
  return "Unknown";
}

const SourceLocation& Node::location() const {
  return std::visit([](const auto& n) -> const SourceLocation& { return n.location; }, item);
}

void walk_block(const UnitBlock& block, const std::function<void(const NodeRef&)>& visit) {
  visit(&block);
  walk_nodes(block.children, visit);
}

std::vector<NodeRef> iterate_depth_first(const Project& project) {
  std::vector<NodeRef> out;
  auto push = [&out](const NodeRef& ref) { out.push_back(ref); };
  for (const auto& module : project.modules) {
    out.emplace_back(&module);
    for (const auto& block : module.blocks) walk_block(block, push);
  }
  for (const auto& block : project.blocks) walk_block(block, push);
  return out;
}

std::vector<const UnitBlock*> file_blocks(const Project& project) {
  std::vector<const UnitBlock*> out;
  for (const auto& module : project.modules) {
    for (const auto& block : module.blocks) out.push_back(&block);
  }
  for (const auto& block : project.blocks) out.push_back(&block);
  return out;
}

const SourceLocation* node_location(const NodeRef& node) {
  return std::visit(Overloaded{
                        [](const ModuleUnit*) -> const SourceLocation* { return nullptr; },
                        [](const auto* n) -> const SourceLocation* { return &n->location; },
                    },
                    node);
}

std::string node_line_text(const NodeRef& node, std::string_view source) {
  const auto* loc = node_location(node);
  if (loc == nullptr) throw LocationError("node has no source location");
  return text::line_at(source, loc->line);
}

bool has_interpolation(std::string_view raw, Technology tech) {
  if (tech == Technology::Ansible) {
    auto open = raw.find("{{");
    return open != std::string_view::npos && raw.find("}}", open) != std::string_view::npos;
  }
  // Puppet and Chef interpolate only inside double-quoted strings.
  char quote = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const char c = raw[i];
    if (quote != 0) {
      if (c == '\\') {
        ++i;
        continue;
      }
      if (c == quote) {
        quote = 0;
        continue;
      }
      if (quote != '"' || i + 1 >= raw.size()) continue;
      const char next = raw[i + 1];
      if (tech == Technology::Puppet && c == '$' &&
          (next == '{' || next == ':' || next == '_' ||
           std::isalpha(static_cast<unsigned char>(next)) != 0)) {
        return true;
      }
      if (tech == Technology::Chef && c == '#' && next == '{') return true;
    } else if (c == '"' || c == '\'') {
      quote = c;
    }
  }
  return false;
}

}  // namespace iacsmell::ir
