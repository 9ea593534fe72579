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

// Ansible front end. yaml-cpp reads the document structure; verbatim value
// text and comments are recovered from the source using node marks.

#include <yaml-cpp/eventhandler.h>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "iacsmell/errors.hpp"
#include "iacsmell/parsers.hpp"
#include "iacsmell/text.hpp"
#include "parser_util.hpp"

namespace iacsmell::parsers {

namespace {

const std::set<std::string, std::less<>> kTaskKeywords = {
    "name",          "when",        "become",       "become_user",  "become_method",
    "register",      "with_items",  "with_dict",    "with_fileglob", "with_together",
    "with_nested",   "with_subelements", "with_first_found", "with_sequence", "with_lines",
    "loop",          "loop_control", "notify",      "tags",         "ignore_errors",
    "vars",          "args",        "delegate_to",  "environment",  "changed_when",
    "failed_when",   "no_log",      "until",        "retries",      "delay",
    "run_once",      "check_mode",  "diff",         "block",        "rescue",
    "always",        "listen",      "async",        "poll",         "remote_user",
    "connection",    "any_errors_fatal", "throttle", "timeout",     "debugger",
    "module_defaults", "collections", "local_action", "action",     "delegate_facts",
    "ignore_unreachable"};

const std::set<std::string, std::less<>> kTaskListKeys = {"tasks", "pre_tasks", "post_tasks",
                                                          "handlers"};

// Map lookup without yaml-cpp's operator[], which may touch shared node
// storage while an iteration over the same map is in progress.
YAML::Node lookup(const YAML::Node& map, std::string_view key) {
  for (auto it = map.begin(); it != map.end(); ++it) {
    if (it->first.IsScalar() && it->first.Scalar() == key) return it->second;
  }
  return YAML::Node(YAML::NodeType::Undefined);
}

struct Extent {
  std::size_t begin = 0;
  std::size_t end = 0;
};

// yaml-cpp loops without end on some stray flow indicators (a leading ",").
// A well-formed stream yields a number of events linear in its length, so the
// events are counted in a dry run before the document is built.
class EventBudget : public YAML::EventHandler {
 public:
  explicit EventBudget(std::size_t limit) : limit_(limit) {}
  void OnDocumentStart(const YAML::Mark&) override { spend(); }
  void OnDocumentEnd() override { spend(); }
  void OnNull(const YAML::Mark&, YAML::anchor_t) override { spend(); }
  void OnAlias(const YAML::Mark&, YAML::anchor_t) override { spend(); }
  void OnScalar(const YAML::Mark&, const std::string&, YAML::anchor_t, const std::string&) override {
    spend();
  }
  void OnSequenceStart(const YAML::Mark&, const std::string&, YAML::anchor_t,
                       YAML::EmitterStyle::value) override {
    spend();
  }
  void OnSequenceEnd() override { spend(); }
  void OnMapStart(const YAML::Mark&, const std::string&, YAML::anchor_t,
                  YAML::EmitterStyle::value) override {
    spend();
  }
  void OnMapEnd() override { spend(); }

  struct Exhausted : std::runtime_error {
    Exhausted() : std::runtime_error("event budget exhausted") {}
  };

 private:
  void spend() {
    if (++used_ > limit_) throw Exhausted();
  }
  std::size_t used_ = 0;
  std::size_t limit_;
};

void check_event_budget(const std::string& text) {
  std::istringstream in(text);
  YAML::Parser parser(in);
  EventBudget budget(8 * text.size() + 64);
  try {
    while (parser.HandleNextDocument(budget)) {
    }
  } catch (const EventBudget::Exhausted&) {
    throw ParseError(1, "malformed YAML: parser made no progress");
  }
}

class AnsibleReader {
 public:
  AnsibleReader(std::string_view src, std::string path, ParseReport& report)
      : src_(src), path_(std::move(path)), report_(report) {
    line_starts_.push_back(0);
    for (std::size_t i = 0; i < src_.size(); ++i) {
      if (src_[i] == '\n') line_starts_.push_back(i + 1);
    }
  }

  std::vector<ir::Node> read() {
    std::vector<YAML::Node> docs;
    try {
      const std::string text(src_);
      check_event_budget(text);
      docs = YAML::LoadAll(text);
    } catch (const YAML::Exception& e) {
      throw ParseError(e.mark.line + 1, "malformed YAML: " + e.msg);
    }
    std::vector<ir::Node> out;
    for (const auto& doc : docs) read_document(doc, out);
    auto comments = scan_comments();
    report_.comment_count = static_cast<int>(comments.size());
    return merge_by_line(std::move(out), std::move(comments));
  }

 private:
  int line_of(std::size_t pos) const {
    auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), pos);
    return static_cast<int>(it - line_starts_.begin());
  }
  int column_of(std::size_t pos) const {
    return static_cast<int>(pos - line_starts_[line_of(pos) - 1]) + 1;
  }

  ir::SourceLocation loc_at(std::size_t pos) const { return {path_, line_of(pos), column_of(pos)}; }

  std::size_t line_end(std::size_t pos) const {
    const std::size_t eol = src_.find('\n', pos);
    return eol == std::string_view::npos ? src_.size() : eol;
  }

  // Skips anchors and tags that precede node content.
  std::size_t content_start(std::size_t pos) const {
    while (pos < src_.size() && (src_[pos] == '&' || src_[pos] == '!')) {
      while (pos < src_.size() && !std::isspace(static_cast<unsigned char>(src_[pos]))) ++pos;
      while (pos < src_.size() && (src_[pos] == ' ' || src_[pos] == '\t')) ++pos;
    }
    return pos;
  }

  std::size_t quoted_end(std::size_t pos) const {
    const char q = src_[pos];
    std::size_t i = pos + 1;
    while (i < src_.size()) {
      if (q == '"' && src_[i] == '\\') {
        i += 2;
        continue;
      }
      if (src_[i] == q) {
        if (q == '\'' && i + 1 < src_.size() && src_[i + 1] == '\'') {
          i += 2;
          continue;
        }
        return i + 1;
      }
      ++i;
    }
    return src_.size();
  }

  std::size_t flow_end(std::size_t pos) const {
    int depth = 0;
    std::size_t i = pos;
    while (i < src_.size()) {
      const char c = src_[i];
      if (c == '"' || c == '\'') {
        i = quoted_end(i);
        continue;
      }
      if (c == '[' || c == '{') ++depth;
      if (c == ']' || c == '}') {
        if (--depth == 0) return i + 1;
      }
      ++i;
    }
    return src_.size();
  }

  int indentation(std::size_t pos) const {
    const std::size_t start = line_starts_[line_of(pos) - 1];
    std::size_t i = start;
    while (i < src_.size() && src_[i] == ' ') ++i;
    return static_cast<int>(i - start);
  }

  std::size_t block_scalar_end(std::size_t pos) const {
    const int owner_indent = indentation(pos);
    std::size_t end = line_end(pos);
    std::size_t next = end + 1;
    while (next < src_.size()) {
      const std::size_t eol = line_end(next);
      const std::string_view line = src_.substr(next, eol - next);
      if (!text::trim(line).empty()) {
        if (indentation(next) <= owner_indent) break;
        end = eol;
      }
      next = eol + 1;
    }
    return end;
  }

  std::size_t plain_end(std::size_t pos, const std::string& value) const {
    if (!value.empty() && src_.substr(pos, value.size()) == value) return pos + value.size();
    const std::size_t eol = line_end(pos);
    std::size_t end = eol;
    for (std::size_t i = pos; i < eol; ++i) {
      if (src_[i] == '#' && i > pos && (src_[i - 1] == ' ' || src_[i - 1] == '\t')) {
        end = i;
        break;
      }
    }
    while (end > pos && std::isspace(static_cast<unsigned char>(src_[end - 1]))) --end;
    return end;
  }

  bool is_null_token(std::size_t pos) const {
    for (std::string_view tok : {"~", "null", "Null", "NULL"}) {
      if (src_.substr(pos, tok.size()) == tok) {
        const std::size_t after = pos + tok.size();
        if (after >= src_.size() || std::isspace(static_cast<unsigned char>(src_[after])) ||
            src_[after] == ',' || src_[after] == ']' || src_[after] == '}') {
          return true;
        }
      }
    }
    return false;
  }

  // Returns the verbatim extent of a node; empty when the node has no text.
  Extent extent(const YAML::Node& node) {
    if (!node.IsDefined()) return {};
    const std::size_t start = content_start(node.Mark().pos);
    if (start >= src_.size()) return {start, start};
    Extent ext{start, start};
    if (node.IsNull()) {
      if (is_null_token(start)) ext.end = start + (src_[start] == '~' ? 1 : 4);
      return record(ext);
    }
    const char c = src_[start];
    if (node.IsScalar()) {
      if (c == '"' || c == '\'') {
        ext.end = quoted_end(start);
      } else if (c == '|' || c == '>') {
        ext.end = block_scalar_end(start);
      } else {
        ext.end = plain_end(start, node.Scalar());
      }
      return record(ext);
    }
    if (c == '[' || c == '{') {
      ext.end = flow_end(start);
      for (auto it = node.begin(); it != node.end(); ++it) {
        if (node.IsMap()) {
          extent(it->first);
          extent(it->second);
        } else {
          extent(*it);
        }
      }
      return ext;
    }
    for (auto it = node.begin(); it != node.end(); ++it) {
      if (node.IsMap()) {
        ext.end = std::max(ext.end, extent(it->first).end);
        ext.end = std::max(ext.end, extent(it->second).end);
      } else {
        ext.end = std::max(ext.end, extent(*it).end);
      }
    }
    return ext;
  }

  Extent record(Extent ext) {
    if (ext.end > ext.begin) scalar_extents_.push_back(ext);
    return ext;
  }

  ir::Value classify(std::string_view raw, bool quoted, bool collection) const {
    ir::Value v;
    if (raw.empty()) return v;
    v.raw_text = std::string(raw);
    v.has_variable = ir::has_interpolation(raw, Technology::Ansible);
    if (collection || quoted) {
      v.kind = ir::ValueKind::String;
    } else {
      v.kind = scalar_kind(raw);
    }
    const std::string_view inner = text::trim(text::strip_quotes(raw));
    if (inner.size() >= 4 && inner.substr(0, 2) == "{{" &&
        inner.substr(inner.size() - 2) == "}}" && inner.find("{{", 2) == std::string_view::npos) {
      v.kind = ir::ValueKind::Reference;
      v.has_variable = true;
    }
    return v;
  }

  static ir::ValueKind scalar_kind(std::string_view raw) {
    const std::string lower = text::to_lower(raw);
    if (lower == "~" || lower == "null") return ir::ValueKind::Null;
    if (lower == "true" || lower == "false" || lower == "yes" || lower == "no" || lower == "on" ||
        lower == "off") {
      return ir::ValueKind::Boolean;
    }
    std::size_t i = (raw[0] == '-' || raw[0] == '+') ? 1 : 0;
    if (i < raw.size() && std::all_of(raw.begin() + static_cast<std::ptrdiff_t>(i), raw.end(),
                                      [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)) != 0; })) {
      return ir::ValueKind::Integer;
    }
    return ir::ValueKind::String;
  }

  ir::Value node_value(const YAML::Node& node) {
    const Extent ext = extent(node);
    ir::Value v;
    if (ext.end <= ext.begin) return v;
    const char c = src_[ext.begin];
    v = classify(src_.substr(ext.begin, ext.end - ext.begin), c == '"' || c == '\'' || c == '|' || c == '>',
                 !node.IsScalar() && !node.IsNull());
    if (node.IsNull()) v.kind = ir::ValueKind::Null;
    v.line = line_of(ext.begin);
    return v;
  }

  std::string key_text(const YAML::Node& key) {
    extent(key);
    return key.IsScalar() ? key.Scalar() : std::string();
  }

  template <class Make>
  void flatten(const std::string& prefix, const YAML::Node& key, const YAML::Node& value,
               std::vector<ir::Node>& out, Make make) {
    const std::string name = prefix + key_text(key);
    if (value.IsMap() && value.size() > 0) {
      for (auto it = value.begin(); it != value.end(); ++it) {
        flatten(name + ".", it->first, it->second, out, make);
      }
      return;
    }
    out.emplace_back(make(name, node_value(value), loc_at(content_start(key.Mark().pos))));
  }

  static ir::Variable make_variable(std::string name, ir::Value value, ir::SourceLocation loc) {
    return ir::Variable{std::move(name), std::move(value), std::move(loc)};
  }
  static ir::Attribute make_attribute(std::string name, ir::Value value, ir::SourceLocation loc) {
    return ir::Attribute{std::move(name), std::move(value), std::move(loc)};
  }

  void skip_node(const YAML::Node& node, std::string reason) {
    const Extent ext = extent(node);
    const int first = line_of(ext.begin);
    const int last = ext.end > ext.begin ? line_of(ext.end - 1) : first;
    detail::add_skipped(report_.skipped_regions, first, last, std::move(reason));
  }

  void read_document(const YAML::Node& doc, std::vector<ir::Node>& out) {
    if (!doc.IsDefined() || doc.IsNull()) return;
    if (doc.IsSequence()) {
      for (const auto& item : doc) {
        if (!item.IsMap()) {
          skip_node(item, "top-level sequence item is not a mapping");
        } else if (lookup(item, "hosts").IsDefined()) {
          out.emplace_back(read_play(item));
        } else {
          read_task(item, out);
        }
      }
      return;
    }
    if (doc.IsMap()) {
      for (auto it = doc.begin(); it != doc.end(); ++it) {
        const YAML::Node value = it->second;
        if (it->first.IsScalar() && it->first.Scalar() == "vars" && value.IsMap()) {
          for (auto v = value.begin(); v != value.end(); ++v) flatten("", v->first, v->second, out, make_variable);
        } else {
          flatten("", it->first, value, out, make_variable);
        }
      }
      return;
    }
    skip_node(doc, "scalar document");
  }

  ir::UnitBlock read_play(const YAML::Node& play) {
    ir::UnitBlock block;
    block.kind = ir::BlockKind::Play;
    block.technology = Technology::Ansible;
    block.location = loc_at(content_start(play.Mark().pos));
    const YAML::Node name = lookup(play, "name");
    const YAML::Node hosts = lookup(play, "hosts");
    block.name = name.IsScalar() ? name.Scalar() : (hosts.IsScalar() ? hosts.Scalar() : "");
    for (auto it = play.begin(); it != play.end(); ++it) {
      const std::string key = key_text(it->first);
      const YAML::Node value = it->second;
      if (key == "name") {
        extent(value);
      } else if (key == "vars") {
        if (value.IsMap()) {
          for (auto v = value.begin(); v != value.end(); ++v) {
            flatten("", v->first, v->second, block.children, make_variable);
          }
        } else {
          skip_node(value, "vars is not a mapping");
        }
      } else if (kTaskListKeys.count(key) != 0) {
        if (value.IsSequence()) {
          read_task_list(value, block.children);
        } else if (!value.IsNull()) {
          skip_node(value, key + " is not a list");
        } else {
          extent(value);
        }
      } else {
        flatten("", it->first, value, block.children, make_attribute);
      }
    }
    return block;
  }

  void read_task_list(const YAML::Node& list, std::vector<ir::Node>& out) {
    for (const auto& item : list) {
      if (item.IsMap()) {
        read_task(item, out);
      } else {
        skip_node(item, "task is not a mapping");
      }
    }
  }

  void read_task(const YAML::Node& task, std::vector<ir::Node>& out) {
    bool nested = false;
    for (const char* key : {"block", "rescue", "always"}) {
      if (lookup(task, key).IsDefined()) nested = true;
    }
    if (nested) {
      for (auto it = task.begin(); it != task.end(); ++it) {
        const std::string key = key_text(it->first);
        if ((key == "block" || key == "rescue" || key == "always") && it->second.IsSequence()) {
          read_task_list(it->second, out);
        } else {
          extent(it->second);
        }
      }
      return;
    }

    ir::AtomicUnit unit;
    std::size_t unit_pos = content_start(task.Mark().pos);
    std::vector<ir::Attribute> keyword_attrs;
    bool have_module = false;
    for (auto it = task.begin(); it != task.end(); ++it) {
      const std::string key = key_text(it->first);
      const YAML::Node value = it->second;
      const std::size_t key_pos = content_start(it->first.Mark().pos);
      if (key == "name") {
        extent(value);
        if (value.IsScalar()) unit.title = value.Scalar();
        unit_pos = key_pos;
        continue;
      }
      if (!have_module && (key == "local_action" || key == "action") && value.IsScalar()) {
        have_module = true;
        read_action(value, unit);
        if (!lookup(task, "name").IsDefined()) unit_pos = key_pos;
        continue;
      }
      if (!have_module && kTaskKeywords.count(key) == 0) {
        have_module = true;
        unit.unit_type = key;
        if (!lookup(task, "name").IsDefined()) unit_pos = key_pos;
        read_module_args(value, unit);
        continue;
      }
      if ((key == "args" || key == "vars") && value.IsMap()) {
        for (auto a = value.begin(); a != value.end(); ++a) {
          std::vector<ir::Node> tmp;
          flatten("", a->first, a->second, tmp, make_attribute);
          for (auto& n : tmp) keyword_attrs.push_back(std::get<ir::Attribute>(std::move(n.item)));
        }
        continue;
      }
      std::vector<ir::Node> tmp;
      flatten("", it->first, value, tmp, make_attribute);
      for (auto& n : tmp) keyword_attrs.push_back(std::get<ir::Attribute>(std::move(n.item)));
    }
    if (!have_module) {
      skip_node(task, "task without a module");
      return;
    }
    for (auto& a : keyword_attrs) unit.attributes.push_back(std::move(a));
    std::stable_sort(unit.attributes.begin(), unit.attributes.end(),
                     [](const ir::Attribute& a, const ir::Attribute& b) {
                       return a.location.line < b.location.line ||
                              (a.location.line == b.location.line &&
                               a.location.column < b.location.column);
                     });
    unit.location = loc_at(unit_pos);
    out.emplace_back(std::move(unit));
  }

  void read_action(const YAML::Node& value, ir::AtomicUnit& unit) {
    const Extent ext = extent(value);
    std::size_t pos = ext.begin;
    std::size_t end = ext.end;
    if (pos < end && (src_[pos] == '"' || src_[pos] == '\'')) {
      ++pos;
      --end;
    }
    const std::size_t word_end = std::min(end, src_.find_first_of(" \t\n", pos));
    unit.unit_type = std::string(src_.substr(pos, word_end - pos));
    split_shorthand(word_end, end, unit);
  }

  void read_module_args(const YAML::Node& value, ir::AtomicUnit& unit) {
    if (value.IsMap()) {
      for (auto it = value.begin(); it != value.end(); ++it) {
        std::vector<ir::Node> tmp;
        flatten("", it->first, it->second, tmp, make_attribute);
        for (auto& n : tmp) unit.attributes.push_back(std::get<ir::Attribute>(std::move(n.item)));
      }
      return;
    }
    const Extent ext = extent(value);
    if (!value.IsScalar() || ext.end <= ext.begin) return;
    const char c = src_[ext.begin];
    if (c == '|' || c == '>') {
      unit.attributes.push_back(
          ir::Attribute{"_raw_params", node_value(value), loc_at(ext.begin)});
      return;
    }
    std::size_t pos = ext.begin;
    std::size_t end = ext.end;
    if (c == '"' || c == '\'') {
      ++pos;
      --end;
    }
    split_shorthand(pos, end, unit);
  }

  // key=value tokens separated by unquoted whitespace; other tokens are
  // collected as free-form parameters.
  void split_shorthand(std::size_t pos, std::size_t end, ir::AtomicUnit& unit) {
    std::size_t free_begin = std::string_view::npos;
    std::size_t free_end = 0;
    while (pos < end) {
      while (pos < end && std::isspace(static_cast<unsigned char>(src_[pos]))) ++pos;
      if (pos >= end) break;
      const std::size_t tok_begin = pos;
      std::size_t eq = std::string_view::npos;
      while (pos < end && !std::isspace(static_cast<unsigned char>(src_[pos]))) {
        const char c = src_[pos];
        if (c == '"' || c == '\'') {
          const std::size_t close = src_.find(c, pos + 1);
          pos = (close == std::string_view::npos || close >= end) ? end : close + 1;
          continue;
        }
        if (c == '{' && pos + 1 < end && src_[pos + 1] == '{') {
          const std::size_t close = src_.find("}}", pos + 2);
          pos = (close == std::string_view::npos || close + 2 > end) ? end : close + 2;
          continue;
        }
        if (c == '=' && eq == std::string_view::npos) eq = pos;
        ++pos;
      }
      const bool keyed = eq != std::string_view::npos && eq > tok_begin &&
                         std::all_of(src_.begin() + static_cast<std::ptrdiff_t>(tok_begin),
                                     src_.begin() + static_cast<std::ptrdiff_t>(eq), [](char ch) {
                                       return std::isalnum(static_cast<unsigned char>(ch)) != 0 ||
                                              ch == '_';
                                     });
      if (keyed) {
        const std::string_view raw = src_.substr(eq + 1, pos - eq - 1);
        const bool quoted = !raw.empty() && (raw.front() == '"' || raw.front() == '\'');
        ir::Value v = classify(raw, quoted, false);
        v.line = line_of(eq + 1);
        unit.attributes.push_back(ir::Attribute{
            std::string(src_.substr(tok_begin, eq - tok_begin)), std::move(v), loc_at(tok_begin)});
      } else {
        if (free_begin == std::string_view::npos) free_begin = tok_begin;
        free_end = pos;
      }
    }
    if (free_begin != std::string_view::npos) {
      ir::Value v = classify(src_.substr(free_begin, free_end - free_begin), false, false);
      v.kind = v.kind == ir::ValueKind::Reference ? v.kind : ir::ValueKind::String;
      v.line = line_of(free_begin);
      unit.attributes.push_back(ir::Attribute{"_raw_params", std::move(v), loc_at(free_begin)});
    }
  }

  bool inside_scalar(std::size_t pos) const {
    for (const auto& ext : scalar_extents_) {
      if (pos >= ext.begin && pos < ext.end) return true;
    }
    return false;
  }

  std::vector<ir::Comment> scan_comments() const {
    std::vector<ir::Comment> comments;
    for (std::size_t i = 0; i < src_.size(); ++i) {
      if (src_[i] != '#') continue;
      const bool boundary = i == 0 || src_[i - 1] == ' ' || src_[i - 1] == '\t' ||
                            src_[i - 1] == '\n' || src_[i - 1] == '\r';
      if (!boundary || inside_scalar(i)) continue;
      const std::size_t eol = line_end(i);
      comments.push_back(ir::Comment{std::string(text::trim(src_.substr(i + 1, eol - i - 1))),
                                     loc_at(i)});
      i = eol;
    }
    return comments;
  }

  static std::vector<ir::Node> merge_by_line(std::vector<ir::Node> nodes,
                                             std::vector<ir::Comment> comments) {
    std::vector<ir::Node> merged;
    merged.reserve(nodes.size() + comments.size());
    std::size_t c = 0;
    for (auto& node : nodes) {
      const int line = node.location().line;
      while (c < comments.size() && comments[c].location.line < line) {
        merged.emplace_back(std::move(comments[c++]));
      }
      merged.push_back(std::move(node));
    }
    while (c < comments.size()) merged.emplace_back(std::move(comments[c++]));
    return merged;
  }

  std::string_view src_;
  std::string path_;
  ParseReport& report_;
  std::vector<std::size_t> line_starts_;
  std::vector<Extent> scalar_extents_;
};

}  // namespace

ParseReport parse_ansible(std::string_view content, std::string_view path) {
  ParseReport report;
  report.block.name = std::string(path);
  report.block.kind = ir::BlockKind::Script;
  report.block.technology = Technology::Ansible;
  report.block.location = {std::string(path), 1, 0};
  AnsibleReader reader(content, std::string(path), report);
  report.block.children = reader.read();
  return report;
}

}  // namespace iacsmell::parsers
