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

// Puppet front end: a hand-written lexer plus a recursive-descent parser over
// resources, variable assignments, classes/defines/nodes and case statements.

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "iacsmell/errors.hpp"
#include "iacsmell/parsers.hpp"
#include "iacsmell/text.hpp"
#include "parser_util.hpp"

namespace iacsmell::parsers {

namespace {

enum class TokKind { Ident, Variable, String, Number, Regex, Punct };

struct Token {
  TokKind kind = TokKind::Punct;
  std::string_view text;
  int line = 1;
  int column = 1;
  int end_line = 1;
  std::size_t begin = 0;
  std::size_t end = 0;

  bool is(std::string_view punct) const { return kind == TokKind::Punct && text == punct; }
  bool is_word(std::string_view word) const { return kind == TokKind::Ident && text == word; }
};

struct RawComment {
  std::size_t begin = 0;
  int line = 1;
  int column = 1;
  std::string text;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  void run() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\n') {
        advance();
        skip_pending_heredocs();
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
        advance();
        continue;
      }
      if (c == '#') {
        lex_line_comment();
        continue;
      }
      if (c == '/' && peek(1) == '*') {
        lex_block_comment();
        continue;
      }
      const std::size_t start = pos_;
      const int line = line_;
      const int col = col_;
      if (c == '$' && (ident_char(peek(1)) || (peek(1) == ':' && peek(2) == ':'))) {
        advance();
        lex_name();
        push(TokKind::Variable, start, line, col);
      } else if (ident_start(c) || (c == ':' && peek(1) == ':' && ident_start(peek(2)))) {
        lex_name();
        push(TokKind::Ident, start, line, col);
      } else if (std::isdigit(static_cast<unsigned char>(c)) != 0) {
        while (pos_ < src_.size() && (ident_char(src_[pos_]) || src_[pos_] == '.')) advance();
        push(TokKind::Number, start, line, col);
      } else if (c == '\'' || c == '"') {
        lex_string(c);
        push(TokKind::String, start, line, col);
      } else if (c == '/' && regex_allowed() && closes_on_line('/')) {
        advance();
        while (src_[pos_] != '/') {
          if (src_[pos_] == '\\') advance();
          advance();
        }
        advance();
        push(TokKind::Regex, start, line, col);
      } else if (c == '@' && peek(1) == '(') {
        lex_heredoc_header();
        push(TokKind::String, start, line, col);
      } else {
        lex_punct();
        push(TokKind::Punct, start, line, col);
      }
    }
  }

  std::vector<Token> tokens;
  std::vector<RawComment> comments;

 private:
  char peek(std::size_t ahead) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void push(TokKind kind, std::size_t start, int line, int col) {
    Token tok;
    tok.kind = kind;
    tok.text = src_.substr(start, pos_ - start);
    tok.line = line;
    tok.column = col;
    tok.end_line = line_;
    tok.begin = start;
    tok.end = pos_;
    tokens.push_back(tok);
  }

  void lex_name() {
    while (pos_ < src_.size()) {
      if (ident_char(src_[pos_])) {
        advance();
      } else if (src_[pos_] == ':' && peek(1) == ':' && ident_char(peek(2))) {
        advance();
        advance();
      } else {
        break;
      }
    }
  }

  void lex_line_comment() {
    RawComment comment{pos_, line_, col_, {}};
    advance();
    const std::size_t body = pos_;
    while (pos_ < src_.size() && src_[pos_] != '\n') advance();
    comment.text = std::string(text::trim(src_.substr(body, pos_ - body)));
    comments.push_back(std::move(comment));
  }

  void lex_block_comment() {
    RawComment comment{pos_, line_, col_, {}};
    const int start_line = line_;
    advance();
    advance();
    const std::size_t body = pos_;
    while (pos_ < src_.size() && !(src_[pos_] == '*' && peek(1) == '/')) advance();
    if (pos_ >= src_.size()) throw ParseError(start_line, "unterminated block comment");
    comment.text = std::string(text::trim(src_.substr(body, pos_ - body)));
    advance();
    advance();
    comments.push_back(std::move(comment));
  }

  void lex_string(char quote) {
    const int start_line = line_;
    advance();
    int interp_depth = 0;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (interp_depth > 0) {
        if (c == '{') ++interp_depth;
        if (c == '}') --interp_depth;
        advance();
        continue;
      }
      if (c == '\\') {
        advance();
        if (pos_ < src_.size()) advance();
        continue;
      }
      if (quote == '"' && c == '$' && peek(1) == '{') {
        advance();
        advance();
        interp_depth = 1;
        continue;
      }
      if (c == quote) {
        advance();
        return;
      }
      advance();
    }
    throw ParseError(start_line, "unterminated string literal");
  }

  // @(TAG) heredoc: the header is the token; its body lines are skipped at
  // the next newline.
  void lex_heredoc_header() {
    const std::size_t close = src_.find(')', pos_);
    const std::size_t eol = src_.find('\n', pos_);
    if (close == std::string_view::npos || (eol != std::string_view::npos && close > eol)) {
      lex_punct();
      return;
    }
    std::string_view spec = src_.substr(pos_ + 2, close - pos_ - 2);
    spec = spec.substr(0, spec.find_first_of(":/"));
    spec = text::strip_quotes(text::trim(spec));
    pending_heredocs_.emplace_back(spec);
    while (pos_ <= close) advance();
  }

  void skip_pending_heredocs() {
    for (const auto& tag : pending_heredocs_) {
      const int start_line = line_;
      while (true) {
        if (pos_ >= src_.size()) throw ParseError(start_line, "unterminated heredoc");
        const std::size_t eol = std::min(src_.find('\n', pos_), src_.size());
        std::string_view line = text::trim(src_.substr(pos_, eol - pos_));
        while (!line.empty() && (line.front() == '|' || line.front() == '-')) {
          line.remove_prefix(1);
          line = text::trim(line);
        }
        while (pos_ < eol) advance();
        if (pos_ < src_.size()) advance();
        if (line == tag) break;
      }
    }
    pending_heredocs_.clear();
  }

  bool regex_allowed() const {
    if (tokens.empty()) return true;
    const Token& prev = tokens.back();
    if (prev.kind == TokKind::Ident) return prev.text == "node";
    if (prev.kind != TokKind::Punct) return false;
    static constexpr std::string_view kBefore[] = {"{", ",", "(", "[", "=~", "!~", ":", ";", "}"};
    for (auto p : kBefore) {
      if (prev.text == p) return true;
    }
    return false;
  }

  bool closes_on_line(char delim) const {
    for (std::size_t i = pos_ + 1; i < src_.size() && src_[i] != '\n'; ++i) {
      if (src_[i] == '\\') {
        ++i;
        continue;
      }
      if (src_[i] == delim) return true;
    }
    return false;
  }

  void lex_punct() {
    static constexpr std::string_view kMulti[] = {"<<|", "|>>", "=>", "+>", "->", "~>", "<-", "<~",
                                                  "==", "!=", "=~", "!~", ">=", "<=", "<|", "|>",
                                                  "::", "+=", "-=", "@@"};
    for (auto op : kMulti) {
      if (src_.substr(pos_, op.size()) == op) {
        for (std::size_t i = 0; i < op.size(); ++i) advance();
        return;
      }
    }
    advance();
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  std::vector<std::string> pending_heredocs_;
};

bool is_opener(const Token& t) { return t.is("{") || t.is("[") || t.is("("); }
bool is_closer(const Token& t) { return t.is("}") || t.is("]") || t.is(")"); }

bool is_operator(const Token& t) {
  if (t.kind == TokKind::Ident) return t.text == "and" || t.text == "or" || t.text == "in";
  if (t.kind != TokKind::Punct) return false;
  static constexpr std::string_view kOps[] = {"=",  "+",  "-",  "*",  "/", "%", "==", "!=", "=~",
                                              "!~", ",",  "=>", "+>", "?", "<", ">",  "<=", ">=",
                                              ".",  "->", "~>", "<-", "<~", "!", "+=", "-="};
  for (auto op : kOps) {
    if (t.text == op) return true;
  }
  return false;
}

// A new line starts a new statement unless either side of the break is an
// operator.
bool continues(const Token& last, const Token& next) {
  if (is_operator(last)) return true;
  return next.is("->") || next.is("~>") || next.is("<-") || next.is("<~") || next.is("?") ||
         next.is(".") || next.is_word("and") || next.is_word("or");
}

struct StopSet {
  bool colon = false;
  bool open_brace = false;
};

class Parser {
 public:
  Parser(std::string_view src, std::string path, const Lexer& lexer, ParseReport& report)
      : src_(src), path_(std::move(path)), toks_(lexer.tokens), comments_(lexer.comments),
        report_(report) {}

  std::vector<ir::Node> parse_file() {
    auto nodes = parse_body(false, 0);
    flush_comments(src_.size(), nodes);
    return nodes;
  }

 private:
  bool at_end() const { return pos_ >= toks_.size(); }
  const Token& peek(std::size_t ahead = 0) const {
    static const Token kEnd{TokKind::Punct, "", 0, 0, 0, 0, 0};
    return pos_ + ahead < toks_.size() ? toks_[pos_ + ahead] : kEnd;
  }
  bool peek_is(std::string_view punct, std::size_t ahead = 0) const {
    return pos_ + ahead < toks_.size() && toks_[pos_ + ahead].is(punct);
  }
  const Token& next() { return toks_[pos_++]; }

  ir::SourceLocation loc(const Token& t) const { return {path_, t.line, t.column}; }

  std::string_view slice(const Token& first, const Token& last) const {
    return src_.substr(first.begin, last.end - first.begin);
  }

  void skip(const Token& first, const Token& last, std::string reason) {
    detail::add_skipped(report_.skipped_regions, first.line, last.end_line, std::move(reason));
  }

  void flush_comments(std::size_t before, std::vector<ir::Node>& out) {
    while (next_comment_ < comments_.size() && comments_[next_comment_].begin < before) {
      const auto& c = comments_[next_comment_++];
      out.emplace_back(ir::Comment{c.text, {path_, c.line, c.column}});
    }
  }

  void expect_close(int open_line) {
    if (at_end() || !peek().is("}")) {
      throw ParseError(open_line, "unbalanced '{': missing closing brace");
    }
    ++pos_;
  }

  std::vector<ir::Node> parse_body(bool braced, int open_line) {
    std::vector<ir::Node> out;
    while (true) {
      if (at_end()) {
        if (braced) throw ParseError(open_line, "unbalanced '{': missing closing brace");
        return out;
      }
      flush_comments(peek().begin, out);
      const Token& t = peek();
      if (t.is("}")) {
        if (braced) return out;
        throw ParseError(t.line, "unbalanced '}'");
      }
      parse_statement(out);
    }
  }

  void parse_statement(std::vector<ir::Node>& out) {
    const Token& t = peek();
    if (t.kind == TokKind::Variable && peek_is("=", 1)) {
      parse_assignment(out);
    } else if ((t.is_word("class") || t.is_word("define")) && peek(1).kind == TokKind::Ident) {
      parse_class(out);
    } else if (t.is_word("node") && !peek_is("{", 1)) {
      parse_node(out);
    } else if (t.is_word("case")) {
      parse_case(out);
    } else if (t.is_word("if") || t.is_word("unless")) {
      parse_if(out);
    } else if ((t.is("@") || t.is("@@")) && peek(1).kind == TokKind::Ident && peek_is("{", 2)) {
      ++pos_;
      parse_resource(out);
    } else if (t.kind == TokKind::Ident && peek_is("{", 1)) {
      parse_resource(out);
    } else if (t.is("->") || t.is("~>") || t.is("<-") || t.is("<~") || t.is(";")) {
      ++pos_;
    } else if (t.kind == TokKind::Ident && peek_is("(", 1)) {
      skip_statement("function call");
    } else if (t.kind == TokKind::Ident &&
               (t.text == "include" || t.text == "require" || t.text == "contain" ||
                t.text == "realize" || t.text == "notice" || t.text == "fail" ||
                t.text == "hiera_include" || t.text == "create_resources")) {
      skip_statement("function statement '" + std::string(t.text) + "'");
    } else {
      skip_statement("unsupported construct '" + std::string(t.text) + "'");
    }
  }

  // Consumes one statement worth of tokens without interpreting them.
  void skip_statement(std::string reason) {
    const std::size_t first = pos_;
    std::vector<int> open_lines;
    const Token* last = nullptr;
    while (!at_end()) {
      const Token& t = peek();
      if (open_lines.empty() && last != nullptr) {
        if (t.line > last->end_line && !continues(*last, t)) break;
        if (t.is("}")) break;
      }
      if (is_closer(t)) {
        if (open_lines.empty()) {
          if (last == nullptr) {
            ++pos_;
            last = &t;
          }
          break;
        }
        open_lines.pop_back();
      } else if (is_opener(t)) {
        open_lines.push_back(t.line);
      }
      last = &t;
      ++pos_;
    }
    if (!open_lines.empty()) throw ParseError(open_lines.back(), "unbalanced bracket");
    if (last == nullptr) return;
    skip(toks_[first], *last, std::move(reason));
  }

  // Returns [first, last) token indices of an expression.
  std::pair<std::size_t, std::size_t> scan_expression(StopSet stop) {
    const std::size_t first = pos_;
    std::vector<int> open_lines;
    const Token* last = nullptr;
    while (!at_end()) {
      const Token& t = peek();
      if (open_lines.empty()) {
        if (t.is(",") || t.is(";") || is_closer(t)) break;
        if (stop.colon && t.is(":")) break;
        if (stop.open_brace && t.is("{") && last != nullptr && !last->is("?")) break;
        if (last != nullptr && t.line > last->end_line && !continues(*last, t)) break;
        if (t.is("=>") || t.is("+>")) break;
      }
      if (is_closer(t)) {
        open_lines.pop_back();
      } else if (is_opener(t)) {
        open_lines.push_back(t.line);
      }
      last = &t;
      ++pos_;
    }
    if (!open_lines.empty()) throw ParseError(open_lines.back(), "unbalanced bracket");
    return {first, pos_};
  }

  ir::Value make_value(std::size_t first, std::size_t last) const {
    ir::Value v;
    if (first >= last) return v;
    const Token& a = toks_[first];
    const Token& b = toks_[last - 1];
    v.raw_text = std::string(slice(a, b));
    v.line = a.line;
    const std::size_t n = last - first;
    if (n == 1) {
      switch (a.kind) {
        case TokKind::String:
          v.kind = ir::ValueKind::String;
          v.has_variable = ir::has_interpolation(a.text, Technology::Puppet);
          return v;
        case TokKind::Number:
          v.kind = ir::ValueKind::Integer;
          return v;
        case TokKind::Variable:
          v.kind = ir::ValueKind::Reference;
          v.has_variable = true;
          return v;
        case TokKind::Ident:
          if (a.text == "true" || a.text == "false") {
            v.kind = ir::ValueKind::Boolean;
          } else if (a.text == "undef") {
            v.kind = ir::ValueKind::Null;
          } else {
            v.kind = ir::ValueKind::String;
          }
          return v;
        default:
          v.kind = ir::ValueKind::String;
          return v;
      }
    }
    if (n == 2 && a.is("-") && b.kind == TokKind::Number) {
      v.kind = ir::ValueKind::Integer;
      return v;
    }
    bool reference = false;
    for (std::size_t i = first; i < last; ++i) {
      const Token& t = toks_[i];
      if (t.kind == TokKind::Variable) reference = true;
      if (t.kind == TokKind::Ident && i + 1 < last && toks_[i + 1].is("(")) reference = true;
    }
    v.kind = reference ? ir::ValueKind::Reference : ir::ValueKind::String;
    v.has_variable = reference || ir::has_interpolation(v.raw_text, Technology::Puppet);
    return v;
  }

  static std::string strip_sigil(std::string_view name) {
    if (!name.empty() && name.front() == '$') name.remove_prefix(1);
    while (name.substr(0, 2) == "::") name.remove_prefix(2);
    return std::string(name);
  }

  void parse_assignment(std::vector<ir::Node>& out) {
    const Token& var = next();
    ++pos_;  // '='
    auto [first, last] = scan_expression({});
    out.emplace_back(ir::Variable{strip_sigil(var.text), make_value(first, last), loc(var)});
  }

  void parse_class(std::vector<ir::Node>& out) {
    const Token& keyword = next();
    const Token& name = next();
    ir::UnitBlock block;
    block.name = std::string(name.text);
    block.kind = ir::BlockKind::Class;
    block.technology = Technology::Puppet;
    block.location = loc(keyword);
    if (peek_is("(")) {
      const Token& open = next();
      while (true) {
        if (at_end()) throw ParseError(open.line, "unbalanced '(' in parameter list");
        if (peek_is(")")) {
          ++pos_;
          break;
        }
        flush_comments(peek().begin, block.children);
        const Token& t = peek();
        if (t.kind == TokKind::Variable) {
          ++pos_;
          if (peek_is("=")) {
            ++pos_;
            auto [first, last] = scan_expression({});
            block.children.emplace_back(
                ir::Variable{strip_sigil(t.text), make_value(first, last), loc(t)});
          }
        } else if (is_opener(t)) {
          skip_balanced();
        } else {
          ++pos_;
        }
      }
    }
    if (peek().is_word("inherits")) {
      pos_ += 2;
    }
    if (!peek_is("{")) {
      throw ParseError(keyword.line, "expected '{' after " + std::string(keyword.text) + " " +
                                         std::string(name.text));
    }
    const Token& open = next();
    auto body = parse_body(true, open.line);
    for (auto& n : body) block.children.push_back(std::move(n));
    flush_comments(peek().begin, block.children);
    expect_close(open.line);
    out.emplace_back(std::move(block));
  }

  void skip_balanced() {
    std::vector<int> open_lines;
    do {
      if (at_end()) throw ParseError(open_lines.back(), "unbalanced bracket");
      const Token& t = next();
      if (is_opener(t)) open_lines.push_back(t.line);
      if (is_closer(t)) open_lines.pop_back();
    } while (!open_lines.empty());
  }

  void parse_node(std::vector<ir::Node>& out) {
    const Token& keyword = next();
    std::string name;
    while (!at_end() && !peek_is("{")) {
      const Token& t = next();
      if (name.empty() && t.kind != TokKind::Punct) name = std::string(text::strip_quotes(t.text));
    }
    if (at_end()) throw ParseError(keyword.line, "expected '{' after node definition");
    const Token& open = next();
    ir::UnitBlock block;
    block.name = name;
    block.kind = ir::BlockKind::Class;
    block.technology = Technology::Puppet;
    block.location = loc(keyword);
    block.children = parse_body(true, open.line);
    flush_comments(peek().begin, block.children);
    expect_close(open.line);
    out.emplace_back(std::move(block));
  }

  void parse_case(std::vector<ir::Node>& out) {
    const Token& keyword = next();
    auto [sfirst, slast] = scan_expression({.colon = false, .open_brace = true});
    ir::ConditionBlock cond;
    cond.subject = make_value(sfirst, slast);
    cond.location = loc(keyword);
    if (!peek_is("{")) throw ParseError(keyword.line, "expected '{' after case subject");
    const Token& open = next();
    while (true) {
      if (at_end()) throw ParseError(open.line, "unbalanced '{' in case statement");
      if (peek_is("}")) break;
      ir::ConditionBranch branch;
      const std::size_t gfirst = pos_;
      bool is_default = false;
      while (!at_end() && !peek_is(":")) {
        const Token& t = peek();
        if (t.is("{") || t.is("}")) break;
        if (t.is_word("default")) is_default = true;
        if (is_opener(t)) {
          skip_balanced();
        } else {
          ++pos_;
        }
      }
      if (!peek_is(":") || pos_ == gfirst) {
        throw ParseError(toks_[gfirst].line, "malformed case branch");
      }
      branch.guard = std::string(slice(toks_[gfirst], toks_[pos_ - 1]));
      ++pos_;  // ':'
      if (!peek_is("{")) throw ParseError(toks_[gfirst].line, "expected '{' after case guard");
      const Token& body_open = next();
      branch.body = parse_body(true, body_open.line);
      flush_comments(peek().begin, branch.body);
      expect_close(body_open.line);
      cond.has_default_branch = cond.has_default_branch || is_default;
      cond.branches.push_back(std::move(branch));
    }
    expect_close(open.line);
    out.emplace_back(std::move(cond));
  }

  // The guard is not modeled; bodies are analyzed in place.
  void parse_if(std::vector<ir::Node>& out) {
    while (true) {
      const Token& keyword = next();
      const std::size_t header_first = pos_ - 1;
      std::vector<int> open_lines;
      while (!at_end()) {
        const Token& t = peek();
        if (open_lines.empty() && t.is("{")) break;
        if (is_opener(t)) open_lines.push_back(t.line);
        if (is_closer(t)) {
          if (open_lines.empty()) break;
          open_lines.pop_back();
        }
        ++pos_;
      }
      if (!peek_is("{")) throw ParseError(keyword.line, "expected '{' after conditional");
      skip(toks_[header_first], peek(), "conditional guard not modeled");
      const Token& open = next();
      auto body = parse_body(true, open.line);
      for (auto& n : body) out.push_back(std::move(n));
      flush_comments(peek().begin, out);
      expect_close(open.line);
      if (!(peek().is_word("elsif") || peek().is_word("else"))) break;
    }
  }

  std::vector<ir::Attribute> parse_attributes() {
    std::vector<ir::Attribute> attrs;
    while (!at_end() && !peek_is("}") && !peek_is(";")) {
      const Token& name = peek();
      if (!(peek_is("=>", 1) || peek_is("+>", 1))) {
        const std::size_t first = pos_;
        scan_expression({});
        if (pos_ == first) ++pos_;
        skip(toks_[first], toks_[pos_ - 1], "malformed attribute");
        if (peek_is(",")) ++pos_;
        continue;
      }
      pos_ += 2;
      auto [first, last] = scan_expression({});
      attrs.push_back(ir::Attribute{std::string(text::strip_quotes(name.text)),
                                    make_value(first, last), loc(name)});
      if (peek_is(",")) ++pos_;
    }
    return attrs;
  }

  void parse_resource(std::vector<ir::Node>& out) {
    const Token& type = next();
    const Token& open = next();
    const bool defaults = (peek().kind == TokKind::Ident || peek().is("*")) &&
                          (peek_is("=>", 1) || peek_is("+>", 1));
    if (defaults) {
      ir::AtomicUnit unit{std::string(type.text), "", parse_attributes(), loc(type)};
      if (peek_is(";")) ++pos_;
      out.emplace_back(std::move(unit));
      expect_close(open.line);
      return;
    }
    while (true) {
      if (at_end()) throw ParseError(open.line, "unbalanced '{': missing closing brace");
      if (peek_is("}")) break;
      const std::size_t tfirst = pos_;
      scan_expression({.colon = true, .open_brace = false});
      if (!peek_is(":") || pos_ == tfirst) {
        // Not a title; recover at the next ';' or '}'.
        const std::size_t first = pos_ == tfirst ? pos_ : tfirst;
        while (!at_end() && !peek_is(";") && !peek_is("}")) {
          if (is_opener(peek())) {
            skip_balanced();
          } else {
            ++pos_;
          }
        }
        if (pos_ > first) skip(toks_[first], toks_[pos_ - 1], "malformed resource body");
        if (peek_is(";")) ++pos_;
        continue;
      }
      const Token& title_first = toks_[tfirst];
      const Token& title_last = toks_[pos_ - 1];
      std::string title = (pos_ - tfirst == 1 && title_first.kind == TokKind::String)
                              ? std::string(text::strip_quotes(title_first.text))
                              : std::string(slice(title_first, title_last));
      ++pos_;  // ':'
      ir::AtomicUnit unit{std::string(type.text), std::move(title), parse_attributes(),
                          loc(title_first)};
      out.emplace_back(std::move(unit));
      if (peek_is(";")) ++pos_;
    }
    expect_close(open.line);
  }

  std::string_view src_;
  std::string path_;
  const std::vector<Token>& toks_;
  const std::vector<RawComment>& comments_;
  ParseReport& report_;
  std::size_t pos_ = 0;
  std::size_t next_comment_ = 0;
};

}  // namespace

ParseReport parse_puppet(std::string_view content, std::string_view path) {
  Lexer lexer(content);
  lexer.run();
  ParseReport report;
  report.comment_count = static_cast<int>(lexer.comments.size());
  report.block.name = std::string(path);
  report.block.kind = ir::BlockKind::Script;
  report.block.technology = Technology::Puppet;
  report.block.location = {std::string(path), 1, 0};
  Parser parser(content, std::string(path), lexer, report);
  report.block.children = parser.parse_file();
  return report;
}

}  // namespace iacsmell::parsers
