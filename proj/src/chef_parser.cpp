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

// Chef front end. Recipes are lexed as a Ruby subset, grouped into logical
// statements, and matched against resource, attribute and case shapes.

#include <algorithm>
#include <cctype>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "iacsmell/errors.hpp"
#include "iacsmell/parsers.hpp"
#include "iacsmell/text.hpp"
#include "parser_util.hpp"

namespace iacsmell::parsers {

namespace {

enum class TokKind { Ident, IVar, Symbol, String, Number, Regex, Punct, Newline };

struct Token {
  TokKind kind = TokKind::Punct;
  std::string_view text;
  int line = 1;
  int column = 1;
  int end_line = 1;
  std::size_t begin = 0;
  std::size_t end = 0;

  bool is(std::string_view p) const { return kind == TokKind::Punct && text == p; }
  bool is_word(std::string_view w) const { return kind == TokKind::Ident && text == w; }
};

struct RawComment {
  std::size_t begin = 0;
  int line = 1;
  int column = 1;
  std::string text;
};

const std::set<std::string_view> kKeywords = {
    "alias", "and",   "begin",  "break",  "case", "class",  "def",    "defined?", "do",
    "else",  "elsif", "end",    "ensure", "false", "for",   "if",     "in",       "module",
    "next",  "nil",   "not",    "or",     "redo", "rescue", "retry",  "return",   "self",
    "super", "then",  "true",   "undef",  "unless", "until", "when",  "while",    "yield"};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

char closing_delimiter(char open) {
  switch (open) {
    case '(': return ')';
    case '[': return ']';
    case '{': return '}';
    case '<': return '>';
    default: return open;
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  void run() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (col_ == 1 && src_.substr(pos_, 6) == "=begin") {
        lex_embedded_doc();
        continue;
      }
      if (col_ == 1 && src_.substr(pos_, 7) == "__END__") break;
      if (c == '\n') {
        const std::size_t start = pos_;
        const int line = line_;
        const int col = col_;
        advance();
        push(TokKind::Newline, start, line, col);
        skip_pending_heredocs();
        continue;
      }
      if (c == '\\' && peek(1) == '\n') {
        advance();
        advance();
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
        advance();
        continue;
      }
      if (c == '#') {
        RawComment comment{pos_, line_, col_, {}};
        advance();
        const std::size_t body = pos_;
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
        comment.text = std::string(text::trim(src_.substr(body, pos_ - body)));
        comments.push_back(std::move(comment));
        continue;
      }
      const std::size_t start = pos_;
      const int line = line_;
      const int col = col_;
      if (ident_start(c)) {
        while (pos_ < src_.size() && ident_char(src_[pos_])) advance();
        if ((peek(0) == '?' || peek(0) == '!') && peek(1) != '=' && !ident_char(peek(1))) advance();
        push(TokKind::Ident, start, line, col);
      } else if (c == '@' || (c == '$' && ident_char(peek(1)))) {
        advance();
        if (peek(0) == '@') advance();
        while (pos_ < src_.size() && ident_char(src_[pos_])) advance();
        push(TokKind::IVar, start, line, col);
      } else if (std::isdigit(static_cast<unsigned char>(c)) != 0) {
        while (pos_ < src_.size() &&
               (ident_char(src_[pos_]) ||
                (src_[pos_] == '.' && std::isdigit(static_cast<unsigned char>(peek(1))) != 0))) {
          advance();
        }
        push(TokKind::Number, start, line, col);
      } else if (c == '\'' || c == '"' || c == '`') {
        lex_quoted(c, c, c != '\'');
        push(TokKind::String, start, line, col);
      } else if (c == ':' && peek(1) != ':' && (ident_start(peek(1)) || peek(1) == '"' || peek(1) == '\'') &&
                 symbol_allowed()) {
        advance();
        if (src_[pos_] == '"' || src_[pos_] == '\'') {
          lex_quoted(src_[pos_], src_[pos_], src_[pos_] == '"');
        } else {
          while (pos_ < src_.size() && ident_char(src_[pos_])) advance();
          if (peek(0) == '?' || peek(0) == '!' || peek(0) == '=') {
            if (!ident_char(peek(1)) && peek(1) != '>' && peek(1) != '=') advance();
          }
        }
        push(TokKind::Symbol, start, line, col);
      } else if (c == '%' && percent_literal()) {
        push(TokKind::String, start, line, col);
      } else if (c == '<' && peek(1) == '<' && heredoc_header()) {
        push(TokKind::String, start, line, col);
      } else if (c == '/' && operand_position() && closes_on_line('/')) {
        lex_quoted('/', '/', true);
        while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_])) != 0) advance();
        push(TokKind::Regex, start, line, col);
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

  void lex_embedded_doc() {
    RawComment comment{pos_, line_, col_, {}};
    const int start_line = line_;
    std::string body;
    while (pos_ < src_.size()) {
      const std::size_t eol = std::min(src_.find('\n', pos_), src_.size());
      const std::string_view line = src_.substr(pos_, eol - pos_);
      while (pos_ < eol) advance();
      if (pos_ < src_.size()) advance();
      if (line.substr(0, 4) == "=end") {
        comment.text = std::string(text::trim(body));
        comments.push_back(std::move(comment));
        return;
      }
      if (line.substr(0, 6) != "=begin") {
        body += line;
        body += '\n';
      }
    }
    throw ParseError(start_line, "unterminated =begin block");
  }

  // Consumes a delimited literal starting at pos_ (the opening delimiter).
  void lex_quoted(char open, char close, bool interpolates) {
    const int start_line = line_;
    advance();
    int nesting = 0;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\\') {
        advance();
        if (pos_ < src_.size()) advance();
        continue;
      }
      if (interpolates && c == '#' && peek(1) == '{') {
        advance();
        advance();
        skip_interpolation(start_line);
        continue;
      }
      if (open != close && c == open) {
        ++nesting;
      } else if (c == close) {
        if (nesting == 0) {
          advance();
          return;
        }
        --nesting;
      }
      advance();
    }
    throw ParseError(start_line, "unterminated string literal");
  }

  void skip_interpolation(int start_line) {
    int depth = 1;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '"' || c == '\'') {
        lex_quoted(c, c, c == '"');
        continue;
      }
      if (c == '{') ++depth;
      if (c == '}' && --depth == 0) {
        advance();
        return;
      }
      advance();
    }
    throw ParseError(start_line, "unterminated string interpolation");
  }

  bool percent_literal() {
    char type = peek(1);
    std::size_t delim_at = 2;
    if (std::string_view("wWiIqQrsx").find(type) == std::string_view::npos || type == '\0') {
      type = 'Q';
      delim_at = 1;
      if (!operand_position()) return false;
    }
    const char open = peek(delim_at);
    if (open == '\0' || std::isalnum(static_cast<unsigned char>(open)) != 0 ||
        std::isspace(static_cast<unsigned char>(open)) != 0) {
      return false;
    }
    for (std::size_t i = 0; i < delim_at; ++i) advance();
    const bool interpolates = type == 'W' || type == 'I' || type == 'Q' || type == 'r' || type == 'x';
    lex_quoted(open, closing_delimiter(open), interpolates);
    return true;
  }

  bool heredoc_header() {
    std::size_t i = pos_ + 2;
    bool squiggly = false;
    if (i < src_.size() && (src_[i] == '~' || src_[i] == '-')) {
      squiggly = true;
      ++i;
    }
    std::string tag;
    if (i < src_.size() && (src_[i] == '\'' || src_[i] == '"')) {
      const char q = src_[i];
      const std::size_t close = src_.find(q, i + 1);
      if (close == std::string_view::npos) return false;
      tag = std::string(src_.substr(i + 1, close - i - 1));
      i = close + 1;
    } else {
      const std::size_t begin = i;
      while (i < src_.size() && (std::isupper(static_cast<unsigned char>(src_[i])) != 0 ||
                                 std::isdigit(static_cast<unsigned char>(src_[i])) != 0 || src_[i] == '_')) {
        ++i;
      }
      tag = std::string(src_.substr(begin, i - begin));
      if (tag.empty() || !operand_position()) return false;
    }
    pending_heredocs_.push_back({tag, squiggly});
    while (pos_ < i) advance();
    return true;
  }

  void skip_pending_heredocs() {
    for (const auto& [tag, indented] : pending_heredocs_) {
      const int start_line = line_;
      while (true) {
        if (pos_ >= src_.size()) throw ParseError(start_line, "unterminated heredoc");
        const std::size_t eol = std::min(src_.find('\n', pos_), src_.size());
        std::string_view line = src_.substr(pos_, eol - pos_);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        while (pos_ < eol) advance();
        if (pos_ < src_.size()) advance();
        if ((indented ? text::trim(line) : line) == tag) break;
      }
    }
    pending_heredocs_.clear();
  }

  bool operand_position() const {
    if (tokens.empty()) return true;
    const Token& prev = tokens.back();
    switch (prev.kind) {
      case TokKind::Newline:
        return true;
      case TokKind::Punct:
        return !(prev.is(")") || prev.is("]") || prev.is("}"));
      case TokKind::Ident:
        if (kKeywords.count(prev.text) != 0) return prev.text != "end" && prev.text != "self";
        // `cmd /re/` or `cmd %w(..)`: a space before and none after.
        return prev.end < pos_ && pos_ + 1 < src_.size() && src_[pos_ + 1] != ' ' && src_[pos_ + 1] != '=';
      default:
        return false;
    }
  }

  bool symbol_allowed() const {
    if (pos_ == 0) return true;
    const char prev = src_[pos_ - 1];
    return prev == ' ' || prev == '\t' || prev == '(' || prev == '[' || prev == ',' || prev == '{' ||
           prev == '\n' || prev == '|' || prev == '!' || prev == '=';
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
    static constexpr std::string_view kMulti[] = {
        "**=", "<=>", "===", "...", "||=", "&&=", "<<=", ">>=", "==", "!=", "=~", "!~", ">=", "<=",
        "&&",  "||",  "..",  "::",  "->",  "=>",  "+=",  "-=",  "*=", "/=", "&.", "**", "<<", ">>"};
    for (auto op : kMulti) {
      if (src_.substr(pos_, op.size()) == op) {
        for (std::size_t i = 0; i < op.size(); ++i) advance();
        return;
      }
    }
    advance();
  }

  struct PendingHeredoc {
    std::string tag;
    bool indented = false;
  };

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  std::vector<PendingHeredoc> pending_heredocs_;
};

// A logical statement: token index range [first, last).
struct Stmt {
  std::size_t first = 0;
  std::size_t last = 0;
};

bool continues_after(const Token& t) {
  if (t.kind != TokKind::Punct) return t.is_word("and") || t.is_word("or") || t.is_word("not");
  static constexpr std::string_view kOps[] = {",",  "=",  "+",  "-",  "*",  "/",  "%",  "&&", "||",
                                              ".",  "&.", "=>", "(",  "[",  "{",  "?",  ":",  "==",
                                              "!=", "<",  ">",  "<=", ">=", "+=", "-=", "||=", "&&=",
                                              "<<", "**", "=~", "|",  "&",  "\\"};
  for (auto op : kOps) {
    if (t.text == op) return true;
  }
  return false;
}

std::vector<Stmt> split_statements(const std::vector<Token>& toks) {
  std::vector<Stmt> out;
  std::size_t first = 0;
  int depth = 0;
  bool in_block_params = false;
  auto flush = [&](std::size_t end) {
    if (end > first) out.push_back({first, end});
  };
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const Token& t = toks[i];
    if (t.kind == TokKind::Newline) {
      if (i == first) {
        first = i + 1;
        continue;
      }
      std::size_t next = i + 1;
      while (next < toks.size() && toks[next].kind == TokKind::Newline) ++next;
      const bool chained = next < toks.size() && (toks[next].is(".") || toks[next].is("&."));
      const bool open_params = in_block_params;
      if (depth > 0 || open_params || chained || continues_after(toks[i - 1])) {
        // `do |x|`: a trailing `|` closes the block parameter list.
        if (!(toks[i - 1].is("|") && !open_params && depth == 0 && !chained)) continue;
      }
      flush(i);
      first = i + 1;
      continue;
    }
    if (t.is(";") && depth == 0) {
      flush(i);
      first = i + 1;
      continue;
    }
    if (t.is("(") || t.is("[") || t.is("{")) ++depth;
    if ((t.is(")") || t.is("]") || t.is("}")) && depth > 0) --depth;
    if (t.is("|") && depth == 0 && i > 0 && (toks[i - 1].is_word("do") || in_block_params)) {
      in_block_params = !in_block_params;
    }
  }
  flush(toks.size());
  return out;
}

bool is_value_keyword(std::string_view w) { return w == "true" || w == "false" || w == "nil"; }

const std::set<std::string_view> kNodePrecedence = {"default", "override", "normal",
                                                    "force_default", "force_override", "set",
                                                    "automatic"};

const std::set<std::string_view> kNotResources = {
    "include_recipe", "require", "require_relative", "puts",  "print",   "p",       "pp",
    "raise",          "fail",    "load",             "include", "extend", "depends", "name",
    "version",        "maintainer", "maintainer_email", "license", "description", "supports",
    "chef_version",   "issues_url", "source_url",     "gem",   "each",    "each_pair", "map",
    "times",          "loop",    "lambda",           "proc",  "attr_accessor", "attr_reader",
    "return",         "break",   "next",             "yield", "node",    "default", "override",
    "normal",         "set",     "ruby_version",     "lazy",  "only_if", "not_if"};

class Parser {
 public:
  Parser(std::string_view src, std::string path, const Lexer& lexer, ParseReport& report)
      : src_(src), path_(std::move(path)), toks_(lexer.tokens), comments_(lexer.comments),
        stmts_(split_statements(lexer.tokens)), report_(report) {}

  std::vector<ir::Node> parse_file() {
    std::vector<ir::Node> out;
    const Terminator term = parse_list(out, 0, false);
    if (term != Terminator::Eof) {
      throw ParseError(first_tok(stmts_[cur_ - 1]).line, "unbalanced 'end' without matching opener");
    }
    flush_comments(src_.size(), out);
    return out;
  }

 private:
  enum class Terminator { Eof, End, When, Else, Elsif, Rescue, Ensure };

  const Token& first_tok(const Stmt& s) const { return toks_[s.first]; }
  const Token& last_tok(const Stmt& s) const { return toks_[s.last - 1]; }

  ir::SourceLocation loc(const Token& t) const { return {path_, t.line, t.column}; }

  std::string_view slice(std::size_t first, std::size_t last) const {
    return src_.substr(toks_[first].begin, toks_[last - 1].end - toks_[first].begin);
  }

  void skip(std::size_t first_tok_idx, std::size_t last_tok_idx, std::string reason) {
    detail::add_skipped(report_.skipped_regions, toks_[first_tok_idx].line,
                        toks_[last_tok_idx].end_line, std::move(reason));
  }

  void skip_stmt(const Stmt& s, std::string reason) { skip(s.first, s.last - 1, std::move(reason)); }

  void flush_comments(std::size_t before, std::vector<ir::Node>& out) {
    while (next_comment_ < comments_.size() && comments_[next_comment_].begin < before) {
      const auto& c = comments_[next_comment_++];
      out.emplace_back(ir::Comment{c.text, {path_, c.line, c.column}});
    }
  }

  // Net number of blocks the statement opens (negative when it closes).
  int block_balance(const Stmt& s) const {
    int balance = 0;
    const Token& head = first_tok(s);
    const bool loop_head = head.is_word("while") || head.is_word("until") || head.is_word("for");
    if (head.kind == TokKind::Ident &&
        (head.text == "if" || head.text == "unless" || head.text == "case" || head.text == "begin" ||
         head.text == "def" || head.text == "class" || head.text == "module" || loop_head)) {
      balance = 1;
    }
    // `x = if cond` / `x = case y` open a block as well.
    for (std::size_t i = s.first + 1; i < s.last; ++i) {
      const Token& t = toks_[i];
      if (t.kind != TokKind::Ident) continue;
      if (t.text == "do" && !loop_head) ++balance;
      if (t.text == "end" && !(i > s.first && (toks_[i - 1].is(".") || toks_[i - 1].is("&.")))) --balance;
      if ((t.text == "if" || t.text == "unless" || t.text == "case" || t.text == "begin") &&
          (toks_[i - 1].is("=") || toks_[i - 1].is("||="))) {
        ++balance;
      }
    }
    return balance;
  }

  Terminator terminator_of(const Stmt& s) const {
    const Token& t = first_tok(s);
    if (t.kind != TokKind::Ident) return Terminator::Eof;
    if (t.text == "end") return Terminator::End;
    if (t.text == "when") return Terminator::When;
    if (t.text == "else") return Terminator::Else;
    if (t.text == "elsif") return Terminator::Elsif;
    if (t.text == "rescue") return Terminator::Rescue;
    if (t.text == "ensure") return Terminator::Ensure;
    return Terminator::Eof;
  }

  // Parses statements until a block terminator; returns which one was hit
  // (Eof when the input ran out). The terminator statement is consumed.
  Terminator parse_list(std::vector<ir::Node>& out, int open_line, bool in_block) {
    while (cur_ < stmts_.size()) {
      const Stmt s = stmts_[cur_];
      flush_comments(first_tok(s).begin, out);
      const Terminator term = terminator_of(s);
      if (term != Terminator::Eof) {
        if (!in_block) throw ParseError(first_tok(s).line, "unbalanced '" + std::string(first_tok(s).text) +
                                                  "' without matching opener");
        ++cur_;
        return term;
      }
      ++cur_;
      parse_statement(s, out);
    }
    if (in_block) throw ParseError(open_line, "unbalanced 'do'/'end': block is never closed");
    return Terminator::Eof;
  }

  void parse_statement(const Stmt& s, std::vector<ir::Node>& out) {
    const Token& head = first_tok(s);
    const int balance = block_balance(s);
    if (balance < 0) throw ParseError(head.line, "unbalanced 'end'");
    if (head.is_word("case")) {
      parse_case(s, out);
      return;
    }
    if (head.is_word("def") || head.is_word("class") || head.is_word("module")) {
      skip_block(s, "definition body not modeled");
      return;
    }
    if (balance == 0 && parse_node_attribute(s, out)) return;
    if (is_resource_head(s)) {
      parse_resource(s, balance, out);
      return;
    }
    if (balance == 0 && parse_plain_resource(s, out)) return;
    if (balance == 0 && parse_assignment(s, out)) return;
    if (balance > 0) {
      skip_stmt(s, "block header not modeled");
      inline_block(s, balance, out);
      return;
    }
    skip_stmt(s, "unsupported statement");
  }

  // Parses the bodies of `balance` open blocks, splicing nodes into `out`.
  void inline_block(const Stmt& header, int balance, std::vector<ir::Node>& out) {
    for (int open = 0; open < balance; ++open) {
      while (true) {
        const Terminator term = parse_list(out, first_tok(header).line, true);
        if (term == Terminator::End) break;
        skip_stmt(stmts_[cur_ - 1], "branch header not modeled");
      }
    }
  }

  void skip_block(const Stmt& header, std::string reason) {
    int depth = block_balance(header);
    std::size_t last_tok = header.last - 1;
    while (depth > 0) {
      if (cur_ >= stmts_.size()) throw ParseError(first_tok(header).line, "unbalanced 'do'/'end': block is never closed");
      const Stmt& s = stmts_[cur_++];
      if (terminator_of(s) == Terminator::End) {
        --depth;
      } else {
        depth += block_balance(s);
      }
      last_tok = s.last - 1;
    }
    skip(header.first, last_tok, std::move(reason));
  }

  void parse_case(const Stmt& s, std::vector<ir::Node>& out) {
    const Token& head = first_tok(s);
    ir::ConditionBlock cond;
    cond.location = loc(head);
    if (s.last > s.first + 1) cond.subject = make_value(s.first + 1, s.last);
    // Statements before the first `when` are not expected; skip them.
    while (cur_ < stmts_.size() && terminator_of(stmts_[cur_]) == Terminator::Eof) {
      skip_stmt(stmts_[cur_], "statement before first when");
      ++cur_;
    }
    if (cur_ >= stmts_.size()) throw ParseError(head.line, "unbalanced 'case': missing 'end'");
    Terminator term = terminator_of(stmts_[cur_]);
    ++cur_;
    while (term == Terminator::When || term == Terminator::Else) {
      const Stmt& guard_stmt = stmts_[cur_ - 1];
      ir::ConditionBranch branch;
      std::size_t guard_end = guard_stmt.last;
      for (std::size_t i = guard_stmt.first + 1; i < guard_stmt.last; ++i) {
        if (toks_[i].is_word("then")) {
          guard_end = i;
          break;
        }
      }
      if (term == Terminator::Else) {
        branch.guard = "else";
        cond.has_default_branch = true;
      } else if (guard_end > guard_stmt.first + 1) {
        branch.guard = std::string(slice(guard_stmt.first + 1, guard_end));
      }
      if (guard_end + 1 < guard_stmt.last) {
        parse_statement(Stmt{guard_end + 1, guard_stmt.last}, branch.body);
      } else if (term == Terminator::Else && guard_stmt.last > guard_stmt.first + 1) {
        parse_statement(Stmt{guard_stmt.first + 1, guard_stmt.last}, branch.body);
      }
      term = parse_list(branch.body, head.line, true);
      cond.branches.push_back(std::move(branch));
    }
    if (term != Terminator::End) {
      throw ParseError(first_tok(stmts_[cur_ - 1]).line, "unexpected clause in case statement");
    }
    out.emplace_back(std::move(cond));
  }

  // default['a']['b'] = v, node.override['a'] = v, node['a'] = v
  bool parse_node_attribute(const Stmt& s, std::vector<ir::Node>& out) {
    std::size_t i = s.first;
    const Token& head = toks_[i];
    if (head.kind != TokKind::Ident) return false;
    if (head.text == "node") {
      ++i;
      if (i + 1 < s.last && toks_[i].is(".") && toks_[i + 1].kind == TokKind::Ident &&
          kNodePrecedence.count(toks_[i + 1].text) != 0) {
        i += 2;
      }
    } else if (kNodePrecedence.count(head.text) != 0) {
      ++i;
    } else {
      return false;
    }
    std::vector<std::string> keys;
    while (i < s.last && toks_[i].is("[")) {
      const std::size_t key_first = i + 1;
      int depth = 1;
      std::size_t j = key_first;
      for (; j < s.last; ++j) {
        if (toks_[j].is("[")) ++depth;
        if (toks_[j].is("]") && --depth == 0) break;
      }
      if (j >= s.last || j == key_first) return false;
      const Token& key = toks_[key_first];
      if (j == key_first + 1 && key.kind == TokKind::String) {
        keys.emplace_back(text::strip_quotes(key.text));
      } else if (j == key_first + 1 && key.kind == TokKind::Symbol) {
        keys.emplace_back(text::strip_quotes(key.text.substr(1)));
      } else {
        keys.emplace_back(slice(key_first, j));
      }
      i = j + 1;
    }
    if (keys.empty() || i >= s.last || !(toks_[i].is("=") || toks_[i].is("||="))) return false;
    std::string name;
    for (const auto& k : keys) name += (name.empty() ? "" : ".") + k;
    out.emplace_back(ir::Variable{std::move(name), make_value(i + 1, s.last), loc(head)});
    return true;
  }

  bool parse_assignment(const Stmt& s, std::vector<ir::Node>& out) {
    const Token& head = first_tok(s);
    if (s.last - s.first < 2) return false;
    const Token& op = toks_[s.first + 1];
    if (!(op.is("=") || op.is("||=") || op.is("+=") || op.is("-=") || op.is("<<="))) return false;
    std::string name;
    if (head.kind == TokKind::IVar) {
      std::string_view n = head.text;
      while (!n.empty() && (n.front() == '@' || n.front() == '$')) n.remove_prefix(1);
      name = std::string(n);
    } else if (head.kind == TokKind::Ident && kKeywords.count(head.text) == 0) {
      name = std::string(head.text);
    } else {
      return false;
    }
    out.emplace_back(ir::Variable{std::move(name), make_value(s.first + 2, s.last), loc(head)});
    return true;
  }

  bool resource_type_token(const Token& t) const {
    return t.kind == TokKind::Ident && std::islower(static_cast<unsigned char>(t.text[0])) != 0 &&
           kKeywords.count(t.text) == 0 && kNotResources.count(t.text) == 0;
  }

  // Index of the `do` that opens the resource body, or s.last when absent.
  std::size_t do_index(const Stmt& s) const {
    int depth = 0;
    for (std::size_t i = s.first; i < s.last; ++i) {
      const Token& t = toks_[i];
      if (t.is("(") || t.is("[") || t.is("{")) ++depth;
      if (t.is(")") || t.is("]") || t.is("}")) --depth;
      if (depth == 0 && t.is_word("do")) return i;
    }
    return s.last;
  }

  bool is_resource_head(const Stmt& s) const {
    const Token& head = first_tok(s);
    if (!resource_type_token(head) || s.last - s.first < 2) return false;
    const std::size_t d = do_index(s);
    if (d == s.last) return false;
    const Token& second = toks_[s.first + 1];
    if (d == s.first + 1) return true;
    return second.kind == TokKind::String || second.kind == TokKind::Ident ||
           second.kind == TokKind::IVar || second.kind == TokKind::Symbol || second.is("(");
  }

  std::string resource_title(std::size_t first, std::size_t last) const {
    if (first >= last) return {};
    if (toks_[first].is("(") && toks_[last - 1].is(")")) {
      ++first;
      --last;
      if (first >= last) return {};
    }
    if (last - first == 1 && toks_[first].kind == TokKind::String) {
      return std::string(text::strip_quotes(toks_[first].text));
    }
    return std::string(slice(first, last));
  }

  void parse_resource(const Stmt& s, int balance, std::vector<ir::Node>& out) {
    const Token& head = first_tok(s);
    const std::size_t d = do_index(s);
    ir::AtomicUnit unit;
    unit.unit_type = std::string(head.text);
    unit.title = resource_title(s.first + 1, d);
    unit.location = loc(head);
    std::size_t body = d + 1;
    if (body < s.last && toks_[body].is("|")) {
      ++body;
      while (body < s.last && !toks_[body].is("|")) ++body;
      ++body;
    }
    if (balance == 0) {
      // One-line form: type 'x' do attr v; attr2 v2 end
      std::size_t stmt_first = body;
      const std::size_t stmt_end = s.last - 1;  // trailing `end`
      for (std::size_t i = body; i <= stmt_end; ++i) {
        if (i == stmt_end || toks_[i].is(";")) {
          if (i > stmt_first) add_attribute(Stmt{stmt_first, i}, unit.attributes);
          stmt_first = i + 1;
        }
      }
      out.emplace_back(std::move(unit));
      return;
    }
    if (body < s.last) add_attribute(Stmt{body, s.last}, unit.attributes);
    read_resource_body(head.line, balance, unit.attributes);
    out.emplace_back(std::move(unit));
  }

  void read_resource_body(int open_line, int depth, std::vector<ir::Attribute>& attrs) {
    while (depth > 0) {
      if (cur_ >= stmts_.size()) throw ParseError(open_line, "unbalanced 'do'/'end': block is never closed");
      const Stmt s = stmts_[cur_++];
      const Terminator term = terminator_of(s);
      if (term == Terminator::End) {
        --depth;
        continue;
      }
      if (term != Terminator::Eof) {
        if (s.last > s.first + 1) add_attribute(Stmt{s.first + 1, s.last}, attrs);
        continue;
      }
      const int balance = block_balance(s);
      if (balance < 0) throw ParseError(first_tok(s).line, "unbalanced 'end'");
      const Token& head = first_tok(s);
      const bool keyword_head = head.kind == TokKind::Ident && kKeywords.count(head.text) != 0;
      if (balance > 0) {
        const std::size_t d = do_index(s);
        if (keyword_head) {
          if (s.last > s.first + 1) add_attribute(Stmt{s.first + 1, s.last}, attrs);
        } else if (d > s.first) {
          add_attribute(Stmt{s.first, d}, attrs);
        }
        depth += balance;
        continue;
      }
      if (keyword_head) {
        if (s.last > s.first + 1) add_attribute(Stmt{s.first + 1, s.last}, attrs);
        continue;
      }
      add_attribute(s, attrs);
    }
  }

  void add_attribute(const Stmt& s, std::vector<ir::Attribute>& attrs) {
    const Token& head = first_tok(s);
    std::string name;
    std::size_t value_first = s.first + 1;
    if (head.kind == TokKind::Ident || head.kind == TokKind::IVar) {
      std::string_view n = head.text;
      while (!n.empty() && (n.front() == '@' || n.front() == '$')) n.remove_prefix(1);
      name = std::string(n);
      // receiver.attr = value, Scope::Const.method
      while (value_first + 1 < s.last && (toks_[value_first].is(".") || toks_[value_first].is("::")) &&
             toks_[value_first + 1].kind == TokKind::Ident) {
        name += std::string(toks_[value_first].text) + std::string(toks_[value_first + 1].text);
        value_first += 2;
      }
    } else {
      // Expression statement without a leading name.
      name = "_expr";
      value_first = s.first;
    }
    if (value_first < s.last && (toks_[value_first].is("=") || toks_[value_first].is("||="))) {
      ++value_first;
    }
    std::size_t value_last = s.last;
    if (value_first + 1 < value_last && toks_[value_first].is("(") && toks_[value_last - 1].is(")") &&
        matching_paren(value_first) == value_last - 1) {
      ++value_first;
      --value_last;
    }
    if (name.empty()) return;
    attrs.push_back(ir::Attribute{std::move(name), make_value(value_first, value_last), loc(head)});
  }

  std::size_t matching_paren(std::size_t open) const {
    int depth = 0;
    for (std::size_t i = open; i < toks_.size(); ++i) {
      if (toks_[i].is("(")) ++depth;
      if (toks_[i].is(")") && --depth == 0) return i;
    }
    return toks_.size();
  }

  // `package 'nginx'` with no block.
  bool parse_plain_resource(const Stmt& s, std::vector<ir::Node>& out) {
    const Token& head = first_tok(s);
    if (!resource_type_token(head)) return false;
    std::size_t first = s.first + 1;
    std::size_t last = s.last;
    if (last > first + 1 && toks_[first].is("(") && toks_[last - 1].is(")")) {
      ++first;
      --last;
    }
    if (last != first + 1 || toks_[first].kind != TokKind::String) return false;
    out.emplace_back(ir::AtomicUnit{std::string(head.text), std::string(text::strip_quotes(toks_[first].text)),
                                    {}, loc(head)});
    return true;
  }

  ir::Value make_value(std::size_t first, std::size_t last) const {
    ir::Value v;
    while (first < last && toks_[first].kind == TokKind::Newline) ++first;
    while (last > first && toks_[last - 1].kind == TokKind::Newline) --last;
    if (first >= last) return v;
    v.raw_text = std::string(slice(first, last));
    v.line = toks_[first].line;
    if (last - first == 1) {
      const Token& t = toks_[first];
      switch (t.kind) {
        case TokKind::String:
          v.kind = ir::ValueKind::String;
          v.has_variable = t.text.front() != '\'' && ir::has_interpolation(t.text, Technology::Chef);
          if (!v.has_variable && t.text.front() != '\'' && t.text.front() != '"' &&
              t.text.find("#{") != std::string_view::npos) {
            v.has_variable = true;
          }
          return v;
        case TokKind::Number:
          v.kind = ir::ValueKind::Integer;
          return v;
        case TokKind::Symbol:
        case TokKind::Regex:
          v.kind = ir::ValueKind::String;
          return v;
        case TokKind::IVar:
          v.kind = ir::ValueKind::Reference;
          v.has_variable = true;
          return v;
        case TokKind::Ident:
          if (t.text == "nil") {
            v.kind = ir::ValueKind::Null;
          } else if (t.text == "true" || t.text == "false") {
            v.kind = ir::ValueKind::Boolean;
          } else {
            v.kind = ir::ValueKind::Reference;
            v.has_variable = true;
          }
          return v;
        default:
          v.kind = ir::ValueKind::String;
          return v;
      }
    }
    if (last - first == 2 && toks_[first].is("-") && toks_[first + 1].kind == TokKind::Number) {
      v.kind = ir::ValueKind::Integer;
      return v;
    }
    bool reference = false;
    for (std::size_t i = first; i < last; ++i) {
      const Token& t = toks_[i];
      if (t.kind == TokKind::IVar) reference = true;
      if (t.kind != TokKind::Ident || is_value_keyword(t.text)) continue;
      if (i > first && (toks_[i - 1].is(".") || toks_[i - 1].is("&.") || toks_[i - 1].is("::"))) continue;
      if (i + 1 < last && toks_[i + 1].is(":") ) continue;  // hash key
      if (kKeywords.count(t.text) != 0 && t.text != "self") continue;
      reference = true;
    }
    v.kind = reference ? ir::ValueKind::Reference : ir::ValueKind::String;
    v.has_variable = reference || ir::has_interpolation(v.raw_text, Technology::Chef);
    return v;
  }

  std::string_view src_;
  std::string path_;
  const std::vector<Token>& toks_;
  const std::vector<RawComment>& comments_;
  std::vector<Stmt> stmts_;
  ParseReport& report_;
  std::size_t cur_ = 0;
  std::size_t next_comment_ = 0;
};

}  // namespace

ParseReport parse_chef(std::string_view content, std::string_view path) {
  Lexer lexer(content);
  lexer.run();
  ParseReport report;
  report.comment_count = static_cast<int>(lexer.comments.size());
  report.block.name = std::string(path);
  report.block.kind = ir::BlockKind::Recipe;
  report.block.technology = Technology::Chef;
  report.block.location = {std::string(path), 1, 0};
  Parser parser(content, std::string(path), lexer, report);
  report.block.children = parser.parse_file();
  return report;
}

}  // namespace iacsmell::parsers
