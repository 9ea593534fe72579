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


#include "iacsmell/rules.hpp"

#include <algorithm>
#include <cctype>
#include <tuple>

#include "iacsmell/text.hpp"

namespace iacsmell::rules {

std::string_view smell_name(SmellType smell) {
  switch (smell) {
    case SmellType::AdminByDefault: return "AdminByDefault";
    case SmellType::EmptyPassword: return "EmptyPassword";
    case SmellType::HardCodedSecret: return "HardCodedSecret";
    case SmellType::MissingDefaultCase: return "MissingDefaultCase";
    case SmellType::NoIntegrityCheck: return "NoIntegrityCheck";
    case SmellType::SuspiciousComment: return "SuspiciousComment";
    case SmellType::InvalidIpBinding: return "InvalidIpBinding";
    case SmellType::HttpWithoutTls: return "HttpWithoutTls";
    case SmellType::WeakCrypto: return "WeakCrypto";
  }
  return "Unknown";
}

std::optional<SmellType> smell_from_name(std::string_view name) {
  const std::string trimmed(text::trim(name));
  for (SmellType s : kAllSmells) {
    if (smell_name(s) == trimmed) return s;
  }
  return std::nullopt;
}

std::vector<int> smell_cwes(SmellType smell) {
  switch (smell) {
    case SmellType::AdminByDefault: return {250};
    case SmellType::EmptyPassword: return {258};
    case SmellType::HardCodedSecret: return {259, 798};
    case SmellType::MissingDefaultCase: return {478};
    case SmellType::NoIntegrityCheck: return {353};
    case SmellType::SuspiciousComment: return {546};
    case SmellType::InvalidIpBinding: return {284};
    case SmellType::HttpWithoutTls: return {319};
    case SmellType::WeakCrypto: return {326, 327};
  }
  return {};
}

std::string_view smell_description(SmellType smell) {
  switch (smell) {
    case SmellType::AdminByDefault: return "default user granted administrative privileges";
    case SmellType::EmptyPassword: return "password set to a zero-length string";
    case SmellType::HardCodedSecret: return "credential or key embedded as a literal";
    case SmellType::MissingDefaultCase: return "conditional without a catch-all branch";
    case SmellType::NoIntegrityCheck: return "remote content downloaded without checksum verification";
    case SmellType::SuspiciousComment: return "comment signalling a known defect or shortcut";
    case SmellType::InvalidIpBinding: return "service bound to all network interfaces";
    case SmellType::HttpWithoutTls: return "plain http used for a transfer";
    case SmellType::WeakCrypto: return "weak hash or cipher algorithm";
  }
  return "";
}

bool finding_key_less(const Finding& a, const Finding& b) {
  return std::tie(a.file_path, a.line, a.smell) < std::tie(b.file_path, b.line, b.smell);
}

bool same_finding_key(const Finding& a, const Finding& b) {
  return a.file_path == b.file_path && a.line == b.line && a.smell == b.smell;
}

namespace {

struct Binding {
  std::string_view kind;  // "variable" or "attribute"
  const std::string* name = nullptr;
  const ir::Value* value = nullptr;
  const ir::SourceLocation* location = nullptr;
};

std::optional<Binding> binding_of(const ir::NodeRef& node) {
  if (const auto* const* var = std::get_if<const ir::Variable*>(&node)) {
    return Binding{"variable", &(*var)->name, &(*var)->value, &(*var)->location};
  }
  if (const auto* const* attr = std::get_if<const ir::Attribute*>(&node)) {
    return Binding{"attribute", &(*attr)->name, &(*attr)->value, &(*attr)->location};
  }
  return std::nullopt;
}

std::vector<std::size_t> find_all_ci(std::string_view hay, std::string_view needle) {
  std::vector<std::size_t> out;
  if (needle.empty() || hay.size() < needle.size()) return out;
  const std::string h = text::to_lower(hay);
  const std::string n = text::to_lower(needle);
  for (std::size_t pos = h.find(n); pos != std::string::npos; pos = h.find(n, pos + 1)) {
    out.push_back(pos);
  }
  return out;
}

bool alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

bool whole_word_at(std::string_view hay, std::size_t pos, std::size_t len) {
  const bool left = pos == 0 || !alnum(hay[pos - 1]);
  const bool right = pos + len >= hay.size() || !alnum(hay[pos + len]);
  return left && right;
}

// First keyword (list order) contained in `name`, with its original-case text.
std::optional<std::string> name_keyword(std::string_view name, const std::vector<std::string>& keywords) {
  for (const auto& kw : keywords) {
    const auto hits = find_all_ci(name, kw);
    if (!hits.empty()) return std::string(name.substr(hits.front(), kw.size()));
  }
  return std::nullopt;
}

int match_line(const ir::Value& value, int owner_line, std::size_t pos) {
  const int base = value.line > 0 ? value.line : owner_line;
  const auto prefix = std::string_view(value.raw_text).substr(0, pos);
  return base + static_cast<int>(std::count(prefix.begin(), prefix.end(), '\n'));
}

Finding make(const ir::SourceLocation& loc, int line, SmellType smell, std::string rationale,
             std::string evidence, Technology tech) {
  Finding f;
  f.file_path = loc.file_path;
  f.line = line;
  f.smell = smell;
  f.rationale = std::move(rationale);
  f.evidence = std::move(evidence);
  f.confidence = 1.0;
  f.technology = tech;
  return f;
}

std::optional<Finding> first_of(Findings found) {
  if (found.empty()) return std::nullopt;
  return std::move(found.front());
}

std::string in_quotes(std::string_view s) { return "'" + std::string(s) + "'"; }

// Literal content of a value, with one pair of matching outer quotes removed.
std::string_view literal_content(std::string_view raw) {
  raw = text::trim(raw);
  if (raw.size() >= 2 && (raw.front() == '"' || raw.front() == '\'') && raw.back() == raw.front()) {
    return raw.substr(1, raw.size() - 2);
  }
  return raw;
}

bool is_url_char(char c) {
  return !(std::isspace(static_cast<unsigned char>(c)) != 0 || c == '\'' || c == '"' || c == ',' ||
           c == ')' || c == ']' || c == '}' || c == '>' || c == '<' || c == '`');
}

struct UrlMatch {
  std::size_t begin = 0;
  std::size_t end = 0;
};

std::vector<UrlMatch> find_urls(std::string_view raw) {
  std::vector<UrlMatch> urls;
  for (std::size_t pos = raw.find("://"); pos != std::string_view::npos; pos = raw.find("://", pos + 3)) {
    std::size_t begin = pos;
    while (begin > 0 && (std::isalpha(static_cast<unsigned char>(raw[begin - 1])) != 0 || raw[begin - 1] == '+')) {
      --begin;
    }
    if (begin == pos) continue;
    std::size_t end = pos + 3;
    while (end < raw.size() && is_url_char(raw[end])) ++end;
    urls.push_back({begin, end});
  }
  return urls;
}

bool loopback_host(std::string_view after_scheme) {
  std::size_t end = 0;
  if (!after_scheme.empty() && after_scheme.front() == '[') {
    end = after_scheme.find(']');
    end = end == std::string_view::npos ? after_scheme.size() : end + 1;
  } else {
    while (end < after_scheme.size() && is_url_char(after_scheme[end]) && after_scheme[end] != ':' &&
           after_scheme[end] != '/' && after_scheme[end] != '?' && after_scheme[end] != '#') {
      ++end;
    }
  }
  std::string host = text::to_lower(after_scheme.substr(0, end));
  if (const auto at = host.rfind('@'); at != std::string::npos) host = host.substr(at + 1);
  return host == "localhost" || host.rfind("127.", 0) == 0 || host == "[::1]";
}

// Address occurrence not embedded in a longer token; `$::fqdn` and `::1`
// do not count as "::".
bool bind_address_at(std::string_view raw, std::size_t pos, std::size_t len) {
  if (pos > 0) {
    const char c = raw[pos - 1];
    if (alnum(c) || c == '.' || c == ':' || c == '_' || c == '$') return false;
  }
  if (pos + len < raw.size()) {
    const char c = raw[pos + len];
    if (alnum(c) || c == '.' || c == '_' || c == ':') return false;
  }
  return true;
}

}  // namespace

std::optional<std::string> literal_fallback(std::string_view raw_text) {
  const std::string_view raw = literal_content(raw_text);
  std::optional<std::string> last;
  std::size_t i = 0;
  while (i < raw.size()) {
    const char q = raw[i];
    if (q != '\'' && q != '"') {
      ++i;
      continue;
    }
    std::size_t close = i + 1;
    while (close < raw.size() && raw[close] != q) {
      if (raw[close] == '\\') ++close;
      ++close;
    }
    if (close >= raw.size()) break;
    const std::string_view literal = raw.substr(i + 1, close - i - 1);
    std::string_view before = text::trim(raw.substr(0, i));
    const std::string lower_before = text::to_lower(before);
    auto ends_with = [&](std::string_view suffix) {
      return lower_before.size() >= suffix.size() &&
             std::string_view(lower_before).substr(lower_before.size() - suffix.size()) == suffix;
    };
    bool fallback = ends_with(",") || ends_with("||");
    if (!fallback && ends_with("(")) {
      const std::string_view head = text::trim(std::string_view(lower_before).substr(0, lower_before.size() - 1));
      fallback = head.size() >= 7 && head.substr(head.size() - 7) == "default";
    }
    if (fallback && !literal.empty() && literal.find("{{") == std::string_view::npos &&
        literal.find("${") == std::string_view::npos && literal.find("#{") == std::string_view::npos) {
      last = std::string(literal);
    }
    i = close + 1;
  }
  return last;
}

Findings find_admin_by_default(const ir::NodeRef& node, const RuleConfig& config, Technology tech) {
  Findings out;
  if (auto b = binding_of(node)) {
    const auto user_kw = name_keyword(*b->name, config.user_keywords);
    if (!user_kw) return out;
    const std::string& raw = b->value->raw_text;
    for (const auto& admin : config.admin_keywords) {
      for (std::size_t pos : find_all_ci(raw, admin)) {
        out.push_back(make(*b->location, match_line(*b->value, b->location->line, pos),
                           SmellType::AdminByDefault,
                           "user identifier " + in_quotes(*b->name) + " (matches " + in_quotes(*user_kw) +
                               ") is given admin value " + in_quotes(admin),
                           raw.substr(pos, admin.size()), tech));
      }
    }
    return out;
  }
  if (const auto* const* unit = std::get_if<const ir::AtomicUnit*>(&node)) {
    if (!name_keyword((*unit)->unit_type, config.user_keywords)) return out;
    for (const auto& attr : (*unit)->attributes) {
      const std::string name = text::to_lower(attr.name);
      if (std::find(config.group_attribute_names.begin(), config.group_attribute_names.end(), name) ==
          config.group_attribute_names.end()) {
        continue;
      }
      for (const auto& admin : config.admin_keywords) {
        for (std::size_t pos : find_all_ci(attr.value.raw_text, admin)) {
          out.push_back(make(attr.location, match_line(attr.value, attr.location.line, pos),
                             SmellType::AdminByDefault,
                             (*unit)->unit_type + " " + in_quotes((*unit)->title) + " joins admin group " +
                                 in_quotes(admin) + " via " + in_quotes(attr.name),
                             attr.value.raw_text.substr(pos, admin.size()), tech));
        }
      }
    }
  }
  return out;
}

Findings find_empty_password(const ir::NodeRef& node, const RuleConfig& config, Technology tech) {
  Findings out;
  auto b = binding_of(node);
  if (!b) return out;
  const auto kw = name_keyword(*b->name, config.password_keywords);
  if (!kw || b->value->kind != ir::ValueKind::String || b->value->has_variable) return out;
  const std::string_view raw = text::trim(b->value->raw_text);
  if (raw == "\"\"" || raw == "''") {
    out.push_back(make(*b->location, b->location->line, SmellType::EmptyPassword,
                       "password identifier " + in_quotes(*b->name) + " (matches " + in_quotes(*kw) +
                           ") is set to an empty string",
                       *kw, tech));
  }
  return out;
}

Findings find_hard_coded_secret(const ir::NodeRef& node, const RuleConfig& config, Technology tech) {
  Findings out;
  auto b = binding_of(node);
  if (!b) return out;
  auto kw = name_keyword(*b->name, config.user_keywords);
  if (!kw) kw = name_keyword(*b->name, config.secret_keywords);
  if (!kw) return out;
  const ir::Value& v = *b->value;
  std::optional<std::string> literal;
  if (v.has_variable || v.kind == ir::ValueKind::Reference) {
    literal = literal_fallback(v.raw_text);
  } else if (v.kind == ir::ValueKind::String) {
    const std::string_view content = literal_content(v.raw_text);
    if (!text::trim(content).empty()) literal = std::string(content);
  } else if (v.kind == ir::ValueKind::Integer) {
    literal = v.raw_text;
  }
  if (!literal) return out;
  out.push_back(make(*b->location, b->location->line, SmellType::HardCodedSecret,
                     "identifier " + in_quotes(*b->name) + " (matches " + in_quotes(*kw) +
                         ") holds literal " + in_quotes(*literal),
                     *kw, tech));
  return out;
}

Findings find_missing_default_case(const ir::NodeRef& node, const RuleConfig&, Technology tech) {
  Findings out;
  if (const auto* const* cond = std::get_if<const ir::ConditionBlock*>(&node)) {
    if (!(*cond)->has_default_branch) {
      out.push_back(make((*cond)->location, (*cond)->location.line, SmellType::MissingDefaultCase,
                         "case on " + in_quotes((*cond)->subject.raw_text) + " has no default branch", "case",
                         tech));
    }
  }
  return out;
}

Findings find_no_integrity_check(const ir::NodeRef& node, const RuleConfig& config, Technology tech) {
  Findings out;
  const auto* const* unit_ptr = std::get_if<const ir::AtomicUnit*>(&node);
  if (unit_ptr == nullptr) return out;
  const ir::AtomicUnit& unit = **unit_ptr;
  const std::string type = text::to_lower(unit.unit_type);
  const bool fetcher = std::find(config.fetcher_types.begin(), config.fetcher_types.end(), type) !=
                       config.fetcher_types.end();
  std::optional<std::string> download_url;
  for (const auto& attr : unit.attributes) {
    for (const auto& url : find_urls(attr.value.raw_text)) {
      std::string u = text::to_lower(std::string_view(attr.value.raw_text).substr(url.begin, url.end - url.begin));
      u = u.substr(0, u.find_first_of("?#"));
      for (const auto& ext : config.download_extensions) {
        if (u.size() > ext.size() && u.compare(u.size() - ext.size(), ext.size(), ext) == 0 && !download_url) {
          download_url = attr.value.raw_text.substr(url.begin, url.end - url.begin);
        }
      }
    }
  }
  if (!fetcher && !download_url) return out;
  for (const auto& attr : unit.attributes) {
    const std::string name = text::to_lower(attr.name);
    for (const auto& cs : config.checksum_attribute_names) {
      if (name.find(cs) != std::string::npos) return out;
    }
  }
  const std::string what = download_url ? "download of " + in_quotes(*download_url)
                                        : "fetcher " + in_quotes(unit.unit_type);
  // Reported at the first URL-bearing attribute, else at the unit itself.
  for (const auto& attr : unit.attributes) {
    const auto urls = find_urls(attr.value.raw_text);
    if (urls.empty()) continue;
    const auto& url = urls.front();
    out.push_back(make(attr.location, match_line(attr.value, attr.location.line, url.begin),
                       SmellType::NoIntegrityCheck, what + " without a checksum attribute",
                       attr.value.raw_text.substr(url.begin, url.end - url.begin), tech));
    return out;
  }
  out.push_back(make(unit.location, unit.location.line, SmellType::NoIntegrityCheck,
                     what + " without a checksum attribute", unit.title.empty() ? unit.unit_type : unit.title,
                     tech));
  return out;
}

Findings find_suspicious_comment(const ir::NodeRef& node, const RuleConfig& config, Technology tech) {
  Findings out;
  const auto* const* comment = std::get_if<const ir::Comment*>(&node);
  if (comment == nullptr) return out;
  const std::string& body = (*comment)->text;
  for (const auto& word : config.suspicious_words) {
    for (std::size_t pos : find_all_ci(body, word)) {
      if (!whole_word_at(body, pos, word.size())) continue;
      const auto prefix = std::string_view(body).substr(0, pos);
      const int line = (*comment)->location.line + static_cast<int>(std::count(prefix.begin(), prefix.end(), '\n'));
      out.push_back(make((*comment)->location, line, SmellType::SuspiciousComment,
                         "comment contains " + in_quotes(word), body.substr(pos, word.size()), tech));
    }
  }
  return out;
}

Findings find_invalid_ip_binding(const ir::NodeRef& node, const RuleConfig& config, Technology tech) {
  Findings out;
  auto b = binding_of(node);
  if (!b) return out;
  const std::string& raw = b->value->raw_text;
  for (const auto& addr : config.invalid_bind_addresses) {
    for (std::size_t pos : find_all_ci(raw, addr)) {
      if (!bind_address_at(raw, pos, addr.size())) continue;
      out.push_back(make(*b->location, match_line(*b->value, b->location->line, pos), SmellType::InvalidIpBinding,
                         in_quotes(*b->name) + " binds to " + in_quotes(addr), raw.substr(pos, addr.size()), tech));
    }
  }
  return out;
}

Findings find_http_without_tls(const ir::NodeRef& node, const RuleConfig& config, Technology tech) {
  Findings out;
  auto b = binding_of(node);
  if (!b) return out;
  const std::string& raw = b->value->raw_text;
  for (std::size_t pos : find_all_ci(raw, "http://")) {
    if (config.exempt_loopback_http && loopback_host(std::string_view(raw).substr(pos + 7))) continue;
    std::size_t end = pos + 7;
    while (end < raw.size() && is_url_char(raw[end])) ++end;
    out.push_back(make(*b->location, match_line(*b->value, b->location->line, pos), SmellType::HttpWithoutTls,
                       in_quotes(*b->name) + " uses plain 'http://' in " + in_quotes(raw.substr(pos, end - pos)),
                       raw.substr(pos, 7), tech));
  }
  return out;
}

Findings find_weak_crypto(const ir::NodeRef& node, const RuleConfig& config, Technology tech) {
  Findings out;
  auto b = binding_of(node);
  if (!b) return out;
  const std::string& raw = b->value->raw_text;
  for (const auto& algo : config.weak_crypto_names) {
    for (std::size_t pos : find_all_ci(*b->name, algo)) {
      if (!whole_word_at(*b->name, pos, algo.size())) continue;
      out.push_back(make(*b->location, b->location->line, SmellType::WeakCrypto,
                         "identifier " + in_quotes(*b->name) + " names weak algorithm " + in_quotes(algo),
                         b->name->substr(pos, algo.size()), tech));
    }
    for (std::size_t pos : find_all_ci(raw, algo)) {
      if (!whole_word_at(raw, pos, algo.size())) continue;
      out.push_back(make(*b->location, match_line(*b->value, b->location->line, pos), SmellType::WeakCrypto,
                         in_quotes(*b->name) + " uses weak algorithm " + in_quotes(algo), raw.substr(pos, algo.size()),
                         tech));
    }
  }
  return out;
}

std::optional<Finding> check_admin_by_default(const ir::NodeRef& n, const RuleConfig& c, Technology t) {
  return first_of(find_admin_by_default(n, c, t));
}
std::optional<Finding> check_empty_password(const ir::NodeRef& n, const RuleConfig& c, Technology t) {
  return first_of(find_empty_password(n, c, t));
}
std::optional<Finding> check_hard_coded_secret(const ir::NodeRef& n, const RuleConfig& c, Technology t) {
  return first_of(find_hard_coded_secret(n, c, t));
}
std::optional<Finding> check_missing_default_case(const ir::NodeRef& n, const RuleConfig& c, Technology t) {
  return first_of(find_missing_default_case(n, c, t));
}
std::optional<Finding> check_no_integrity_check(const ir::NodeRef& n, const RuleConfig& c, Technology t) {
  return first_of(find_no_integrity_check(n, c, t));
}
std::optional<Finding> check_suspicious_comment(const ir::NodeRef& n, const RuleConfig& c, Technology t) {
  return first_of(find_suspicious_comment(n, c, t));
}
std::optional<Finding> check_invalid_ip_binding(const ir::NodeRef& n, const RuleConfig& c, Technology t) {
  return first_of(find_invalid_ip_binding(n, c, t));
}
std::optional<Finding> check_http_without_tls(const ir::NodeRef& n, const RuleConfig& c, Technology t) {
  return first_of(find_http_without_tls(n, c, t));
}
std::optional<Finding> check_weak_crypto(const ir::NodeRef& n, const RuleConfig& c, Technology t) {
  return first_of(find_weak_crypto(n, c, t));
}

namespace {

using Detector = Findings (*)(const ir::NodeRef&, const RuleConfig&, Technology);

constexpr Detector kDetectors[] = {
    find_admin_by_default,   find_empty_password,     find_hard_coded_secret,
    find_missing_default_case, find_no_integrity_check, find_suspicious_comment,
    find_invalid_ip_binding, find_http_without_tls,   find_weak_crypto,
};

void collect(const ir::UnitBlock& block, const RuleConfig& config, std::vector<Finding>& out) {
  ir::walk_block(block, [&](const ir::NodeRef& node) {
    for (Detector detector : kDetectors) {
      for (auto& f : detector(node, config, block.technology)) out.push_back(std::move(f));
    }
  });
}

std::vector<Finding> sort_unique(std::vector<Finding> findings) {
  std::stable_sort(findings.begin(), findings.end(), finding_key_less);
  findings.erase(std::unique(findings.begin(), findings.end(), same_finding_key), findings.end());
  return findings;
}

}  // namespace

std::vector<Finding> detect_block(const ir::UnitBlock& block, const RuleConfig& config) {
  std::vector<Finding> out;
  collect(block, config, out);
  return sort_unique(std::move(out));
}

std::vector<Finding> detect(const ir::Project& project, const RuleConfig& config) {
  std::vector<Finding> out;
  for (const ir::UnitBlock* block : ir::file_blocks(project)) collect(*block, config, out);
  return sort_unique(std::move(out));
}

}  // namespace iacsmell::rules
