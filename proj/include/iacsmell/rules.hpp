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

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iacsmell/ir.hpp"

namespace iacsmell::rules {

using ir::Technology;

enum class SmellType {
  AdminByDefault,
  EmptyPassword,
  HardCodedSecret,
  MissingDefaultCase,
  NoIntegrityCheck,
  SuspiciousComment,
  InvalidIpBinding,
  HttpWithoutTls,
  WeakCrypto,
};

inline constexpr std::array<SmellType, 9> kAllSmells = {
    SmellType::AdminByDefault,     SmellType::EmptyPassword,    SmellType::HardCodedSecret,
    SmellType::MissingDefaultCase, SmellType::NoIntegrityCheck, SmellType::SuspiciousComment,
    SmellType::InvalidIpBinding,   SmellType::HttpWithoutTls,   SmellType::WeakCrypto,
};

std::string_view smell_name(SmellType smell);
std::optional<SmellType> smell_from_name(std::string_view name);
std::vector<int> smell_cwes(SmellType smell);
std::string_view smell_description(SmellType smell);
inline int smell_index(SmellType smell) { return static_cast<int>(smell); }

// Keyword lists are lowercase. Matching is case-insensitive.
struct RuleConfig {
  std::vector<std::string> user_keywords;
  std::vector<std::string> secret_keywords;
  std::vector<std::string> password_keywords;
  std::vector<std::string> admin_keywords;
  std::vector<std::string> suspicious_words;
  std::vector<std::string> weak_crypto_names;
  std::vector<std::string> download_extensions;
  std::vector<std::string> checksum_attribute_names;
  std::vector<std::string> invalid_bind_addresses;
  std::vector<std::string> fetcher_types;
  std::vector<std::string> group_attribute_names;
  bool exempt_loopback_http = true;

  static RuleConfig defaults();
  friend bool operator==(const RuleConfig&, const RuleConfig&) = default;
};

// `key = a, b, c` lines; `#` starts a comment. Keys not present keep their
// default lists. Throws ConfigError on unknown keys or malformed lines.
RuleConfig parse_rule_config(std::string_view text);
RuleConfig load_rule_config(const std::filesystem::path& path);
std::string serialize_rule_config(const RuleConfig& config);

// Names of the list-valued keys, in file order.
std::vector<std::string> rule_config_list_keys();
std::vector<std::string>& rule_config_list(RuleConfig& config, std::string_view key);

struct Finding {
  std::string file_path;
  int line = 1;
  SmellType smell = SmellType::HardCodedSecret;
  std::string rationale;
  std::string evidence;  // matched keyword as it appears on the line
  double confidence = 1.0;
  Technology technology = Technology::Puppet;

  friend bool operator==(const Finding&, const Finding&) = default;
};

// Orders by (file_path, line, smell).
bool finding_key_less(const Finding& a, const Finding& b);
bool same_finding_key(const Finding& a, const Finding& b);

// Per-smell detectors. Each returns every occurrence found at the node; the
// check_* wrappers return the first one.
using Findings = std::vector<Finding>;

Findings find_admin_by_default(const ir::NodeRef& node, const RuleConfig& config, Technology tech);
Findings find_empty_password(const ir::NodeRef& node, const RuleConfig& config, Technology tech);
Findings find_hard_coded_secret(const ir::NodeRef& node, const RuleConfig& config, Technology tech);
Findings find_missing_default_case(const ir::NodeRef& node, const RuleConfig& config, Technology tech);
Findings find_no_integrity_check(const ir::NodeRef& node, const RuleConfig& config, Technology tech);
Findings find_suspicious_comment(const ir::NodeRef& node, const RuleConfig& config, Technology tech);
Findings find_invalid_ip_binding(const ir::NodeRef& node, const RuleConfig& config, Technology tech);
Findings find_http_without_tls(const ir::NodeRef& node, const RuleConfig& config, Technology tech);
Findings find_weak_crypto(const ir::NodeRef& node, const RuleConfig& config, Technology tech);

std::optional<Finding> check_admin_by_default(const ir::NodeRef& node, const RuleConfig& config, Technology tech);
std::optional<Finding> check_empty_password(const ir::NodeRef& node, const RuleConfig& config, Technology tech);
std::optional<Finding> check_hard_coded_secret(const ir::NodeRef& node, const RuleConfig& config, Technology tech);
std::optional<Finding> check_missing_default_case(const ir::NodeRef& node, const RuleConfig& config, Technology tech);
std::optional<Finding> check_no_integrity_check(const ir::NodeRef& node, const RuleConfig& config, Technology tech);
std::optional<Finding> check_suspicious_comment(const ir::NodeRef& node, const RuleConfig& config, Technology tech);
std::optional<Finding> check_invalid_ip_binding(const ir::NodeRef& node, const RuleConfig& config, Technology tech);
std::optional<Finding> check_http_without_tls(const ir::NodeRef& node, const RuleConfig& config, Technology tech);
std::optional<Finding> check_weak_crypto(const ir::NodeRef& node, const RuleConfig& config, Technology tech);

// All nine detectors over every node; sorted and deduplicated on
// (file_path, line, smell).
std::vector<Finding> detect(const ir::Project& project, const RuleConfig& config);
std::vector<Finding> detect_block(const ir::UnitBlock& block, const RuleConfig& config);

// Last quoted literal that survives when a lookup fails, e.g. hiera('k', 'v'),
// x || 'v', {{ x | default('v') }}.
std::optional<std::string> literal_fallback(std::string_view raw_text);

}  // namespace iacsmell::rules
