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


#include <sstream>

#include "iacsmell/errors.hpp"
#include "iacsmell/rules.hpp"
#include "iacsmell/text.hpp"

namespace iacsmell::rules {

RuleConfig RuleConfig::defaults() {
  RuleConfig c;
  c.user_keywords = {"user", "usr", "uname", "login"};
  c.secret_keywords = {"password", "passwd", "pwd",  "secret",     "key",
                       "token",    "cert",   "ssh_key", "private_key"};
  c.password_keywords = {"password", "passwd", "pwd"};
  c.admin_keywords = {"admin", "root", "sudo", "wheel"};
  c.suspicious_words = {"todo", "fixme", "hack", "xxx", "bug", "later", "workaround", "insecure"};
  c.weak_crypto_names = {"md5", "sha1", "sha-1", "des", "rc4", "arcfour"};
  c.download_extensions = {".rpm", ".deb", ".tar", ".tgz", ".tar.gz", ".zip", ".gem",
                           ".jar", ".sh",  ".run", ".bin", ".msi",    ".exe"};
  c.checksum_attribute_names = {"checksum", "sha256sum", "md5sum", "gpg", "signature", "sha256"};
  c.invalid_bind_addresses = {"0.0.0.0", "::"};
  c.fetcher_types = {"get_url", "remote_file", "archive", "wget::fetch", "download"};
  c.group_attribute_names = {"groups", "group", "gid"};
  c.exempt_loopback_http = true;
  return c;
}

std::vector<std::string> rule_config_list_keys() {
  return {"user_keywords",         "secret_keywords",          "password_keywords",
          "admin_keywords",        "suspicious_words",         "weak_crypto_names",
          "download_extensions",   "checksum_attribute_names", "invalid_bind_addresses",
          "fetcher_types",         "group_attribute_names"};
}

std::vector<std::string>& rule_config_list(RuleConfig& c, std::string_view key) {
  if (key == "user_keywords") return c.user_keywords;
  if (key == "secret_keywords") return c.secret_keywords;
  if (key == "password_keywords") return c.password_keywords;
  if (key == "admin_keywords") return c.admin_keywords;
  if (key == "suspicious_words") return c.suspicious_words;
  if (key == "weak_crypto_names") return c.weak_crypto_names;
  if (key == "download_extensions") return c.download_extensions;
  if (key == "checksum_attribute_names") return c.checksum_attribute_names;
  if (key == "invalid_bind_addresses") return c.invalid_bind_addresses;
  if (key == "fetcher_types") return c.fetcher_types;
  if (key == "group_attribute_names") return c.group_attribute_names;
  throw ConfigError("unknown rule config key '" + std::string(key) + "'");
}

RuleConfig parse_rule_config(std::string_view content) {
  RuleConfig config = RuleConfig::defaults();
  const auto lines = text::split_lines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = text::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "rule config line " + std::to_string(i + 1);
    if (eq == std::string_view::npos) throw ConfigError(where + ": expected 'key = values'");
    const std::string key(text::trim(line.substr(0, eq)));
    const std::string_view rest = text::trim(line.substr(eq + 1));
    if (key == "exempt_loopback_http") {
      const std::string flag = text::to_lower(rest);
      if (flag == "true" || flag == "yes" || flag == "1") {
        config.exempt_loopback_http = true;
      } else if (flag == "false" || flag == "no" || flag == "0") {
        config.exempt_loopback_http = false;
      } else {
        throw ConfigError(where + ": exempt_loopback_http expects true or false");
      }
      continue;
    }
    std::vector<std::string>* list = nullptr;
    try {
      list = &rule_config_list(config, key);
    } catch (const ConfigError&) {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
    list->clear();
    if (rest.empty()) continue;
    for (const auto& item : text::split(rest, ',')) {
      const std::string entry = text::to_lower(text::trim(item));
      if (entry.empty()) throw ConfigError(where + ": empty entry in '" + key + "'");
      list->push_back(entry);
    }
  }
  return config;
}

RuleConfig load_rule_config(const std::filesystem::path& path) {
  std::string content;
  try {
    content = text::read_file(path);
  } catch (const std::exception& e) {
    throw ConfigError("cannot read rule config '" + path.string() + "': " + e.what());
  }
  return parse_rule_config(content);
}

std::string serialize_rule_config(const RuleConfig& config) {
  RuleConfig copy = config;
  std::ostringstream out;
  for (const auto& key : rule_config_list_keys()) {
    out << key << " =";
    const auto& list = rule_config_list(copy, key);
    for (std::size_t i = 0; i < list.size(); ++i) out << (i == 0 ? " " : ", ") << list[i];
    out << '\n';
  }
  out << "exempt_loopback_http = " << (config.exempt_loopback_http ? "true" : "false") << '\n';
  return out.str();
}

}  // namespace iacsmell::rules
