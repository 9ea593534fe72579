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


#include <regex>

#include "doctest.h"
#include "iacsmell/builtin_model.hpp"
#include "iacsmell/errors.hpp"
#include "iacsmell/instance.hpp"
#include "iacsmell/parsers.hpp"
#include "iacsmell/rules.hpp"
#include "iacsmell/text.hpp"
#include "support.hpp"

using namespace iacsmell;
using rules::SmellType;

namespace {

rules::Finding finding_at(int line) {
  rules::Finding f;
  f.file_path = "f.pp";
  f.line = line;
  f.smell = SmellType::HardCodedSecret;
  f.rationale = "r";
  return f;
}

// Lines first..last of raw, cut at newline offsets.
std::string slice_lines(const std::string& raw, int first, int last) {
  std::vector<std::size_t> starts = {0};
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == '\n') starts.push_back(i + 1);
  }
  if (starts.back() == raw.size()) starts.pop_back();
  const int total = static_cast<int>(starts.size());
  first = std::max(first, 1);
  last = std::min(last, total);
  const std::size_t begin = starts[first - 1];
  const std::size_t end = last < total ? starts[last] - 1 : raw.size();
  std::string out = raw.substr(begin, end - begin);
  if (!out.empty() && out.back() == '\n') out.pop_back();
  return out;
}

// Reference tokenizer: regex words, lowercased, plus their trigrams.
std::set<std::string> reference_tokens(const Instance& inst) {
  std::set<std::string> out;
  const std::regex word("[A-Za-z0-9_]+");
  auto add = [&](const std::string& s, const std::string& wp, const std::string& gp) {
    for (auto it = std::sregex_iterator(s.begin(), s.end(), word); it != std::sregex_iterator(); ++it) {
      std::string w = it->str();
      std::transform(w.begin(), w.end(), w.begin(), [](unsigned char c) { return std::tolower(c); });
      out.insert(wp + w);
      for (std::size_t i = 0; i + 3 <= w.size(); ++i) out.insert(gp + w.substr(i, 3));
    }
  };
  add(inst.target, "w:", "g:");
  add(inst.context, "cw:", "cg:");
  return out;
}

}  // namespace

TEST_CASE("context window is clipped to the file") {
  const auto a = make_instance(finding_at(1), "one\ntwo\n");
  CHECK(a.target == "one");
  CHECK(a.context == "one\ntwo");
  const auto b = make_instance(finding_at(3), "l1\nl2\nl3\nl4\nl5\n");
  CHECK(b.target == "l3");
  CHECK(b.context == "l1\nl2\nl3\nl4\nl5");
  const auto c = make_instance(finding_at(5), "l1\nl2\nl3\nl4\nl5\nl6\nl7");
  CHECK(c.context == "l3\nl4\nl5\nl6\nl7");
  CHECK_THROWS_AS(make_instance(finding_at(3), "one\ntwo\n"), LocationError);
  CHECK_THROWS_AS(make_instance(finding_at(0), "one\n"), LocationError);
}

TEST_CASE("fixture contexts equal a direct slice of the file") {
  const auto loaded = parsers::load_project(testsupport::fixture("corpus"));
  const auto findings = rules::detect(loaded.project, rules::RuleConfig::defaults());
  REQUIRE(!findings.empty());
  for (const auto& f : findings) {
    const std::string raw = text::read_file(testsupport::fixture("corpus") / f.file_path);
    const auto inst = make_instance(f, raw);
    CHECK(inst.context == slice_lines(raw, f.line - 2, f.line + 2));
    CHECK(inst.target == slice_lines(raw, f.line, f.line));
    CHECK(inst.technology == f.technology);
    CHECK(inst.line == f.line);
    CHECK(inst.id == instance_id(inst.target, f.smell));
  }
}

TEST_CASE("instance id hashes the normalized target and smell") {
  CHECK(instance_id("  $db_user = hiera('user','ironic')", SmellType::HardCodedSecret) ==
        "545a01ffcfa06d9ed8e8d442b93a9b99");
  CHECK(instance_id("a  b", SmellType::WeakCrypto) == instance_id("a b", SmellType::WeakCrypto));
  CHECK(instance_id("a b", SmellType::WeakCrypto) != instance_id("a b", SmellType::HttpWithoutTls));
  CHECK(instance_id("a b", SmellType::WeakCrypto) == text::md5_hex(std::string("a b\x1f") + "WeakCrypto"));
}

TEST_CASE("instance JSONL round-trips and reports bad records") {
  auto insts = testsupport::separable_set(5, 0);
  insts[1].label.reset();
  const std::string body = write_instances_jsonl(insts);
  CHECK(read_instances_jsonl(body) == insts);
  CHECK(std::count(body.begin(), body.end(), '\n') == 5);
  CHECK(read_instances_jsonl("").empty());
  CHECK_THROWS_AS(read_instances_jsonl("{\"target\": \"x\"}\n"), FormatError);
  CHECK_THROWS_AS(read_instances_jsonl("not json\n"), FormatError);

  // Records without an id get one computed from target and smell.
  const auto loaded = read_instances_jsonl(
      "{\"technology\":\"Puppet\",\"file_path\":\"a.pp\",\"line\":1,\"smell\":\"HardCodedSecret\","
      "\"target\":\"x\",\"context\":\"x\",\"rationale\":\"r\",\"label\":\"fp\"}\n");
  REQUIRE(loaded.size() == 1);
  CHECK(loaded[0].id == instance_id("x", SmellType::HardCodedSecret));
  CHECK(loaded[0].label == Label::FP);
}

TEST_CASE("feature tokens") {
  Instance empty;
  empty.smell = SmellType::WeakCrypto;
  const auto model = pruner::BuiltinModel::with_vocabulary({"w:password", "g:pas"});
  const auto x = pruner::extract_features(model, empty);
  REQUIRE(x.indices.size() == 1);
  CHECK(x.indices[0] == model.smell_offset() + rules::smell_index(SmellType::WeakCrypto));

  Instance pw;
  pw.target = "password = ''";
  pw.context = pw.target;
  const auto tokens = pruner::feature_tokens(pw);
  CHECK(std::count(tokens.begin(), tokens.end(), "w:password") == 1);
  CHECK(std::count(tokens.begin(), tokens.end(), "g:pas") == 1);
  CHECK(pruner::extract_features(model, pw).indices.size() == 3);
  CHECK(pruner::extract_features(model, pw) == pruner::extract_features(model, pw));

  // Out-of-vocabulary tokens are ignored.
  Instance other;
  other.target = "unrelated words";
  CHECK(pruner::extract_features(model, other).indices.size() == 1);
}

TEST_CASE("feature tokens agree with a reference tokenizer on fixture instances") {
  const auto loaded = parsers::load_project(testsupport::fixture("corpus"));
  for (const auto& f : rules::detect(loaded.project, rules::RuleConfig::defaults())) {
    const auto inst = make_instance(f, loaded.sources.at(f.file_path));
    const auto tokens = pruner::feature_tokens(inst);
    CHECK(std::set<std::string>(tokens.begin(), tokens.end()) == reference_tokens(inst));
  }
}
