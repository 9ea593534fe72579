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


#include "iacsmell/pruner.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "iacsmell/errors.hpp"

namespace iacsmell::pruner {

std::set<SmellType> default_targeted_smells() {
  return {SmellType::HardCodedSecret, SmellType::SuspiciousComment, SmellType::HttpWithoutTls,
          SmellType::WeakCrypto};
}

std::vector<double> PassthroughScorer::score(const std::vector<Instance>& batch) {
  return std::vector<double>(batch.size(), 0.0);
}

BuiltinScorer::BuiltinScorer(BuiltinModel model, std::string id) : model_(std::move(model)), id_(std::move(id)) {}

std::vector<double> BuiltinScorer::score(const std::vector<Instance>& batch) {
  std::vector<double> out;
  out.reserve(batch.size());
  for (const auto& inst : batch) out.push_back(score_builtin(model_, inst));
  return out;
}

namespace {

std::string describe(const Instance& inst) {
  return inst.file_path + ":" + std::to_string(inst.line) + " " + std::string(rules::smell_name(inst.smell)) +
         " (instance " + inst.id + ")";
}

}  // namespace

std::vector<ScoredFinding> score_findings(const std::vector<Finding>& findings, const ir::SourceMap& sources,
                                          Scorer& scorer, const std::set<SmellType>& targeted,
                                          std::size_t batch_size) {
  if (batch_size == 0) batch_size = 1;
  std::vector<ScoredFinding> scored(findings.size());
  std::vector<std::size_t> pending;
  std::vector<Instance> instances;
  for (std::size_t i = 0; i < findings.size(); ++i) {
    scored[i].finding = findings[i];
    if (targeted.count(findings[i].smell) == 0) {
      scored[i].fp_probability = 0.0;
      scored[i].smell_confidence = 1.0;
      scored[i].scorer_id = std::string(kRuleOnlyScorer);
      continue;
    }
    auto src = sources.find(findings[i].file_path);
    if (src == sources.end()) {
      throw PrunerError("no source text for " + findings[i].file_path + ":" + std::to_string(findings[i].line));
    }
    try {
      instances.push_back(make_instance(findings[i], src->second));
    } catch (const LocationError& e) {
      throw PrunerError(std::string("cannot build instance: ") + e.what());
    }
    pending.push_back(i);
  }

  const std::string scorer_id = scorer.id();
  for (std::size_t start = 0; start < instances.size(); start += batch_size) {
    const std::size_t end = std::min(instances.size(), start + batch_size);
    const std::vector<Instance> batch(instances.begin() + static_cast<std::ptrdiff_t>(start),
                                      instances.begin() + static_cast<std::ptrdiff_t>(end));
    std::vector<double> probs;
    try {
      probs = scorer.score(batch);
    } catch (const PrunerError& e) {
      throw PrunerError(std::string(e.what()) + " while scoring " + describe(batch.front()));
    } catch (const std::exception& e) {
      throw PrunerError("scorer failed on " + describe(batch.front()) + ": " + e.what());
    }
    if (probs.size() != batch.size()) {
      throw PrunerError("scorer returned " + std::to_string(probs.size()) + " scores for " +
                        std::to_string(batch.size()) + " instances starting at " + describe(batch.front()));
    }
    for (std::size_t k = 0; k < batch.size(); ++k) {
      const double p = probs[k];
      if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
        throw PrunerError("scorer returned an invalid probability for " + describe(batch[k]));
      }
      ScoredFinding& sf = scored[pending[start + k]];
      sf.fp_probability = p;
      sf.smell_confidence = 1.0 - p;
      sf.finding.confidence = sf.smell_confidence;
      sf.scorer_id = scorer_id;
    }
  }
  return scored;
}

PruneResult split_by_threshold(const std::vector<ScoredFinding>& scored, double threshold) {
  PruneResult result;
  for (const auto& sf : scored) {
    if (sf.scorer_id == kRuleOnlyScorer || sf.fp_probability < threshold) {
      result.kept.push_back(sf);
    } else {
      result.dropped.push_back(sf);
    }
  }
  return result;
}

PruneResult prune(const std::vector<Finding>& findings, const ir::SourceMap& sources, Scorer& scorer,
                  const std::set<SmellType>& targeted, double threshold, std::size_t batch_size) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw PrunerError("threshold must lie in [0, 1]");
  return split_by_threshold(score_findings(findings, sources, scorer, targeted, batch_size), threshold);
}

std::vector<ScoredFinding> rank_findings(std::vector<ScoredFinding> scored) {
  std::stable_sort(scored.begin(), scored.end(), [](const ScoredFinding& a, const ScoredFinding& b) {
    if (a.smell_confidence != b.smell_confidence) return a.smell_confidence > b.smell_confidence;
    return rules::finding_key_less(a.finding, b.finding);
  });
  return scored;
}

}  // namespace iacsmell::pruner
