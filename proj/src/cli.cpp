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


#include "iacsmell/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "json.hpp"

#include "iacsmell/builtin_model.hpp"
#include "iacsmell/dataset.hpp"
#include "iacsmell/errors.hpp"
#include "iacsmell/eval.hpp"
#include "iacsmell/parsers.hpp"
#include "iacsmell/pruner.hpp"
#include "iacsmell/records.hpp"
#include "iacsmell/text.hpp"

namespace iacsmell::cli {

namespace fs = std::filesystem;

rules::RuleConfig resolve_rule_config(const std::optional<std::string>& config_path) {
  if (config_path) return rules::load_rule_config(*config_path);
  if (const char* env = std::getenv(kConfigEnv); env != nullptr && *env != '\0') {
    return rules::load_rule_config(env);
  }
  return rules::RuleConfig::defaults();
}

namespace {

struct AnalyzeArgs {
  std::string root;
  std::optional<std::string> tech;
  std::string scorer = "passthrough";
  double fp_threshold = pruner::kDefaultThreshold;
  std::string format = "table";
  bool show_dropped = false;
  std::string targeted;
  std::size_t batch = pruner::kDefaultBatchSize;
  int timeout_ms = 30000;
};

std::set<rules::SmellType> parse_smell_list(const std::string& csv) {
  std::set<rules::SmellType> out;
  for (const auto& item : text::split(csv, ',')) {
    const std::string name(text::trim(item));
    if (name.empty()) continue;
    const auto smell = rules::smell_from_name(name);
    if (!smell) throw ConfigError("unknown smell '" + name + "'");
    out.insert(*smell);
  }
  return out;
}

std::unique_ptr<pruner::Scorer> make_scorer(const std::string& spec, int timeout_ms) {
  if (spec == "passthrough") return std::make_unique<pruner::PassthroughScorer>();
  if (spec.rfind("builtin:", 0) == 0) {
    const std::string path = spec.substr(8);
    return std::make_unique<pruner::BuiltinScorer>(pruner::load_model(path), "builtin:" + fs::path(path).filename().string());
  }
  if (spec.rfind("external:", 0) == 0) {
    return std::make_unique<pruner::ExternalScorer>(spec.substr(9), std::chrono::milliseconds(timeout_ms));
  }
  throw ConfigError("scorer must be passthrough, builtin:<model> or external:<command>, got '" + spec + "'");
}

int cmd_analyze(const AnalyzeArgs& a, const std::optional<std::string>& config_path, std::ostream& out,
                std::ostream& err) {
  if (!(a.fp_threshold >= 0.0 && a.fp_threshold <= 1.0)) throw ConfigError("--fp-threshold must lie in [0, 1]");
  if (a.format != "table" && a.format != "records") throw ConfigError("--format must be table or records");
  const rules::RuleConfig config = resolve_rule_config(config_path);
  parsers::LoadOptions load;
  if (a.tech) {
    load.technology_override = ir::technology_from_name(*a.tech);
    if (!load.technology_override) throw ConfigError("unknown technology '" + *a.tech + "'");
  }
  const parsers::LoadedProject loaded = parsers::load_project(a.root, load);
  for (const auto& w : loaded.warnings) err << "warning: " << w << "\n";

  const auto findings = rules::detect(loaded.project, config);
  const auto targeted = a.targeted.empty() ? pruner::default_targeted_smells() : parse_smell_list(a.targeted);
  std::unique_ptr<pruner::Scorer> scorer;
  pruner::PruneResult result;
  if (!findings.empty()) {
    scorer = make_scorer(a.scorer, a.timeout_ms);
    result = pruner::prune(findings, loaded.sources, *scorer, targeted, a.fp_threshold, a.batch);
  }
  const auto kept = pruner::rank_findings(result.kept);
  const auto dropped = pruner::rank_findings(result.dropped);
  if (a.format == "records") {
    out << records::write_records(kept, dropped);
  } else {
    out << records::format_table(kept, dropped, a.show_dropped);
  }
  return kept.empty() ? kExitClean : kExitFindings;
}

eval::CorpusInfo corpus_info(const parsers::LoadedProject& loaded) {
  eval::CorpusInfo info;
  for (const ir::UnitBlock* block : ir::file_blocks(loaded.project)) {
    info.file_technology[block->name] = block->technology;
    const auto src = loaded.sources.find(block->name);
    info.file_loc[block->name] = src == loaded.sources.end() ? 0 : text::count_lines(src->second);
  }
  return info;
}

struct EvalArgs {
  std::string oracle;
  std::string predictions;
  std::string corpus;
  std::optional<long> total_loc;
  std::optional<std::string> table;
};

int cmd_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  const auto oracle = eval::load_oracle(a.oracle);
  const auto predictions = records::kept_findings(records::read_records(text::read_file(a.predictions)));
  const parsers::LoadedProject loaded = parsers::load_project(a.corpus);
  for (const auto& w : loaded.warnings) err << "warning: " << w << "\n";
  eval::EvalSummary summary = eval::evaluate(predictions, oracle, corpus_info(loaded));
  if (a.total_loc) {
    if (*a.total_loc <= 0) throw ConfigError("--total-loc must be positive");
    const auto ranked = eval::rank_by_confidence(predictions);
    summary.overall.total_loc = *a.total_loc;
    if (!oracle.empty()) {
      summary.overall.effort_at_60_recall = eval::effort_at_recall(ranked, oracle, eval::kTargetRecall, *a.total_loc);
      summary.overall.f1_at_1_loc = eval::f1_at_loc(ranked, oracle, eval::kBudgetFraction, *a.total_loc);
    }
  }
  if (a.table) text::write_file(*a.table, eval::format_report(summary.per_smell));
  out << eval::summary_to_json(summary).dump(2) << "\n";
  return kExitClean;
}

std::map<dataset::Stratum, int> parse_targets(const std::vector<std::string>& items) {
  std::map<dataset::Stratum, int> targets;
  for (const auto& item : items) {
    const auto colon = item.find(':');
    const auto eq = item.find('=');
    if (colon == std::string::npos || eq == std::string::npos || eq < colon) {
      throw ConfigError("--target expects Technology:Smell=N, got '" + item + "'");
    }
    const auto tech = ir::technology_from_name(item.substr(0, colon));
    const auto smell = rules::smell_from_name(item.substr(colon + 1, eq - colon - 1));
    if (!tech || !smell) throw ConfigError("unknown technology or smell in '" + item + "'");
    int n = 0;
    try {
      n = std::stoi(item.substr(eq + 1));
    } catch (const std::logic_error&) {
      throw ConfigError("bad count in '" + item + "'");
    }
    if (n < 0) throw ConfigError("negative count in '" + item + "'");
    targets[{*tech, *smell}] = n;
  }
  return targets;
}

nlohmann::json split_report_json(const dataset::SplitResult& r) {
  nlohmann::json strata = nlohmann::json::array();
  for (const auto& s : r.strata) {
    strata.push_back({{"technology", std::string(ir::technology_name(s.stratum.first))},
                      {"smell", std::string(rules::smell_name(s.stratum.second))},
                      {"pool", s.pool},
                      {"target", s.target},
                      {"train", s.train},
                      {"val", s.val},
                      {"shortfall", s.shortfall}});
  }
  return {{"train", r.train.size()}, {"val", r.val.size()}, {"excluded_ids", r.excluded_ids}, {"strata", strata}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Security smell analyzer for Puppet, Ansible and Chef scripts", "iacsmell"};
  app.require_subcommand(1);
  std::optional<std::string> config_path;
  std::uint64_t seed = 7;
  app.add_option("--config", config_path, "Rule configuration file");
  app.add_option("--seed", seed, "Seed for every random choice");

  AnalyzeArgs analyze;
  auto* an = app.add_subcommand("analyze", "Detect smells, prune and rank them");
  an->fallthrough();
  an->add_option("root", analyze.root, "Directory or file to analyze")->required();
  an->add_option("--tech", analyze.tech, "Force technology: Puppet, Ansible or Chef");
  an->add_option("--scorer", analyze.scorer, "passthrough | builtin:<model> | external:<command>");
  an->add_option("--fp-threshold", analyze.fp_threshold, "Drop findings with fp_probability >= threshold");
  an->add_option("--format", analyze.format, "table or records");
  an->add_flag("--show-dropped", analyze.show_dropped, "Include dropped findings in the table");
  an->add_option("--targeted", analyze.targeted, "Comma-separated smells the scorer judges");
  an->add_option("--batch-size", analyze.batch, "Instances per scorer request batch");
  an->add_option("--scorer-timeout-ms", analyze.timeout_ms, "Deadline for each external scorer reply");

  EvalArgs ev;
  auto* evc = app.add_subcommand("eval", "Score predictions against an oracle");
  evc->fallthrough();
  evc->add_option("--oracle", ev.oracle, "Oracle file (file_path,line,smell)")->required();
  evc->add_option("--predictions", ev.predictions, "Records written by analyze --format records")->required();
  evc->add_option("--corpus", ev.corpus, "Corpus root the predictions refer to")->required();
  evc->add_option("--total-loc", ev.total_loc, "Override the LOC counted from the corpus");
  evc->add_option("--table", ev.table, "Write the per-smell table to this file");

  auto* ds = app.add_subcommand("dataset", "Build pseudo-label datasets");
  ds->fallthrough();
  ds->require_subcommand(1);

  std::string mine_root;
  std::string mine_out;
  dataset::MineOptions mine_opts;
  std::string mine_targeted;
  auto* mine = ds->add_subcommand("mine", "Emit candidate instances from a corpus");
  mine->fallthrough();
  mine->add_option("root", mine_root, "Corpus directory")->required();
  mine->add_option("--out", mine_out, "Instance JSONL output")->required();
  mine->add_option("--min-warnings", mine_opts.min_warnings, "Skip files with fewer warnings");
  mine->add_option("--max-lines", mine_opts.max_lines, "Skip files longer than this");
  mine->add_option("--targeted", mine_targeted, "Comma-separated smells to keep");

  std::optional<std::string> dd_train, dd_val, dd_oracle, dd_out_train, dd_out_val, dd_files, dd_oracle_files;
  auto* dedup = ds->add_subcommand("dedup", "Remove duplicate files or snippets");
  dedup->fallthrough();
  dedup->add_option("--train", dd_train, "Train instances");
  dedup->add_option("--val", dd_val, "Validation instances");
  dedup->add_option("--oracle-instances", dd_oracle, "Oracle instances (highest priority)");
  dedup->add_option("--out-train", dd_out_train, "Deduplicated train output");
  dedup->add_option("--out-val", dd_out_val, "Deduplicated validation output");
  dedup->add_option("--files", dd_files, "Candidate file directory (file-level mode)");
  dedup->add_option("--oracle-files", dd_oracle_files, "Oracle file directory (file-level mode)");

  std::string sp_in, sp_out_train, sp_out_val;
  std::optional<std::string> sp_oracle;
  std::vector<std::string> sp_targets;
  dataset::SplitSpec sp_spec;
  auto* split = ds->add_subcommand("split", "Stratified train/validation split");
  split->fallthrough();
  split->add_option("--in", sp_in, "Instance pool")->required();
  split->add_option("--out-train", sp_out_train, "Train output")->required();
  split->add_option("--out-val", sp_out_val, "Validation output")->required();
  split->add_option("--oracle-instances", sp_oracle, "Oracle instances excluded from both sides");
  split->add_option("--target", sp_targets, "Technology:Smell=N");
  split->add_option("--train-ratio", sp_spec.train_ratio, "Train share of the ratio");
  split->add_option("--val-ratio", sp_spec.val_ratio, "Validation share of the ratio");

  std::string lb_corpus, lb_oracle, lb_out;
  auto* label = ds->add_subcommand("label", "Label detections against an oracle");
  label->fallthrough();
  label->add_option("corpus", lb_corpus, "Corpus directory")->required();
  label->add_option("--oracle", lb_oracle, "Oracle file (file_path,line,smell)")->required();
  label->add_option("--out", lb_out, "Labelled instance JSONL output")->required();

  std::string pr_in;
  auto* prompt = ds->add_subcommand("prompt", "Render teacher prompts for an instance file");
  prompt->fallthrough();
  prompt->add_option("--in", pr_in, "Instance JSONL input")->required();

  std::string tr_train, tr_val, tr_out;
  pruner::TrainOptions tr_opts;
  auto* train = app.add_subcommand("train-builtin", "Train the built-in false-positive classifier");
  train->fallthrough();
  train->add_option("--train", tr_train, "Labelled train instances")->required();
  train->add_option("--val", tr_val, "Labelled validation instances");
  train->add_option("--out", tr_out, "Model file output")->required();
  train->add_option("--epochs", tr_opts.epochs, "Passes over the train set");
  train->add_option("--learning-rate", tr_opts.learning_rate, "Gradient step size");
  train->add_option("--l2", tr_opts.l2, "L2 penalty on the weights");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitClean : kExitError;
  }

  try {
    if (an->parsed()) return cmd_analyze(analyze, config_path, out, err);
    if (evc->parsed()) return cmd_eval(ev, out, err);
    if (mine->parsed()) {
      if (!mine_targeted.empty()) mine_opts.targeted = parse_smell_list(mine_targeted);
      const auto result = dataset::mine_candidates(mine_root, resolve_rule_config(config_path), mine_opts);
      for (const auto& w : result.warnings) err << "warning: " << w << "\n";
      save_instances(mine_out, result.instances);
      out << "files " << result.files_seen << " kept " << result.files_kept << " instances "
          << result.instances.size() << "\n";
      return kExitClean;
    }
    if (dedup->parsed()) {
      if (dd_files) {
        if (!dd_oracle_files) throw ConfigError("--files needs --oracle-files");
        auto list = [](const std::string& dir) {
          std::vector<fs::path> paths;
          for (const auto& e : fs::recursive_directory_iterator(dir)) {
            if (e.is_regular_file()) paths.push_back(e.path());
          }
          std::sort(paths.begin(), paths.end());
          return paths;
        };
        for (const auto& p : dataset::dedup_files(list(*dd_files), list(*dd_oracle_files))) {
          out << fs::relative(p, *dd_files).generic_string() << "\n";
        }
        return kExitClean;
      }
      if (!dd_train || !dd_val || !dd_out_train || !dd_out_val) {
        throw ConfigError("snippet mode needs --train, --val, --out-train and --out-val");
      }
      const auto result = dataset::dedup_snippets(load_instances(*dd_train), load_instances(*dd_val),
                                                  dd_oracle ? load_instances(*dd_oracle) : std::vector<Instance>{});
      save_instances(*dd_out_train, result.train);
      save_instances(*dd_out_val, result.val);
      out << "train " << result.train.size() << " val " << result.val.size() << " removed "
          << result.removed_ids.size() << "\n";
      return kExitClean;
    }
    if (split->parsed()) {
      sp_spec.targets = parse_targets(sp_targets);
      const auto result = dataset::make_splits(load_instances(sp_in), sp_spec, seed,
                                               sp_oracle ? load_instances(*sp_oracle) : std::vector<Instance>{});
      save_instances(sp_out_train, result.train);
      save_instances(sp_out_val, result.val);
      out << split_report_json(result).dump(2) << "\n";
      return kExitClean;
    }
    if (label->parsed()) {
      const auto loaded = parsers::load_project(lb_corpus);
      for (const auto& w : loaded.warnings) err << "warning: " << w << "\n";
      const auto findings = rules::detect(loaded.project, resolve_rule_config(config_path));
      const auto labeled = dataset::label_oracle_detections(findings, loaded.sources, eval::load_oracle(lb_oracle));
      save_instances(lb_out, labeled);
      std::size_t tp = 0;
      for (const auto& inst : labeled) tp += inst.label == Label::TP ? 1 : 0;
      out << "TP " << tp << " FP " << labeled.size() - tp << "\n";
      return kExitClean;
    }
    if (prompt->parsed()) {
      bool first = true;
      for (const auto& inst : load_instances(pr_in)) {
        if (!first) out << "\x1e\n";
        out << dataset::build_prompt(inst);
        first = false;
      }
      return kExitClean;
    }
    if (train->parsed()) {
      tr_opts.seed = seed;
      const auto result = pruner::train_builtin(load_instances(tr_train),
                                        tr_val.empty() ? std::vector<Instance>{} : load_instances(tr_val), tr_opts);
      pruner::save_model(tr_out, result.model);
      out << "best_epoch " << result.best_epoch << " best_val_f1 " << text::format_double(result.best_val_f1)
          << "\n";
      return kExitClean;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace iacsmell::cli
