//
// Project esiaug - Copyright 2026 The esiaug Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "esiaug/cli.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "esiaug/augment.h"
#include "esiaug/error.h"
#include "esiaug/io.h"
#include "esiaug/metrics.h"
#include "esiaug/model.h"
#include "esiaug/pipeline.h"
#include "esiaug/seqid.h"
#include "esiaug/synth.h"

namespace esiaug {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<double> lambda;
};

void add_common(CLI::App *cmd, CommonOptions &o) {
  cmd->add_option("--config", o.config, "key = value configuration file");
  cmd->add_option("--seed", o.seed, "Overrides the configured seed");
}

RunConfig resolve(const CommonOptions &o) {
  RunConfig cfg = o.config.empty() ? RunConfig {} : load_config(o.config);
  if (o.seed)
    cfg.set_seed(*o.seed);
  if (o.lambda)
    cfg.train.lambda = *o.lambda;
  cfg.validate();
  return cfg;
}

void announce(std::ostream &out, const std::string &hash, std::uint64_t seed) {
  out << "config_hash=" << hash << "\nseed=" << seed << '\n';
}

void announce(std::ostream &out, const RunConfig &cfg) {
  announce(out, config_hash(cfg), cfg.seed);
}

ordered_json report_header(std::string_view command, std::uint64_t seed,
                           const std::string &hash,
                           const std::vector<std::string> &echo) {
  ordered_json j;
  j["command"] = command;
  j["seed"] = seed;
  j["config_hash"] = hash;
  j["config"] = echo;
  return j;
}

ordered_json report_header(std::string_view command, const RunConfig &cfg) {
  return report_header(command, cfg.seed, config_hash(cfg), config_echo(cfg));
}

void write_json(const fs::path &path, const ordered_json &j) {
  write_text_file(path, j.dump(2) + "\n");
}

ordered_json metrics_json(const SetMetrics &m) {
  return { { "n", m.n }, { "r2", m.r2 }, { "mae", m.mae } };
}

std::string threshold_tag(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", t);
  return buf;
}

// ---------------------------------------------------------------------------

void cmd_synth(const CommonOptions &o, const std::string &out_path,
               std::string truth_path, std::ostream &out) {
  const RunConfig cfg = resolve(o);
  announce(out, cfg);
  const SynthDataset ds = generate(cfg.synth);
  write_dataset(out_path, ds.records);
  if (truth_path.empty())
    truth_path = out_path + ".truth.json";
  std::ostringstream truth;
  write_truth(truth, ds.truth, cfg.seed, config_hash(cfg));
  write_text_file(truth_path, truth.str());
  out << "records=" << ds.records.size() << "\nwrote " << out_path << "\nwrote "
      << truth_path << '\n';
}

void cmd_augment(const CommonOptions &o, const std::string &in,
                 const std::string &out_path, std::ostream &out) {
  const RunConfig cfg = resolve(o);
  announce(out, cfg);
  const std::vector<EsiRecord> ds = read_dataset(in);
  const std::vector<AugmentedRecord> aug = augment_dataset(ds, cfg.train.augment);
  std::vector<EsiRecord> records;
  for (const AugmentedRecord &a: aug)
    records.push_back(a.augmented);
  write_dataset(out_path, records);
  out << "records=" << records.size() << "\nwrote " << out_path << '\n';
}

struct SplitOptions {
  std::string in, out_dir;
  std::vector<double> thresholds;
  std::optional<double> test_fraction, val_fraction;
};

void cmd_split(const CommonOptions &o, const SplitOptions &s, std::ostream &out) {
  RunConfig cfg = o.config.empty() ? RunConfig {} : load_config(o.config);
  if (!s.thresholds.empty()) {
    cfg.thresholds = s.thresholds;
    std::sort(cfg.thresholds.begin(), cfg.thresholds.end());
  }
  if (s.test_fraction)
    cfg.test_fraction = *s.test_fraction;
  if (s.val_fraction)
    cfg.val_fraction = *s.val_fraction;
  CommonOptions rest = o;
  rest.config.clear();
  if (o.seed)
    cfg.set_seed(*o.seed);
  cfg.validate();
  announce(out, cfg);

  const std::vector<EsiRecord> ds = read_dataset(s.in);
  const std::vector<SplitFile> splits = make_splits(ds, cfg);
  fs::create_directories(s.out_dir);
  for (const SplitFile &split: splits) {
    const fs::path path =
        fs::path(s.out_dir) / ("split_" + threshold_tag(split.threshold) + ".tsv");
    std::ostringstream os;
    write_split(os, split);
    write_text_file(path, os.str());

    const Partition p = partition(ds, split);
    std::vector<std::string> train, test;
    for (const EsiRecord &r: p.train)
      train.push_back(r.sequence);
    for (const EsiRecord &r: p.test)
      test.push_back(r.sequence);
    const std::vector<double> nearest = max_identity_to_train(test, train);
    const double worst =
        nearest.empty() ? 0.0 : *std::max_element(nearest.begin(), nearest.end());
    out << "threshold=" << format_real(split.threshold)
        << " train=" << p.train.size() << " val=" << p.val.size()
        << " test=" << p.test.size() << " max_test_train_identity="
        << format_real(worst) << "\nwrote " << path.string() << '\n';
  }
}

struct TrainOptions {
  std::string train, val, data, split, checkpoint_out, log_out;
};

void cmd_train(const CommonOptions &o, const TrainOptions &t, std::ostream &out) {
  const RunConfig cfg = resolve(o);
  const std::string hash = config_hash(cfg);
  announce(out, cfg);

  Partition part;
  if (!t.data.empty()) {
    if (t.split.empty() || !t.train.empty() || !t.val.empty())
      throw ConfigError("--data needs --split and excludes --train/--val");
    part = partition(read_dataset(t.data), read_split(t.split));
  } else {
    if (t.train.empty())
      throw ConfigError("either --train or --data with --split is required");
    part.train = read_dataset(t.train);
    if (!t.val.empty())
      part.val = read_dataset(t.val);
  }
  const PreparedPartition prepared { prepare(part.train), prepare(part.val), {} };
  const TrainResult result = train(prepared.train, prepared.val, cfg.train);

  Checkpoint ckpt { result.params, cfg.seed, result.best_epoch, hash,
                    config_echo(cfg) };
  std::ostringstream os;
  write_checkpoint(os, ckpt);
  write_text_file(t.checkpoint_out, os.str());
  if (!t.log_out.empty()) {
    std::ostringstream log;
    write_training_log(log, result, cfg.seed, hash);
    write_text_file(t.log_out, log.str());
  }
  out << "train=" << part.train.size() << " val=" << part.val.size()
      << "\nbest_epoch=" << result.best_epoch << '\n';
  if (!result.log.empty() && result.best_epoch > 0)
    out << "best_val_r2=" << format_real(result.log[result.best_epoch - 1].val_r2)
        << '\n';
  out << "wrote " << t.checkpoint_out << '\n';
  if (result.aborted)
    throw NonFiniteError("training aborted: " + result.diagnostic);
}

struct EvalOptions {
  std::string checkpoint, data, report_out, curve_out, deployment, reference;
  std::vector<std::string> splits;
};

void cmd_eval(const EvalOptions &e, std::ostream &out) {
  std::ifstream in(e.checkpoint);
  if (!in)
    throw IoError("cannot open '" + e.checkpoint + "'");
  const Checkpoint ckpt = read_checkpoint(in);
  announce(out, ckpt.config_hash, ckpt.seed);
  if (e.deployment.empty() != e.reference.empty())
    throw ConfigError("--deployment and --reference go together");

  const std::vector<EsiRecord> ds = read_dataset(e.data);
  std::vector<SplitFile> splits;
  for (const std::string &path: e.splits)
    splits.push_back(read_split(path));
  std::sort(splits.begin(), splits.end(),
            [](const SplitFile &a, const SplitFile &b) {
              return a.threshold < b.threshold;
            });
  for (std::size_t i = 1; i < splits.size(); ++i)
    if (splits[i].threshold == splits[i - 1].threshold)
      throw ConfigError("split files share threshold "
                        + format_real(splits[i].threshold));

  ordered_json report =
      report_header("eval", ckpt.seed, ckpt.config_hash, ckpt.config_echo);
  report["best_epoch"] = ckpt.best_epoch;
  ordered_json rows = ordered_json::array();
  std::vector<SplitPredictions> preds;
  for (const SplitFile &split: splits) {
    const PreparedSet test = prepare(select_records(ds, split, SplitRole::kTest));
    if (test.size() < 2)
      throw EmptyDataset("split " + format_real(split.threshold)
                         + " has fewer than two test records");
    SplitPredictions p { split.threshold, predict(ckpt.params, test),
                         test.targets() };
    const double r2 = r_squared(p.preds, p.targets);
    const double m = mae(p.preds, p.targets);
    rows.push_back({ { "threshold", split.threshold },
                     { "n_test", test.size() },
                     { "r2", r2 },
                     { "mae", m } });
    out << "threshold=" << format_real(split.threshold) << " n=" << test.size()
        << " r2=" << format_real(r2) << " mae=" << format_real(m) << '\n';
    preds.push_back(std::move(p));
  }
  report["splits"] = rows;

  ordered_json curves = ordered_json::array();
  std::ostringstream table;
  table << "threshold\tmetric\trisk\tweight\n";
  if (preds.size() >= 2) {
    std::optional<std::vector<double>> weights;
    if (!e.deployment.empty()) {
      std::vector<std::string> targets, train;
      for (const EsiRecord &r: read_dataset(e.deployment))
        targets.push_back(r.sequence);
      for (const EsiRecord &r: read_dataset(e.reference))
        train.push_back(r.sequence);
      std::vector<double> edges;
      for (const SplitFile &s: splits)
        edges.push_back(s.threshold);
      weights = identity_weights(targets, train, edges);
    }
    for (MetricId id: { MetricId::kR2, MetricId::kMae }) {
      const GoodCurve curve = good_curve(preds, id, weights);
      ordered_json points = ordered_json::array();
      for (const GoodPoint &pt: curve.points) {
        points.push_back({ { "threshold", pt.threshold },
                           { "risk", pt.risk },
                           { "weight", pt.weight } });
        table << format_real(pt.threshold) << '\t' << metric_name(id) << '\t'
              << format_real(pt.risk) << '\t' << format_real(pt.weight) << '\n';
      }
      const double area = au_good(curve);
      curves.push_back(
          { { "metric", metric_name(id) },
            { "direction",
              higher_is_better(id) ? "higher_is_better" : "lower_is_better" },
            { "weights", curve.uniform_weights ? "uniform" : "deployment" },
            { "au_good", area },
            { "points", points } });
      out << "au_good_" << metric_name(id) << '=' << format_real(area) << '\n';
    }
  }
  report["good_curves"] = curves;
  write_json(e.report_out, report);
  out << "wrote " << e.report_out << '\n';
  if (!e.curve_out.empty()) {
    write_text_file(e.curve_out, table.str());
    out << "wrote " << e.curve_out << '\n';
  }
}

struct AblateOptions {
  std::string in, report_out, table_out;
};

void cmd_ablate(const CommonOptions &o, const AblateOptions &a, bool lambda,
                std::ostream &out) {
  const RunConfig cfg = resolve(o);
  announce(out, cfg);
  if (cfg.val_fraction <= 0.0)
    throw ConfigError("ablations select on validation data; set val_fraction");
  const std::vector<EsiRecord> ds = read_dataset(a.in);
  const SplitFile split = make_split(ds, cfg, cfg.ablation_threshold);
  const PreparedPartition part = prepare(partition(ds, split));
  const std::vector<SweepRow> rows =
      lambda ? sweep_lambda(part, cfg.train) : sweep_mask(part, cfg.train);

  ordered_json report = report_header(lambda ? "ablate-lambda" : "ablate-mask", cfg);
  report["threshold"] = cfg.ablation_threshold;
  report["sizes"] = { { "train", part.train.size() },
                      { "val", part.val.size() },
                      { "test", part.test.size() } };
  ordered_json jrows = ordered_json::array();
  std::ostringstream table;
  table << "parameter\tvalue\tbest_epoch\tval_r2\tval_mae\ttest_r2\ttest_mae\n";
  for (const SweepRow &r: rows) {
    jrows.push_back({ { "parameter", r.parameter },
                      { "value", r.value },
                      { "best_epoch", r.result.train.best_epoch },
                      { "aborted", r.result.train.aborted },
                      { "val", metrics_json(r.result.val) },
                      { "test", metrics_json(r.result.test) } });
    const std::string line =
        r.parameter + '\t' + format_real(r.value) + '\t'
        + std::to_string(r.result.train.best_epoch) + '\t'
        + format_real(r.result.val.r2) + '\t' + format_real(r.result.val.mae)
        + '\t' + format_real(r.result.test.r2) + '\t'
        + format_real(r.result.test.mae);
    table << line << '\n';
    out << line << '\n';
  }
  report["rows"] = jrows;
  ordered_json best = ordered_json::array();
  for (const char *param: { "lambda", "p_s", "p_g" }) {
    std::vector<SweepRow> group;
    for (const SweepRow &r: rows)
      if (r.parameter == param)
        group.push_back(r);
    if (group.empty())
      continue;
    const SweepRow &b = group[best_row(group)];
    best.push_back({ { "parameter", param },
                     { "value", b.value },
                     { "val_r2", b.result.val.r2 } });
    out << "best_" << param << '=' << format_real(b.value) << '\n';
  }
  report["best_by_validation_r2"] = best;
  write_json(a.report_out, report);
  out << "wrote " << a.report_out << '\n';
  if (!a.table_out.empty()) {
    write_text_file(a.table_out, table.str());
    out << "wrote " << a.table_out << '\n';
  }
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  return s;
}

int fail(std::ostream &err, int code, const std::string &name,
         const std::string &message) {
  err << "error code=" << name << " message=" << one_line(message) << '\n';
  return code;
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream &out,
            std::ostream &err) {
  CLI::App app { "Enzyme-substrate augmentation and consistency training",
                 "esiaug" };
  app.require_subcommand(1, 1);
  app.fallthrough(false);

  CommonOptions common;
  std::string out_path, truth_path, in_path;
  SplitOptions split;
  TrainOptions train_opts;
  EvalOptions eval;
  AblateOptions ablate;

  auto *synth = app.add_subcommand("synth", "Generate the synthetic benchmark");
  add_common(synth, common);
  synth->add_option("--out", out_path, "Dataset path (.tsv or .jsonl)")->required();
  synth->add_option("--truth-out", truth_path,
                    "Ground-truth sidecar (default: <out>.truth.json)");

  auto *augment = app.add_subcommand("augment", "Write one augmented copy per record");
  add_common(augment, common);
  augment->add_option("--in", in_path, "Input dataset")->required();
  augment->add_option("--out", out_path, "Output dataset")->required();

  auto *split_cmd = app.add_subcommand("split", "Write identity-threshold split files");
  add_common(split_cmd, common);
  split_cmd->add_option("--in", split.in, "Input dataset")->required();
  split_cmd->add_option("--out-dir", split.out_dir, "Output directory")->required();
  split_cmd->add_option("--thresholds", split.thresholds, "Identity thresholds")
      ->delimiter(',');
  split_cmd->add_option("--test-fraction", split.test_fraction, "Held-out fraction");
  split_cmd->add_option("--val-fraction", split.val_fraction,
                        "Validation fraction carved from the remainder");

  auto *train_cmd = app.add_subcommand("train", "Train and write a checkpoint");
  add_common(train_cmd, common);
  train_cmd->add_option("--lambda", common.lambda, "Overrides the consistency weight");
  train_cmd->add_option("--train", train_opts.train, "Training dataset");
  train_cmd->add_option("--val", train_opts.val, "Validation dataset");
  train_cmd->add_option("--data", train_opts.data, "Dataset partitioned by --split");
  train_cmd->add_option("--split", train_opts.split, "Split file for --data");
  train_cmd->add_option("--checkpoint-out", train_opts.checkpoint_out,
                        "Checkpoint path")
      ->required();
  train_cmd->add_option("--log-out", train_opts.log_out, "Per-epoch log (TSV)");

  auto *eval_cmd = app.add_subcommand("eval", "Score a checkpoint on split test sets");
  eval_cmd->add_option("--checkpoint", eval.checkpoint, "Checkpoint path")->required();
  eval_cmd->add_option("--data", eval.data, "Dataset the splits refer to")->required();
  eval_cmd->add_option("--splits", eval.splits, "Split files")->required();
  eval_cmd->add_option("--report-out", eval.report_out, "JSON report")->required();
  eval_cmd->add_option("--curve-out", eval.curve_out, "GOOD curves (TSV)");
  eval_cmd->add_option("--deployment", eval.deployment,
                       "Deployment dataset for AU-GOOD weights");
  eval_cmd->add_option("--reference", eval.reference,
                       "Training dataset the deployment set is compared to");

  CLI::App *sweeps[2];
  const char *sweep_names[2][2] = {
    { "ablate-mask", "Sweep p_s and p_g over 0.05..0.30" },
    { "ablate-lambda", "Sweep lambda over 0.005..50" },
  };
  for (int i = 0; i < 2; ++i) {
    sweeps[i] = app.add_subcommand(sweep_names[i][0], sweep_names[i][1]);
    add_common(sweeps[i], common);
    sweeps[i]->add_option("--in", ablate.in, "Input dataset")->required();
    sweeps[i]->add_option("--report-out", ablate.report_out, "JSON report")
        ->required();
    sweeps[i]->add_option("--table-out", ablate.table_out, "Rows as TSV");
  }

  std::vector<const char *> argv { "esiaug" };
  for (const std::string &a: args)
    argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    return fail(err, kExitConfig, "USAGE", e.what());
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    if (synth->parsed())
      cmd_synth(common, out_path, truth_path, out);
    else if (augment->parsed())
      cmd_augment(common, in_path, out_path, out);
    else if (split_cmd->parsed())
      cmd_split(common, split, out);
    else if (train_cmd->parsed())
      cmd_train(common, train_opts, out);
    else if (eval_cmd->parsed())
      cmd_eval(eval, out);
    else
      cmd_ablate(common, ablate, sweeps[1]->parsed(), out);
  } catch (const Error &e) {
    return fail(err, static_cast<int>(e.kind()), e.code(), e.what());
  } catch (const fs::filesystem_error &e) {
    return fail(err, kExitData, "IO_ERROR", e.what());
  } catch (const std::exception &e) {
    return fail(err, kExitInternal, "INTERNAL", e.what());
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  char buf[64];
  std::snprintf(buf, sizeof buf, "wall_time_s=%.3f\n", seconds);
  out << buf;
  return kExitOk;
}

}  // namespace esiaug
