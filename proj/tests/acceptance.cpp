//
// Project esiaug - Copyright 2026 The esiaug Authors.
// SPDX-License-Identifier: Apache-2.0
//

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "corpus.h"
#include "esiaug/augment.h"
#include "esiaug/cli.h"
#include "esiaug/io.h"
#include "esiaug/metrics.h"
#include "esiaug/model.h"
#include "esiaug/molgraph.h"
#include "esiaug/pipeline.h"
#include "esiaug/rng.h"
#include "esiaug/seqid.h"
#include "esiaug/synth.h"
#include "oracles.h"

namespace esiaug {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char *f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// 1 -------------------------------------------------------------------------

Outcome gradient_oracle() {
  const ModelShape shape { kEnzymeFeatures, kSubstrateFeatures, 4, 3, 5 };
  Rng rng(2024);
  double worst = 0;
  for (int draw = 0; draw < 20; ++draw) {
    const ModelParams p = testing::random_params(shape, rng);
    const testing::RandomBatch b = testing::random_batch(rng, 3);
    for (double lambda: { 0.0, 0.5, 5.0 })
      worst = std::max(worst,
                       testing::max_gradient_error(p, b.samples, { lambda, false },
                                                   1e-5));
  }
  return { worst < 1e-4, "60 checks, max relative error " + fmt("%.3g", worst) };
}

// 2 -------------------------------------------------------------------------

long double brute_force_area(const std::vector<double> &risk,
                             const std::vector<double> &w) {
  long double s = 0;
  for (std::size_t i = 0; i < risk.size(); ++i)
    s += static_cast<long double>(risk[i]) * w[i];
  return s;
}

std::vector<double> random_weights(Rng &rng, std::size_t n) {
  std::vector<double> w(n);
  double sum = 0;
  for (double &x: w)
    sum += x = rng.uniform();
  for (double &x: w)
    x /= sum;
  return w;
}

std::vector<double> random_thresholds(Rng &rng, std::size_t n) {
  std::set<double> t;
  while (t.size() < n)
    t.insert(std::round(rng.uniform(0.3, 1.0) * 1000) / 1000);
  return { t.begin(), t.end() };
}

Outcome au_good_oracle() {
  Rng rng(77);
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.below(7);
    const std::vector<double> t = random_thresholds(rng, n);
    std::vector<double> risk(n);
    for (double &r: risk)
      r = rng.uniform(-1, 2);
    const std::vector<double> w = random_weights(rng, n);
    const double lib =
        au_good(good_curve(t, risk, trial % 2 ? MetricId::kMae : MetricId::kR2, w));
    worst = std::max(worst,
                     std::abs(static_cast<double>(lib - brute_force_area(risk, w))));
  }
  int violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + rng.below(7);
    const std::vector<double> t = random_thresholds(rng, n);
    std::vector<double> lo(n), hi(n);
    for (std::size_t i = 0; i < n; ++i) {
      lo[i] = rng.uniform(0, 2);
      hi[i] = lo[i] + rng.uniform(1e-6, 1);
    }
    const std::vector<double> w = random_weights(rng, n);
    violations += !(au_good(good_curve(t, lo, MetricId::kMae, w))
                    < au_good(good_curve(t, hi, MetricId::kMae, w)));
  }
  return { worst <= 1e-12 && violations == 0,
           "max |lib - brute force| " + fmt("%.3g", worst) + ", dominance violations "
               + std::to_string(violations) + "/1000" };
}

// 3 -------------------------------------------------------------------------

Outcome metric_identities() {
  Rng rng(5);
  int failures = 0;
  double worst_mean_r2 = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> y(3 + rng.below(50));
    for (double &v: y)
      v = rng.normal() * 3 + 1;
    double mean = 0;
    for (double v: y)
      mean += v;
    mean /= static_cast<double>(y.size());
    const std::vector<double> flat(y.size(), mean);
    failures += r_squared(y, y) != 1.0;
    failures += mae(y, y) != 0.0;
    const double r0 = r_squared(flat, y);
    worst_mean_r2 = std::max(worst_mean_r2, std::abs(r0));
    failures += std::abs(r0) > 1e-12;
  }
  const double hand = r_squared(std::vector<double> { 0, 1, 1 },
                                std::vector<double> { 0, 1, 2 });
  failures += hand != 0.5;
  return { failures == 0, std::to_string(failures) + " failures, max |R2(mean)| "
                              + fmt("%.3g", worst_mean_r2) + ", hand example "
                              + fmt("%.17g", hand) };
}

// 4 -------------------------------------------------------------------------

Outcome augmentation_safety() {
  const double ps[] = { 0.05, 0.10, 0.15, 0.20, 0.25, 0.30 };
  std::vector<MolGraph> graphs;
  std::vector<std::vector<bool>> prot;
  for (std::string_view smi: testing::kSubstrateCorpus) {
    graphs.push_back(parse_smiles(smi));
    prot.push_back(detect_protected(graphs.back()));
  }
  Rng rng(99);
  int protected_hits = 0, count_errors = 0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    const std::size_t m = t % graphs.size();
    const double p = ps[(t / graphs.size()) % std::size(ps)];
    const std::vector<bool> mask = mask_graph(graphs[m], p, rng);
    const long pool = std::count(prot[m].begin(), prot[m].end(), false);
    const long want = std::min<long>(
        static_cast<long>(std::floor(p * graphs[m].size() + 1e-9)), pool);
    long got = 0;
    for (std::size_t i = 0; i < mask.size(); ++i) {
      got += mask[i];
      protected_hits += mask[i] && prot[m][i];
    }
    count_errors += got != want;
  }
  return { protected_hits == 0 && count_errors == 0,
           std::to_string(trials) + " trials over "
               + std::to_string(graphs.size()) + " molecules, protected masked "
               + std::to_string(protected_hits) + ", count mismatches "
               + std::to_string(count_errors) };
}

// 5 -------------------------------------------------------------------------

Outcome enumeration_soundness() {
  Rng rng(123);
  int checks = 0, failures = 0;
  for (std::size_t m = 0; m < 20; ++m) {
    const MolGraph g = parse_smiles(testing::kSubstrateCorpus[m]);
    const std::string canon = canonical_smiles(g);
    for (const std::string &smi: enumerate_smiles(g, 50, rng)) {
      ++checks;
      const MolGraph back = parse_smiles(smi);
      failures += !is_isomorphic(g, back) || canonical_smiles(back) != canon;
    }
  }
  return { checks == 1000 && failures == 0,
           std::to_string(checks) + " round trips, "
               + std::to_string(2 * checks) + " checks, "
               + std::to_string(failures) + " failures" };
}

// 6 -------------------------------------------------------------------------

// Plain Needleman-Wunsch (match 1, mismatch 0, gap -1) with a full matrix;
// traceback prefers diagonal, then gap in b, then gap in a.
double oracle_identity(const std::string &a, const std::string &b) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<std::vector<int>> s(n + 1, std::vector<int>(m + 1));
  for (std::size_t i = 0; i <= n; ++i)
    s[i][0] = -static_cast<int>(i);
  for (std::size_t j = 0; j <= m; ++j)
    s[0][j] = -static_cast<int>(j);
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= m; ++j)
      s[i][j] = std::max({ s[i - 1][j - 1] + (a[i - 1] == b[j - 1]),
                           s[i - 1][j] - 1, s[i][j - 1] - 1 });
  std::size_t i = n, j = m;
  int same = 0, cols = 0;
  while (i > 0 || j > 0) {
    ++cols;
    if (i > 0 && j > 0 && s[i][j] == s[i - 1][j - 1] + (a[i - 1] == b[j - 1])) {
      same += a[i - 1] == b[j - 1];
      --i, --j;
    } else if (i > 0 && s[i][j] == s[i - 1][j] - 1) {
      --i;
    } else {
      --j;
    }
  }
  return cols ? static_cast<double>(same) / cols : 0.0;
}

Outcome split_soundness() {
  SynthConfig c;
  c.families = 12;
  c.members = 25;
  c.seed = 8;
  const std::vector<EsiRecord> ds = generate(c).records;
  std::map<std::string, const EsiRecord *> by_id;
  for (const EsiRecord &r: ds)
    by_id[r.id] = &r;
  const double thresholds[] = { 0.40, 0.60, 0.80, 0.99 };
  const std::vector<OodSplit> splits = build_ood_splits(ds, thresholds, 0.2, 8);
  std::string detail = std::to_string(ds.size()) + " sequences;";
  bool ok = splits.size() == 4;
  for (const OodSplit &s: splits) {
    double worst = 0;
    for (const std::string &t: s.test_ids)
      for (const std::string &r: s.train_ids)
        worst = std::max(worst, oracle_identity(by_id.at(t)->sequence,
                                                by_id.at(r)->sequence));
    ok &= worst <= s.threshold && !s.test_ids.empty()
          && s.test_ids.size() + s.train_ids.size() == ds.size();
    detail += " t=" + fmt("%.2f", s.threshold) + " max " + fmt("%.3f", worst);
  }
  return { ok, detail };
}

// 7 and 8 -------------------------------------------------------------------

constexpr int kSeeds = 5;

RunConfig benchmark_config(std::uint64_t seed) {
  RunConfig cfg;
  cfg.synth.rho = 0.5;
  cfg.test_fraction = 0.16;
  cfg.val_fraction = 0.16;
  cfg.set_seed(seed);
  return cfg;
}

struct Benchmark {
  PreparedPartition part;
  std::size_t held_out_families = 0;
};

Benchmark benchmark(std::uint64_t seed) {
  const RunConfig cfg = benchmark_config(seed);
  const SynthDataset ds = generate(cfg.synth);
  const SplitFile split = make_split(ds.records, cfg, 0.6);
  std::set<int> fams;
  for (std::size_t i = 0; i < ds.records.size(); ++i)
    if (split.roles[i] == SplitRole::kTest)
      fams.insert(ds.truth.record_family[i]);
  return { prepare(partition(ds.records, split)), fams.size() };
}

Outcome ood_benefit() {
  double r2[2] = {}, err[2] = {};
  bool three = true;
  for (int s = 1; s <= kSeeds; ++s) {
    const Benchmark b = benchmark(s);
    three &= b.held_out_families == 3;
    TrainConfig tc = benchmark_config(s).train;
    for (int arm = 0; arm < 2; ++arm) {
      tc.lambda = arm ? 0.5 : 0.0;
      const ArmResult r = run_arm(b.part, tc);
      r2[arm] += r.test.r2 / kSeeds;
      err[arm] += r.test.mae / kSeeds;
    }
  }
  return { three && r2[1] > r2[0] && err[1] < err[0],
           "seeds 1-5, held-out families 3: " + std::string(three ? "yes" : "no")
               + "; R2 " + fmt("%.4f", r2[1]) + " vs " + fmt("%.4f", r2[0])
               + " (margin " + fmt("%+.4f", r2[1] - r2[0]) + "), MAE "
               + fmt("%.4f", err[1]) + " vs " + fmt("%.4f", err[0]) };
}

Outcome ablation_shape() {
  int interior = 0;
  std::string picks;
  for (int s = 1; s <= kSeeds; ++s) {
    const Benchmark b = benchmark(s);
    const std::vector<SweepRow> rows =
        sweep_lambda(b.part, benchmark_config(s).train);
    const std::size_t best = best_row(rows);
    interior += best > 0 && best + 1 < rows.size();
    picks += (picks.empty() ? "" : ",") + fmt("%g", rows[best].value);
  }
  return { interior >= 4, "best lambda per seed " + picks + "; interior in "
                              + std::to_string(interior) + "/5 (need 4)" };
}

// 9 -------------------------------------------------------------------------

int cli(const fs::path &dir, std::vector<std::string> args, std::string &log) {
  for (std::string &a: args)
    if (a.starts_with("@"))
      a = (dir / a.substr(1)).string();
  std::ostringstream out, err;
  const int rc = run_cli(args, out, err);
  std::istringstream lines(out.str());
  for (std::string line; std::getline(lines, line);)
    if (!line.starts_with("wall_time_s=") && !line.starts_with("wrote "))
      log += line + '\n';
  log += err.str();
  return rc;
}

std::map<std::string, std::string> pipeline_run(const fs::path &dir) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  write_text_file(dir / "run.cfg",
                  "synth.families = 6\nsynth.members = 12\nepochs = 6\n"
                  "test_fraction = 0.17\nval_fraction = 0.17\n"
                  "thresholds = 0.4, 0.6, 0.8\n");
  const std::vector<std::string> common { "--config", "@run.cfg", "--seed", "17" };
  auto with = [&](std::vector<std::string> a) {
    a.insert(a.end(), common.begin(), common.end());
    return a;
  };
  std::string log;
  int rc = 0;
  rc |= cli(dir, with({ "synth", "--out", "@data.tsv" }), log);
  rc |= cli(dir, with({ "split", "--in", "@data.tsv", "--out-dir", "@splits" }), log);
  rc |= cli(dir, with({ "augment", "--in", "@data.tsv", "--out", "@aug.jsonl" }), log);
  rc |= cli(dir,
            with({ "train", "--data", "@data.tsv", "--split", "@splits/split_0.6.tsv",
                   "--checkpoint-out", "@model.ckpt", "--log-out", "@train.log" }),
            log);
  rc |= cli(dir,
            { "eval", "--checkpoint", "@model.ckpt", "--data", "@data.tsv",
              "--splits", "@splits/split_0.4.tsv", "@splits/split_0.6.tsv",
              "@splits/split_0.8.tsv", "--report-out", "@eval.json",
              "--curve-out", "@curve.tsv" },
            log);
  rc |= cli(dir,
            with({ "ablate-lambda", "--in", "@data.tsv", "--report-out",
                   "@lambda.json", "--table-out", "@lambda.tsv" }),
            log);
  std::map<std::string, std::string> files;
  files["stdout"] = log + "rc=" + std::to_string(rc) + '\n';
  for (const auto &e: fs::recursive_directory_iterator(dir))
    if (e.is_regular_file())
      files[fs::relative(e.path(), dir).string()] = read_text_file(e.path());
  return files;
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "esiaug_acceptance";
  const auto a = pipeline_run(root / "a");
  const auto b = pipeline_run(root / "b");
  fs::remove_all(root);
  const bool ran = a.at("stdout").ends_with("rc=0\n") && a.size() >= 12;
  return { ran && a == b, std::to_string(a.size() - 1) + " files compared, "
                              + (a == b ? "identical" : "differ")
                              + (ran ? "" : ", pipeline failed") };
}

}  // namespace
}  // namespace esiaug

int main() {
  using namespace esiaug;
  const std::pair<const char *, std::function<Outcome()>> criteria[] = {
    { "gradient oracle", gradient_oracle },
    { "AU-GOOD oracle", au_good_oracle },
    { "metric identities", metric_identities },
    { "augmentation safety", augmentation_safety },
    { "enumeration soundness", enumeration_soundness },
    { "split soundness", split_soundness },
    { "OOD benefit", ood_benefit },
    { "ablation shape", ablation_shape },
    { "determinism", determinism },
  };
  const double limits[] = { 30, 0, 0, 0, 0, 120, 300, 0, 0 };
  int failed = 0;
  for (std::size_t i = 0; i < std::size(criteria); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception &e) {
      o = { false, std::string("exception: ") + e.what() };
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (limits[i] > 0 && secs >= limits[i]) {
      o.pass = false;
      o.detail += "; over time limit";
    }
    failed += !o.pass;
    std::printf("criterion %zu %s: %s (%s; %.1f s)\n", i + 1, criteria[i].first,
                o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
