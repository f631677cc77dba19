//
// Project esiaug - Copyright 2026 The esiaug Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "esiaug/pipeline.h"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "esiaug/error.h"
#include "esiaug/metrics.h"
#include "esiaug/rng.h"
#include "esiaug/seqid.h"

namespace esiaug {

namespace {

constexpr std::uint64_t kValStream = 0x76616c;

SplitFile from_ood(std::span<const EsiRecord> ds, const OodSplit &test,
                   const std::vector<std::string> &val_ids,
                   const RunConfig &cfg) {
  const std::unordered_set<std::string_view> test_ids(test.test_ids.begin(),
                                                      test.test_ids.end());
  const std::unordered_set<std::string_view> val(val_ids.begin(), val_ids.end());
  SplitFile s;
  s.threshold = test.threshold;
  s.seed = cfg.seed;
  s.config_hash = config_hash(cfg);
  for (const EsiRecord &r: ds) {
    s.ids.push_back(r.id);
    s.roles.push_back(test_ids.contains(r.id) ? SplitRole::kTest
                      : val.contains(r.id)    ? SplitRole::kVal
                                              : SplitRole::kTrain);
  }
  return s;
}

std::vector<std::string> carve_val(std::span<const EsiRecord> ds,
                                   const OodSplit &test, const RunConfig &cfg,
                                   std::size_t index) {
  if (cfg.val_fraction <= 0.0)
    return {};
  const std::unordered_set<std::string_view> held(test.test_ids.begin(),
                                                  test.test_ids.end());
  std::vector<EsiRecord> rest;
  for (const EsiRecord &r: ds)
    if (!held.contains(r.id))
      rest.push_back(r);
  const double fraction =
      cfg.val_fraction * static_cast<double>(ds.size()) / rest.size();
  const double t[] = { test.threshold };
  const std::vector<OodSplit> v = build_ood_splits(
      rest, t, std::min(fraction, 0.5), derive_seed(cfg.seed, { kValStream, index }));
  return v.front().test_ids;
}

}  // namespace

std::vector<SplitFile> make_splits(std::span<const EsiRecord> ds,
                                   const RunConfig &cfg) {
  cfg.validate();
  const std::vector<OodSplit> tests =
      build_ood_splits(ds, cfg.thresholds, cfg.test_fraction, cfg.seed);
  std::vector<SplitFile> out;
  for (std::size_t i = 0; i < tests.size(); ++i)
    out.push_back(from_ood(ds, tests[i], carve_val(ds, tests[i], cfg, i), cfg));
  return out;
}

SplitFile make_split(std::span<const EsiRecord> ds, const RunConfig &cfg,
                     double threshold) {
  RunConfig one = cfg;
  one.thresholds = { threshold };
  SplitFile s = make_splits(ds, one).front();
  s.config_hash = config_hash(cfg);
  return s;
}

Partition partition(std::span<const EsiRecord> ds, const SplitFile &split) {
  return { select_records(ds, split, SplitRole::kTrain),
           select_records(ds, split, SplitRole::kVal),
           select_records(ds, split, SplitRole::kTest) };
}

SetMetrics evaluate(const ModelParams &params, const PreparedSet &set) {
  SetMetrics m;
  m.n = set.size();
  if (m.n == 0)
    return m;
  const std::vector<double> preds = predict(params, set);
  const std::vector<double> targets = set.targets();
  m.mae = mae(preds, targets);
  m.r2 = m.n >= 2 ? r_squared(preds, targets) : 0.0;
  return m;
}

PreparedPartition prepare(const Partition &part) {
  return { prepare(part.train), prepare(part.val), prepare(part.test) };
}

ArmResult run_arm(const PreparedPartition &part, const TrainConfig &cfg) {
  ArmResult r;
  r.train = train(part.train, part.val, cfg);
  r.val = evaluate(r.train.params, part.val);
  r.test = evaluate(r.train.params, part.test);
  return r;
}

ArmResult run_arm(const Partition &part, const TrainConfig &cfg) {
  return run_arm(prepare(part), cfg);
}

std::vector<SweepRow> sweep_lambda(const PreparedPartition &part,
                                   const TrainConfig &cfg) {
  std::vector<SweepRow> rows;
  for (double lambda: kLambdaGrid) {
    TrainConfig c = cfg;
    c.lambda = lambda;
    rows.push_back({ "lambda", lambda, run_arm(part, c) });
  }
  return rows;
}

std::vector<SweepRow> sweep_mask(const PreparedPartition &part,
                                 const TrainConfig &cfg) {
  std::vector<SweepRow> rows;
  for (const char *which: { "p_s", "p_g" })
    for (double p: kMaskGrid) {
      TrainConfig c = cfg;
      (which[2] == 's' ? c.augment.p_s : c.augment.p_g) = p;
      rows.push_back({ which, p, run_arm(part, c) });
    }
  return rows;
}

std::size_t best_row(std::span<const SweepRow> rows) {
  if (rows.empty())
    throw EmptyDataset("empty sweep");
  std::size_t best = 0;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].result.val.r2 > rows[best].result.val.r2)
      best = i;
  return best;
}

}  // namespace esiaug
