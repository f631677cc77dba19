//
// Project esiaug - Copyright 2026 The esiaug Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef ESIAUG_PIPELINE_H_
#define ESIAUG_PIPELINE_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "esiaug/io.h"
#include "esiaug/model.h"
#include "esiaug/record.h"

namespace esiaug {

/// One split file per configured threshold. The test side comes from
/// build_ood_splits; when cfg.val_fraction is positive a validation side is
/// carved out of the remaining records the same way, so it is also
/// identity-separated from what stays in training.
std::vector<SplitFile> make_splits(std::span<const EsiRecord> ds,
                                   const RunConfig &cfg);

/// make_splits restricted to a single threshold.
SplitFile make_split(std::span<const EsiRecord> ds, const RunConfig &cfg,
                     double threshold);

struct Partition {
  std::vector<EsiRecord> train;
  std::vector<EsiRecord> val;
  std::vector<EsiRecord> test;
};

Partition partition(std::span<const EsiRecord> ds, const SplitFile &split);

struct SetMetrics {
  std::size_t n = 0;
  double r2 = 0;
  double mae = 0;
};

SetMetrics evaluate(const ModelParams &params, const PreparedSet &set);

/// Train on one partition and score the selected parameters.
struct ArmResult {
  TrainResult train;
  SetMetrics val;
  SetMetrics test;
};

ArmResult run_arm(const Partition &part, const TrainConfig &cfg);

/// Prepared copy of a partition, so several arms share the featurization.
struct PreparedPartition {
  PreparedSet train;
  PreparedSet val;
  PreparedSet test;
};

PreparedPartition prepare(const Partition &part);

ArmResult run_arm(const PreparedPartition &part, const TrainConfig &cfg);

inline constexpr double kLambdaGrid[] = { 0.005, 0.05, 0.5, 5, 50 };
inline constexpr double kMaskGrid[] = { 0.05, 0.10, 0.15, 0.20, 0.25, 0.30 };

struct SweepRow {
  std::string parameter;  // "lambda", "p_s" or "p_g"
  double value = 0;
  ArmResult result;
};

/// One arm per grid value of lambda, all else fixed.
std::vector<SweepRow> sweep_lambda(const PreparedPartition &part,
                                   const TrainConfig &cfg);

/// p_s swept with p_g held at its configured value, then p_g with p_s
/// held.
std::vector<SweepRow> sweep_mask(const PreparedPartition &part,
                                 const TrainConfig &cfg);

/// Index of the row with the highest validation R^2; ties keep the first.
std::size_t best_row(std::span<const SweepRow> rows);

}  // namespace esiaug

#endif  // ESIAUG_PIPELINE_H_
