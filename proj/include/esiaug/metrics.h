//
// Project esiaug - Copyright 2026 The esiaug Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef ESIAUG_METRICS_H_
#define ESIAUG_METRICS_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace esiaug {

/// 1 - SS_res / SS_tot. Throws LengthMismatch for unequal or too short
/// inputs and DegenerateTargets when the targets have zero variance.
double r_squared(std::span<const double> preds,
                 std::span<const double> targets);

double mae(std::span<const double> preds, std::span<const double> targets);

enum class MetricId { kR2, kMae };

std::string_view metric_name(MetricId m);
std::optional<MetricId> metric_from_name(std::string_view name);
bool higher_is_better(MetricId m);

struct GoodPoint {
  double threshold = 0;
  double risk = 0;  // raw metric value; direction comes from the metric id
  double weight = 0;
};

/// Risk as a function of the train/test identity threshold. Points are
/// sorted by strictly increasing threshold and weights sum to one. Each
/// discrete threshold contributes a unit width.
struct GoodCurve {
  MetricId metric = MetricId::kR2;
  std::vector<GoodPoint> points;
  // True when no deployment set was supplied and weights were defaulted.
  bool uniform_weights = true;

  /// Throws std::invalid_argument if an invariant is broken.
  void validate() const;
};

struct SplitPredictions {
  double threshold = 0;
  std::vector<double> preds;
  std::vector<double> targets;
};

/// One point per split, sorted by threshold. Weights default to uniform.
GoodCurve good_curve(std::span<const SplitPredictions> splits, MetricId metric,
                     std::optional<std::vector<double>> weights = {});

/// Curve from externally computed per-threshold metric values.
GoodCurve good_curve(std::span<const double> thresholds,
                     std::span<const double> values, MetricId metric,
                     std::optional<std::vector<double>> weights = {});

/// Normalized histogram of per-query nearest-train identities. Bin i holds
/// maxima in (edges[i-1], edges[i]]; the first bin also takes everything
/// at or below edges[0] and the last everything above edges.back().
std::vector<double> bin_identity_maxima(std::span<const double> maxima,
                                        std::span<const double> edges);

/// Deployment-distribution weights: the nearest-train identity of every
/// target sequence, binned by bin_identity_maxima.
std::vector<double> identity_weights(std::span<const std::string> targets,
                                     std::span<const std::string> train,
                                     std::span<const double> edges);

/// Sum over points of risk * weight * unit width.
double au_good(const GoodCurve &curve);

}  // namespace esiaug

#endif  // ESIAUG_METRICS_H_
