//
// Project esiaug - Copyright 2026 The esiaug Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "esiaug/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "esiaug/error.h"
#include "esiaug/seqid.h"

namespace esiaug {
namespace {
void check_lengths(std::span<const double> preds,
                   std::span<const double> targets, std::size_t min_len) {
  if (preds.size() != targets.size())
    throw LengthMismatch("predictions and targets differ in length ("
                         + std::to_string(preds.size()) + " vs "
                         + std::to_string(targets.size()) + ")");
  if (preds.size() < min_len)
    throw LengthMismatch("need at least " + std::to_string(min_len)
                         + " samples");
}

std::vector<double> resolve_weights(std::size_t n,
                                    std::optional<std::vector<double>> w,
                                    bool &uniform) {
  uniform = !w.has_value();
  if (!w)
    return std::vector<double>(n, 1.0 / static_cast<double>(n));
  if (w->size() != n)
    throw LengthMismatch("one weight per curve point required");
  return std::move(*w);
}
}  // namespace

double r_squared(std::span<const double> preds,
                 std::span<const double> targets) {
  check_lengths(preds, targets, 2);
  const double mean = std::accumulate(targets.begin(), targets.end(), 0.0)
                      / static_cast<double>(targets.size());
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    ss_res += (targets[i] - preds[i]) * (targets[i] - preds[i]);
    ss_tot += (targets[i] - mean) * (targets[i] - mean);
  }
  if (ss_tot == 0.0)
    throw DegenerateTargets("targets have zero variance");
  return 1.0 - ss_res / ss_tot;
}

double mae(std::span<const double> preds, std::span<const double> targets) {
  check_lengths(preds, targets, 1);
  double sum = 0;
  for (std::size_t i = 0; i < targets.size(); ++i)
    sum += std::abs(targets[i] - preds[i]);
  return sum / static_cast<double>(targets.size());
}

std::string_view metric_name(MetricId m) {
  return m == MetricId::kR2 ? "r2" : "mae";
}

std::optional<MetricId> metric_from_name(std::string_view name) {
  if (name == "r2")
    return MetricId::kR2;
  if (name == "mae")
    return MetricId::kMae;
  return std::nullopt;
}

bool higher_is_better(MetricId m) {
  return m == MetricId::kR2;
}

void GoodCurve::validate() const {
  if (points.empty())
    throw std::invalid_argument("GOOD curve has no points");
  double sum = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i > 0 && !(points[i].threshold > points[i - 1].threshold))
      throw std::invalid_argument("GOOD curve thresholds not increasing");
    if (!(points[i].weight >= 0))
      throw std::invalid_argument("negative GOOD curve weight");
    sum += points[i].weight;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("GOOD curve weights do not sum to 1");
}

GoodCurve good_curve(std::span<const double> thresholds,
                     std::span<const double> values, MetricId metric,
                     std::optional<std::vector<double>> weights) {
  if (thresholds.size() != values.size())
    throw LengthMismatch("one metric value per threshold required");
  if (thresholds.size() < 2)
    throw LengthMismatch("a GOOD curve needs at least two splits");

  GoodCurve curve;
  curve.metric = metric;
  std::vector<double> w =
      resolve_weights(thresholds.size(), std::move(weights),
                      curve.uniform_weights);
  for (std::size_t i = 0; i < thresholds.size(); ++i)
    curve.points.push_back({ thresholds[i], values[i], w[i] });
  std::sort(curve.points.begin(), curve.points.end(),
            [](const GoodPoint &a, const GoodPoint &b) {
              return a.threshold < b.threshold;
            });
  curve.validate();
  return curve;
}

GoodCurve good_curve(std::span<const SplitPredictions> splits, MetricId metric,
                     std::optional<std::vector<double>> weights) {
  std::vector<double> thresholds, values;
  for (const SplitPredictions &s: splits) {
    thresholds.push_back(s.threshold);
    values.push_back(metric == MetricId::kR2 ? r_squared(s.preds, s.targets)
                                             : mae(s.preds, s.targets));
  }
  return good_curve(thresholds, values, metric, std::move(weights));
}

std::vector<double> bin_identity_maxima(std::span<const double> maxima,
                                        std::span<const double> edges) {
  if (edges.empty() || maxima.empty())
    throw LengthMismatch("identity weights need bins and queries");

  std::vector<double> counts(edges.size(), 0.0);
  for (double m: maxima) {
    auto it = std::lower_bound(edges.begin(), edges.end(), m);
    std::size_t bin = it == edges.end() ? edges.size() - 1
                                        : static_cast<std::size_t>(
                                            it - edges.begin());
    counts[bin] += 1.0;
  }
  for (double &c: counts)
    c /= static_cast<double>(maxima.size());
  return counts;
}

std::vector<double> identity_weights(std::span<const std::string> targets,
                                     std::span<const std::string> train,
                                     std::span<const double> edges) {
  if (targets.empty() || train.empty())
    throw LengthMismatch("identity weights need target and train sequences");
  std::vector<double> maxima = max_identity_to_train(targets, train);
  return bin_identity_maxima(maxima, edges);
}

double au_good(const GoodCurve &curve) {
  curve.validate();
  constexpr double kWidth = 1.0;
  double sum = 0;
  for (const GoodPoint &p: curve.points)
    sum += p.risk * p.weight * kWidth;
  return sum;
}

}  // namespace esiaug
