//
// Project esiaug - Copyright 2026 The esiaug Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "esiaug/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "esiaug/error.h"
#include "esiaug/rng.h"

namespace esiaug {
namespace {
std::vector<double> random_vector(std::size_t n, Rng &rng) {
  std::vector<double> v(n);
  for (double &x: v)
    x = rng.normal();
  return v;
}

TEST(RSquaredTest, Examples) {
  std::vector<double> t { 0, 1, 2 };
  EXPECT_DOUBLE_EQ(r_squared(t, t), 1.0);
  std::vector<double> mean(3, 1.0);
  EXPECT_DOUBLE_EQ(r_squared(mean, t), 0.0);
  // SS_res = 1, SS_tot = 2.
  EXPECT_EQ(r_squared(std::vector<double> { 0, 1, 1 }, t), 0.5);
}

TEST(RSquaredTest, Errors) {
  std::vector<double> flat { 2, 2, 2 };
  EXPECT_THROW(r_squared(flat, flat), DegenerateTargets);
  EXPECT_THROW(r_squared(std::vector<double> { 1 }, std::vector<double> { 1 }),
               LengthMismatch);
  EXPECT_THROW(r_squared(std::vector<double> { 1, 2 },
                         std::vector<double> { 1, 2, 3 }),
               LengthMismatch);
}

TEST(RSquaredTest, NeverAboveOne) {
  Rng rng(31);
  for (int t = 0; t < 200; ++t) {
    std::size_t n = 2 + rng.below(30);
    std::vector<double> y = random_vector(n, rng), p = random_vector(n, rng);
    EXPECT_LE(r_squared(p, y), 1.0);
    EXPECT_LT(r_squared(p, y), 1.0);
  }
}

TEST(MaeTest, Examples) {
  std::vector<double> t { 1, -3 };
  EXPECT_EQ(mae(t, t), 0.0);
  EXPECT_EQ(mae(std::vector<double> { 0, 0 }, t), 2.0);
  EXPECT_THROW(mae(std::vector<double> {}, std::vector<double> {}),
               LengthMismatch);
  EXPECT_THROW(mae(std::vector<double> { 1 }, std::vector<double> { 1, 2 }),
               LengthMismatch);
}

TEST(MaeTest, ScaleEquivariance) {
  Rng rng(32);
  for (double c: { -3.0, -0.5, 0.0, 2.0, 10.0 }) {
    std::vector<double> p = random_vector(17, rng), y = random_vector(17, rng);
    std::vector<double> cp = p, cy = y;
    for (double &x: cp)
      x *= c;
    for (double &x: cy)
      x *= c;
    EXPECT_NEAR(mae(cp, cy), std::abs(c) * mae(p, y), 1e-12);
  }
}

TEST(GoodCurveTest, EchoesExternalValues) {
  // Four identity thresholds with externally supplied per-split R^2.
  const std::vector<double> thresholds { 0.4, 0.6, 0.8, 0.99 };
  const std::vector<double> r2 { 0.31, 0.42, 0.55, 0.68 };
  GoodCurve c = good_curve(thresholds, r2, MetricId::kR2);
  ASSERT_EQ(c.points.size(), 4);
  EXPECT_TRUE(c.uniform_weights);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(c.points[i].threshold, thresholds[i]);
    EXPECT_EQ(c.points[i].risk, r2[i]);
    EXPECT_EQ(c.points[i].weight, 0.25);
  }
}

TEST(GoodCurveTest, OrderIndependent) {
  std::vector<double> thresholds { 0.8, 0.4, 0.99, 0.6 };
  std::vector<double> vals { 3, 1, 4, 2 };
  std::vector<double> w { 0.1, 0.2, 0.3, 0.4 };
  GoodCurve a = good_curve(thresholds, vals, MetricId::kMae, w);
  EXPECT_FALSE(a.uniform_weights);
  std::vector<double> st { 0.4, 0.6, 0.8, 0.99 }, sv { 1, 2, 3, 4 },
      sw { 0.2, 0.4, 0.1, 0.3 };
  GoodCurve b = good_curve(st, sv, MetricId::kMae, sw);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(a.points[i].threshold, b.points[i].threshold);
    EXPECT_EQ(a.points[i].risk, b.points[i].risk);
    EXPECT_EQ(a.points[i].weight, b.points[i].weight);
  }
  EXPECT_EQ(au_good(a), au_good(b));
}

TEST(GoodCurveTest, ConstantPredictorGivesMeanAbsoluteDeviation) {
  std::vector<SplitPredictions> splits;
  Rng rng(33);
  for (double t: { 0.4, 0.6, 0.8 }) {
    SplitPredictions s;
    s.threshold = t;
    s.targets = random_vector(25, rng);
    s.preds.assign(25, 0.7);
    splits.push_back(s);
  }
  GoodCurve c = good_curve(splits, MetricId::kMae);
  for (std::size_t i = 0; i < splits.size(); ++i) {
    double dev = 0;
    for (double y: splits[i].targets)
      dev += std::abs(y - 0.7);
    EXPECT_NEAR(c.points[i].risk, dev / 25, 1e-12);
  }
}

TEST(GoodCurveTest, Invariants) {
  std::vector<double> dup { 0.4, 0.4 }, vals { 1, 2 };
  EXPECT_THROW(good_curve(dup, vals, MetricId::kMae), std::invalid_argument);
  std::vector<double> one { 0.4 }, v1 { 1 };
  EXPECT_THROW(good_curve(one, v1, MetricId::kMae), LengthMismatch);
  std::vector<double> t2 { 0.4, 0.6 };
  EXPECT_THROW(good_curve(t2, vals, MetricId::kMae,
                          std::vector<double> { 0.5, 0.6 }),
               std::invalid_argument);
  EXPECT_THROW(good_curve(t2, vals, MetricId::kMae,
                          std::vector<double> { 1.5, -0.5 }),
               std::invalid_argument);
}

TEST(IdentityWeightsTest, IdenticalTargetsFillTopBin) {
  std::vector<std::string> train { "MKTAYIAKQR", "GGGGGGGGGG" };
  std::vector<std::string> targets { "MKTAYIAKQR", "GGGGGGGGGG" };
  std::vector<double> edges { 0.4, 0.6, 0.8, 0.99 };
  EXPECT_EQ(identity_weights(targets, train, edges),
            (std::vector<double> { 0, 0, 0, 1 }));
}

TEST(IdentityWeightsTest, UniformMaximaGiveUniformWeights) {
  std::vector<double> edges { 0.4, 0.6, 0.8, 0.99 };
  std::vector<double> maxima { 0.1, 0.3, 0.45, 0.6, 0.7, 0.75, 0.85, 1.0 };
  EXPECT_EQ(bin_identity_maxima(maxima, edges),
            (std::vector<double> { 0.25, 0.25, 0.25, 0.25 }));
}

TEST(IdentityWeightsTest, SumToOne) {
  Rng rng(34);
  std::vector<double> edges { 0.4, 0.6, 0.8, 0.99 };
  for (int t = 0; t < 50; ++t) {
    std::vector<double> maxima(1 + rng.below(40));
    for (double &m: maxima)
      m = rng.uniform();
    std::vector<double> w = bin_identity_maxima(maxima, edges);
    EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-12);
  }
}

TEST(AuGoodTest, Examples) {
  std::vector<double> t { 0.4, 0.6, 0.8, 0.99 };
  std::vector<double> r { 0.4, 0.3, 0.2, 0.1 };
  EXPECT_NEAR(au_good(good_curve(t, r, MetricId::kMae)), 0.25, 1e-15);

  std::vector<double> w { 0, 0, 1, 0 };
  EXPECT_EQ(au_good(good_curve(t, r, MetricId::kMae, w)), 0.2);
}

TEST(AuGoodTest, PointwiseDominance) {
  Rng rng(35);
  std::vector<double> t { 0.4, 0.6, 0.8, 0.99 };
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(4), b(4), w(4);
    double sum = 0;
    for (int i = 0; i < 4; ++i) {
      a[i] = rng.uniform(0, 2);
      b[i] = a[i] + rng.uniform(0, 1);
      w[i] = rng.uniform();
      sum += w[i];
    }
    for (double &x: w)
      x /= sum;
    EXPECT_LE(au_good(good_curve(t, a, MetricId::kMae, w)),
              au_good(good_curve(t, b, MetricId::kMae, w)));
  }
}

TEST(MetricIdTest, Names) {
  EXPECT_EQ(metric_from_name("r2"), MetricId::kR2);
  EXPECT_EQ(metric_from_name("mae"), MetricId::kMae);
  EXPECT_FALSE(metric_from_name("rmse").has_value());
  EXPECT_TRUE(higher_is_better(MetricId::kR2));
  EXPECT_FALSE(higher_is_better(MetricId::kMae));
}
}  // namespace
}  // namespace esiaug
