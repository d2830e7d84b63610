//
// Copyright 2026 The FriendlyCore Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "friendlycore/averaging.h"

#include <cmath>
#include <optional>
#include <vector>

#include "friendlycore/friendly_core.h"
#include "friendlycore/predicates.h"
#include "friendlycore/random_source.h"
#include "gtest/gtest.h"

namespace friendlycore {
namespace {

// n points uniform in the ball of radius `radius` around `center`.
PointSet BallCloud(size_t n, const Point& center, double radius,
                   RandomSource& rng) {
  const size_t d = center.size();
  PointSet out;
  while (out.size() < n) {
    Point x(d);
    double s = 0.0;
    for (double& v : x) {
      v = 2.0 * rng.Uniform() - 1.0;
      s += v * v;
    }
    if (s > 1.0) continue;
    for (size_t i = 0; i < d; ++i) x[i] = center[i] + radius * x[i];
    out.push_back(std::move(x));
  }
  return out;
}

double Norm(const Point& x) {
  return std::sqrt(SquaredDistance(x, Point(x.size(), 0.0)));
}

Point Diff(const Point& a, const Point& b) {
  Point out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

TEST(FriendlyAvgTest, EmptyIsBottom) {
  RandomSource rng(1);
  EXPECT_FALSE(FriendlyAvg({}, 1.0, 1e-8, 1.0, rng)->has_value());
  EXPECT_FALSE(FcAvg({}, 1.0, 1e-8, 1.0, rng)->has_value());
}

TEST(FriendlyAvgTest, TinyInputAbortsNoiseFree) {
  RandomSource quiet(2, /*noise_free=*/true);
  const double rho1 = 0.1 * (1.0 - 1e-8);
  ASSERT_LT(FriendlyAvgShiftedCount(2, rho1, 1e-8), 0.0);
  EXPECT_FALSE(FriendlyAvg({{0.0}, {1.0}}, 1.0, 1e-8, 1.0, quiet)->has_value());
}

TEST(FriendlyAvgTest, ZeroRadiusCopiesExact) {
  RandomSource quiet(3, /*noise_free=*/true);
  const PointSet data(100, Point{1.5, -2.0});
  EXPECT_EQ(**FriendlyAvg(data, 1.0, 1e-8, 0.0, quiet), (Point{1.5, -2.0}));
  // sigma is 0 when r = 0, so noise is irrelevant.
  RandomSource noisy(3);
  EXPECT_EQ(**FriendlyAvg(data, 1.0, 1e-8, 0.0, noisy), (Point{1.5, -2.0}));
}

TEST(FriendlyAvgTest, InvalidParameters) {
  RandomSource rng(4);
  EXPECT_FALSE(FriendlyAvg({{0.0}}, 0.0, 1e-8, 1.0, rng).ok());
  EXPECT_FALSE(FriendlyAvg({{0.0}}, 1.0, 0.0, 1.0, rng).ok());
  EXPECT_FALSE(FcAvg({{0.0}}, 1.0, 1e-8, -1.0, rng).ok());
}

TEST(FriendlyAvgTest, BudgetSplits) {
  const FriendlyAvgSplit fixed = *FriendlyAvgBudgetSplit(1.0, 1e-8, 800, {});
  EXPECT_DOUBLE_EQ(fixed.rho1, 0.1 * (1.0 - 1e-8));
  EXPECT_DOUBLE_EQ(fixed.rho2, 0.9);
  FriendlyAvgOptions opt;
  opt.rho1_strategy = Rho1Strategy::kOptimized;
  const FriendlyAvgSplit o = *FriendlyAvgBudgetSplit(1.0, 1e-8, 800, opt);
  const double x = std::pow(std::sqrt(std::log(1e8)) / 800.0, 2.0 / 3.0);
  EXPECT_NEAR(o.rho1, (1.0 - 1e-8) * x, 1e-15);
  EXPECT_NEAR(o.rho2, 1.0 - x, 1e-15);
  // Capped at rho / 2 for tiny n.
  const FriendlyAvgSplit capped = *FriendlyAvgBudgetSplit(1.0, 1e-8, 1, opt);
  EXPECT_NEAR(capped.rho2, 0.5, 1e-15);
}

TEST(FriendlyAvgTest, SensitivityOfFriendlyNeighbors) {
  RandomSource rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const size_t n = 2 + rng.UniformInt(30);
    const size_t d = 1 + rng.UniformInt(4);
    const double r = 0.1 + 5.0 * rng.Uniform();
    // Every point is within r of the center, so the set is dist_r-friendly.
    const PointSet data = BallCloud(n, Point(d, 1.0), r, rng);
    const size_t j = rng.UniformInt(n);
    PointSet removed = data;
    removed.erase(removed.begin() + j);
    ASSERT_LE(Distance(Mean(data), Mean(removed)),
              2.0 * r / static_cast<double>(n) + 1e-12);
  }
}

TEST(FriendlyAvgTest, NoiseVarianceMatchesSigma) {
  const size_t n = 10000;
  const double rho = 1.0;
  const double delta = 1e-6;
  const double r = 2.0;
  const PointSet data(n, Point{0.0, 0.0});
  const FriendlyAvgSplit split = *FriendlyAvgBudgetSplit(rho, delta, n, {});
  const double sigma = FriendlyAvgNoiseScale(
      r, FriendlyAvgShiftedCount(n, split.rho1, delta), split.rho2);
  RandomSource rng(6);
  const int reps = 10000;
  double s2 = 0.0;
  for (int i = 0; i < reps; ++i) {
    const Point out = **FriendlyAvg(data, rho, delta, r, rng);
    s2 += out[0] * out[0];
  }
  EXPECT_NEAR(s2 / reps / (sigma * sigma), 1.0, 0.1);
}

TEST(FcAvgTest, LedgerChargesFullBudget) {
  RandomSource rng(7);
  BudgetLedger ledger;
  const PointSet data(300, Point{1.0});
  ASSERT_TRUE(FcAvg(data, 2.0, 1e-6, 1.0, rng, {}, &ledger).ok());
  EXPECT_DOUBLE_EQ(ledger.TotalRho(), 2.0);
  EXPECT_DOUBLE_EQ(ledger.TotalDelta(), 1e-6);
}

TEST(FcAvgTest, AccuracyOnCompleteData) {
  const double rho = 4.0;
  const double delta = 1e-6;
  const double beta = 0.05;
  const double r = 1.0;
  const size_t d = 10;
  const size_t n = 700;
  ASSERT_LE(*MinNForCompleteness(0.0, beta, delta / 2.0, 0.1 * rho),
            static_cast<int64_t>(n));
  // Error bound from the noise formula: sigma (sqrt(d) + sqrt(2 ln(2/beta)))
  // with n_hat at its lower (beta / 2)-tail.
  const FriendlyAvgSplit split =
      *FriendlyAvgBudgetSplit(0.9 * rho, delta / 2.0, n, {});
  const double n_hat_lo = FriendlyAvgShiftedCount(n, split.rho1, delta / 2.0) -
                          std::sqrt(1.0 / (2.0 * split.rho1)) *
                              std::sqrt(2.0 * std::log(2.0 / beta));
  const double bound =
      FriendlyAvgNoiseScale(r, n_hat_lo, split.rho2) *
      (std::sqrt(double(d)) + std::sqrt(2.0 * std::log(2.0 / beta)));
  RandomSource rng(8);
  const int trials = 200;
  int good = 0;
  for (int t = 0; t < trials; ++t) {
    const PointSet data = BallCloud(n, Point(d, 3.0), r / 2.0, rng);
    const std::optional<Point> out = *FcAvg(data, rho, delta, r, rng);
    if (out.has_value() && Distance(*out, Mean(data)) <= bound) ++good;
  }
  // Core completeness, the n_hat tail and the norm tail each fail w.p. at
  // most beta / 2 or beta.
  const double p = 1.0 - 2.0 * beta;
  EXPECT_GE(good, trials * p - 3.0 * std::sqrt(trials * p * (1.0 - p)));
}

TEST(FcAvgTest, OutliersDoNotMoveTheEstimateFar) {
  const double rho = 4.0;
  const double delta = 1e-6;
  const double r = 1.0;
  const size_t n = 700;
  RandomSource rng(9);
  int good = 0;
  const int trials = 50;
  for (int t = 0; t < trials; ++t) {
    PointSet data = BallCloud(n - 5, Point{0.0, 0.0}, 0.01, rng);
    const Point cluster_mean = Mean(data);
    for (int i = 0; i < 5; ++i) data.push_back({1000.0 * (i + 1), 0.0});
    const std::optional<Point> out = *FcAvg(data, rho, delta, r, rng);
    // Five outliers can shift the core mean by at most 5 r / n, plus noise
    // well under r / 10 at this n.
    if (out.has_value() && Distance(*out, cluster_mean) <= 5.0 * r / n + 0.1)
      ++good;
  }
  EXPECT_GE(good, 45);
}

TEST(CheckDiamTest, NoiseFreeExamples) {
  RandomSource quiet(10, /*noise_free=*/true);
  const PointSet tight(50, Point{0.0});
  EXPECT_TRUE(*CheckDiam(tight, 1.0, 0.1, 0.5, quiet));
  PointSet split(25, Point{0.0});
  for (int i = 0; i < 25; ++i) split.push_back({10.0});
  // a = 25 while the threshold is 50 - sqrt(4 ln 10) > 25.
  EXPECT_FALSE(*CheckDiam(split, 1.0, 0.1, 1.0, quiet));
  EXPECT_FALSE(CheckDiam({}, 1.0, 0.1, 1.0, quiet).ok());
  EXPECT_DOUBLE_EQ(*MeanFriendCount(split, 1.0), 25.0);
}

TEST(CheckDiamTest, CompleteAcceptsWithProbabilityOneMinusBeta) {
  RandomSource rng(11);
  const PointSet data(40, Point{0.0, 0.0});
  const double beta = 0.05;
  const int trials = 1000;
  int accepted = 0;
  for (int t = 0; t < trials; ++t)
    accepted += *CheckDiam(data, 1.0, beta, 0.1, rng);
  EXPECT_GE(accepted, trials * (1.0 - beta));
}

TEST(CheckDiamTest, NoiseFreeAcceptSetIsUpwardClosed) {
  RandomSource data_rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const PointSet data = BallCloud(60, Point{0.0, 0.0}, 5.0, data_rng);
    RandomSource quiet(13, /*noise_free=*/true);
    bool seen_pass = false;
    for (double r = 0.1; r < 12.0; r *= 1.3) {
      const bool pass = *CheckDiam(data, 1.0, 0.1, r, quiet);
      if (seen_pass) {
        ASSERT_TRUE(pass) << "r = " << r;
      }
      seen_pass = seen_pass || pass;
    }
    EXPECT_TRUE(seen_pass);
  }
}

TEST(FindDiamTest, PlanCountsProbes) {
  const FindDiamPlan plan = *MakeFindDiamPlan(1.0, 0.1, 0.4, 6.4, 2.0);
  EXPECT_EQ(plan.top_exponent, 4);
  EXPECT_EQ(plan.probes, 3);
  EXPECT_DOUBLE_EQ(plan.rho_per_probe, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(plan.beta_per_probe, 0.1 / 3.0);
  EXPECT_FALSE(MakeFindDiamPlan(1.0, 0.1, 1.0, 0.5, 2.0).ok());
  EXPECT_FALSE(MakeFindDiamPlan(1.0, 0.1, 0.4, 6.4, 1.0).ok());
}

TEST(FindDiamTest, HandTracedGrid) {
  // Per probe (rho, beta) = (100/3, 0.1/3): the slack sqrt(4 ln(30) / 33.3)
  // is about 0.64, so r = 0.8 (a = 1) fails and r = 1.6 (a = 2) passes.
  RandomSource quiet(14, /*noise_free=*/true);
  BudgetLedger ledger;
  EXPECT_DOUBLE_EQ(
      *FindDiam({{0.0}, {1.0}}, 100.0, 0.1, 0.4, 6.4, 2.0, quiet, &ledger),
      1.6);
  EXPECT_DOUBLE_EQ(ledger.TotalRho(), 100.0);
}

TEST(FindDiamTest, DiameterAtRMin) {
  RandomSource quiet(15, /*noise_free=*/true);
  EXPECT_DOUBLE_EQ(*FindDiam({{0.0}, {0.4}}, 100.0, 0.1, 0.4, 6.4, 2.0, quiet),
                   0.4);
}

TEST(FindDiamTest, AllProbesFailGivesRMax) {
  RandomSource quiet(16, /*noise_free=*/true);
  EXPECT_DOUBLE_EQ(
      *FindDiam({{0.0}, {100.0}}, 100.0, 0.1, 0.4, 6.4, 2.0, quiet), 6.4);
}

TEST(FcAvgUnknownDiamTest, ZeroDiameterExactNoiseFree) {
  RandomSource quiet(17, /*noise_free=*/true);
  const PointSet data(2000, Point{0.25, -1.0, 4.0});
  BudgetLedger ledger;
  const std::optional<Point> out =
      *FcAvgUnknownDiam(data, 1.0, 1e-6, 0.1, 1e-3, 10.0, quiet, {}, &ledger);
  ASSERT_TRUE(out.has_value());
  EXPECT_EQ(*out, data[0]);
  EXPECT_NEAR(ledger.TotalRho(), 1.0, 1e-12);
}

TEST(FcAvgUnknownDiamTest, SmallInputUsuallyAborts) {
  RandomSource rng(18);
  int bottoms = 0;
  for (int t = 0; t < 20; ++t) {
    const PointSet data = BallCloud(10, Point{0.0}, 1.0, rng);
    bottoms +=
        FcAvgUnknownDiam(data, 1.0, 1e-8, 0.1, 1e-3, 10.0, rng)->has_value()
            ? 0
            : 1;
  }
  EXPECT_GE(bottoms, 18);
}

TEST(MeanTest, Coordinatewise) {
  EXPECT_EQ(Mean({{1.0, 2.0}, {3.0, 6.0}}), (Point{2.0, 4.0}));
  EXPECT_EQ(Norm(Diff({3.0, 4.0}, {0.0, 0.0})), 5.0);
}

}  // namespace
}  // namespace friendlycore
