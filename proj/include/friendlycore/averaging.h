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

#ifndef FRIENDLYCORE_AVERAGING_H_
#define FRIENDLYCORE_AVERAGING_H_

#include <optional>

#include "absl/status/statusor.h"
#include "friendlycore/predicates.h"
#include "friendlycore/privacy_core.h"
#include "friendlycore/random_source.h"

namespace friendlycore {

// How FriendlyAvg divides rho between the size estimate and the mean.
enum class Rho1Strategy {
  // rho_1 = 0.1 (1 - delta) rho, rho_2 = 0.9 rho.
  kFixed,
  // x = min((sqrt(ln(1/delta)) rho / n)^(2/3), rho / 2),
  // rho_1 = (1 - delta) x, rho_2 = rho - x.
  kOptimized,
};

struct FriendlyAvgOptions {
  Rho1Strategy rho1_strategy = Rho1Strategy::kFixed;
};

struct FriendlyAvgSplit {
  double rho1 = 0.0;
  double rho2 = 0.0;
};

absl::StatusOr<FriendlyAvgSplit> FriendlyAvgBudgetSplit(
    double rho, double delta, size_t n, const FriendlyAvgOptions& options);

// Noise-free size estimate n - sqrt(ln(1/delta)/rho_1) - 1.
double FriendlyAvgShiftedCount(size_t n, double rho1, double delta);

// sigma = (2 r / n_hat) / sqrt(2 rho_2).
double FriendlyAvgNoiseScale(double r, double n_hat, double rho2);

// Private mean of a dist_r-friendly point set. std::nullopt is the abort
// outcome, returned when n = 0 or the noisy size estimate is <= 0.
absl::StatusOr<std::optional<Point>> FriendlyAvg(
    const PointSet& data, double rho, double delta, double r, RandomSource& rng,
    const FriendlyAvgOptions& options = {}, BudgetLedger* ledger = nullptr);

// FriendlyCore(dist_r, 0.1 rho, delta/2) followed by
// FriendlyAvg(core, 0.9 rho, delta/2, r).
absl::StatusOr<std::optional<Point>> FcAvg(
    const PointSet& data, double rho, double delta, double r, RandomSource& rng,
    const FriendlyAvgOptions& options = {}, BudgetLedger* ledger = nullptr);

// a = (1/n) sum_i #{j : ||x_i - x_j|| <= r}.
absl::StatusOr<double> MeanFriendCount(const PointSet& data, double r);

// Accepts iff a + N(0, 2/rho) >= n - sqrt(4 ln(1/beta) / rho).
absl::StatusOr<bool> CheckDiam(const PointSet& data, double rho, double beta,
                               double r, RandomSource& rng,
                               BudgetLedger* ledger = nullptr);

// Search grid and per-probe parameters of FindDiam.
struct FindDiamPlan {
  int top_exponent = 0;  // grid is r_min * b^j for j = 0..top_exponent
  int probes = 0;        // ceil(log2(top_exponent + 1))
  double rho_per_probe = 0.0;
  double beta_per_probe = 0.0;
};

absl::StatusOr<FindDiamPlan> MakeFindDiamPlan(double rho, double beta,
                                              double r_min, double r_max,
                                              double b);

// Binary search for the smallest grid radius accepted by CheckDiam. The top
// grid point is never probed: it is the answer when every probe fails, and is
// reported as r_max.
absl::StatusOr<double> FindDiam(const PointSet& data, double rho, double beta,
                                double r_min, double r_max, double b,
                                RandomSource& rng,
                                BudgetLedger* ledger = nullptr);

// r = FindDiam(0.1 rho, beta/2, r_min, r_max, b = 1.5), then
// FcAvg(0.9 rho, delta, r).
absl::StatusOr<std::optional<Point>> FcAvgUnknownDiam(
    const PointSet& data, double rho, double delta, double beta, double r_min,
    double r_max, RandomSource& rng, const FriendlyAvgOptions& options = {},
    BudgetLedger* ledger = nullptr);

// Coordinate-wise mean. Requires a nonempty set.
Point Mean(const PointSet& data);

}  // namespace friendlycore

#endif  // FRIENDLYCORE_AVERAGING_H_
