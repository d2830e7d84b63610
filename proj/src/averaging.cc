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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "friendlycore/friendly_core.h"

namespace friendlycore {
namespace {

absl::Status CheckRhoDelta(double rho, double delta) {
  if (!(rho > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("rho must be positive: ", rho));
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must be in (0, 1): ", delta));
  }
  return absl::OkStatus();
}

}  // namespace

Point Mean(const PointSet& data) {
  Point mean(data.front().size(), 0.0);
  for (const Point& p : data) {
    for (size_t j = 0; j < mean.size(); ++j) mean[j] += p[j];
  }
  const double n = static_cast<double>(data.size());
  for (double& v : mean) v /= n;
  return mean;
}

absl::StatusOr<FriendlyAvgSplit> FriendlyAvgBudgetSplit(
    double rho, double delta, size_t n, const FriendlyAvgOptions& options) {
  if (absl::Status s = CheckRhoDelta(rho, delta); !s.ok()) return s;
  if (options.rho1_strategy == Rho1Strategy::kFixed || n == 0) {
    return FriendlyAvgSplit{0.1 * (1.0 - delta) * rho, 0.9 * rho};
  }
  const double base =
      std::sqrt(std::log(1.0 / delta)) * rho / static_cast<double>(n);
  const double x = std::min(std::cbrt(base * base), 0.5 * rho);
  return FriendlyAvgSplit{(1.0 - delta) * x, rho - x};
}

double FriendlyAvgShiftedCount(size_t n, double rho1, double delta) {
  return static_cast<double>(n) - std::sqrt(std::log(1.0 / delta) / rho1) - 1.0;
}

double FriendlyAvgNoiseScale(double r, double n_hat, double rho2) {
  return (2.0 * r / n_hat) / std::sqrt(2.0 * rho2);
}

absl::StatusOr<std::optional<Point>> FriendlyAvg(
    const PointSet& data, double rho, double delta, double r, RandomSource& rng,
    const FriendlyAvgOptions& options, BudgetLedger* ledger) {
  if (absl::Status s = CheckRhoDelta(rho, delta); !s.ok()) return s;
  if (!(r >= 0.0)) return absl::InvalidArgumentError("r must be nonnegative");
  if (absl::Status s = ValidatePointSet(data); !s.ok()) return s;
  ChargeIfPresent(ledger, "friendly_avg", rho, delta);
  const size_t n = data.size();
  if (n == 0) return std::optional<Point>();
  absl::StatusOr<FriendlyAvgSplit> split =
      FriendlyAvgBudgetSplit(rho, delta, n, options);
  if (!split.ok()) return split.status();
  const double n_hat = FriendlyAvgShiftedCount(n, split->rho1, delta) +
                       rng.GaussianNoise(std::sqrt(1.0 / (2.0 * split->rho1)));
  if (!(n_hat > 0.0)) return std::optional<Point>();
  const double sigma = FriendlyAvgNoiseScale(r, n_hat, split->rho2);
  return std::optional<Point>(AddGaussianNoise(Mean(data), sigma, rng));
}

absl::StatusOr<std::optional<Point>> FcAvg(const PointSet& data, double rho,
                                           double delta, double r,
                                           RandomSource& rng,
                                           const FriendlyAvgOptions& options,
                                           BudgetLedger* ledger) {
  if (absl::Status s = CheckRhoDelta(rho, delta); !s.ok()) return s;
  if (!(r >= 0.0)) return absl::InvalidArgumentError("r must be nonnegative");
  if (absl::Status s = ValidatePointSet(data); !s.ok()) return s;
  absl::StatusOr<PointSet> core = FriendlyCore(
      data, MakeDistPredicate(r), 0.1 * rho, delta / 2.0, rng, ledger);
  if (!core.ok()) return core.status();
  return FriendlyAvg(*core, 0.9 * rho, delta / 2.0, r, rng, options, ledger);
}

absl::StatusOr<double> MeanFriendCount(const PointSet& data, double r) {
  if (absl::Status s = ValidatePointSet(data); !s.ok()) return s;
  absl::StatusOr<FriendCounts> counts =
      FriendCountsExact(data, MakeDistPredicate(r));
  if (!counts.ok()) return counts.status();
  double total = 0.0;
  for (double c : counts->counts) total += c;
  return total / static_cast<double>(data.size());
}

absl::StatusOr<bool> CheckDiam(const PointSet& data, double rho, double beta,
                               double r, RandomSource& rng,
                               BudgetLedger* ledger) {
  if (!(rho > 0.0)) return absl::InvalidArgumentError("rho must be positive");
  if (!(beta > 0.0 && beta < 1.0)) {
    return absl::InvalidArgumentError("beta must be in (0, 1)");
  }
  absl::StatusOr<double> a = MeanFriendCount(data, r);
  if (!a.ok()) return a.status();
  ChargeIfPresent(ledger, "check_diam", rho, 0.0);
  const double a_hat = *a + rng.GaussianNoise(std::sqrt(2.0 / rho));
  const double n = static_cast<double>(data.size());
  return a_hat >= n - std::sqrt(4.0 * std::log(1.0 / beta) / rho);
}

absl::StatusOr<FindDiamPlan> MakeFindDiamPlan(double rho, double beta,
                                              double r_min, double r_max,
                                              double b) {
  if (!(r_min > 0.0 && r_min < r_max) || !std::isfinite(r_max)) {
    return absl::InvalidArgumentError("need 0 < r_min < r_max < inf");
  }
  if (!(b > 1.0)) return absl::InvalidArgumentError("b must exceed 1");
  if (!(rho > 0.0)) return absl::InvalidArgumentError("rho must be positive");
  if (!(beta > 0.0 && beta < 1.0)) {
    return absl::InvalidArgumentError("beta must be in (0, 1)");
  }
  // The tolerance keeps exact powers of b from rounding up to an extra step.
  const double t = std::log(r_max / r_min) / std::log(b);
  FindDiamPlan plan;
  plan.top_exponent = std::max(1, static_cast<int>(std::ceil(t - 1e-9)));
  plan.probes = 0;
  while ((1 << plan.probes) < plan.top_exponent + 1) ++plan.probes;
  plan.rho_per_probe = rho / plan.probes;
  plan.beta_per_probe = beta / plan.probes;
  return plan;
}

absl::StatusOr<double> FindDiam(const PointSet& data, double rho, double beta,
                                double r_min, double r_max, double b,
                                RandomSource& rng, BudgetLedger* ledger) {
  absl::StatusOr<FindDiamPlan> plan =
      MakeFindDiamPlan(rho, beta, r_min, r_max, b);
  if (!plan.ok()) return plan.status();
  if (data.empty()) return absl::InvalidArgumentError("empty dataset");
  ChargeIfPresent(ledger, "find_diam", rho, 0.0);
  int lo = 0;
  int hi = plan->top_exponent;
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    absl::StatusOr<bool> pass =
        CheckDiam(data, plan->rho_per_probe, plan->beta_per_probe,
                  r_min * std::pow(b, mid), rng);
    if (!pass.ok()) return pass.status();
    if (*pass) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  if (lo == plan->top_exponent) return r_max;
  return r_min * std::pow(b, lo);
}

absl::StatusOr<std::optional<Point>> FcAvgUnknownDiam(
    const PointSet& data, double rho, double delta, double beta, double r_min,
    double r_max, RandomSource& rng, const FriendlyAvgOptions& options,
    BudgetLedger* ledger) {
  if (absl::Status s = CheckRhoDelta(rho, delta); !s.ok()) return s;
  if (data.empty()) {
    ChargeIfPresent(ledger, "find_diam", 0.1 * rho, 0.0);
    return FcAvg(data, 0.9 * rho, delta, r_min, rng, options, ledger);
  }
  absl::StatusOr<double> r =
      FindDiam(data, 0.1 * rho, beta / 2.0, r_min, r_max, 1.5, rng, ledger);
  if (!r.ok()) return r.status();
  return FcAvg(data, 0.9 * rho, delta, *r, rng, options, ledger);
}

}  // namespace friendlycore
