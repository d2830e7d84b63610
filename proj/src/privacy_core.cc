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

#include "friendlycore/privacy_core.h"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"

namespace friendlycore {

absl::Status ZcdpBudget::Validate() const {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    return absl::InvalidArgumentError(
        absl::StrCat("rho must be positive: ", rho));
  }
  if (!(delta >= 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must be in [0, 1): ", delta));
  }
  return absl::OkStatus();
}

absl::Status DpBudget::Validate() const {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    return absl::InvalidArgumentError(
        absl::StrCat("eps must be positive: ", eps));
  }
  if (!(delta >= 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must be in [0, 1): ", delta));
  }
  return absl::OkStatus();
}

absl::StatusOr<double> GaussianSigmaZcdp(double sensitivity, double rho) {
  if (!(sensitivity >= 0.0)) {
    return absl::InvalidArgumentError("sensitivity must be nonnegative");
  }
  if (!(rho > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("rho must be positive: ", rho));
  }
  return sensitivity / std::sqrt(2.0 * rho);
}

absl::StatusOr<double> GaussianSigmaDp(double sensitivity, double eps,
                                       double delta) {
  if (!(sensitivity >= 0.0)) {
    return absl::InvalidArgumentError("sensitivity must be nonnegative");
  }
  if (!(eps > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("eps must be positive: ", eps));
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must be in (0, 1): ", delta));
  }
  return sensitivity * std::sqrt(2.0 * std::log(1.5 / delta)) / eps;
}

std::vector<double> AddGaussianNoise(absl::Span<const double> v, double sigma,
                                     RandomSource& rng) {
  std::vector<double> out(v.begin(), v.end());
  if (rng.noise_free()) return out;
  for (double& x : out) x += rng.GaussianNoise(sigma);
  return out;
}

double AddLaplaceNoise(double x, double b, RandomSource& rng) {
  return x + rng.LaplaceNoise(b);
}

ZcdpBudget DpToZcdp(const DpBudget& budget) {
  return {0.5 * budget.eps * budget.eps, budget.delta};
}

DpBudget ZcdpToDp(const ZcdpBudget& budget, double delta_prime) {
  return {
      budget.rho + 2.0 * std::sqrt(budget.rho * std::log(1.0 / delta_prime)),
      budget.delta + delta_prime};
}

void BudgetLedger::Charge(std::string label, double rho, double delta) {
  entries_.push_back({std::move(label), rho, delta});
}

double BudgetLedger::TotalRho() const {
  double total = 0.0;
  for (const Entry& e : entries_) total += e.rho;
  return total;
}

double BudgetLedger::TotalDelta() const {
  double total = 0.0;
  for (const Entry& e : entries_) total += e.delta;
  return total;
}

}  // namespace friendlycore
