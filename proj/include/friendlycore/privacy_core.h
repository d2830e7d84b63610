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

#ifndef FRIENDLYCORE_PRIVACY_CORE_H_
#define FRIENDLYCORE_PRIVACY_CORE_H_

#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "friendlycore/random_source.h"

namespace friendlycore {

// (rho, delta)-zCDP budget.
struct ZcdpBudget {
  double rho = 0.0;
  double delta = 0.0;

  // Checks rho > 0 and 0 <= delta < 1.
  absl::Status Validate() const;
};

// (eps, delta)-DP budget.
struct DpBudget {
  double eps = 0.0;
  double delta = 0.0;

  // Checks eps > 0 and 0 <= delta < 1.
  absl::Status Validate() const;
};

// Gaussian noise scale for l2-sensitivity `sensitivity` under rho-zCDP:
// sensitivity / sqrt(2 rho).
absl::StatusOr<double> GaussianSigmaZcdp(double sensitivity, double rho);

// Gaussian noise scale under (eps, delta)-DP:
// sensitivity * sqrt(2 ln(1.5 / delta)) / eps.
absl::StatusOr<double> GaussianSigmaDp(double sensitivity, double eps,
                                       double delta);

// v + N(0, sigma^2 I). Returns v unchanged in noise-free mode.
std::vector<double> AddGaussianNoise(absl::Span<const double> v, double sigma,
                                     RandomSource& rng);

// x + Lap(b). Returns x in noise-free mode.
double AddLaplaceNoise(double x, double b, RandomSource& rng);

// (eps, delta)-DP implies (eps^2 / 2, delta)-zCDP.
ZcdpBudget DpToZcdp(const DpBudget& budget);

// (rho, delta)-zCDP implies (rho + 2 sqrt(rho ln(1 / delta_prime)),
// delta + delta_prime)-DP for every delta_prime > 0.
DpBudget ZcdpToDp(const ZcdpBudget& budget, double delta_prime);

// Records the (rho, delta) charged by each private sub-mechanism of a
// composition. Mechanisms append one entry per call when handed a ledger.
class BudgetLedger {
 public:
  struct Entry {
    std::string label;
    double rho;
    double delta;
  };

  void Charge(std::string label, double rho, double delta);

  double TotalRho() const;
  double TotalDelta() const;
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  std::vector<Entry> entries_;
};

// Charges `ledger` when it is non-null.
inline void ChargeIfPresent(BudgetLedger* ledger, std::string label, double rho,
                            double delta) {
  if (ledger != nullptr) ledger->Charge(std::move(label), rho, delta);
}

}  // namespace friendlycore

#endif  // FRIENDLYCORE_PRIVACY_CORE_H_
