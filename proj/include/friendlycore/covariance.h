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

#ifndef FRIENDLYCORE_COVARIANCE_H_
#define FRIENDLYCORE_COVARIANCE_H_

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "friendlycore/linalg.h"
#include "friendlycore/predicates.h"
#include "friendlycore/privacy_core.h"
#include "friendlycore/random_source.h"

namespace friendlycore {

// Constants calibrated by tests/oracles/calibrate_covariance_constants.py:
// the smallest powers of two meeting the respective statements at
// d in {2, 5, 10} with beta = 0.1.
inline constexpr double kDefaultC1 = 0.5;
inline constexpr double kDefaultC2 = 4096.0;
inline constexpr double kDefaultC3 = 64.0;

// A matrix with its positive-definiteness verdict and inverse square root.
struct PreparedMatrix {
  SymMatrix sigma;
  bool positive_definite = false;
  SymMatrix inv_sqrt;
  // ||W sigma W - I||_op for the whitener W of a shared reference, or
  // infinity when no reference is attached. Lets the predicate decide
  // clearly close pairs without an eigendecomposition.
  double ref_deviation = std::numeric_limits<double>::infinity();
};

absl::StatusOr<PreparedMatrix> PrepareMatrix(const SymMatrix& sigma);

// max(||S2^-1/2 S1 S2^-1/2 - I||, ||S1^-1/2 S2 S1^-1/2 - I||) in operator
// norm; +inf unless both minimum eigenvalues exceed 1e-10 max(1, lambda_max).
absl::StatusOr<double> MatrixDist(const SymMatrix& s1, const SymMatrix& s2);

// Same value from prepared operands, with a single eigendecomposition: the
// second term's eigenvalues are the reciprocals of the first's.
double MatrixDistPrepared(const PreparedMatrix& a, const PreparedMatrix& b);

// Sets ref_deviation of every positive definite matrix against `reference`.
// No-op when the reference is not positive definite.
absl::Status AttachReference(std::vector<PreparedMatrix>& matrices,
                             const SymMatrix& reference);

// 1 iff MatrixDist <= gamma. When both operands carry reference deviations
// e_a, e_b < 1, the spectrum of B^-1 A lies in [(1 - e_a)/(1 + e_b),
// (1 + e_a)/(1 - e_b)]; pairs whose resulting bound is below gamma are
// accepted without computing the exact distance.
Predicate<PreparedMatrix> MakeMatrixDistPredicate(double gamma);

// min{ sqrt(eps / (2d (d + 1/eta^2))), eps / (8d sqrt(ln(1/delta))),
//      eps / (8 ln(2/delta)), eps eta / (12 sqrt(d ln(2/delta))) }.
absl::StatusOr<double> GammaThreshold(double eta, double eps, double delta,
                                      size_t d);

// eta = 1 / (c3 (sqrt(d) + sqrt(ln(6 / beta)))).
double AccuracyEta(size_t d, double beta, double c3 = kDefaultC3);

// Parameters for the accuracy guarantee at dimension d.
struct CovariancePlan {
  size_t m = 0;  // points per piece, ceil(c2 (d + ln(6 / beta)))
  double eta = 0.0;
  double gamma = 0.0;
  // ceil(c1 / gamma + (ln(1 / delta) + ln(3 / beta)) / (0.1 eps)), which
  // clears the abort gate of FriendlyCovariance w.p. 1 - beta / 3.
  size_t t = 0;
};
absl::StatusOr<CovariancePlan> MakeCovariancePlan(size_t d, double eps,
                                                  double delta, double beta,
                                                  double c1 = kDefaultC1,
                                                  double c2 = kDefaultC2,
                                                  double c3 = kDefaultC3);

// S^1/2 (I + eta G)(I + eta G)^T S^1/2 with G iid N(0, 1) entries.
// Returns S itself in noise-free mode.
absl::StatusOr<SymMatrix> BEta(const SymMatrix& s, double eta,
                               RandomSource& rng);

// Aborts (std::nullopt) when n = 0 or n - ln(1/delta)/eps_1 + Lap(1/eps_1)
// <= c1 / gamma, with eps_1 = 0.1 eps and gamma = GammaThreshold(eta,
// 0.9 eps, delta e^-eps_1); otherwise BEta of the average matrix.
absl::StatusOr<std::optional<SymMatrix>> FriendlyCovariance(
    const std::vector<SymMatrix>& matrices, double eps, double delta,
    double eta, double c1, RandomSource& rng);

// Sigma_i = (1/m) sum x x^T over consecutive pieces of m = floor(n / t).
absl::StatusOr<std::vector<SymMatrix>> PieceCovariances(const PointSet& points,
                                                        size_t t);

struct FcCovarianceResult {
  std::optional<SymMatrix> estimate;
  size_t core_size = 0;
  // Standard DP guarantee of the whole pipeline.
  DpBudget cost;
};

// FriendlyCoreDP(matrixDist_0.1, alpha = 0) over the piece covariances, then
// FriendlyCovariance(core, eps, delta, eta, c1).
absl::StatusOr<FcCovarianceResult> FcCovarianceFromPieces(
    const std::vector<SymMatrix>& pieces, double eps, double delta, double eta,
    double c1, RandomSource& rng);

absl::StatusOr<FcCovarianceResult> FcCovariance(const PointSet& points,
                                                double eps, double delta,
                                                size_t t, double eta, double c1,
                                                RandomSource& rng);

}  // namespace friendlycore

#endif  // FRIENDLYCORE_COVARIANCE_H_
