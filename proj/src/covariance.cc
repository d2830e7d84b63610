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

#include "friendlycore/covariance.h"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "friendlycore/friendly_core.h"
#include "friendlycore/parallel.h"

namespace friendlycore {
namespace {

constexpr double kPdTolerance = 1e-10;
constexpr double kCoreGamma = 0.1;
// Margin absorbing rounding in the reference deviations.
constexpr double kBoundSlack = 1e-9;

double InvSqrt(double x) { return 1.0 / std::sqrt(x); }

bool IsPositiveDefinite(const std::vector<double>& descending) {
  return descending.back() > kPdTolerance * std::max(1.0, descending.front());
}

// Eigenvalues of B^-1/2 A B^-1/2.
std::vector<double> ConjugatedSpectrum(const SymMatrix& a,
                                       const SymMatrix& b_inv_sqrt) {
  const SymMatrix m = Symmetrize(Multiply(Multiply(b_inv_sqrt, a), b_inv_sqrt));
  return SymEigen(m)->values;
}

double DeviationFromIdentity(const std::vector<double>& values) {
  double worst = 0.0;
  for (double v : values) worst = std::max(worst, std::fabs(v - 1.0));
  return worst;
}

absl::Status CheckDp(double eps, double delta) {
  if (!(eps > 0.0)) return absl::InvalidArgumentError("eps must be positive");
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError("delta must be in (0, 1)");
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<PreparedMatrix> PrepareMatrix(const SymMatrix& sigma) {
  absl::StatusOr<EigenDecomposition> eig = SymEigen(sigma);
  if (!eig.ok()) return eig.status();
  PreparedMatrix out;
  out.sigma = sigma;
  if (sigma.dim() == 0) return out;
  out.positive_definite = IsPositiveDefinite(eig->values);
  if (out.positive_definite) out.inv_sqrt = ApplySpectral(*eig, InvSqrt);
  return out;
}

absl::StatusOr<double> MatrixDist(const SymMatrix& s1, const SymMatrix& s2) {
  if (s1.dim() != s2.dim()) {
    return absl::InvalidArgumentError("matrices differ in dimension");
  }
  absl::StatusOr<PreparedMatrix> p1 = PrepareMatrix(s1);
  if (!p1.ok()) return p1.status();
  absl::StatusOr<PreparedMatrix> p2 = PrepareMatrix(s2);
  if (!p2.ok()) return p2.status();
  if (!p1->positive_definite || !p2->positive_definite) {
    return std::numeric_limits<double>::infinity();
  }
  const double forward =
      DeviationFromIdentity(ConjugatedSpectrum(p1->sigma, p2->inv_sqrt));
  const double backward =
      DeviationFromIdentity(ConjugatedSpectrum(p2->sigma, p1->inv_sqrt));
  return std::max(forward, backward);
}

double MatrixDistPrepared(const PreparedMatrix& a, const PreparedMatrix& b) {
  if (!a.positive_definite || !b.positive_definite) {
    return std::numeric_limits<double>::infinity();
  }
  const std::vector<double> values = ConjugatedSpectrum(a.sigma, b.inv_sqrt);
  if (!(values.back() > 0.0)) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (double v : values) {
    worst = std::max({worst, std::fabs(v - 1.0), std::fabs(1.0 / v - 1.0)});
  }
  return worst;
}

absl::Status AttachReference(std::vector<PreparedMatrix>& matrices,
                             const SymMatrix& reference) {
  absl::StatusOr<PreparedMatrix> ref = PrepareMatrix(reference);
  if (!ref.ok()) return ref.status();
  if (!ref->positive_definite) return absl::OkStatus();
  for (const PreparedMatrix& p : matrices) {
    if (p.sigma.dim() != reference.dim()) {
      return absl::InvalidArgumentError("reference differs in dimension");
    }
  }
  ParallelFor(matrices.size(), [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      PreparedMatrix& p = matrices[i];
      if (!p.positive_definite) continue;
      p.ref_deviation =
          DeviationFromIdentity(ConjugatedSpectrum(p.sigma, ref->inv_sqrt));
    }
  });
  return absl::OkStatus();
}

Predicate<PreparedMatrix> MakeMatrixDistPredicate(double gamma) {
  return {[gamma](const PreparedMatrix& a, const PreparedMatrix& b) {
            const double ea = a.ref_deviation;
            const double eb = b.ref_deviation;
            if (ea < 1.0 && eb < 1.0) {
              const double lo = (1.0 - ea) / (1.0 + eb);
              const double hi = (1.0 + ea) / (1.0 - eb);
              const double bound = std::max(hi - 1.0, 1.0 / lo - 1.0);
              if (bound + kBoundSlack <= gamma) return true;
            }
            return MatrixDistPrepared(a, b) <= gamma;
          },
          true};
}

absl::StatusOr<double> GammaThreshold(double eta, double eps, double delta,
                                      size_t d) {
  if (!(eta > 0.0)) return absl::InvalidArgumentError("eta must be positive");
  if (absl::Status s = CheckDp(eps, delta); !s.ok()) return s;
  if (d == 0) return absl::InvalidArgumentError("d must be >= 1");
  const double dd = static_cast<double>(d);
  const double log_inv = std::log(1.0 / delta);
  const double log_two = std::log(2.0 / delta);
  return std::min({std::sqrt(eps / (2.0 * dd * (dd + 1.0 / (eta * eta)))),
                   eps / (8.0 * dd * std::sqrt(log_inv)), eps / (8.0 * log_two),
                   eps * eta / (12.0 * std::sqrt(dd * log_two))});
}

double AccuracyEta(size_t d, double beta, double c3) {
  return 1.0 / (c3 * (std::sqrt(static_cast<double>(d)) +
                      std::sqrt(std::log(6.0 / beta))));
}

absl::StatusOr<CovariancePlan> MakeCovariancePlan(size_t d, double eps,
                                                  double delta, double beta,
                                                  double c1, double c2,
                                                  double c3) {
  if (!(beta > 0.0 && beta < 1.0)) {
    return absl::InvalidArgumentError("beta must be in (0, 1)");
  }
  if (!(c1 > 0.0 && c2 > 0.0 && c3 > 0.0)) {
    return absl::InvalidArgumentError("constants must be positive");
  }
  if (absl::Status s = CheckDp(eps, delta); !s.ok()) return s;
  CovariancePlan plan;
  plan.eta = AccuracyEta(d, beta, c3);
  absl::StatusOr<double> gamma =
      GammaThreshold(plan.eta, 0.9 * eps, delta * std::exp(-0.1 * eps), d);
  if (!gamma.ok()) return gamma.status();
  plan.gamma = *gamma;
  plan.m = static_cast<size_t>(
      std::ceil(c2 * (static_cast<double>(d) + std::log(6.0 / beta))));
  plan.t = static_cast<size_t>(
      std::ceil(c1 / plan.gamma +
                (std::log(1.0 / delta) + std::log(3.0 / beta)) / (0.1 * eps)));
  return plan;
}

absl::StatusOr<SymMatrix> BEta(const SymMatrix& s, double eta,
                               RandomSource& rng) {
  if (!(eta >= 0.0)) return absl::InvalidArgumentError("eta must be >= 0");
  if (!IsSymmetric(s))
    return absl::InvalidArgumentError("matrix not symmetric");
  if (rng.noise_free()) return s;
  absl::StatusOr<SymMatrix> root = SqrtPsd(s);
  if (!root.ok()) return root.status();
  const size_t d = s.dim();
  Matrix factor = Matrix::Identity(d);
  for (size_t i = 0; i < d; ++i) {
    for (size_t j = 0; j < d; ++j) factor(i, j) += eta * rng.GaussianNoise(1.0);
  }
  const Matrix a = Multiply(*root, factor);
  return Symmetrize(Multiply(a, Transpose(a)));
}

absl::StatusOr<std::optional<SymMatrix>> FriendlyCovariance(
    const std::vector<SymMatrix>& matrices, double eps, double delta,
    double eta, double c1, RandomSource& rng) {
  if (absl::Status s = CheckDp(eps, delta); !s.ok()) return s;
  if (!(eta > 0.0) || !(c1 > 0.0)) {
    return absl::InvalidArgumentError("eta and c1 must be positive");
  }
  const size_t n = matrices.size();
  if (n == 0) return std::optional<SymMatrix>();
  const size_t d = matrices[0].dim();
  for (const SymMatrix& m : matrices) {
    if (m.dim() != d) return absl::InvalidArgumentError("mixed dimensions");
  }
  const double eps1 = 0.1 * eps;
  const double eps2 = 0.9 * eps;
  absl::StatusOr<double> gamma =
      GammaThreshold(eta, eps2, delta * std::exp(-eps1), d);
  if (!gamma.ok()) return gamma.status();
  const double n_hat = static_cast<double>(n) - std::log(1.0 / delta) / eps1 +
                       rng.LaplaceNoise(1.0 / eps1);
  if (n_hat <= c1 / *gamma) return std::optional<SymMatrix>();
  SymMatrix sum(d);
  for (const SymMatrix& m : matrices) sum = Add(sum, m);
  absl::StatusOr<SymMatrix> out =
      BEta(Scale(sum, 1.0 / static_cast<double>(n)), eta, rng);
  if (!out.ok()) return out.status();
  return std::optional<SymMatrix>(*std::move(out));
}

absl::StatusOr<std::vector<SymMatrix>> PieceCovariances(const PointSet& points,
                                                        size_t t) {
  if (t == 0) return absl::InvalidArgumentError("t must be >= 1");
  if (points.size() < t) {
    return absl::InvalidArgumentError(
        absl::StrCat("t = ", t, " exceeds n = ", points.size()));
  }
  if (absl::Status s = ValidatePointSet(points); !s.ok()) return s;
  const size_t d = points[0].size();
  const size_t m = points.size() / t;
  std::vector<SymMatrix> pieces(t, SymMatrix(d));
  ParallelFor(t, [&](size_t begin, size_t end) {
    for (size_t piece = begin; piece < end; ++piece) {
      SymMatrix& sigma = pieces[piece];
      for (size_t r = piece * m; r < (piece + 1) * m; ++r) {
        const Point& x = points[r];
        for (size_t i = 0; i < d; ++i) {
          for (size_t j = i; j < d; ++j) sigma(i, j) += x[i] * x[j];
        }
      }
      for (size_t i = 0; i < d; ++i) {
        for (size_t j = i; j < d; ++j) {
          sigma(i, j) /= static_cast<double>(m);
          sigma(j, i) = sigma(i, j);
        }
      }
    }
  });
  return pieces;
}

absl::StatusOr<FcCovarianceResult> FcCovarianceFromPieces(
    const std::vector<SymMatrix>& pieces, double eps, double delta, double eta,
    double c1, RandomSource& rng) {
  if (absl::Status s = CheckDp(eps, delta); !s.ok()) return s;
  for (const SymMatrix& p : pieces) {
    if (p.dim() != pieces[0].dim()) {
      return absl::InvalidArgumentError("mixed dimensions");
    }
  }
  std::vector<PreparedMatrix> prepared(pieces.size());
  std::vector<absl::Status> errors(pieces.size());
  ParallelFor(pieces.size(), [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      absl::StatusOr<PreparedMatrix> p = PrepareMatrix(pieces[i]);
      if (p.ok()) {
        prepared[i] = *std::move(p);
      } else {
        errors[i] = p.status();
      }
    }
  });
  for (const absl::Status& s : errors) {
    if (!s.ok()) return s;
  }
  if (!pieces.empty()) {
    SymMatrix mean(pieces[0].dim());
    for (const SymMatrix& p : pieces) mean = Add(mean, p);
    mean = Scale(mean, 1.0 / static_cast<double>(pieces.size()));
    if (absl::Status s = AttachReference(prepared, mean); !s.ok()) return s;
  }
  absl::StatusOr<std::vector<PreparedMatrix>> core =
      FriendlyCoreDp(prepared, MakeMatrixDistPredicate(kCoreGamma), 0.0, rng);
  if (!core.ok()) return core.status();
  std::vector<SymMatrix> kept;
  kept.reserve(core->size());
  for (PreparedMatrix& p : *core) kept.push_back(std::move(p.sigma));
  FcCovarianceResult result;
  result.core_size = kept.size();
  result.cost = *DpParadigmCost(DpBudget{eps, delta}, 0.0);
  absl::StatusOr<std::optional<SymMatrix>> estimate =
      FriendlyCovariance(kept, eps, delta, eta, c1, rng);
  if (!estimate.ok()) return estimate.status();
  result.estimate = *std::move(estimate);
  return result;
}

absl::StatusOr<FcCovarianceResult> FcCovariance(const PointSet& points,
                                                double eps, double delta,
                                                size_t t, double eta, double c1,
                                                RandomSource& rng) {
  absl::StatusOr<std::vector<SymMatrix>> pieces = PieceCovariances(points, t);
  if (!pieces.ok()) return pieces.status();
  return FcCovarianceFromPieces(*pieces, eps, delta, eta, c1, rng);
}

}  // namespace friendlycore
