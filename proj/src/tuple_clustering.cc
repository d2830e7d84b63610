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

#include "friendlycore/tuple_clustering.h"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "friendlycore/averaging.h"
#include "friendlycore/friendly_core.h"

namespace friendlycore {
namespace {

constexpr double kMatchGamma = 1.0 / 7.0;
constexpr double kDiamBase = 1.5;

absl::Status CheckRhoDelta(double rho, double delta) {
  if (!(rho > 0.0)) return absl::InvalidArgumentError("rho must be positive");
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError("delta must be in (0, 1)");
  }
  return absl::OkStatus();
}

PointSet Coordinate(const TupleSet& tuples, size_t j) {
  PointSet out;
  out.reserve(tuples.size());
  for (const KTuple& t : tuples) out.push_back(t[j]);
  return out;
}

}  // namespace

absl::StatusOr<TupleSet> FriendlyReorderWithPermutation(
    const TupleSet& tuples, absl::Span<const size_t> permutation) {
  if (tuples.empty()) return TupleSet{};
  if (absl::Status s = ValidateTupleSet(tuples); !s.ok()) return s;
  const size_t k = tuples[0].size();
  std::vector<size_t> sorted(permutation.begin(), permutation.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<size_t> identity(k);
  std::iota(identity.begin(), identity.end(), size_t{0});
  if (sorted != identity) {
    return absl::InvalidArgumentError("not a permutation of the coordinates");
  }
  TupleSet out;
  out.reserve(tuples.size());
  for (size_t i = 0; i < tuples.size(); ++i) {
    absl::StatusOr<KTuple> ordered = OrdBy(tuples[0], tuples[i]);
    if (!ordered.ok()) {
      return absl::FailedPreconditionError(
          absl::StrCat("tuple ", i, " cannot be ordered by the pivot"));
    }
    KTuple permuted;
    permuted.reserve(k);
    for (size_t j : permutation) permuted.push_back((*ordered)[j]);
    out.push_back(std::move(permuted));
  }
  return out;
}

absl::StatusOr<TupleSet> FriendlyReorder(const TupleSet& tuples,
                                         RandomSource& rng) {
  if (tuples.empty()) return TupleSet{};
  const std::vector<size_t> permutation = rng.Permutation(tuples[0].size());
  return FriendlyReorderWithPermutation(tuples, permutation);
}

double OrdTupNoiseScale(double r_j, size_t n, size_t k, double rho2) {
  return (2.0 * r_j / static_cast<double>(n)) *
         std::sqrt(static_cast<double>(k) / (2.0 * rho2));
}

absl::StatusOr<std::optional<KTuple>> FriendlyOrdTupAvg(
    const TupleSet& tuples, double rho, double delta,
    absl::Span<const double> radii, RandomSource& rng, BudgetLedger* ledger) {
  if (absl::Status s = CheckRhoDelta(rho, delta); !s.ok()) return s;
  if (absl::Status s = ValidateTupleSet(tuples); !s.ok()) return s;
  for (double r : radii) {
    if (!(r >= 0.0)) return absl::InvalidArgumentError("negative radius");
  }
  if (!tuples.empty() && radii.size() != tuples[0].size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "expected ", tuples[0].size(), " radii, got ", radii.size()));
  }
  ChargeIfPresent(ledger, "friendly_ord_tup_avg", rho, delta);
  const size_t n = tuples.size();
  if (n == 0) return std::optional<KTuple>();
  const size_t k = tuples[0].size();
  const double rho1 = 0.1 * (1.0 - delta) * rho;
  const double rho2 = 0.9 * rho;
  const double n_hat = FriendlyAvgShiftedCount(n, rho1, delta) +
                       rng.GaussianNoise(std::sqrt(1.0 / (2.0 * rho1)));
  if (!(n_hat > 0.0)) return std::optional<KTuple>();
  KTuple out;
  out.reserve(k);
  for (size_t j = 0; j < k; ++j) {
    const double sigma = OrdTupNoiseScale(radii[j], n, k, rho2);
    out.push_back(AddGaussianNoise(Mean(Coordinate(tuples, j)), sigma, rng));
  }
  return std::optional<KTuple>(std::move(out));
}

absl::StatusOr<std::optional<KTuple>> FcAvgOrdTup(
    const TupleSet& tuples, double rho, double delta, double beta, double r_min,
    double r_max, RandomSource& rng, BudgetLedger* ledger,
    TupleAggregationTrace* trace) {
  if (absl::Status s = CheckRhoDelta(rho, delta); !s.ok()) return s;
  if (absl::Status s = ValidateTupleSet(tuples); !s.ok()) return s;
  const double rho1 = 0.05 * rho;
  const double rho2 = 0.05 * rho;
  const double rho3 = 0.9 * rho;
  if (tuples.empty()) {
    ChargeIfPresent(ledger, "find_diam", rho1, 0.0);
    ChargeIfPresent(ledger, "friendly_core", rho2, delta / 2.0);
    ChargeIfPresent(ledger, "friendly_ord_tup_avg", rho3, delta / 2.0);
    return std::optional<KTuple>();
  }
  const size_t k = tuples[0].size();
  const double dk = static_cast<double>(k);
  const RandomSource base = rng.Split();
  std::vector<double> radii(k);
  for (size_t j = 0; j < k; ++j) {
    RandomSource stream = base.Child(static_cast<uint64_t>(j));
    absl::StatusOr<double> r =
        FindDiam(Coordinate(tuples, j), rho1 / dk, beta / (2.0 * dk), r_min,
                 r_max, kDiamBase, stream, ledger);
    if (!r.ok()) return r.status();
    radii[j] = *r;
  }
  absl::StatusOr<TupleSet> core = FriendlyCore(
      tuples, MakeDistMultiPredicate(radii), rho2, delta / 2.0, rng, ledger);
  if (!core.ok()) return core.status();
  if (trace != nullptr) {
    trace->radii = radii;
    trace->dist_core_size = core->size();
  }
  return FriendlyOrdTupAvg(*core, rho3, delta / 2.0, radii, rng, ledger);
}

absl::StatusOr<std::optional<KTuple>> FcKTupleClustering(
    const TupleSet& tuples, double rho, double delta, double beta, double r_min,
    double r_max, RandomSource& rng, BudgetLedger* ledger,
    TupleAggregationTrace* trace) {
  if (absl::Status s = CheckRhoDelta(rho, delta); !s.ok()) return s;
  if (absl::Status s = ValidateTupleSet(tuples); !s.ok()) return s;
  absl::StatusOr<TupleSet> core =
      FriendlyCore(tuples, MakeMatchPredicate(kMatchGamma), rho / 2.0,
                   delta / 2.0, rng, ledger);
  if (!core.ok()) return core.status();
  if (trace != nullptr) trace->match_core_size = core->size();
  absl::StatusOr<TupleSet> reordered = FriendlyReorder(*core, rng);
  if (!reordered.ok()) {
    if (!absl::IsFailedPrecondition(reordered.status())) {
      return reordered.status();
    }
    ChargeIfPresent(ledger, "fc_avg_ord_tup", rho / 2.0, delta / 2.0);
    return std::optional<KTuple>();
  }
  return FcAvgOrdTup(*reordered, rho / 2.0, delta / 2.0, beta / 2.0, r_min,
                     r_max, rng, ledger, trace);
}

absl::StatusOr<bool> IsGoodAveragesSolution(const TupleSet& tuples,
                                            const KTuple& y, double alpha,
                                            double r_min) {
  if (tuples.empty()) return absl::InvalidArgumentError("empty tuple set");
  if (absl::Status s = ValidateTupleSet(tuples); !s.ok()) return s;
  const size_t k = tuples[0].size();
  if (y.size() != k) return absl::InvalidArgumentError("y has wrong size");
  if (k > 8) return absl::UnimplementedError("verifier supports k <= 8");

  // Partition of all points by nearest point of the pivot tuple.
  const KTuple& pivot = tuples[0];
  std::vector<PointSet> parts(k);
  for (const KTuple& t : tuples) {
    for (const Point& p : t) {
      parts[NearestAssignment(KTuple{p}, pivot)[0]].push_back(p);
    }
  }
  std::vector<Point> averages(k);
  std::vector<double> hull_radius(k, 0.0);
  for (size_t i = 0; i < k; ++i) {
    if (parts[i].empty()) return false;
    averages[i] = Mean(parts[i]);
    for (const Point& p : parts[i]) {
      hull_radius[i] = std::max(hull_radius[i], Distance(p, averages[i]));
    }
  }

  // Radii are the smallest ones that cover each part and meet the accuracy
  // requirement; the remaining conditions only get harder as radii grow.
  std::vector<size_t> assign(k);
  std::iota(assign.begin(), assign.end(), size_t{0});
  do {
    std::vector<double> radii(k);
    bool feasible = true;
    for (size_t i = 0; i < k && feasible; ++i) {
      const double err = Distance(y[assign[i]], averages[i]);
      double r = hull_radius[i];
      if (err > alpha * std::max(r, r_min)) {
        if (alpha > 0.0 && err / alpha > r_min) {
          r = std::max(r, err / alpha);
        } else {
          feasible = false;
        }
      }
      radii[i] = r;
    }
    for (size_t i = 0; i < k && feasible; ++i) {
      for (size_t j = i + 1; j < k && feasible; ++j) {
        const double m = std::max(radii[i], radii[j]);
        feasible = m == 0.0 || Distance(averages[i], averages[j]) > 3.0 * m;
      }
    }
    for (size_t t = 0; t < tuples.size() && feasible; ++t) {
      for (size_t i = 0; i < k && feasible; ++i) {
        size_t inside = 0;
        for (const Point& p : tuples[t]) {
          inside += Distance(p, averages[i]) <= radii[i] ? 1 : 0;
        }
        feasible = inside == 1;
      }
    }
    if (feasible) return true;
  } while (std::next_permutation(assign.begin(), assign.end()));
  return false;
}

}  // namespace friendlycore
