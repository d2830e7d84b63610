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

#ifndef FRIENDLYCORE_TUPLE_CLUSTERING_H_
#define FRIENDLYCORE_TUPLE_CLUSTERING_H_

#include <cstddef>
#include <optional>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "friendlycore/predicates.h"
#include "friendlycore/privacy_core.h"
#include "friendlycore/random_source.h"

namespace friendlycore {

// Orders every tuple by ord_{T[0]} and then permutes the coordinates of all
// tuples by `permutation` (output coordinate i holds input coordinate
// permutation[i]). Fails with FailedPrecondition when some tuple is not
// match_1-matchable to the pivot.
absl::StatusOr<TupleSet> FriendlyReorderWithPermutation(
    const TupleSet& tuples, absl::Span<const size_t> permutation);

// FriendlyReorderWithPermutation with a uniformly random permutation.
absl::StatusOr<TupleSet> FriendlyReorder(const TupleSet& tuples,
                                         RandomSource& rng);

// sigma_j = (2 r_j / n) sqrt(k / (2 rho_2)).
double OrdTupNoiseScale(double r_j, size_t n, size_t k, double rho2);

// Per-coordinate private averages of an ordered tuple set. Uses the same
// size gate as FriendlyAvg (rho_1 = 0.1 (1 - delta) rho, rho_2 = 0.9 rho);
// std::nullopt when the gate aborts.
absl::StatusOr<std::optional<KTuple>> FriendlyOrdTupAvg(
    const TupleSet& tuples, double rho, double delta,
    absl::Span<const double> radii, RandomSource& rng,
    BudgetLedger* ledger = nullptr);

// Intermediate sizes and radii of FcAvgOrdTup / FcKTupleClustering.
struct TupleAggregationTrace {
  size_t match_core_size = 0;
  std::vector<double> radii;
  size_t dist_core_size = 0;
};

// Per coordinate r_j = FindDiam(D^j, 0.05 rho / k, beta / (2k), r_min,
// r_max, 1.5); then FriendlyCore(dist_{r_1..r_k}, 0.05 rho, delta / 2) and
// FriendlyOrdTupAvg(0.9 rho, delta / 2, r_1..r_k).
absl::StatusOr<std::optional<KTuple>> FcAvgOrdTup(
    const TupleSet& tuples, double rho, double delta, double beta, double r_min,
    double r_max, RandomSource& rng, BudgetLedger* ledger = nullptr,
    TupleAggregationTrace* trace = nullptr);

// FriendlyCore(match_{1/7}, rho / 2, delta / 2), FriendlyReorder, then
// FcAvgOrdTup(rho / 2, delta / 2, beta / 2, r_min, r_max). std::nullopt when
// any stage aborts, including a core that cannot be reordered (an event of
// probability at most delta).
absl::StatusOr<std::optional<KTuple>> FcKTupleClustering(
    const TupleSet& tuples, double rho, double delta, double beta, double r_min,
    double r_max, RandomSource& rng, BudgetLedger* ledger = nullptr,
    TupleAggregationTrace* trace = nullptr);

// Checks whether `y` is an (alpha, r_min)-good-averages solution for
// `tuples`: the clusters induced by the first tuple's points lie in balls
// B(a_i, r_i) around their averages with ||a_i - a_j|| > 3 max(r_i, r_j), every
// tuple has exactly one point per ball, and some assignment of y to the
// averages has ||y - a_i|| <= alpha max(r_i, r_min). Enumerates all
// assignments for k <= 8.
absl::StatusOr<bool> IsGoodAveragesSolution(const TupleSet& tuples,
                                            const KTuple& y, double alpha,
                                            double r_min);

}  // namespace friendlycore

#endif  // FRIENDLYCORE_TUPLE_CLUSTERING_H_
