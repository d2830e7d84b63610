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

#ifndef FRIENDLYCORE_PREDICATES_H_
#define FRIENDLYCORE_PREDICATES_H_

#include <cstddef>
#include <functional>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/types/span.h"

namespace friendlycore {

using Point = std::vector<double>;
using PointSet = std::vector<Point>;
// k points; whether the order is meaningful depends on the operation.
using KTuple = std::vector<Point>;
using TupleSet = std::vector<KTuple>;

// Reflexive friendliness predicate over elements of type T. `symmetric`
// allows callers to evaluate each unordered pair once.
template <typename T>
struct Predicate {
  std::function<bool(const T&, const T&)> eval;
  bool symmetric = true;
};

// Predicate descriptions for configuration surfaces.
struct DistR {
  double r = 0.0;
};
struct DistMulti {
  std::vector<double> radii;
};
struct MatchGammaSpec {
  double gamma = 1.0;
};
struct MatrixDistGamma {
  double gamma = 0.1;
};
using PredicateSpec =
    std::variant<DistR, DistMulti, MatchGammaSpec, MatrixDistGamma>;

// Unchecked l2 helpers; callers guarantee equal dimensions.
double SquaredDistance(absl::Span<const double> x, absl::Span<const double> y);
double Distance(absl::Span<const double> x, absl::Span<const double> y);

// Checks that every point is finite and all share one dimension.
absl::Status ValidatePointSet(const PointSet& points);
// Checks that every tuple has the same k >= 1 and d, with finite entries.
absl::Status ValidateTupleSet(const TupleSet& tuples);

// dist_r(x, y) = 1 iff ||x - y|| <= r.
absl::StatusOr<bool> EvalDist(const Point& x, const Point& y, double r);

// Product over i of dist_{radii[i]}(X[i], Y[i]).
absl::StatusOr<bool> EvalDistMulti(const KTuple& x, const KTuple& y,
                                   absl::Span<const double> radii);

struct MatchResult {
  bool matched = false;
  // permutation[i] = index into Y matched to X[i]; empty when unmatched.
  std::vector<size_t> permutation;
};

// match_gamma(X, Y): there is a permutation pi with
//   ||x_i - y_pi(i)|| < gamma * min_{j != i} min(||x_i - y_pi(j)||,
//                                                ||x_j - y_pi(i)||)
// for every i. For gamma <= 1 the only possible witness is the
// nearest-neighbor assignment (ties to the lowest index), which is what gets
// verified. With k = 1 the minimum is over an empty set and equals +inf.
absl::StatusOr<MatchResult> MatchGamma(const KTuple& x, const KTuple& y,
                                       double gamma);

// ord_X(Y) = (y_pi(1), ..., y_pi(k)) for the nearest-neighbor assignment pi.
// Fails with FailedPrecondition unless pi witnesses match_1(X, Y).
absl::StatusOr<KTuple> OrdBy(const KTuple& x, const KTuple& y);

// Nearest-neighbor assignment pi(i) = argmin_j ||x_i - y_j||, lowest index on
// ties. Unchecked dimensions.
std::vector<size_t> NearestAssignment(const KTuple& x, const KTuple& y);

Predicate<Point> MakeDistPredicate(double r);
Predicate<KTuple> MakeDistMultiPredicate(std::vector<double> radii);
Predicate<KTuple> MakeMatchPredicate(double gamma);

// Point and tuple predicates for the matching PredicateSpec alternatives.
absl::StatusOr<Predicate<Point>> PointPredicateFromSpec(
    const PredicateSpec& spec);
absl::StatusOr<Predicate<KTuple>> TuplePredicateFromSpec(
    const PredicateSpec& spec);

}  // namespace friendlycore

#endif  // FRIENDLYCORE_PREDICATES_H_
