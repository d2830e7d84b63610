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

#include "friendlycore/predicates.h"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"

namespace friendlycore {
namespace {

absl::Status CheckSameShape(const KTuple& x, const KTuple& y) {
  if (x.size() != y.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("tuple sizes differ: ", x.size(), " vs ", y.size()));
  }
  if (x.empty()) return absl::InvalidArgumentError("empty tuple");
  const size_t d = x[0].size();
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i].size() != d || y[i].size() != d) {
      return absl::InvalidArgumentError("tuple points differ in dimension");
    }
  }
  return absl::OkStatus();
}

// Verifies the match condition for a given bijection pi.
bool VerifyMatch(const KTuple& x, const KTuple& y,
                 const std::vector<size_t>& pi, double gamma) {
  const size_t k = x.size();
  for (size_t i = 0; i < k; ++i) {
    double rhs = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < k; ++j) {
      if (j == i) continue;
      rhs = std::min(rhs, Distance(x[i], y[pi[j]]));
      rhs = std::min(rhs, Distance(x[j], y[pi[i]]));
    }
    if (!(Distance(x[i], y[pi[i]]) < gamma * rhs)) return false;
  }
  return true;
}

bool IsBijection(const std::vector<size_t>& pi) {
  std::vector<bool> seen(pi.size(), false);
  for (size_t v : pi) {
    if (seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

}  // namespace

double SquaredDistance(absl::Span<const double> x, absl::Span<const double> y) {
  double sum = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double diff = x[i] - y[i];
    sum += diff * diff;
  }
  return sum;
}

double Distance(absl::Span<const double> x, absl::Span<const double> y) {
  return std::sqrt(SquaredDistance(x, y));
}

absl::Status ValidatePointSet(const PointSet& points) {
  if (points.empty()) return absl::OkStatus();
  const size_t d = points[0].size();
  for (size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != d) {
      return absl::InvalidArgumentError(absl::StrCat(
          "point ", i, " has dimension ", points[i].size(), ", expected ", d));
    }
    for (double v : points[i]) {
      if (!std::isfinite(v)) {
        return absl::InvalidArgumentError(
            absl::StrCat("point ", i, " has a non-finite coordinate"));
      }
    }
  }
  return absl::OkStatus();
}

absl::Status ValidateTupleSet(const TupleSet& tuples) {
  if (tuples.empty()) return absl::OkStatus();
  const size_t k = tuples[0].size();
  if (k == 0) return absl::InvalidArgumentError("tuples must have k >= 1");
  const size_t d = tuples[0][0].size();
  for (size_t i = 0; i < tuples.size(); ++i) {
    if (tuples[i].size() != k) {
      return absl::InvalidArgumentError(absl::StrCat(
          "tuple ", i, " has ", tuples[i].size(), " points, expected ", k));
    }
    for (const Point& p : tuples[i]) {
      if (p.size() != d) {
        return absl::InvalidArgumentError(
            absl::StrCat("tuple ", i, " mixes point dimensions"));
      }
      for (double v : p) {
        if (!std::isfinite(v)) {
          return absl::InvalidArgumentError(
              absl::StrCat("tuple ", i, " has a non-finite coordinate"));
        }
      }
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<bool> EvalDist(const Point& x, const Point& y, double r) {
  if (x.size() != y.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("dimension mismatch: ", x.size(), " vs ", y.size()));
  }
  return Distance(x, y) <= r;
}

absl::StatusOr<bool> EvalDistMulti(const KTuple& x, const KTuple& y,
                                   absl::Span<const double> radii) {
  if (absl::Status s = CheckSameShape(x, y); !s.ok()) return s;
  if (radii.size() != x.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected ", x.size(), " radii, got ", radii.size()));
  }
  for (size_t i = 0; i < x.size(); ++i) {
    if (!(Distance(x[i], y[i]) <= radii[i])) return false;
  }
  return true;
}

std::vector<size_t> NearestAssignment(const KTuple& x, const KTuple& y) {
  std::vector<size_t> pi(x.size(), 0);
  for (size_t i = 0; i < x.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < y.size(); ++j) {
      const double dist = SquaredDistance(x[i], y[j]);
      if (dist < best) {
        best = dist;
        pi[i] = j;
      }
    }
  }
  return pi;
}

absl::StatusOr<MatchResult> MatchGamma(const KTuple& x, const KTuple& y,
                                       double gamma) {
  if (absl::Status s = CheckSameShape(x, y); !s.ok()) return s;
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("gamma must be in (0, 1]: ", gamma));
  }
  std::vector<size_t> pi = NearestAssignment(x, y);
  MatchResult result;
  if (IsBijection(pi) && VerifyMatch(x, y, pi, gamma)) {
    result.matched = true;
    result.permutation = std::move(pi);
  }
  return result;
}

absl::StatusOr<KTuple> OrdBy(const KTuple& x, const KTuple& y) {
  absl::StatusOr<MatchResult> match = MatchGamma(x, y, 1.0);
  if (!match.ok()) return match.status();
  if (!match->matched) {
    return absl::FailedPreconditionError(
        "nearest-neighbor assignment does not witness match_1");
  }
  KTuple out;
  out.reserve(y.size());
  for (size_t j : match->permutation) out.push_back(y[j]);
  return out;
}

Predicate<Point> MakeDistPredicate(double r) {
  return {[r](const Point& x, const Point& y) { return Distance(x, y) <= r; },
          true};
}

Predicate<KTuple> MakeDistMultiPredicate(std::vector<double> radii) {
  return {[radii = std::move(radii)](const KTuple& x, const KTuple& y) {
            for (size_t i = 0; i < x.size(); ++i) {
              if (!(Distance(x[i], y[i]) <= radii[i])) return false;
            }
            return true;
          },
          true};
}

Predicate<KTuple> MakeMatchPredicate(double gamma) {
  return {[gamma](const KTuple& x, const KTuple& y) {
            std::vector<size_t> pi = NearestAssignment(x, y);
            return IsBijection(pi) && VerifyMatch(x, y, pi, gamma);
          },
          true};
}

absl::StatusOr<Predicate<Point>> PointPredicateFromSpec(
    const PredicateSpec& spec) {
  if (const auto* dist = std::get_if<DistR>(&spec)) {
    if (!(dist->r >= 0.0)) {
      return absl::InvalidArgumentError("dist radius must be nonnegative");
    }
    return MakeDistPredicate(dist->r);
  }
  return absl::InvalidArgumentError("predicate does not apply to points");
}

absl::StatusOr<Predicate<KTuple>> TuplePredicateFromSpec(
    const PredicateSpec& spec) {
  if (const auto* multi = std::get_if<DistMulti>(&spec)) {
    for (double r : multi->radii) {
      if (!(r >= 0.0)) {
        return absl::InvalidArgumentError("dist radii must be nonnegative");
      }
    }
    return MakeDistMultiPredicate(multi->radii);
  }
  if (const auto* match = std::get_if<MatchGammaSpec>(&spec)) {
    if (!(match->gamma > 0.0 && match->gamma <= 1.0)) {
      return absl::InvalidArgumentError("gamma must be in (0, 1]");
    }
    return MakeMatchPredicate(match->gamma);
  }
  return absl::InvalidArgumentError("predicate does not apply to tuples");
}

}  // namespace friendlycore
