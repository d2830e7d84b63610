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
#include <limits>
#include <numeric>
#include <vector>

#include "friendlycore/random_source.h"
#include "gtest/gtest.h"

namespace friendlycore {
namespace {

// Definition checked over all k! permutations.
bool BruteForceMatch(const KTuple& x, const KTuple& y, double gamma) {
  const size_t k = x.size();
  std::vector<size_t> pi(k);
  std::iota(pi.begin(), pi.end(), 0);
  do {
    bool ok = true;
    for (size_t i = 0; i < k && ok; ++i) {
      double rhs = std::numeric_limits<double>::infinity();
      for (size_t j = 0; j < k; ++j) {
        if (j == i) continue;
        rhs =
            std::min({rhs, Distance(x[i], y[pi[j]]), Distance(x[j], y[pi[i]])});
      }
      ok = Distance(x[i], y[pi[i]]) < gamma * rhs;
    }
    if (ok) return true;
  } while (std::next_permutation(pi.begin(), pi.end()));
  return false;
}

KTuple RandomTuple(size_t k, size_t d, double scale, RandomSource& rng) {
  KTuple t(k, Point(d));
  for (Point& p : t) {
    for (double& v : p) v = scale * rng.Uniform();
  }
  return t;
}

KTuple Perturb(const KTuple& x, double noise, RandomSource& rng, bool shuffle) {
  KTuple y = x;
  for (Point& p : y) {
    for (double& v : p) v += noise * rng.StandardNormal();
  }
  if (shuffle) rng.Shuffle(y);
  return y;
}

TEST(EvalDistTest, Examples) {
  EXPECT_TRUE(*EvalDist({1.0, 2.0}, {1.0, 2.0}, 0.0));
  EXPECT_TRUE(*EvalDist({0.0, 0.0}, {3.0, 4.0}, 5.0));
  EXPECT_FALSE(*EvalDist({0.0, 0.0}, {3.0, 4.0}, 4.99));
  EXPECT_FALSE(EvalDist({0.0}, {0.0, 1.0}, 1.0).ok());
}

TEST(EvalDistMultiTest, Examples) {
  const KTuple x = {{0.0}, {0.0}};
  EXPECT_TRUE(*EvalDistMulti(x, x, std::vector<double>{0.0, 0.0}));
  EXPECT_FALSE(
      *EvalDistMulti(x, {{1.0}, {3.0}}, std::vector<double>{2.0, 2.0}));
  EXPECT_TRUE(*EvalDistMulti(x, {{1.0}, {1.0}}, std::vector<double>{2.0, 2.0}));
  EXPECT_FALSE(EvalDistMulti(x, {{1.0}}, std::vector<double>{2.0, 2.0}).ok());
  EXPECT_FALSE(EvalDistMulti(x, x, std::vector<double>{2.0}).ok());
}

TEST(MatchGammaTest, Examples) {
  const KTuple x = {{0.0}, {10.0}};
  MatchResult self = *MatchGamma(x, x, 0.5);
  EXPECT_TRUE(self.matched);
  EXPECT_EQ(self.permutation, (std::vector<size_t>{0, 1}));

  MatchResult near = *MatchGamma(x, {{0.1}, {9.9}}, 1.0 / 7.0);
  EXPECT_TRUE(near.matched);
  EXPECT_EQ(near.permutation, (std::vector<size_t>{0, 1}));

  MatchResult far = *MatchGamma(x, {{5.0}, {10.0}}, 1.0 / 7.0);
  EXPECT_FALSE(far.matched);
  EXPECT_TRUE(far.permutation.empty());

  EXPECT_FALSE(MatchGamma(x, {{0.0}}, 0.5).ok());
}

TEST(MatchGammaTest, SingletonTuplesAlwaysMatch) {
  EXPECT_TRUE(MatchGamma({{0.0, 0.0}}, {{100.0, 5.0}}, 0.01)->matched);
}

TEST(MatchGammaTest, SymmetricAndAgreesWithBruteForce) {
  RandomSource rng(101);
  int matched = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const size_t k = 1 + rng.UniformInt(6);
    const size_t d = 1 + rng.UniformInt(3);
    const KTuple x = RandomTuple(k, d, 10.0, rng);
    const double noise = std::pow(10.0, -2.0 + 2.5 * rng.Uniform());
    const KTuple y = Perturb(x, noise, rng, /*shuffle=*/true);
    const double gamma = 0.05 + 0.95 * rng.Uniform();
    const bool xy = MatchGamma(x, y, gamma)->matched;
    ASSERT_EQ(xy, MatchGamma(y, x, gamma)->matched) << "trial " << trial;
    ASSERT_EQ(xy, BruteForceMatch(x, y, gamma)) << "trial " << trial;
    matched += xy ? 1 : 0;
  }
  // Both outcomes must be exercised.
  EXPECT_GT(matched, 100);
  EXPECT_LT(matched, 900);
}

TEST(MatchGammaTest, FriendlyImpliesCompleteAmplification) {
  RandomSource rng(102);
  int checked = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    const size_t k = 2 + rng.UniformInt(4);
    const double gamma = std::vector<double>{1.0 / 7.0, 0.2, 0.3}[trial % 3];
    const KTuple z = RandomTuple(k, 2, 10.0, rng);
    const double noise = std::pow(10.0, -2.0 + 1.5 * rng.Uniform());
    const KTuple x = Perturb(z, noise, rng, true);
    const KTuple y = Perturb(z, noise, rng, true);
    if (!MatchGamma(x, z, gamma)->matched ||
        !MatchGamma(y, z, gamma)->matched) {
      continue;
    }
    ++checked;
    ASSERT_TRUE(MatchGamma(x, y, 2.0 * gamma / (1.0 - gamma))->matched)
        << "trial " << trial;
  }
  EXPECT_GT(checked, 500);
}

TEST(OrdByTest, Examples) {
  const KTuple x = {{0.0}, {10.0}};
  EXPECT_EQ(*OrdBy(x, x), x);
  EXPECT_EQ(*OrdBy(x, {{10.1}, {0.2}}), (KTuple{{0.2}, {10.1}}));
  absl::StatusOr<KTuple> bad = OrdBy(x, {{0.0}, {0.1}});
  EXPECT_EQ(bad.status().code(), absl::StatusCode::kFailedPrecondition);
}

TEST(OrdByTest, ConsistentAcrossCompleteSets) {
  RandomSource rng(103);
  int sets = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const size_t k = 2 + rng.UniformInt(4);
    const KTuple center = RandomTuple(k, 2, 10.0, rng);
    std::vector<KTuple> members;
    for (int i = 0; i < 6; ++i)
      members.push_back(Perturb(center, 0.01, rng, true));
    bool complete = true;
    for (const KTuple& a : members) {
      for (const KTuple& b : members) {
        complete = complete && MatchGamma(a, b, 1.0 / 7.0)->matched;
      }
    }
    if (!complete) continue;
    ++sets;
    const KTuple& x = members[0];
    const KTuple& y = members[1];
    // sigma with ord_Y(Z)[i] = ord_X(Z)[sigma[i]], read off the first Z.
    std::vector<size_t> sigma;
    for (size_t z = 2; z < members.size(); ++z) {
      const KTuple ox = *OrdBy(x, members[z]);
      const KTuple oy = *OrdBy(y, members[z]);
      if (sigma.empty()) {
        for (size_t i = 0; i < k; ++i) {
          sigma.push_back(static_cast<size_t>(
              std::find(ox.begin(), ox.end(), oy[i]) - ox.begin()));
        }
      }
      for (size_t i = 0; i < k; ++i) ASSERT_EQ(oy[i], ox[sigma[i]]);
    }
  }
  EXPECT_GT(sets, 100);
}

TEST(NearestAssignmentTest, LowestIndexOnTies) {
  EXPECT_EQ(NearestAssignment({{0.0}}, {{1.0}, {-1.0}}),
            (std::vector<size_t>{0}));
}

TEST(PredicateFactoryTest, ReflexiveAndSpecDispatch) {
  const Predicate<Point> dist = MakeDistPredicate(0.0);
  EXPECT_TRUE(dist.eval({1.0, 2.0}, {1.0, 2.0}));
  const KTuple t = {{0.0}, {5.0}};
  EXPECT_TRUE(MakeMatchPredicate(0.5).eval(t, t));
  EXPECT_TRUE(MakeDistMultiPredicate({0.0, 0.0}).eval(t, t));
  EXPECT_TRUE(PointPredicateFromSpec(DistR{1.0}).ok());
  EXPECT_FALSE(PointPredicateFromSpec(MatchGammaSpec{0.5}).ok());
  EXPECT_TRUE(TuplePredicateFromSpec(MatchGammaSpec{0.5}).ok());
  EXPECT_TRUE(TuplePredicateFromSpec(DistMulti{{1.0, 1.0}}).ok());
}

TEST(ValidateTest, RejectsMixedDimensionsAndNonFinite) {
  EXPECT_TRUE(ValidatePointSet({{1.0, 2.0}, {3.0, 4.0}}).ok());
  EXPECT_FALSE(ValidatePointSet({{1.0, 2.0}, {3.0}}).ok());
  EXPECT_FALSE(ValidatePointSet({{std::nan("")}}).ok());
  EXPECT_FALSE(ValidateTupleSet({{{1.0}}, {{1.0}, {2.0}}}).ok());
}

}  // namespace
}  // namespace friendlycore
