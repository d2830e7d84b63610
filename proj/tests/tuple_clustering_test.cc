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
#include <numeric>
#include <optional>
#include <vector>

#include "friendlycore/averaging.h"
#include "friendlycore/predicates.h"
#include "friendlycore/privacy_core.h"
#include "friendlycore/random_source.h"
#include "gtest/gtest.h"

namespace friendlycore {
namespace {

// Tuples whose i-th point is drawn around centers[i], in shuffled order.
TupleSet NoisyTuples(const KTuple& centers, size_t n, double noise,
                     RandomSource& rng) {
  TupleSet out;
  for (size_t t = 0; t < n; ++t) {
    KTuple tuple = centers;
    for (Point& p : tuple) {
      for (double& v : p) v += noise * rng.StandardNormal();
    }
    rng.Shuffle(tuple);
    out.push_back(std::move(tuple));
  }
  return out;
}

KTuple Sorted(KTuple t) {
  std::sort(t.begin(), t.end());
  return t;
}

TEST(FriendlyReorderTest, HandTrace) {
  const TupleSet in = {{{0.0}, {10.0}}, {{10.1}, {0.2}}};
  const std::vector<size_t> identity = {0, 1};
  const TupleSet out = *FriendlyReorderWithPermutation(in, identity);
  EXPECT_EQ(out, (TupleSet{{{0.0}, {10.0}}, {{0.2}, {10.1}}}));
  const std::vector<size_t> swap = {1, 0};
  EXPECT_EQ(*FriendlyReorderWithPermutation(in, swap),
            (TupleSet{{{10.0}, {0.0}}, {{10.1}, {0.2}}}));
}

TEST(FriendlyReorderTest, IdenticalTuplesAndEmpty) {
  RandomSource rng(1);
  const KTuple x = {{1.0, 0.0}, {5.0, 5.0}, {-3.0, 2.0}};
  const TupleSet out = *FriendlyReorder(TupleSet(10, x), rng);
  for (const KTuple& t : out) {
    EXPECT_EQ(t, out[0]);
    EXPECT_EQ(Sorted(t), Sorted(x));
  }
  EXPECT_TRUE(FriendlyReorder({}, rng)->empty());
}

TEST(FriendlyReorderTest, UnmatchableInputFails) {
  RandomSource rng(2);
  const TupleSet in = {{{0.0}, {10.0}}, {{0.0}, {0.1}}};
  EXPECT_EQ(FriendlyReorder(in, rng).status().code(),
            absl::StatusCode::kFailedPrecondition);
}

TEST(FriendlyReorderTest, PivotChangeIsOneGlobalPermutation) {
  RandomSource rng(3);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const size_t k = 2 + rng.UniformInt(4);
    KTuple centers(k, Point(2));
    for (Point& c : centers) {
      for (double& v : c) v = 100.0 * rng.Uniform();
    }
    const TupleSet tuples = NoisyTuples(centers, 8, 0.01, rng);
    bool friendly = true;
    for (const KTuple& a : tuples) {
      for (const KTuple& b : tuples) {
        friendly = friendly && MatchGamma(a, b, 1.0 / 7.0)->matched;
      }
    }
    if (!friendly) continue;
    ++checked;
    std::vector<size_t> id(k);
    std::iota(id.begin(), id.end(), 0);
    TupleSet rotated = tuples;
    std::rotate(rotated.begin(), rotated.begin() + 3, rotated.end());
    const TupleSet a = *FriendlyReorderWithPermutation(tuples, id);
    const TupleSet b = *FriendlyReorderWithPermutation(rotated, id);
    // b[i] corresponds to a[(i + 3) % n].
    std::vector<size_t> sigma(k);
    for (size_t j = 0; j < k; ++j) {
      sigma[j] = std::find(a[3].begin(), a[3].end(), b[0][j]) - a[3].begin();
    }
    for (size_t i = 0; i < tuples.size(); ++i) {
      const KTuple& ai = a[(i + 3) % tuples.size()];
      for (size_t j = 0; j < k; ++j) ASSERT_EQ(b[i][j], ai[sigma[j]]);
    }
  }
  EXPECT_GT(checked, 50);
}

TEST(FriendlyOrdTupAvgTest, Examples) {
  RandomSource quiet(4, /*noise_free=*/true);
  const std::vector<double> radii = {1.0, 1.0};
  EXPECT_FALSE(FriendlyOrdTupAvg({}, 1.0, 1e-8, radii, quiet)->has_value());
  const KTuple x = {{1.0, 2.0}, {3.0, 4.0}};
  EXPECT_EQ(**FriendlyOrdTupAvg(TupleSet(500, x), 1.0, 1e-8, radii, quiet), x);
  const std::vector<double> wrong = {1.0};
  EXPECT_FALSE(FriendlyOrdTupAvg(TupleSet(5, x), 1.0, 1e-8, wrong, quiet).ok());
}

TEST(FriendlyOrdTupAvgTest, SigmaIsSqrtKTimesSingleAverage) {
  const double r = 1.7;
  const size_t n = 400;
  const double rho2 = 0.9;
  for (size_t k : {1, 2, 5, 8}) {
    EXPECT_NEAR(OrdTupNoiseScale(r, n, k, rho2),
                std::sqrt(static_cast<double>(k)) *
                    FriendlyAvgNoiseScale(r, static_cast<double>(n), rho2),
                1e-15);
  }
}

TEST(FcAvgOrdTupTest, IdenticalTuplesExactAndLedger) {
  RandomSource quiet(5, /*noise_free=*/true);
  const KTuple x = {{1.0}, {7.0}, {20.0}};
  BudgetLedger ledger;
  TupleAggregationTrace trace;
  const std::optional<KTuple> out = *FcAvgOrdTup(
      TupleSet(3000, x), 2.0, 1e-6, 0.1, 1e-3, 10.0, quiet, &ledger, &trace);
  ASSERT_TRUE(out.has_value());
  EXPECT_EQ(*out, x);
  EXPECT_NEAR(ledger.TotalRho(), 2.0, 1e-12);
  EXPECT_NEAR(ledger.TotalDelta(), 1e-6, 1e-20);
  EXPECT_EQ(trace.dist_core_size, 3000u);
}

TEST(FcAvgOrdTupTest, WideCoordinateFallsBackToRMax) {
  RandomSource quiet(6, /*noise_free=*/true);
  TupleSet tuples;
  for (int i = 0; i < 3000; ++i) {
    tuples.push_back({{0.0}, {i % 10 == 0 ? 100.0 : 50.0}});
  }
  TupleAggregationTrace trace;
  const std::optional<KTuple> out =
      *FcAvgOrdTup(tuples, 2.0, 1e-6, 0.1, 1e-3, 10.0, quiet, nullptr, &trace);
  ASSERT_EQ(trace.radii.size(), 2u);
  EXPECT_DOUBLE_EQ(trace.radii[1], 10.0);
  ASSERT_TRUE(out.has_value());
  EXPECT_EQ(trace.dist_core_size, 2700u);
  EXPECT_EQ((*out)[1], Point{50.0});
}

TEST(FcKTupleClusteringTest, CopiesOfOneTuple) {
  RandomSource quiet(7, /*noise_free=*/true);
  const KTuple x = {{0.0, 0.0}, {10.0, 0.0}, {0.0, 10.0}};
  BudgetLedger ledger;
  const std::optional<KTuple> out = *FcKTupleClustering(
      TupleSet(3000, x), 2.0, 1e-6, 0.1, 1e-3, 20.0, quiet, &ledger);
  ASSERT_TRUE(out.has_value());
  EXPECT_EQ(Sorted(*out), Sorted(x));
  EXPECT_NEAR(ledger.TotalRho(), 2.0, 1e-12);
  EXPECT_NEAR(ledger.TotalDelta(), 1e-6, 1e-20);
}

TEST(FcKTupleClusteringTest, UnmatchedTuplesAbort) {
  RandomSource rng(8);
  TupleSet tuples;
  for (int i = 0; i < 200; ++i) {
    tuples.push_back({{100.0 * rng.Uniform()}, {100.0 * rng.Uniform()}});
  }
  BudgetLedger ledger;
  TupleAggregationTrace trace;
  EXPECT_FALSE(FcKTupleClustering(tuples, 1.0, 1e-6, 0.1, 1e-3, 200.0, rng,
                                  &ledger, &trace)
                   ->has_value());
  EXPECT_EQ(trace.match_core_size, 0u);
  EXPECT_NEAR(ledger.TotalRho(), 1.0, 1e-12);
}

TEST(GoodAveragesTest, VerifierOnConstructedInstances) {
  RandomSource rng(9);
  const KTuple centers = {{0.0, 0.0}, {100.0, 0.0}, {0.0, 100.0}};
  const TupleSet tuples = NoisyTuples(centers, 50, 0.5, rng);
  // Exact cluster averages.
  KTuple averages(3, Point(2, 0.0));
  for (const KTuple& t : tuples) {
    for (const Point& p : t) {
      const size_t i = NearestAssignment(KTuple{p}, centers)[0];
      for (size_t c = 0; c < 2; ++c) averages[i][c] += p[c] / 50.0;
    }
  }
  EXPECT_TRUE(*IsGoodAveragesSolution(tuples, averages, 1.0, 1e-3));
  // Order of y does not matter.
  KTuple shuffled = {averages[2], averages[0], averages[1]};
  EXPECT_TRUE(*IsGoodAveragesSolution(tuples, shuffled, 1.0, 1e-3));
  // A center 40 away from its cluster average cannot be within one radius
  // while keeping the balls 3-far apart.
  KTuple off = averages;
  off[0][0] += 40.0;
  EXPECT_FALSE(*IsGoodAveragesSolution(tuples, off, 1.0, 1e-3));
  // Two clusters too close to be far-separated.
  const TupleSet close = NoisyTuples({{0.0, 0.0}, {3.0, 0.0}}, 50, 0.5, rng);
  EXPECT_FALSE(
      *IsGoodAveragesSolution(close, {{0.0, 0.0}, {3.0, 0.0}}, 1.0, 1e-3));
  EXPECT_FALSE(IsGoodAveragesSolution(tuples, {{0.0, 0.0}}, 1.0, 1e-3).ok());
}

}  // namespace
}  // namespace friendlycore
