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

#ifndef FRIENDLYCORE_CLUSTERING_PIPELINE_H_
#define FRIENDLYCORE_CLUSTERING_PIPELINE_H_

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "friendlycore/predicates.h"
#include "friendlycore/privacy_core.h"
#include "friendlycore/random_source.h"
#include "friendlycore/tuple_clustering.h"

namespace friendlycore {

// Non-private clustering oracle: (points, k, rng) -> k centers.
using ClusteringOracle = std::function<absl::StatusOr<KTuple>(
    const PointSet&, size_t, RandomSource&)>;

// k-means++ seeding followed by up to `lloyd_iters` Lloyd iterations
// (stopping early at a fixed point).
absl::StatusOr<KTuple> KMeansPlusPlus(const PointSet& data, size_t k,
                                      RandomSource& rng, int lloyd_iters = 20);

// Projects onto the top-k principal subspace (power iteration with
// deflation), runs KMeansPlusPlus there, lifts the clusters back as
// full-dimensional means and finishes with one Lloyd step.
absl::StatusOr<KTuple> PcaGmmCluster(const PointSet& data, size_t k,
                                     RandomSource& rng);

// Built-in oracles: "kmeans++" and "pca".
absl::StatusOr<ClusteringOracle> OracleByName(std::string_view name);

// Index of the nearest center, lowest index on ties.
size_t NearestCenter(const Point& x, const KTuple& centers);

// sum_x min_i ||x - c_i||^2, or the unsquared distances when !squared.
double KMeansCost(const PointSet& data, const KTuple& centers,
                  bool squared = true);

// Fraction of points whose nearest center matches the true label, maximized
// over relabelings (all k! for k <= 8, Hungarian assignment above).
absl::StatusOr<double> LabelingAccuracy(const std::vector<size_t>& true_labels,
                                        const KTuple& centers,
                                        const PointSet& data);

// Drops points with ||x|| > lambda, partitions the rest by nearest center and
// replaces each center by FriendlyAvg(part, rho, delta, 2 lambda). Parts
// whose average aborts keep their center.
absl::StatusOr<KTuple> NoisyLloydStep(const PointSet& data,
                                      const KTuple& centers, double rho,
                                      double delta, double lambda,
                                      RandomSource& rng,
                                      BudgetLedger* ledger = nullptr);

enum class ClusteringStatus { kSuccess, kFallbackFailure };

struct ClusteringResult {
  KTuple centers;
  double cost = 0.0;
  ClusteringStatus status = ClusteringStatus::kSuccess;
  TupleAggregationTrace trace;
};

struct FcClusteringParams {
  size_t k = 1;
  double rho = 1.0;
  double delta = 1e-8;
  double beta = 0.1;
  double r_min = 1e-3;
  double lambda = 1.0;
  size_t t = 1;
  bool squared_cost = true;
};

// Sample-and-aggregate clustering: shuffle, split into t pieces of
// floor(n / t) points, run the oracle on each, aggregate the t tuples with
// FcKTupleClustering(rho / 2, delta / 2, beta, r_min, 2 lambda) and finish
// with NoisyLloydStep(rho / 2, delta / 2, lambda) on all points. A status of
// kFallbackFailure means the tuple aggregation aborted.
absl::StatusOr<ClusteringResult> FcClustering(const PointSet& data,
                                              const FcClusteringParams& params,
                                              const ClusteringOracle& oracle,
                                              RandomSource& rng,
                                              BudgetLedger* ledger = nullptr);

// Maximum-weight perfect matching on a square matrix: result[i] is the column
// assigned to row i.
std::vector<size_t> MaxWeightAssignment(
    const std::vector<std::vector<double>>& weights);

}  // namespace friendlycore

#endif  // FRIENDLYCORE_CLUSTERING_PIPELINE_H_
