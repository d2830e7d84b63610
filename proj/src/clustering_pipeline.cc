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

#include "friendlycore/clustering_pipeline.h"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "friendlycore/averaging.h"
#include "friendlycore/parallel.h"

namespace friendlycore {
namespace {

constexpr int kPowerIterations = 1000;
constexpr double kPowerTolerance = 1e-12;

absl::Status CheckClusterInput(const PointSet& data, size_t k) {
  if (k == 0) return absl::InvalidArgumentError("k must be >= 1");
  if (data.size() < k) {
    return absl::InvalidArgumentError(
        absl::StrCat("need n >= k, got n = ", data.size(), ", k = ", k));
  }
  return ValidatePointSet(data);
}

std::vector<size_t> Assign(const PointSet& data, const KTuple& centers) {
  std::vector<size_t> labels(data.size());
  ParallelFor(data.size(), [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      labels[i] = NearestCenter(data[i], centers);
    }
  });
  return labels;
}

// Means of the labeled groups; empty groups keep their previous center.
KTuple GroupMeans(const PointSet& data, const std::vector<size_t>& labels,
                  const KTuple& previous) {
  const size_t d = data.front().size();
  KTuple sums(previous.size(), Point(d, 0.0));
  std::vector<size_t> sizes(previous.size(), 0);
  for (size_t i = 0; i < data.size(); ++i) {
    for (size_t j = 0; j < d; ++j) sums[labels[i]][j] += data[i][j];
    ++sizes[labels[i]];
  }
  KTuple out = previous;
  for (size_t c = 0; c < out.size(); ++c) {
    if (sizes[c] == 0) continue;
    for (size_t j = 0; j < d; ++j) {
      out[c][j] = sums[c][j] / static_cast<double>(sizes[c]);
    }
  }
  return out;
}

KTuple Lloyd(const PointSet& data, KTuple centers, int iterations) {
  std::vector<size_t> labels;
  for (int it = 0; it < iterations; ++it) {
    std::vector<size_t> next = Assign(data, centers);
    if (it > 0 && next == labels) break;
    labels = std::move(next);
    centers = GroupMeans(data, labels, centers);
  }
  return centers;
}

double Dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Top `count` eigenvectors of the PSD matrix `cov` (d x d, row-major).
std::vector<std::vector<double>> TopEigenvectors(std::vector<double> cov,
                                                 size_t d, size_t count,
                                                 RandomSource& rng) {
  std::vector<std::vector<double>> vectors;
  for (size_t c = 0; c < count; ++c) {
    std::vector<double> v(d);
    for (double& x : v) x = rng.StandardNormal();
    auto orthonormalize = [&](std::vector<double>& w) {
      for (const std::vector<double>& u : vectors) {
        const double proj = Dot(w, u);
        for (size_t i = 0; i < d; ++i) w[i] -= proj * u[i];
      }
      const double norm = std::sqrt(Dot(w, w));
      if (norm > 0.0) {
        for (double& x : w) x /= norm;
      }
      return norm;
    };
    orthonormalize(v);
    for (int it = 0; it < kPowerIterations; ++it) {
      std::vector<double> w(d, 0.0);
      for (size_t i = 0; i < d; ++i) {
        for (size_t j = 0; j < d; ++j) w[i] += cov[i * d + j] * v[j];
      }
      if (orthonormalize(w) == 0.0) break;
      double change = 0.0;
      for (size_t i = 0; i < d; ++i) change += std::fabs(w[i] - v[i]);
      v = std::move(w);
      if (change < kPowerTolerance) break;
    }
    // Deflate so the next vector converges to the next eigenvalue.
    std::vector<double> cv(d, 0.0);
    for (size_t i = 0; i < d; ++i) {
      for (size_t j = 0; j < d; ++j) cv[i] += cov[i * d + j] * v[j];
    }
    const double lambda = Dot(v, cv);
    for (size_t i = 0; i < d; ++i) {
      for (size_t j = 0; j < d; ++j) cov[i * d + j] -= lambda * v[i] * v[j];
    }
    vectors.push_back(std::move(v));
  }
  return vectors;
}

}  // namespace

size_t NearestCenter(const Point& x, const KTuple& centers) {
  size_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (size_t c = 0; c < centers.size(); ++c) {
    const double dist = SquaredDistance(x, centers[c]);
    if (dist < best_dist) {
      best_dist = dist;
      best = c;
    }
  }
  return best;
}

absl::StatusOr<KTuple> KMeansPlusPlus(const PointSet& data, size_t k,
                                      RandomSource& rng, int lloyd_iters) {
  if (absl::Status s = CheckClusterInput(data, k); !s.ok()) return s;
  const size_t n = data.size();
  KTuple centers;
  centers.push_back(data[rng.UniformInt(n)]);
  std::vector<double> dist2(n);
  for (size_t i = 0; i < n; ++i)
    dist2[i] = SquaredDistance(data[i], centers[0]);
  while (centers.size() < k) {
    const double total = std::accumulate(dist2.begin(), dist2.end(), 0.0);
    size_t chosen = n - 1;
    if (total > 0.0) {
      const double target = rng.Uniform() * total;
      double running = 0.0;
      for (size_t i = 0; i < n; ++i) {
        running += dist2[i];
        if (running > target) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = rng.UniformInt(n);
    }
    centers.push_back(data[chosen]);
    for (size_t i = 0; i < n; ++i) {
      dist2[i] = std::min(dist2[i], SquaredDistance(data[i], centers.back()));
    }
  }
  return Lloyd(data, std::move(centers), lloyd_iters);
}

absl::StatusOr<KTuple> PcaGmmCluster(const PointSet& data, size_t k,
                                     RandomSource& rng) {
  if (absl::Status s = CheckClusterInput(data, k); !s.ok()) return s;
  const size_t n = data.size();
  const size_t d = data[0].size();
  const Point mu = Mean(data);
  std::vector<double> cov(d * d, 0.0);
  for (const Point& x : data) {
    for (size_t i = 0; i < d; ++i) {
      const double xi = x[i] - mu[i];
      for (size_t j = 0; j < d; ++j) cov[i * d + j] += xi * (x[j] - mu[j]);
    }
  }
  for (double& v : cov) v /= static_cast<double>(n);
  const size_t q = std::min(k, d);
  const std::vector<std::vector<double>> basis =
      TopEigenvectors(cov, d, q, rng);

  PointSet projected(n, Point(q, 0.0));
  for (size_t i = 0; i < n; ++i) {
    for (size_t c = 0; c < q; ++c) {
      double s = 0.0;
      for (size_t j = 0; j < d; ++j) s += basis[c][j] * (data[i][j] - mu[j]);
      projected[i][c] = s;
    }
  }
  absl::StatusOr<KTuple> low = KMeansPlusPlus(projected, k, rng);
  if (!low.ok()) return low.status();

  // Lift: full-dimensional means of the low-dimensional clusters, with the
  // embedded subspace center for any empty cluster.
  KTuple lifted(k, mu);
  for (size_t c = 0; c < k; ++c) {
    for (size_t b = 0; b < q; ++b) {
      for (size_t j = 0; j < d; ++j) lifted[c][j] += (*low)[c][b] * basis[b][j];
    }
  }
  lifted = GroupMeans(data, Assign(projected, *low), lifted);
  return Lloyd(data, std::move(lifted), 1);
}

absl::StatusOr<ClusteringOracle> OracleByName(std::string_view name) {
  if (name == "kmeans++") {
    return ClusteringOracle([](const PointSet& d, size_t k, RandomSource& r) {
      return KMeansPlusPlus(d, k, r);
    });
  }
  if (name == "pca") {
    return ClusteringOracle([](const PointSet& d, size_t k, RandomSource& r) {
      return PcaGmmCluster(d, k, r);
    });
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown oracle: ", std::string(name)));
}

double KMeansCost(const PointSet& data, const KTuple& centers, bool squared) {
  double cost = 0.0;
  for (const Point& x : data) {
    const double d2 = SquaredDistance(x, centers[NearestCenter(x, centers)]);
    cost += squared ? d2 : std::sqrt(d2);
  }
  return cost;
}

std::vector<size_t> MaxWeightAssignment(
    const std::vector<std::vector<double>>& weights) {
  // Hungarian algorithm (potentials form) on cost = -weight.
  const size_t n = weights.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<size_t> p(n + 1, 0), way(n + 1, 0);
  for (size_t i = 1; i <= n; ++i) {
    p[0] = i;
    size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const size_t i0 = p[j0];
      double delta = inf;
      size_t j1 = 0;
      for (size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = -weights[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<size_t> assignment(n, 0);
  for (size_t j = 1; j <= n; ++j) {
    if (p[j] != 0) assignment[p[j] - 1] = j - 1;
  }
  return assignment;
}

absl::StatusOr<double> LabelingAccuracy(const std::vector<size_t>& true_labels,
                                        const KTuple& centers,
                                        const PointSet& data) {
  if (true_labels.size() != data.size()) {
    return absl::InvalidArgumentError("labels and data differ in length");
  }
  if (data.empty()) return absl::InvalidArgumentError("empty dataset");
  if (centers.empty()) return absl::InvalidArgumentError("no centers");
  size_t size = centers.size();
  for (size_t label : true_labels) size = std::max(size, label + 1);
  std::vector<std::vector<double>> table(size, std::vector<double>(size, 0.0));
  for (size_t i = 0; i < data.size(); ++i) {
    table[true_labels[i]][NearestCenter(data[i], centers)] += 1.0;
  }
  double best = 0.0;
  if (size <= 8) {
    std::vector<size_t> perm(size);
    std::iota(perm.begin(), perm.end(), size_t{0});
    do {
      double hits = 0.0;
      for (size_t a = 0; a < size; ++a) hits += table[a][perm[a]];
      best = std::max(best, hits);
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    const std::vector<size_t> match = MaxWeightAssignment(table);
    for (size_t a = 0; a < size; ++a) best += table[a][match[a]];
  }
  return best / static_cast<double>(data.size());
}

absl::StatusOr<KTuple> NoisyLloydStep(const PointSet& data,
                                      const KTuple& centers, double rho,
                                      double delta, double lambda,
                                      RandomSource& rng, BudgetLedger* ledger) {
  if (centers.empty()) return absl::InvalidArgumentError("k must be >= 1");
  if (!(lambda > 0.0)) return absl::InvalidArgumentError("lambda must be > 0");
  if (!(rho > 0.0)) return absl::InvalidArgumentError("rho must be positive");
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError("delta must be in (0, 1)");
  }
  if (absl::Status s = ValidatePointSet(data); !s.ok()) return s;
  if (absl::Status s = ValidatePointSet(centers); !s.ok()) return s;
  if (!data.empty() && data[0].size() != centers[0].size()) {
    return absl::InvalidArgumentError("centers and data differ in dimension");
  }
  ChargeIfPresent(ledger, "noisy_lloyd_step", rho, delta);
  const size_t k = centers.size();
  std::vector<PointSet> parts(k);
  for (const Point& x : data) {
    if (std::sqrt(Dot(x, x)) > lambda) continue;
    parts[NearestCenter(x, centers)].push_back(x);
  }
  const RandomSource base = rng.Split();
  KTuple out = centers;
  std::vector<absl::Status> errors(k);
  ParallelFor(k, [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      RandomSource stream = base.Child(static_cast<uint64_t>(i));
      absl::StatusOr<std::optional<Point>> avg =
          FriendlyAvg(parts[i], rho, delta, 2.0 * lambda, stream);
      if (!avg.ok()) {
        errors[i] = avg.status();
      } else if (avg->has_value()) {
        out[i] = **avg;
      }
    }
  });
  for (const absl::Status& s : errors) {
    if (!s.ok()) return s;
  }
  return out;
}

absl::StatusOr<ClusteringResult> FcClustering(const PointSet& data,
                                              const FcClusteringParams& params,
                                              const ClusteringOracle& oracle,
                                              RandomSource& rng,
                                              BudgetLedger* ledger) {
  const size_t n = data.size();
  if (params.t == 0) return absl::InvalidArgumentError("t must be >= 1");
  if (params.t > n) {
    return absl::InvalidArgumentError(
        absl::StrCat("t = ", params.t, " exceeds n = ", n));
  }
  if (params.k == 0) return absl::InvalidArgumentError("k must be >= 1");
  if (!(params.lambda > 0.0)) {
    return absl::InvalidArgumentError("lambda must be > 0");
  }
  if (!(params.r_min > 0.0 && params.r_min < 2.0 * params.lambda)) {
    return absl::InvalidArgumentError("need 0 < r_min < 2 lambda");
  }
  if (!(params.beta > 0.0 && params.beta < 1.0)) {
    return absl::InvalidArgumentError("beta must be in (0, 1)");
  }
  if (absl::Status s = ValidatePointSet(data); !s.ok()) return s;

  const std::vector<size_t> order = rng.Permutation(n);
  const size_t m = n / params.t;
  const RandomSource base = rng.Split();
  TupleSet tuples(params.t);
  std::vector<absl::Status> errors(params.t);
  ParallelFor(params.t, [&](size_t begin, size_t end) {
    for (size_t piece = begin; piece < end; ++piece) {
      PointSet chunk;
      chunk.reserve(m);
      for (size_t i = piece * m; i < (piece + 1) * m; ++i) {
        chunk.push_back(data[order[i]]);
      }
      RandomSource stream = base.Child(static_cast<uint64_t>(piece));
      absl::StatusOr<KTuple> centers = oracle(chunk, params.k, stream);
      if (!centers.ok()) {
        errors[piece] = centers.status();
      } else if (centers->size() != params.k) {
        errors[piece] = absl::InternalError("oracle returned wrong k");
      } else {
        tuples[piece] = *std::move(centers);
      }
    }
  });
  for (const absl::Status& s : errors) {
    if (!s.ok()) return s;
  }

  ClusteringResult result;
  absl::StatusOr<std::optional<KTuple>> y = FcKTupleClustering(
      tuples, params.rho / 2.0, params.delta / 2.0, params.beta, params.r_min,
      2.0 * params.lambda, rng, ledger, &result.trace);
  if (!y.ok()) return y.status();
  if (!y->has_value()) {
    result.status = ClusteringStatus::kFallbackFailure;
    return result;
  }
  absl::StatusOr<KTuple> centers =
      NoisyLloydStep(data, **y, params.rho / 2.0, params.delta / 2.0,
                     params.lambda, rng, ledger);
  if (!centers.ok()) return centers.status();
  result.centers = *std::move(centers);
  result.cost = KMeansCost(data, result.centers, params.squared_cost);
  return result;
}

}  // namespace friendlycore
