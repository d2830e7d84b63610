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

#ifndef FRIENDLYCORE_HARNESS_H_
#define FRIENDLYCORE_HARNESS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "friendlycore/averaging.h"
#include "friendlycore/linalg.h"
#include "friendlycore/predicates.h"
#include "friendlycore/random_source.h"

namespace friendlycore {

// n i.i.d. draws from N(0, I_d).
PointSet GenGaussianCloud(size_t n, size_t d, RandomSource& rng);

enum class CenterSpec {
  kUnitBall,     // uniform in the unit ball
  kHypercube12,  // uniform on {1, 2}^d
};

absl::StatusOr<CenterSpec> ParseCenterSpec(std::string_view name);
std::string CenterSpecName(CenterSpec spec);

struct Mixture {
  PointSet points;
  std::vector<size_t> labels;
  KTuple centers;
};

// k spherical Gaussian components N(c_i, sigma2 I). Component i receives
// n / k points, plus one when i < n % k; points are grouped by component.
// Points longer than clip_norm are rescaled onto that sphere.
absl::StatusOr<Mixture> GenMixture(size_t n, size_t k, size_t d,
                                   CenterSpec centers, double sigma2,
                                   std::optional<double> clip_norm,
                                   RandomSource& rng);

// t independent Wishart(sigma, m) / m draws (Bartlett decomposition). Each
// has the law of the empirical second-moment matrix of m i.i.d. N(0, sigma)
// points. Piece i uses its own child stream.
absl::StatusOr<std::vector<SymMatrix>> SampleGaussianPieceCovariances(
    const SymMatrix& sigma, size_t m, size_t t, RandomSource& rng);

// r = sqrt(2) (sqrt(d) + sqrt(ln(100 n))).
double GaussianAverageRadius(size_t n, size_t d);

// Mean of sorted(values)[floor(q_lo N), ceil(q_hi N)). Errors on an empty
// slice or invalid quantiles.
absl::StatusOr<double> TrimmedMean(std::vector<double> values, double q_lo,
                                   double q_hi);

enum class TaskKind { kAvg, kAvgUnknownDiam, kCluster, kGmmLabel, kCovariance };

absl::StatusOr<TaskKind> ParseTask(std::string_view name);
std::string TaskName(TaskKind task);

struct ExperimentSpec {
  TaskKind task = TaskKind::kAvg;
  // Data generation. n = 0 on the covariance task samples the pieces
  // directly at the sizes of MakeCovariancePlan.
  size_t n = 800;
  size_t d = 1000;
  size_t k = 1;
  double sigma2 = 1.0;
  CenterSpec centers = CenterSpec::kUnitBall;
  std::optional<double> clip_norm;
  // Optional CSV of points replacing the generator (cluster task).
  std::string data_path;
  // Privacy.
  double rho = 1.0;
  double eps = 1.0;
  double delta = 1e-8;
  double beta = 0.1;
  Rho1Strategy rho1_strategy = Rho1Strategy::kFixed;
  // Algorithm parameters.
  double lambda = 1.0;  // clustering domain radius
  double r_min = 1e-3;
  double r_max = 100.0;  // FindDiam search bound
  size_t t = 0;          // pieces; 0 = task default
  std::string oracle = "kmeans++";
  // Protocol.
  int repetitions = 50;
  uint64_t seed = 1;
  bool noise_free = false;
  double q_lo = 0.1;
  double q_hi = 0.9;

  absl::Status Validate() const;
};

struct RepetitionResult {
  size_t rep = 0;
  bool failed = false;
  std::vector<double> metrics;
};

struct ExperimentResult {
  TaskKind task = TaskKind::kAvg;
  std::vector<std::string> metric_names;
  std::vector<RepetitionResult> reps;
  size_t failures = 0;
  // Trimmed mean of each metric over the repetitions that did not fail; NaN
  // when none succeeded.
  std::vector<double> trimmed;
};

// Metric columns per task:
//   avg, avg-unknown-diam: error
//   cluster: private_cost, baseline_cost, normalized_loss
//   gmm-label: accuracy, baseline_accuracy
//   covariance: matrix_dist, core_size
std::vector<std::string> MetricNames(TaskKind task);

// Runs the repetitions in parallel; repetition i draws from
// RandomSource(seed).Child(i).
absl::StatusOr<ExperimentResult> RunExperiment(const ExperimentSpec& spec);

// Header "rep,failed,<metrics>", one row per repetition and a final row with
// rep = "trimmed" and failed = the failure count.
std::string ResultCsv(const ExperimentResult& result);

// Shortest decimal text that reads back to the same double ("nan", "inf"
// and "-inf" for non-finite values).
std::string FormatDouble(double x);

}  // namespace friendlycore

#endif  // FRIENDLYCORE_HARNESS_H_
