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

#include "friendlycore/harness.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "friendlycore/averaging.h"
#include "friendlycore/clustering_pipeline.h"
#include "friendlycore/covariance.h"
#include "friendlycore/io.h"
#include "friendlycore/parallel.h"

namespace friendlycore {
namespace {

constexpr size_t kDefaultClusterPieces = 200;
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Marsaglia-Tsang sampler for Gamma(shape, 1).
double SampleGamma(double shape, RandomSource& rng) {
  if (shape < 1.0) {
    return SampleGamma(shape + 1.0, rng) * std::pow(rng.Uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    const double x = rng.StandardNormal();
    const double v = std::pow(1.0 + c * x, 3);
    if (v <= 0.0) continue;
    const double u = rng.Uniform();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
  }
}

Point UnitBallPoint(size_t d, RandomSource& rng) {
  Point x(d);
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (double& v : x) {
      v = rng.StandardNormal();
      norm2 += v * v;
    }
  } while (norm2 == 0.0);
  const double radius = std::pow(rng.Uniform(), 1.0 / static_cast<double>(d));
  const double scale = radius / std::sqrt(norm2);
  for (double& v : x) v *= scale;
  return x;
}

double Norm(const Point& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

SymMatrix CovarianceTarget(size_t d, double sigma2) {
  SymMatrix sigma(d);
  for (size_t i = 0; i < d; ++i) {
    sigma(i, i) = sigma2 * static_cast<double>(i + 1);
  }
  return sigma;
}

struct Outcome {
  bool failed = false;
  std::vector<double> metrics;
};

absl::StatusOr<Outcome> RunAverage(const ExperimentSpec& spec,
                                   RandomSource& rng) {
  RandomSource data_rng = rng.Child("data");
  const PointSet data = GenGaussianCloud(spec.n, spec.d, data_rng);
  RandomSource algo_rng = rng.Child("private");
  FriendlyAvgOptions options;
  options.rho1_strategy = spec.rho1_strategy;
  absl::StatusOr<std::optional<Point>> est =
      spec.task == TaskKind::kAvg
          ? FcAvg(data, spec.rho, spec.delta,
                  GaussianAverageRadius(spec.n, spec.d), algo_rng, options)
          : FcAvgUnknownDiam(data, spec.rho, spec.delta, spec.beta, spec.r_min,
                             spec.r_max, algo_rng, options);
  if (!est.ok()) return est.status();
  if (!est->has_value()) return Outcome{true, {kNan}};
  return Outcome{false, {Norm(**est)}};
}

absl::StatusOr<Mixture> ClusterData(const ExperimentSpec& spec,
                                    RandomSource& rng) {
  if (!spec.data_path.empty()) {
    absl::StatusOr<PointSet> points = ReadPoints(spec.data_path);
    if (!points.ok()) return points.status();
    return Mixture{*std::move(points), {}, {}};
  }
  RandomSource data_rng = rng.Child("data");
  return GenMixture(spec.n, spec.k, spec.d, spec.centers, spec.sigma2,
                    spec.clip_norm, data_rng);
}

absl::StatusOr<Outcome> RunClustering(const ExperimentSpec& spec,
                                      RandomSource& rng) {
  absl::StatusOr<Mixture> mixture = ClusterData(spec, rng);
  if (!mixture.ok()) return mixture.status();
  const PointSet& data = mixture->points;
  if (spec.task == TaskKind::kGmmLabel && mixture->labels.empty()) {
    return absl::InvalidArgumentError("gmm-label needs generated labels");
  }
  absl::StatusOr<ClusteringOracle> oracle = OracleByName(spec.oracle);
  if (!oracle.ok()) return oracle.status();

  RandomSource baseline_rng = rng.Child("baseline");
  absl::StatusOr<KTuple> baseline = (*oracle)(data, spec.k, baseline_rng);
  if (!baseline.ok()) return baseline.status();

  FcClusteringParams params;
  params.k = spec.k;
  params.rho = spec.rho;
  params.delta = spec.delta;
  params.beta = spec.beta;
  params.r_min = spec.r_min;
  params.lambda = spec.lambda;
  params.t = spec.t > 0 ? spec.t : std::min(kDefaultClusterPieces, data.size());
  RandomSource algo_rng = rng.Child("private");
  absl::StatusOr<ClusteringResult> result =
      FcClustering(data, params, *oracle, algo_rng);
  if (!result.ok()) return result.status();
  const bool failed = result->status != ClusteringStatus::kSuccess;

  if (spec.task == TaskKind::kCluster) {
    const double base_cost = KMeansCost(data, *baseline);
    if (failed) return Outcome{true, {kNan, base_cost, kNan}};
    return Outcome{false,
                   {result->cost, base_cost, 1.0 - base_cost / result->cost}};
  }
  absl::StatusOr<double> base_acc =
      LabelingAccuracy(mixture->labels, *baseline, data);
  if (!base_acc.ok()) return base_acc.status();
  if (failed) return Outcome{true, {kNan, *base_acc}};
  absl::StatusOr<double> acc =
      LabelingAccuracy(mixture->labels, result->centers, data);
  if (!acc.ok()) return acc.status();
  return Outcome{false, {*acc, *base_acc}};
}

absl::StatusOr<Outcome> RunCovariance(const ExperimentSpec& spec,
                                      RandomSource& rng) {
  const SymMatrix sigma = CovarianceTarget(spec.d, spec.sigma2);
  absl::StatusOr<CovariancePlan> plan =
      MakeCovariancePlan(spec.d, spec.eps, spec.delta, spec.beta);
  if (!plan.ok()) return plan.status();
  const size_t t = spec.t > 0 ? spec.t : plan->t;
  RandomSource data_rng = rng.Child("data");
  RandomSource algo_rng = rng.Child("private");
  absl::StatusOr<FcCovarianceResult> result;
  if (spec.n == 0) {
    absl::StatusOr<std::vector<SymMatrix>> pieces =
        SampleGaussianPieceCovariances(sigma, plan->m, t, data_rng);
    if (!pieces.ok()) return pieces.status();
    result = FcCovarianceFromPieces(*pieces, spec.eps, spec.delta, plan->eta,
                                    kDefaultC1, algo_rng);
  } else {
    absl::StatusOr<SymMatrix> root = SqrtPsd(sigma);
    if (!root.ok()) return root.status();
    PointSet points = GenGaussianCloud(spec.n, spec.d, data_rng);
    for (Point& x : points) {
      Point y(spec.d, 0.0);
      for (size_t i = 0; i < spec.d; ++i) {
        for (size_t j = 0; j < spec.d; ++j) y[i] += (*root)(i, j) * x[j];
      }
      x = std::move(y);
    }
    result = FcCovariance(points, spec.eps, spec.delta, t, plan->eta,
                          kDefaultC1, algo_rng);
  }
  if (!result.ok()) return result.status();
  const double core = static_cast<double>(result->core_size);
  if (!result->estimate.has_value()) return Outcome{true, {kNan, core}};
  absl::StatusOr<double> dist = MatrixDist(*result->estimate, sigma);
  if (!dist.ok()) return dist.status();
  return Outcome{false, {*dist, core}};
}

absl::StatusOr<Outcome> RunRepetition(const ExperimentSpec& spec,
                                      RandomSource& rng) {
  switch (spec.task) {
    case TaskKind::kAvg:
    case TaskKind::kAvgUnknownDiam:
      return RunAverage(spec, rng);
    case TaskKind::kCluster:
    case TaskKind::kGmmLabel:
      return RunClustering(spec, rng);
    case TaskKind::kCovariance:
      return RunCovariance(spec, rng);
  }
  return absl::InternalError("unknown task");
}

}  // namespace

PointSet GenGaussianCloud(size_t n, size_t d, RandomSource& rng) {
  PointSet points(n, Point(d));
  for (Point& x : points) {
    for (double& v : x) v = rng.StandardNormal();
  }
  return points;
}

absl::StatusOr<CenterSpec> ParseCenterSpec(std::string_view name) {
  if (name == "unit-ball") return CenterSpec::kUnitBall;
  if (name == "hypercube-{1,2}" || name == "hypercube") {
    return CenterSpec::kHypercube12;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown center spec: ", std::string(name)));
}

std::string CenterSpecName(CenterSpec spec) {
  return spec == CenterSpec::kUnitBall ? "unit-ball" : "hypercube-{1,2}";
}

absl::StatusOr<Mixture> GenMixture(size_t n, size_t k, size_t d,
                                   CenterSpec centers, double sigma2,
                                   std::optional<double> clip_norm,
                                   RandomSource& rng) {
  if (k == 0 || d == 0) return absl::InvalidArgumentError("k, d must be >= 1");
  if (!(sigma2 >= 0.0))
    return absl::InvalidArgumentError("sigma2 must be >= 0");
  if (clip_norm.has_value() && !(*clip_norm > 0.0)) {
    return absl::InvalidArgumentError("clip_norm must be positive");
  }
  Mixture out;
  out.centers.reserve(k);
  for (size_t i = 0; i < k; ++i) {
    if (centers == CenterSpec::kUnitBall) {
      out.centers.push_back(UnitBallPoint(d, rng));
    } else {
      Point c(d);
      for (double& v : c) v = rng.Bernoulli(0.5) ? 2.0 : 1.0;
      out.centers.push_back(std::move(c));
    }
  }
  const double sd = std::sqrt(sigma2);
  out.points.reserve(n);
  out.labels.reserve(n);
  for (size_t i = 0; i < k; ++i) {
    const size_t size = n / k + (i < n % k ? 1 : 0);
    for (size_t s = 0; s < size; ++s) {
      Point x = out.centers[i];
      for (double& v : x) v += sd * rng.StandardNormal();
      if (clip_norm.has_value()) {
        const double norm = Norm(x);
        if (norm > *clip_norm) {
          for (double& v : x) v *= *clip_norm / norm;
        }
      }
      out.points.push_back(std::move(x));
      out.labels.push_back(i);
    }
  }
  return out;
}

absl::StatusOr<std::vector<SymMatrix>> SampleGaussianPieceCovariances(
    const SymMatrix& sigma, size_t m, size_t t, RandomSource& rng) {
  const size_t d = sigma.dim();
  if (d == 0) return absl::InvalidArgumentError("empty covariance");
  if (m < d) return absl::InvalidArgumentError("m must be >= d");
  absl::StatusOr<SymMatrix> root = SqrtPsd(sigma);
  if (!root.ok()) return root.status();
  const RandomSource base = rng.Split();
  std::vector<SymMatrix> pieces(t);
  ParallelFor(t, [&](size_t begin, size_t end) {
    for (size_t p = begin; p < end; ++p) {
      RandomSource piece_rng = base.Child(static_cast<uint64_t>(p));
      Matrix a(d);
      for (size_t i = 0; i < d; ++i) {
        const double df = static_cast<double>(m - i);
        a(i, i) = std::sqrt(2.0 * SampleGamma(df / 2.0, piece_rng));
        for (size_t j = 0; j < i; ++j) a(i, j) = piece_rng.StandardNormal();
      }
      const Matrix ra = Multiply(*root, a);
      pieces[p] = Symmetrize(
          Scale(Multiply(ra, Transpose(ra)), 1.0 / static_cast<double>(m)));
    }
  });
  return pieces;
}

double GaussianAverageRadius(size_t n, size_t d) {
  return std::sqrt(2.0) * (std::sqrt(static_cast<double>(d)) +
                           std::sqrt(std::log(100.0 * static_cast<double>(n))));
}

absl::StatusOr<double> TrimmedMean(std::vector<double> values, double q_lo,
                                   double q_hi) {
  if (!(q_lo >= 0.0 && q_lo < q_hi && q_hi <= 1.0)) {
    return absl::InvalidArgumentError("need 0 <= q_lo < q_hi <= 1");
  }
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  const size_t lo = static_cast<size_t>(std::floor(q_lo * n));
  const size_t hi = static_cast<size_t>(std::ceil(q_hi * n));
  if (lo >= hi) return absl::InvalidArgumentError("empty trimmed slice");
  double sum = 0.0;
  for (size_t i = lo; i < hi; ++i) sum += values[i];
  return sum / static_cast<double>(hi - lo);
}

absl::StatusOr<TaskKind> ParseTask(std::string_view name) {
  if (name == "avg") return TaskKind::kAvg;
  if (name == "avg-unknown-diam") return TaskKind::kAvgUnknownDiam;
  if (name == "cluster") return TaskKind::kCluster;
  if (name == "gmm-label") return TaskKind::kGmmLabel;
  if (name == "covariance") return TaskKind::kCovariance;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown task: ", std::string(name)));
}

std::string TaskName(TaskKind task) {
  switch (task) {
    case TaskKind::kAvg:
      return "avg";
    case TaskKind::kAvgUnknownDiam:
      return "avg-unknown-diam";
    case TaskKind::kCluster:
      return "cluster";
    case TaskKind::kGmmLabel:
      return "gmm-label";
    case TaskKind::kCovariance:
      return "covariance";
  }
  return "";
}

absl::Status ExperimentSpec::Validate() const {
  if (repetitions < 1) return absl::InvalidArgumentError("repetitions < 1");
  if (!(q_lo >= 0.0 && q_lo < q_hi && q_hi <= 1.0)) {
    return absl::InvalidArgumentError("need 0 <= q_lo < q_hi <= 1");
  }
  if (d == 0 || k == 0) return absl::InvalidArgumentError("d, k must be >= 1");
  if (n == 0 && task != TaskKind::kCovariance && data_path.empty()) {
    return absl::InvalidArgumentError("n must be >= 1");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError("delta must be in (0, 1)");
  }
  if (!(beta > 0.0 && beta < 1.0)) {
    return absl::InvalidArgumentError("beta must be in (0, 1)");
  }
  if (task == TaskKind::kCovariance) {
    if (!(eps > 0.0)) return absl::InvalidArgumentError("eps must be positive");
  } else if (!(rho > 0.0)) {
    return absl::InvalidArgumentError("rho must be positive");
  }
  if (!(sigma2 >= 0.0)) return absl::InvalidArgumentError("sigma2 < 0");
  if (!(r_min > 0.0 && r_min < r_max)) {
    return absl::InvalidArgumentError("need 0 < r_min < r_max");
  }
  if (!(lambda > 0.0)) return absl::InvalidArgumentError("lambda must be > 0");
  if (!data_path.empty() && task != TaskKind::kCluster) {
    return absl::InvalidArgumentError("data_path is only read by cluster");
  }
  return absl::OkStatus();
}

std::vector<std::string> MetricNames(TaskKind task) {
  switch (task) {
    case TaskKind::kAvg:
    case TaskKind::kAvgUnknownDiam:
      return {"error"};
    case TaskKind::kCluster:
      return {"private_cost", "baseline_cost", "normalized_loss"};
    case TaskKind::kGmmLabel:
      return {"accuracy", "baseline_accuracy"};
    case TaskKind::kCovariance:
      return {"matrix_dist", "core_size"};
  }
  return {};
}

absl::StatusOr<ExperimentResult> RunExperiment(const ExperimentSpec& spec) {
  if (absl::Status s = spec.Validate(); !s.ok()) return s;
  const size_t reps = static_cast<size_t>(spec.repetitions);
  const RandomSource root(spec.seed, spec.noise_free);
  std::vector<absl::StatusOr<Outcome>> outcomes(reps, Outcome{});
  ParallelFor(reps, [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      RandomSource rng = root.Child(static_cast<uint64_t>(i));
      outcomes[i] = RunRepetition(spec, rng);
    }
  });
  ExperimentResult result;
  result.task = spec.task;
  result.metric_names = MetricNames(spec.task);
  const size_t width = result.metric_names.size();
  std::vector<std::vector<double>> columns(width);
  for (size_t i = 0; i < reps; ++i) {
    if (!outcomes[i].ok()) return outcomes[i].status();
    RepetitionResult row{i, outcomes[i]->failed, outcomes[i]->metrics};
    if (row.failed) {
      ++result.failures;
    } else {
      for (size_t c = 0; c < width; ++c) columns[c].push_back(row.metrics[c]);
    }
    result.reps.push_back(std::move(row));
  }
  for (const std::vector<double>& column : columns) {
    absl::StatusOr<double> trimmed = TrimmedMean(column, spec.q_lo, spec.q_hi);
    result.trimmed.push_back(trimmed.ok() ? *trimmed : kNan);
  }
  return result;
}

std::string FormatDouble(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const std::to_chars_result r = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, r.ptr);
}

std::string ResultCsv(const ExperimentResult& result) {
  std::string out = absl::StrCat("rep,failed,",
                                 absl::StrJoin(result.metric_names, ","), "\n");
  const auto join = [](const std::vector<double>& values) {
    std::vector<std::string> text;
    for (double v : values) text.push_back(FormatDouble(v));
    return absl::StrJoin(text, ",");
  };
  for (const RepetitionResult& row : result.reps) {
    absl::StrAppend(&out, row.rep, ",", row.failed ? 1 : 0, ",",
                    join(row.metrics), "\n");
  }
  absl::StrAppend(&out, "trimmed,", result.failures, ",", join(result.trimmed),
                  "\n");
  return out;
}

}  // namespace friendlycore
