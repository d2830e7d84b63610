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

// Command-line front end: private averaging, clustering, covariance
// estimation and experiment sweeps.
//
// Exit codes: 0 on success, 2 when the mechanism returns the abort outcome
// (or clustering falls back), 1 on errors.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "friendlycore/averaging.h"
#include "friendlycore/clustering_pipeline.h"
#include "friendlycore/covariance.h"
#include "friendlycore/harness.h"
#include "friendlycore/io.h"
#include "friendlycore/parallel.h"
#include "json.hpp"

namespace fc = friendlycore;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitBottom = 2;

struct CommonFlags {
  std::string input;
  std::string input_format;
  std::string output = "-";
  std::string format = "json";
  uint64_t seed = 1;
  bool noise_free = false;
  double delta = 1e-8;
};

void AddCommon(CLI::App* cmd, CommonFlags& f, bool needs_input) {
  CLI::Option* input =
      cmd->add_option("--input", f.input, "Points file (.csv or .json)");
  if (needs_input) input->required();
  cmd->add_option("--input-format", f.input_format,
                  "csv or json; inferred from the suffix when omitted");
  cmd->add_option("--output", f.output, "Output path, - for stdout");
  cmd->add_option("--format", f.format, "Output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed", f.seed, "Random seed");
  cmd->add_flag("--noise-free", f.noise_free, "Zero every noise draw");
  cmd->add_option("--delta", f.delta, "Privacy delta");
}

int Fail(const absl::Status& status) {
  std::cerr << "error: " << status << "\n";
  return kExitError;
}

absl::StatusOr<fc::PointSet> LoadInput(const CommonFlags& f) {
  std::optional<fc::FileFormat> format;
  if (!f.input_format.empty()) {
    absl::StatusOr<fc::FileFormat> parsed = fc::ParseFormat(f.input_format);
    if (!parsed.ok()) return parsed.status();
    format = *parsed;
  }
  return fc::ReadPoints(f.input, format);
}

absl::Status Emit(const CommonFlags& f, const std::string& content) {
  if (f.output == "-") {
    std::cout << content;
    std::cout.flush();
    return absl::OkStatus();
  }
  return fc::WriteFile(f.output, content);
}

json Rows(const fc::PointSet& rows) {
  return json::parse(fc::PointsToJson(rows));
}

int EmitPoint(const CommonFlags& f, const std::optional<fc::Point>& mean) {
  std::string content;
  if (f.format == "csv") {
    if (mean.has_value()) content = fc::PointsToCsv({*mean});
  } else {
    json j;
    j["status"] = mean.has_value() ? "ok" : "bottom";
    j["mean"] = mean.has_value() ? Rows({*mean})[0] : json(nullptr);
    content = j.dump() + "\n";
  }
  if (absl::Status s = Emit(f, content); !s.ok()) return Fail(s);
  return mean.has_value() ? kExitOk : kExitBottom;
}

absl::StatusOr<fc::Rho1Strategy> ParseRho1(const std::string& name) {
  if (name == "fixed") return fc::Rho1Strategy::kFixed;
  if (name == "optimized") return fc::Rho1Strategy::kOptimized;
  return absl::InvalidArgumentError("--rho1 must be fixed or optimized");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Private aggregation with FriendlyCore"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads,
                 "Worker threads (0 = hardware concurrency)");

  // avg
  CommonFlags avg_flags;
  double avg_rho = 1.0;
  double avg_r = 0.0;
  std::string avg_rho1 = "fixed";
  CLI::App* avg = app.add_subcommand("avg", "Average with a known radius");
  AddCommon(avg, avg_flags, true);
  avg->add_option("--rho", avg_rho, "zCDP budget");
  avg->add_option("--r", avg_r, "Friendship radius")->required();
  avg->add_option("--rho1", avg_rho1, "fixed or optimized");

  // avg-search
  CommonFlags search_flags;
  double search_rho = 1.0;
  double search_beta = 0.1;
  double search_r_min = 1e-3;
  double search_r_max = 0.0;
  std::string search_rho1 = "fixed";
  CLI::App* search =
      app.add_subcommand("avg-search", "Average with a searched radius");
  AddCommon(search, search_flags, true);
  search->add_option("--rho", search_rho, "zCDP budget");
  search->add_option("--beta", search_beta, "Failure probability");
  search->add_option("--r-min", search_r_min, "Smallest radius");
  search->add_option("--r-max", search_r_max, "Largest radius")->required();
  search->add_option("--rho1", search_rho1, "fixed or optimized");

  // cluster
  CommonFlags cluster_flags;
  fc::FcClusteringParams params;
  std::string oracle_name = "kmeans++";
  CLI::App* cluster = app.add_subcommand("cluster", "Private k-means");
  AddCommon(cluster, cluster_flags, true);
  cluster->add_option("--rho", params.rho, "zCDP budget");
  cluster->add_option("--k", params.k, "Number of centers")->required();
  cluster->add_option("--t", params.t, "Number of pieces")->required();
  cluster->add_option("--lambda", params.lambda, "Domain radius")->required();
  cluster->add_option("--r-min", params.r_min, "Smallest radius");
  cluster->add_option("--beta", params.beta, "Failure probability");
  cluster->add_option("--oracle", oracle_name, "kmeans++ or pca");

  // cov
  CommonFlags cov_flags;
  double cov_eps = 1.0;
  double cov_beta = 0.1;
  double cov_eta = 0.0;
  double cov_c1 = fc::kDefaultC1;
  size_t cov_t = 0;
  CLI::App* cov = app.add_subcommand("cov", "Private covariance");
  AddCommon(cov, cov_flags, true);
  cov->add_option("--eps", cov_eps, "DP epsilon");
  cov->add_option("--t", cov_t, "Number of pieces")->required();
  cov->add_option("--beta", cov_beta, "Failure probability for default eta");
  cov->add_option("--eta", cov_eta, "Noise scale (default from d and beta)");
  cov->add_option("--c1", cov_c1, "Abort constant");

  // experiment
  CommonFlags exp_flags;
  exp_flags.format = "csv";
  std::string spec_path;
  std::optional<uint64_t> exp_seed;
  CLI::App* experiment =
      app.add_subcommand("experiment", "Run an ExperimentSpec sweep");
  experiment->add_option("--spec", spec_path, "ExperimentSpec JSON file")
      ->required();
  experiment->add_option("--output", exp_flags.output,
                         "Output path, - for stdout");
  experiment->add_option("--format", exp_flags.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  experiment->add_option("--seed", exp_seed, "Overrides the spec seed");
  experiment->add_flag("--noise-free", exp_flags.noise_free,
                       "Zero every noise draw");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  if (threads < 0) return Fail(absl::InvalidArgumentError("--threads < 0"));
  if (threads > 0) fc::SetNumThreads(threads);

  if (*avg || *search) {
    const CommonFlags& f = *avg ? avg_flags : search_flags;
    absl::StatusOr<fc::PointSet> data = LoadInput(f);
    if (!data.ok()) return Fail(data.status());
    absl::StatusOr<fc::Rho1Strategy> strategy =
        ParseRho1(*avg ? avg_rho1 : search_rho1);
    if (!strategy.ok()) return Fail(strategy.status());
    fc::FriendlyAvgOptions options;
    options.rho1_strategy = *strategy;
    fc::RandomSource rng(f.seed, f.noise_free);
    absl::StatusOr<std::optional<fc::Point>> mean =
        *avg ? fc::FcAvg(*data, avg_rho, f.delta, avg_r, rng, options)
             : fc::FcAvgUnknownDiam(*data, search_rho, f.delta, search_beta,
                                    search_r_min, search_r_max, rng, options);
    if (!mean.ok()) return Fail(mean.status());
    return EmitPoint(f, *mean);
  }

  if (*cluster) {
    const CommonFlags& f = cluster_flags;
    absl::StatusOr<fc::PointSet> data = LoadInput(f);
    if (!data.ok()) return Fail(data.status());
    absl::StatusOr<fc::ClusteringOracle> oracle = fc::OracleByName(oracle_name);
    if (!oracle.ok()) return Fail(oracle.status());
    params.delta = f.delta;
    fc::RandomSource rng(f.seed, f.noise_free);
    absl::StatusOr<fc::ClusteringResult> result =
        fc::FcClustering(*data, params, *oracle, rng);
    if (!result.ok()) return Fail(result.status());
    const bool ok = result->status == fc::ClusteringStatus::kSuccess;
    std::string content;
    if (f.format == "csv") {
      if (ok) content = fc::PointsToCsv(result->centers);
    } else {
      json j;
      j["status"] = ok ? "ok" : "fallback_failure";
      j["centers"] = ok ? Rows(result->centers) : json(nullptr);
      j["cost"] = ok ? json(result->cost) : json(nullptr);
      content = j.dump() + "\n";
    }
    if (absl::Status s = Emit(f, content); !s.ok()) return Fail(s);
    return ok ? kExitOk : kExitBottom;
  }

  if (*cov) {
    const CommonFlags& f = cov_flags;
    absl::StatusOr<fc::PointSet> data = LoadInput(f);
    if (!data.ok()) return Fail(data.status());
    if (data->empty()) return Fail(absl::InvalidArgumentError("no points"));
    const double eta =
        cov_eta > 0.0 ? cov_eta : fc::AccuracyEta((*data)[0].size(), cov_beta);
    fc::RandomSource rng(f.seed, f.noise_free);
    absl::StatusOr<fc::FcCovarianceResult> result =
        fc::FcCovariance(*data, cov_eps, f.delta, cov_t, eta, cov_c1, rng);
    if (!result.ok()) return Fail(result.status());
    const bool ok = result->estimate.has_value();
    std::string content;
    if (f.format == "csv") {
      if (ok) content = fc::PointsToCsv(result->estimate->ToRows());
    } else {
      json j;
      j["status"] = ok ? "ok" : "bottom";
      j["matrix"] = ok ? Rows(result->estimate->ToRows()) : json(nullptr);
      j["core_size"] = result->core_size;
      j["dp_cost"] = {{"eps", result->cost.eps}, {"delta", result->cost.delta}};
      content = j.dump() + "\n";
    }
    if (absl::Status s = Emit(f, content); !s.ok()) return Fail(s);
    return ok ? kExitOk : kExitBottom;
  }

  // experiment
  absl::StatusOr<std::string> text = fc::ReadFile(spec_path);
  if (!text.ok()) return Fail(text.status());
  absl::StatusOr<fc::ExperimentSpec> spec = fc::ParseExperimentSpec(*text);
  if (!spec.ok()) return Fail(spec.status());
  if (exp_seed.has_value()) spec->seed = *exp_seed;
  if (exp_flags.noise_free) spec->noise_free = true;
  absl::StatusOr<fc::ExperimentResult> result = fc::RunExperiment(*spec);
  if (!result.ok()) return Fail(result.status());
  const std::string content = exp_flags.format == "csv"
                                  ? fc::ResultCsv(*result)
                                  : fc::ResultSummaryJson(*result);
  if (absl::Status s = Emit(exp_flags, content); !s.ok()) return Fail(s);
  return kExitOk;
}
