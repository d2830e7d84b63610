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

#include <algorithm>
#include <string>
#include <vector>

#include "cli_runner.h"
#include "friendlycore/harness.h"
#include "friendlycore/io.h"
#include "friendlycore/random_source.h"
#include "gtest/gtest.h"

namespace friendlycore {
namespace {

using testing::CliRun;
using testing::RunCli;
using testing::ScratchDir;

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new ScratchDir("friendlycore_cli_test");
    RandomSource rng(1);
    cloud_csv_ =
        dir_->Write("cloud.csv", PointsToCsv(GenGaussianCloud(500, 3, rng)));
    cloud_json_ =
        dir_->Write("cloud.json", PointsToJson(GenGaussianCloud(500, 3, rng)));
    const Mixture mix = *GenMixture(4000, 2, 2, CenterSpec::kUnitBall, 0.001,
                                    std::nullopt, rng);
    blobs_csv_ = dir_->Write("blobs.csv", PointsToCsv(mix.points));
    cov_csv_ =
        dir_->Write("cov.csv", PointsToCsv(GenGaussianCloud(8000, 2, rng)));
    // Every block of four points has second moment I / 2.
    PointSet cross;
    for (int i = 0; i < 200; ++i) {
      for (const Point& p :
           PointSet{{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}}) {
        cross.push_back(p);
      }
    }
    cross_csv_ = dir_->Write("cross.csv", PointsToCsv(cross));
    spec_json_ = dir_->Write(
        "spec.json",
        R"({"task": "avg", "n": 300, "d": 10, "repetitions": 4, "seed": 5})");
  }
  static void TearDownTestSuite() { delete dir_; }

  // Runs `args` under several thread counts and checks the bytes agree.
  static CliRun Stable(const std::string& args) {
    const CliRun first = RunCli("--threads 1 " + args);
    for (const char* threads : {"--threads 1 ", "--threads 4 ", ""}) {
      const CliRun again = RunCli(threads + args);
      EXPECT_EQ(again.exit_code, first.exit_code) << threads << args;
      EXPECT_EQ(again.out, first.out) << threads << args;
    }
    return first;
  }

  static ScratchDir* dir_;
  static std::string cloud_csv_;
  static std::string cloud_json_;
  static std::string blobs_csv_;
  static std::string cov_csv_;
  static std::string cross_csv_;
  static std::string spec_json_;
};

ScratchDir* CliTest::dir_ = nullptr;
std::string CliTest::cloud_csv_;
std::string CliTest::cloud_json_;
std::string CliTest::blobs_csv_;
std::string CliTest::cov_csv_;
std::string CliTest::cross_csv_;
std::string CliTest::spec_json_;

TEST_F(CliTest, AvgDeterministic) {
  const CliRun run = Stable("avg --input " + cloud_csv_ + " --r 6 --seed 3");
  EXPECT_EQ(run.exit_code, 0);
  EXPECT_NE(run.out.find("\"status\""), std::string::npos);
  const CliRun other = RunCli("avg --input " + cloud_csv_ + " --r 6 --seed 4");
  EXPECT_NE(other.out, run.out);
  const CliRun csv = Stable("avg --input " + cloud_json_ +
                            " --r 6 --format csv --rho1 optimized");
  EXPECT_EQ(csv.exit_code, 0);
  EXPECT_EQ(std::count(csv.out.begin(), csv.out.end(), ','), 2);
}

TEST_F(CliTest, AvgSearchDeterministic) {
  const CliRun run =
      Stable("avg-search --input " + cloud_csv_ + " --r-max 100 --seed 3");
  EXPECT_EQ(run.exit_code, 0);
}

TEST_F(CliTest, ClusterDeterministic) {
  const CliRun run = Stable("cluster --input " + blobs_csv_ +
                            " --k 2 --t 200 --lambda 2 --rho 100 --seed 3");
  EXPECT_TRUE(run.exit_code == 0 || run.exit_code == 2);
  EXPECT_NE(run.out.find("\"centers\""), std::string::npos);
}

TEST_F(CliTest, CovDeterministic) {
  const CliRun run = Stable("cov --input " + cross_csv_ +
                            " --t 200 --eta 0.5 --delta 1e-3 --seed 3");
  EXPECT_EQ(run.exit_code, 0);
  EXPECT_NE(run.out.find("\"matrix\""), std::string::npos);
}

TEST_F(CliTest, CovBottomExitsTwo) {
  const CliRun run =
      Stable("cov --input " + cov_csv_ + " --t 400 --eta 1 --seed 3");
  EXPECT_EQ(run.exit_code, 2);
}

TEST_F(CliTest, ExperimentDeterministic) {
  const CliRun run = Stable("experiment --spec " + spec_json_);
  EXPECT_EQ(run.exit_code, 0);
  EXPECT_EQ(run.out.substr(0, run.out.find('\n')), "rep,failed,error");
  const CliRun json =
      Stable("experiment --spec " + spec_json_ + " --format json");
  EXPECT_EQ(json.exit_code, 0);
}

TEST_F(CliTest, OutputFileMatchesStdout) {
  const std::string out = dir_->Path("avg_out.json");
  const std::string args = "avg --input " + cloud_csv_ + " --r 6 --seed 3";
  const CliRun to_file = RunCli(args + " --output " + out);
  EXPECT_EQ(to_file.exit_code, 0);
  EXPECT_EQ(testing::Slurp(out), RunCli(args).out);
}

TEST_F(CliTest, ErrorsExitOne) {
  EXPECT_EQ(RunCli("avg --input /nonexistent/points.csv --r 1").exit_code, 1);
  EXPECT_EQ(RunCli("avg --input " + cloud_csv_ + " --r -1").exit_code, 1);
  EXPECT_EQ(RunCli("bogus").exit_code, 1);
}

}  // namespace
}  // namespace friendlycore
