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

#ifndef FRIENDLYCORE_IO_H_
#define FRIENDLYCORE_IO_H_

#include <optional>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "friendlycore/harness.h"
#include "friendlycore/linalg.h"
#include "friendlycore/predicates.h"

namespace friendlycore {

enum class FileFormat { kCsv, kJson };

absl::StatusOr<FileFormat> ParseFormat(std::string_view name);

// Format implied by a ".csv" or ".json" suffix.
absl::StatusOr<FileFormat> FormatFromPath(std::string_view path);

// One point per line, comma separated. Blank lines are skipped, and a first
// line that does not parse as numbers is treated as a header.
absl::StatusOr<PointSet> ParsePointsCsv(std::string_view text);

// A JSON array of equal-length numeric arrays.
absl::StatusOr<PointSet> ParsePointsJson(std::string_view text);

// Reads points in `format`, or in the format implied by the suffix.
absl::StatusOr<PointSet> ReadPoints(
    const std::string& path, std::optional<FileFormat> format = std::nullopt);

std::string PointsToCsv(const PointSet& points);
std::string PointsToJson(const PointSet& points);

// Row-major nested JSON array.
absl::StatusOr<SymMatrix> ParseMatrixJson(std::string_view text);
std::string MatrixToJson(const Matrix& m);

absl::StatusOr<std::string> ReadFile(const std::string& path);
absl::Status WriteFile(const std::string& path, std::string_view content);

// JSON object with the ExperimentSpec field names ("task", "n", "d", "k",
// "sigma2", "centers", "clip_norm", "data_path", "rho", "eps", "delta",
// "beta", "rho1", "lambda", "r_min", "r_max", "t", "oracle", "repetitions",
// "seed", "noise_free", "q_lo", "q_hi"). Absent fields keep their defaults;
// unknown fields are errors.
absl::StatusOr<ExperimentSpec> ParseExperimentSpec(std::string_view text);

// {"task", "repetitions", "failures", "metrics", "trimmed", "rows"}; NaN
// values are written as null.
std::string ResultSummaryJson(const ExperimentResult& result);

}  // namespace friendlycore

#endif  // FRIENDLYCORE_IO_H_
