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

#include "friendlycore/io.h"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "json.hpp"

namespace friendlycore {
namespace {

using nlohmann::json;

absl::string_view AsAbsl(std::string_view s) {
  return absl::string_view(s.data(), s.size());
}

std::optional<Point> ParseCsvRow(absl::string_view line) {
  Point row;
  for (absl::string_view field : absl::StrSplit(line, ',')) {
    double v = 0.0;
    if (!absl::SimpleAtod(absl::StripAsciiWhitespace(field), &v)) {
      return std::nullopt;
    }
    row.push_back(v);
  }
  return row;
}

absl::StatusOr<std::vector<std::vector<double>>> NumericRows(const json& j) {
  if (!j.is_array()) return absl::InvalidArgumentError("expected an array");
  std::vector<std::vector<double>> rows;
  for (const json& row : j) {
    if (!row.is_array()) {
      return absl::InvalidArgumentError("expected an array of arrays");
    }
    std::vector<double> values;
    for (const json& v : row) {
      if (!v.is_number())
        return absl::InvalidArgumentError("non-numeric entry");
      values.push_back(v.get<double>());
    }
    rows.push_back(std::move(values));
  }
  return rows;
}

absl::StatusOr<json> ParseJson(std::string_view text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) return absl::InvalidArgumentError("malformed JSON");
  return j;
}

json NumberOrNull(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

}  // namespace

absl::StatusOr<FileFormat> ParseFormat(std::string_view name) {
  if (name == "csv") return FileFormat::kCsv;
  if (name == "json") return FileFormat::kJson;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown format: ", std::string(name)));
}

absl::StatusOr<FileFormat> FormatFromPath(std::string_view path) {
  if (absl::EndsWithIgnoreCase(AsAbsl(path), ".csv")) return FileFormat::kCsv;
  if (absl::EndsWithIgnoreCase(AsAbsl(path), ".json")) return FileFormat::kJson;
  return absl::InvalidArgumentError(
      absl::StrCat("cannot infer format of ", std::string(path)));
}

absl::StatusOr<PointSet> ParsePointsCsv(std::string_view text) {
  PointSet points;
  bool first = true;
  size_t line_no = 0;
  for (absl::string_view line : absl::StrSplit(AsAbsl(text), '\n')) {
    ++line_no;
    line = absl::StripAsciiWhitespace(line);
    if (line.empty()) continue;
    std::optional<Point> row = ParseCsvRow(line);
    if (!row.has_value()) {
      if (first) {
        first = false;
        continue;
      }
      return absl::InvalidArgumentError(
          absl::StrCat("bad CSV row at line ", line_no));
    }
    first = false;
    points.push_back(*std::move(row));
  }
  if (absl::Status s = ValidatePointSet(points); !s.ok()) return s;
  return points;
}

absl::StatusOr<PointSet> ParsePointsJson(std::string_view text) {
  absl::StatusOr<json> j = ParseJson(text);
  if (!j.ok()) return j.status();
  absl::StatusOr<std::vector<std::vector<double>>> rows = NumericRows(*j);
  if (!rows.ok()) return rows.status();
  if (absl::Status s = ValidatePointSet(*rows); !s.ok()) return s;
  return *std::move(rows);
}

absl::StatusOr<PointSet> ReadPoints(const std::string& path,
                                    std::optional<FileFormat> format) {
  if (!format.has_value()) {
    absl::StatusOr<FileFormat> inferred = FormatFromPath(path);
    if (!inferred.ok()) return inferred.status();
    format = *inferred;
  }
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  return *format == FileFormat::kCsv ? ParsePointsCsv(*text)
                                     : ParsePointsJson(*text);
}

std::string PointsToCsv(const PointSet& points) {
  std::string out;
  for (const Point& x : points) {
    for (size_t i = 0; i < x.size(); ++i) {
      absl::StrAppend(&out, i > 0 ? "," : "", FormatDouble(x[i]));
    }
    out += "\n";
  }
  return out;
}

std::string PointsToJson(const PointSet& points) {
  json j = json::array();
  for (const Point& x : points) {
    json row = json::array();
    for (double v : x) row.push_back(NumberOrNull(v));
    j.push_back(std::move(row));
  }
  return j.dump() + "\n";
}

absl::StatusOr<SymMatrix> ParseMatrixJson(std::string_view text) {
  absl::StatusOr<json> j = ParseJson(text);
  if (!j.ok()) return j.status();
  absl::StatusOr<std::vector<std::vector<double>>> rows = NumericRows(*j);
  if (!rows.ok()) return rows.status();
  return Matrix::FromRows(*rows);
}

std::string MatrixToJson(const Matrix& m) { return PointsToJson(m.ToRows()); }

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

absl::Status WriteFile(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  out << content;
  out.close();
  if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

absl::StatusOr<ExperimentSpec> ParseExperimentSpec(std::string_view text) {
  absl::StatusOr<json> parsed = ParseJson(text);
  if (!parsed.ok()) return parsed.status();
  const json& j = *parsed;
  if (!j.is_object())
    return absl::InvalidArgumentError("spec must be an object");
  ExperimentSpec spec;
  for (const auto& [key, value] : j.items()) {
    const auto need = [&](bool ok) -> absl::Status {
      if (ok) return absl::OkStatus();
      return absl::InvalidArgumentError(absl::StrCat("bad value for ", key));
    };
    const auto count = [&](size_t& field) -> absl::Status {
      if (!value.is_number_unsigned()) return need(false);
      field = value.get<size_t>();
      return absl::OkStatus();
    };
    const auto real = [&](double& field) -> absl::Status {
      if (!value.is_number()) return need(false);
      field = value.get<double>();
      return absl::OkStatus();
    };
    absl::Status s;
    if (key == "task") {
      if (!value.is_string()) return need(false);
      absl::StatusOr<TaskKind> task = ParseTask(value.get<std::string>());
      if (!task.ok()) return task.status();
      spec.task = *task;
    } else if (key == "n") {
      s = count(spec.n);
    } else if (key == "d") {
      s = count(spec.d);
    } else if (key == "k") {
      s = count(spec.k);
    } else if (key == "t") {
      s = count(spec.t);
    } else if (key == "sigma2") {
      s = real(spec.sigma2);
    } else if (key == "centers") {
      if (!value.is_string()) return need(false);
      absl::StatusOr<CenterSpec> c = ParseCenterSpec(value.get<std::string>());
      if (!c.ok()) return c.status();
      spec.centers = *c;
    } else if (key == "clip_norm") {
      if (value.is_null()) {
        spec.clip_norm.reset();
      } else {
        double c = 0.0;
        s = real(c);
        spec.clip_norm = c;
      }
    } else if (key == "data_path") {
      if (!value.is_string()) return need(false);
      spec.data_path = value.get<std::string>();
    } else if (key == "rho") {
      s = real(spec.rho);
    } else if (key == "eps") {
      s = real(spec.eps);
    } else if (key == "delta") {
      s = real(spec.delta);
    } else if (key == "beta") {
      s = real(spec.beta);
    } else if (key == "rho1") {
      if (value == "fixed") {
        spec.rho1_strategy = Rho1Strategy::kFixed;
      } else if (value == "optimized") {
        spec.rho1_strategy = Rho1Strategy::kOptimized;
      } else {
        return need(false);
      }
    } else if (key == "lambda") {
      s = real(spec.lambda);
    } else if (key == "r_min") {
      s = real(spec.r_min);
    } else if (key == "r_max") {
      s = real(spec.r_max);
    } else if (key == "oracle") {
      if (!value.is_string()) return need(false);
      spec.oracle = value.get<std::string>();
    } else if (key == "repetitions") {
      if (!value.is_number_integer()) return need(false);
      spec.repetitions = value.get<int>();
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) return need(false);
      spec.seed = value.get<uint64_t>();
    } else if (key == "noise_free") {
      if (!value.is_boolean()) return need(false);
      spec.noise_free = value.get<bool>();
    } else if (key == "q_lo") {
      s = real(spec.q_lo);
    } else if (key == "q_hi") {
      s = real(spec.q_hi);
    } else {
      return absl::InvalidArgumentError(absl::StrCat("unknown field: ", key));
    }
    if (!s.ok()) return s;
  }
  if (absl::Status s = spec.Validate(); !s.ok()) return s;
  return spec;
}

std::string ResultSummaryJson(const ExperimentResult& result) {
  json j;
  j["task"] = TaskName(result.task);
  j["repetitions"] = result.reps.size();
  j["failures"] = result.failures;
  j["metrics"] = result.metric_names;
  json trimmed = json::object();
  for (size_t c = 0; c < result.metric_names.size(); ++c) {
    trimmed[result.metric_names[c]] = NumberOrNull(result.trimmed[c]);
  }
  j["trimmed"] = std::move(trimmed);
  json rows = json::array();
  for (const RepetitionResult& row : result.reps) {
    json r;
    r["rep"] = row.rep;
    r["failed"] = row.failed;
    json metrics = json::array();
    for (double v : row.metrics) metrics.push_back(NumberOrNull(v));
    r["metrics"] = std::move(metrics);
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

}  // namespace friendlycore
