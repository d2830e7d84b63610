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

#include "friendlycore/friendly_core.h"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"

namespace friendlycore {
namespace {

absl::Status CheckAlpha(double alpha) {
  if (!(alpha >= 0.0 && alpha < 0.5)) {
    return absl::InvalidArgumentError(
        absl::StrCat("alpha must be in [0, 1/2): ", alpha));
  }
  return absl::OkStatus();
}

}  // namespace

double FriendCounts::Z(size_t i) const {
  const double dn = static_cast<double>(n());
  if (mode == CountMode::kExact) return counts[i] - dn / 2.0;
  return counts[i] - (0.5 + xi) * dn;
}

size_t CoreSelection::NumKept() const {
  return static_cast<size_t>(std::count(keep.begin(), keep.end(), true));
}

absl::StatusOr<size_t> SampledCountSize(size_t n, double xi, double delta) {
  if (n == 0) return absl::InvalidArgumentError("empty dataset");
  if (!(xi > 0.0 && xi < 0.5)) {
    return absl::InvalidArgumentError("xi must be in (0, 1/2)");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError("delta must be in (0, 1)");
  }
  const double m =
      std::ceil(std::log(static_cast<double>(n) / delta) / (2.0 * xi * xi));
  return static_cast<size_t>(std::max(1.0, m));
}

absl::StatusOr<std::vector<double>> BasicFilterProbabilities(
    const FriendCounts& counts, double alpha) {
  if (absl::Status s = CheckAlpha(alpha); !s.ok()) return s;
  const double dn = static_cast<double>(counts.n());
  double top = (0.5 - alpha) * dn;
  if (counts.mode == CountMode::kSampled) {
    top = (0.5 - alpha - counts.xi) * dn;
    if (!(top > 0.0)) {
      return absl::InvalidArgumentError(
          "sampled counts require alpha + xi < 1/2");
    }
  }
  std::vector<double> probs(counts.n());
  for (size_t i = 0; i < counts.n(); ++i) {
    const double z = counts.Z(i);
    if (z <= 0.0) {
      probs[i] = 0.0;
    } else if (z >= top) {
      probs[i] = 1.0;
    } else {
      probs[i] = z / top;
    }
  }
  return probs;
}

absl::StatusOr<CoreSelection> BasicFilterFromCounts(const FriendCounts& counts,
                                                    double alpha,
                                                    RandomSource& rng) {
  absl::StatusOr<std::vector<double>> probs =
      BasicFilterProbabilities(counts, alpha);
  if (!probs.ok()) return probs.status();
  const RandomSource base = rng.Split();
  CoreSelection selection;
  selection.keep.assign(counts.n(), false);
  std::vector<char> keep(counts.n(), 0);
  ParallelFor(counts.n(), [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      RandomSource stream = base.Child(static_cast<uint64_t>(i));
      keep[i] = stream.Bernoulli((*probs)[i]) ? 1 : 0;
    }
  });
  for (size_t i = 0; i < keep.size(); ++i) selection.keep[i] = keep[i] != 0;
  selection.probs = *std::move(probs);
  return selection;
}

double ZcdpFilterThreshold(double n_hat, double rho, double delta) {
  const double rho2 = 0.9 * rho;
  return std::sqrt(n_hat * std::log(2.0 * n_hat / delta) / (4.0 * rho2)) + 0.5;
}

absl::StatusOr<CoreSelection> ZcdpFilterFromCounts(const FriendCounts& counts,
                                                   double rho, double delta,
                                                   RandomSource& rng) {
  if (!(rho > 0.0)) return absl::InvalidArgumentError("rho must be positive");
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError("delta must be in (0, 1)");
  }
  const size_t n = counts.n();
  CoreSelection selection;
  selection.keep.assign(n, false);
  const double rho1 = 0.1 * rho;
  const double rho2 = 0.9 * rho;
  const double n_hat = static_cast<double>(n) +
                       std::sqrt(std::log(2.0 / delta) / rho1) +
                       rng.GaussianNoise(std::sqrt(1.0 / (2.0 * rho1)));
  const RandomSource base = rng.Split();
  if (!(n_hat > 0.0) || !(n_hat * std::log(2.0 * n_hat / delta) > 0.0)) {
    return selection;
  }
  const double threshold = ZcdpFilterThreshold(n_hat, rho, delta);
  const double sigma = std::sqrt(n_hat / (8.0 * rho2));
  std::vector<char> keep(n, 0);
  ParallelFor(n, [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      RandomSource stream = base.Child(static_cast<uint64_t>(i));
      keep[i] = counts.Z(i) + stream.GaussianNoise(sigma) >= threshold;
    }
  });
  for (size_t i = 0; i < n; ++i) selection.keep[i] = keep[i] != 0;
  return selection;
}

absl::StatusOr<int64_t> MinNForCompleteness(double alpha, double beta,
                                            double delta, double rho) {
  if (absl::Status s = CheckAlpha(alpha); !s.ok()) return s;
  if (!(beta > 0.0 && beta < 1.0) || !(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError("beta and delta must be in (0, 1)");
  }
  if (!(rho > 0.0)) return absl::InvalidArgumentError("rho must be positive");
  const double margin = 0.5 - alpha;
  const double bound = -4.0 * std::log(margin * rho * std::min(beta, delta)) /
                       (margin * margin * rho);
  if (!(bound > 1.0)) return 1;
  return static_cast<int64_t>(std::ceil(bound));
}

absl::StatusOr<DpBudget> DpParadigmCost(const DpBudget& inner, double alpha) {
  if (absl::Status s = CheckAlpha(alpha); !s.ok()) return s;
  const double g = 1.0 / (1.0 - 2.0 * alpha) + 1.0;
  const double eps = g * std::expm1(inner.eps);
  return DpBudget{eps, g * inner.delta * std::exp(inner.eps + eps)};
}

}  // namespace friendlycore
