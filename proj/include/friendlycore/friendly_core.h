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

#ifndef FRIENDLYCORE_FRIENDLY_CORE_H_
#define FRIENDLYCORE_FRIENDLY_CORE_H_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "friendlycore/parallel.h"
#include "friendlycore/predicates.h"
#include "friendlycore/privacy_core.h"
#include "friendlycore/random_source.h"

namespace friendlycore {

enum class CountMode { kExact, kSampled };

// Friend counts w_i = sum_j f(x_i, x_j), exact or estimated from a shared
// uniform subsample.
struct FriendCounts {
  std::vector<double> counts;
  CountMode mode = CountMode::kExact;
  double xi = 0.0;
  size_t sample_size = 0;

  size_t n() const { return counts.size(); }

  // z_i = w_i - n/2 in exact mode and w_i - (1/2 + xi) n in sampled mode.
  double Z(size_t i) const;
};

// Output of a filter: the keep bits and, for BasicFilter, the probabilities.
struct CoreSelection {
  std::vector<bool> keep;
  std::optional<std::vector<double>> probs;

  size_t NumKept() const;
};

// Exact counts, each element counted as its own friend.
template <typename T>
absl::StatusOr<FriendCounts> FriendCountsExact(const std::vector<T>& data,
                                               const Predicate<T>& f);

// Sample size m = ceil(ln(n / delta) / (2 xi^2)).
absl::StatusOr<size_t> SampledCountSize(size_t n, double xi, double delta);

// Estimates w_i = (n/m) * sum over a shared m-subsample drawn without
// replacement. Falls back to exact counts when m >= n.
template <typename T>
absl::StatusOr<FriendCounts> FriendCountsSampledWithSize(
    const std::vector<T>& data, const Predicate<T>& f, double xi, size_t m,
    RandomSource& rng);

template <typename T>
absl::StatusOr<FriendCounts> FriendCountsSampled(const std::vector<T>& data,
                                                 const Predicate<T>& f,
                                                 double xi, double delta,
                                                 RandomSource& rng) {
  absl::StatusOr<size_t> m = SampledCountSize(data.size(), xi, delta);
  if (!m.ok()) return m.status();
  return FriendCountsSampledWithSize(data, f, xi, *m, rng);
}

// Deterministic BasicFilter probabilities: p_i = 0 for z_i <= 0, 1 for
// z_i >= T and z_i / T otherwise, where T = (1/2 - alpha) n for exact counts
// and (1/2 - alpha - xi) n for sampled counts.
absl::StatusOr<std::vector<double>> BasicFilterProbabilities(
    const FriendCounts& counts, double alpha);

// keep_i ~ Bern(p_i), one child stream per element.
absl::StatusOr<CoreSelection> BasicFilterFromCounts(const FriendCounts& counts,
                                                    double alpha,
                                                    RandomSource& rng);

// zCDP filter with rho_1 = 0.1 rho, rho_2 = 0.9 rho:
//   n_hat = n + sqrt(ln(2/delta)/rho_1) + N(0, 1/(2 rho_1)),
//   keep i iff z_i + N(0, n_hat/(8 rho_2)) >= sqrt(n_hat ln(2 n_hat/delta) /
//   (4 rho_2)) + 1/2.
// Keeps nothing when n_hat * ln(2 n_hat / delta) <= 0.
absl::StatusOr<CoreSelection> ZcdpFilterFromCounts(const FriendCounts& counts,
                                                   double rho, double delta,
                                                   RandomSource& rng);

// Noise-free value of the zCDP filter threshold for a given n_hat.
double ZcdpFilterThreshold(double n_hat, double rho, double delta);

template <typename T>
absl::StatusOr<CoreSelection> BasicFilter(const std::vector<T>& data,
                                          const Predicate<T>& f, double alpha,
                                          RandomSource& rng) {
  if (data.empty()) return CoreSelection{{}, std::vector<double>{}};
  absl::StatusOr<FriendCounts> counts = FriendCountsExact(data, f);
  if (!counts.ok()) return counts.status();
  return BasicFilterFromCounts(*counts, alpha, rng);
}

template <typename T>
absl::StatusOr<CoreSelection> ZcdpFilter(const std::vector<T>& data,
                                         const Predicate<T>& f, double rho,
                                         double delta, RandomSource& rng) {
  if (data.empty()) {
    if (absl::Status s = ZcdpBudget{rho, delta}.Validate(); !s.ok()) return s;
    return CoreSelection{};
  }
  absl::StatusOr<FriendCounts> counts = FriendCountsExact(data, f);
  if (!counts.ok()) return counts.status();
  return ZcdpFilterFromCounts(*counts, rho, delta, rng);
}

// Elements of `data` whose keep bit is set, in input order.
template <typename T>
std::vector<T> Restrict(const std::vector<T>& data,
                        const CoreSelection& selection) {
  std::vector<T> out;
  for (size_t i = 0; i < data.size(); ++i) {
    if (selection.keep[i]) out.push_back(data[i]);
  }
  return out;
}

// FriendlyCore: restriction of `data` by the zCDP filter.
template <typename T>
absl::StatusOr<std::vector<T>> FriendlyCore(const std::vector<T>& data,
                                            const Predicate<T>& f, double rho,
                                            double delta, RandomSource& rng,
                                            BudgetLedger* ledger = nullptr) {
  ChargeIfPresent(ledger, "friendly_core", rho, delta);
  absl::StatusOr<CoreSelection> selection =
      ZcdpFilter(data, f, rho, delta, rng);
  if (!selection.ok()) return selection.status();
  return Restrict(data, *selection);
}

// FriendlyCoreDP: restriction of `data` by BasicFilter.
template <typename T>
absl::StatusOr<std::vector<T>> FriendlyCoreDp(const std::vector<T>& data,
                                              const Predicate<T>& f,
                                              double alpha, RandomSource& rng) {
  absl::StatusOr<CoreSelection> selection = BasicFilter(data, f, alpha, rng);
  if (!selection.ok()) return selection.status();
  return Restrict(data, *selection);
}

// Smallest n for which the zCDP filter keeps every element with at least
// (1 - alpha) n friends w.p. 1 - beta:
//   ceil(-4 ln((1/2 - alpha) rho min(beta, delta)) / ((1/2 - alpha)^2 rho)),
// and at least 1.
absl::StatusOr<int64_t> MinNForCompleteness(double alpha, double beta,
                                            double delta, double rho);

// Standard DP guarantee of a friendly-DP algorithm run on FriendlyCoreDP
// output: (g (e^eps - 1), g delta e^(eps + g (e^eps - 1))) with
// g = 1/(1 - 2 alpha) + 1.
absl::StatusOr<DpBudget> DpParadigmCost(const DpBudget& inner, double alpha);

// ---------------------------------------------------------------------------
// Template definitions.

namespace internal {

// Number of predicate hits of element i against `others`.
template <typename T>
double CountAgainst(const std::vector<T>& data, const Predicate<T>& f, size_t i,
                    const std::vector<size_t>& others) {
  double hits = 0.0;
  for (size_t j : others) hits += f.eval(data[i], data[j]) ? 1.0 : 0.0;
  return hits;
}

}  // namespace internal

template <typename T>
absl::StatusOr<FriendCounts> FriendCountsExact(const std::vector<T>& data,
                                               const Predicate<T>& f) {
  const size_t n = data.size();
  if (n == 0) return absl::InvalidArgumentError("empty dataset");
  FriendCounts result;
  result.counts.assign(n, 0.0);
  if (!f.symmetric) {
    ParallelFor(n, [&](size_t begin, size_t end) {
      for (size_t i = begin; i < end; ++i) {
        double hits = 0.0;
        for (size_t j = 0; j < n; ++j) hits += f.eval(data[i], data[j]);
        result.counts[i] = hits;
      }
    });
    return result;
  }
  // Each unordered pair is evaluated once; every chunk accumulates into its
  // own integer vector and the partial sums are added afterwards.
  std::vector<std::vector<int64_t>> partial;
  std::mutex mu;
  ParallelFor(n, [&](size_t begin, size_t end) {
    std::vector<int64_t> local(n, 0);
    for (size_t i = begin; i < end; ++i) {
      local[i] += f.eval(data[i], data[i]) ? 1 : 0;
      for (size_t j = i + 1; j < n; ++j) {
        if (f.eval(data[i], data[j])) {
          ++local[i];
          ++local[j];
        }
      }
    }
    std::lock_guard<std::mutex> lock(mu);
    partial.push_back(std::move(local));
  });
  for (const std::vector<int64_t>& local : partial) {
    for (size_t i = 0; i < n; ++i) {
      result.counts[i] += static_cast<double>(local[i]);
    }
  }
  return result;
}

template <typename T>
absl::StatusOr<FriendCounts> FriendCountsSampledWithSize(
    const std::vector<T>& data, const Predicate<T>& f, double xi, size_t m,
    RandomSource& rng) {
  const size_t n = data.size();
  if (n == 0) return absl::InvalidArgumentError("empty dataset");
  if (!(xi > 0.0 && xi < 0.5)) {
    return absl::InvalidArgumentError("xi must be in (0, 1/2)");
  }
  if (m == 0) return absl::InvalidArgumentError("sample size must be >= 1");
  if (m >= n) return FriendCountsExact(data, f);
  const std::vector<size_t> sample = rng.SampleWithoutReplacement(n, m);
  FriendCounts result;
  result.mode = CountMode::kSampled;
  result.xi = xi;
  result.sample_size = m;
  result.counts.assign(n, 0.0);
  const double dn = static_cast<double>(n);
  const double dm = static_cast<double>(m);
  ParallelFor(n, [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      result.counts[i] = dn * internal::CountAgainst(data, f, i, sample) / dm;
    }
  });
  return result;
}

}  // namespace friendlycore

#endif  // FRIENDLYCORE_FRIENDLY_CORE_H_
