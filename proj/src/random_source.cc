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

#include "friendlycore/random_source.h"

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string_view>
#include <vector>

namespace friendlycore {
namespace {

constexpr uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr uint64_t kFnvPrime = 0x100000001b3ULL;
constexpr uint64_t kIndexSalt = 0x9e3779b97f4a7c15ULL;

uint64_t HashLabel(std::string_view label) {
  uint64_t h = kFnvOffset;
  for (unsigned char c : label) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

uint64_t Combine(uint64_t seed, uint64_t tag) {
  return MixBits(MixBits(seed) ^ (tag + kIndexSalt));
}

}  // namespace

uint64_t MixBits(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomSource::RandomSource(uint64_t seed, bool noise_free)
    : seed_(seed), noise_free_(noise_free), engine_(seed) {}

RandomSource RandomSource::Child(std::string_view label) const {
  return RandomSource(Combine(seed_, HashLabel(label)), noise_free_);
}

RandomSource RandomSource::Child(uint64_t index) const {
  return RandomSource(Combine(seed_, MixBits(index)), noise_free_);
}

RandomSource RandomSource::Split() {
  return RandomSource(MixBits(NextU64()), noise_free_);
}

uint64_t RandomSource::NextU64() { return engine_(); }

double RandomSource::Uniform() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

uint64_t RandomSource::UniformInt(uint64_t n) {
  const uint64_t limit = std::numeric_limits<uint64_t>::max() -
                         std::numeric_limits<uint64_t>::max() % n;
  uint64_t x;
  do {
    x = NextU64();
  } while (x >= limit);
  return x % n;
}

bool RandomSource::Bernoulli(double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return Uniform() < p;
}

double RandomSource::StandardNormal() {
  if (has_spare_normal_) {
    has_spare_normal_ = false;
    return spare_normal_;
  }
  double u, v, s;
  do {
    u = 2.0 * Uniform() - 1.0;
    v = 2.0 * Uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_normal_ = v * factor;
  has_spare_normal_ = true;
  return u * factor;
}

double RandomSource::GaussianNoise(double sigma) {
  if (noise_free_) return 0.0;
  return sigma * StandardNormal();
}

double RandomSource::LaplaceNoise(double b) {
  if (noise_free_) return 0.0;
  double u;
  do {
    u = Uniform();
  } while (u == 0.0);
  // Inverse CDF on u - 1/2 in (-1/2, 1/2).
  const double centered = u - 0.5;
  const double magnitude = -b * std::log1p(-2.0 * std::fabs(centered));
  return centered < 0 ? -magnitude : magnitude;
}

std::vector<size_t> RandomSource::Permutation(size_t n) {
  std::vector<size_t> perm(n);
  std::iota(perm.begin(), perm.end(), size_t{0});
  Shuffle(perm);
  return perm;
}

std::vector<size_t> RandomSource::SampleWithoutReplacement(size_t n, size_t m) {
  if (m > n) m = n;
  std::vector<size_t> pool(n);
  std::iota(pool.begin(), pool.end(), size_t{0});
  // Partial Fisher-Yates: the first m slots end up a uniform m-subset.
  for (size_t i = 0; i < m; ++i) {
    std::swap(pool[i], pool[i + UniformInt(n - i)]);
  }
  pool.resize(m);
  return pool;
}

}  // namespace friendlycore
