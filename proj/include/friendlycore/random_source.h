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

#ifndef FRIENDLYCORE_RANDOM_SOURCE_H_
#define FRIENDLYCORE_RANDOM_SOURCE_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace friendlycore {

// Seedable generator shared by every randomized operation in the library.
//
// Child streams are derived by hashing (seed, label) so that work handed to
// parallel workers draws the same values regardless of scheduling. In
// noise-free mode every *noise* draw (GaussianNoise, LaplaceNoise) returns 0,
// while shuffles, permutations, Bernoulli trials and subsampling still consume
// the generator.
class RandomSource {
 public:
  explicit RandomSource(uint64_t seed, bool noise_free = false);

  uint64_t seed() const { return seed_; }
  bool noise_free() const { return noise_free_; }

  // Independent stream determined by (seed, label); does not advance *this.
  RandomSource Child(std::string_view label) const;
  RandomSource Child(uint64_t index) const;

  // Fresh stream seeded from the next output of *this.
  RandomSource Split();

  uint64_t NextU64();

  // Uniform on [0, 1) with 53 random bits.
  double Uniform();

  // Uniform integer on [0, n). Requires n > 0.
  uint64_t UniformInt(uint64_t n);

  bool Bernoulli(double p);

  // Standard normal draw (Marsaglia polar method). Unaffected by noise-free
  // mode; used for data generation.
  double StandardNormal();

  // Noise draws: N(0, sigma^2) and Lap(b). Both return 0 in noise-free mode.
  double GaussianNoise(double sigma);
  double LaplaceNoise(double b);

  // Uniformly random permutation of {0, ..., n-1}.
  std::vector<size_t> Permutation(size_t n);

  // m distinct indices from {0, ..., n-1}, uniformly without replacement.
  std::vector<size_t> SampleWithoutReplacement(size_t n, size_t m);

  template <typename T>
  void Shuffle(std::vector<T>& values) {
    for (size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[UniformInt(i)]);
    }
  }

 private:
  uint64_t seed_;
  bool noise_free_;
  std::mt19937_64 engine_;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

// SplitMix64 finalizer; exposed for seed derivation in tools and tests.
uint64_t MixBits(uint64_t x);

}  // namespace friendlycore

#endif  // FRIENDLYCORE_RANDOM_SOURCE_H_
