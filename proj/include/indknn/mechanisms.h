// Copyright 2026 The indknn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef INDKNN_MECHANISMS_H_
#define INDKNN_MECHANISMS_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

#include "indknn/core.h"

namespace indknn {

// Seeded stream of standard normal draws. Identical seeds and identical call
// sequences give identical values. Every query consumes exactly 1 + c draws:
// the count noise first, then one per class in index order.
class NoiseSource {
 public:
  explicit NoiseSource(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

  double standard_normal() {
    ++draws_;
    return normal_(engine_);
  }
  double gaussian(double stddev) { return stddev * standard_normal(); }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t draws() const { return draws_; }

 private:
  std::uint64_t seed_;
  std::uint64_t draws_ = 0;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// max(true_count + N(0, sigma^2), floor). Consumes one draw. The result is
// kept real-valued.
double noisy_count(std::size_t true_count, double sigma, std::uint32_t floor,
                   NoiseSource& src);

// argmax_j (votes_j + N(0, variance)), ties to the lowest index. Consumes
// votes.size() draws. Throws InvalidArgument on empty votes or a negative
// variance.
ClassIndex noisy_argmax(std::span<const double> votes, double variance,
                        NoiseSource& src);

}  // namespace indknn

#endif  // INDKNN_MECHANISMS_H_
