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

#include "indknn/mechanisms.h"

#include <algorithm>
#include <cmath>

#include "indknn/errors.h"

namespace indknn {

double noisy_count(std::size_t true_count, double sigma, std::uint32_t floor,
                   NoiseSource& src) {
  if (!(sigma > 0.0)) throw InvalidArgument("count sigma must be positive");
  const double released = static_cast<double>(true_count) + src.gaussian(sigma);
  return std::max(released, static_cast<double>(floor));
}

ClassIndex noisy_argmax(std::span<const double> votes, double variance,
                        NoiseSource& src) {
  if (votes.empty()) throw InvalidArgument("noisy_argmax: empty vote vector");
  if (!(variance >= 0.0)) {
    throw InvalidArgument("noisy_argmax: variance must be nonnegative");
  }
  const double stddev = std::sqrt(variance);
  ClassIndex best = 0;
  double best_value = 0.0;
  for (std::size_t j = 0; j < votes.size(); ++j) {
    const double v = votes[j] + src.gaussian(stddev);
    if (j == 0 || v > best_value) {
      best = static_cast<ClassIndex>(j);
      best_value = v;
    }
  }
  return best;
}

}  // namespace indknn
