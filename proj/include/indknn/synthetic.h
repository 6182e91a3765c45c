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

#ifndef INDKNN_SYNTHETIC_H_
#define INDKNN_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "indknn/core.h"

namespace indknn {

// Gaussian clusters around unit-sphere class means.
struct SyntheticParams {
  std::uint32_t classes = 3;
  std::size_t n = 6000;
  std::size_t dim = 16;
  // Minimum pairwise angle between class means, radians.
  double separation = 1.0;
  // Norm scale of the isotropic perturbation: each point is
  // normalize(mean + noise * g / sqrt(dim)) with g ~ N(0, I).
  double noise = 0.9;
  // Held-out labeled points, disjoint from the training draws.
  std::size_t queries = 2000;
  std::uint64_t seed = 0;
};

struct SyntheticData {
  std::uint32_t num_classes = 0;
  std::size_t dim = 0;
  std::vector<FeatureVector> means;
  std::vector<LabeledExample> train;
  std::vector<LabeledExample> queries;
};

// Deterministic per seed. Throws InvalidArgument when classes < 2, dim < 2
// or no set of means can reach the requested separation.
SyntheticData generate_synthetic(const SyntheticParams& params);

}  // namespace indknn

#endif  // INDKNN_SYNTHETIC_H_
