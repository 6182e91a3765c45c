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

// Naive private kNN: exact top-k vote plus Gaussian noise, accounted with
// standard (worst-case) RDP composition. Every query costs every example the
// same, which is the behaviour individual accounting improves on.

#ifndef INDKNN_BASELINE_H_
#define INDKNN_BASELINE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "indknn/core.h"
#include "indknn/engine.h"
#include "indknn/mechanisms.h"

namespace indknn {

// L2 sensitivity of the top-k label histogram: one neighbor leaves, another
// enters, each moving one coordinate by 1.
inline constexpr double kTopKSensitivity = 1.4142135623730951;

struct NaiveKnnConfig {
  std::size_t k = 30;
  double sigma = 1.0;

  void validate() const;
};

// Top-k live private examples by kernel weight, ties to the lower id. Result
// is ordered by decreasing weight.
std::vector<ExampleId> top_k_neighbors(const ExampleStore& store,
                                       std::span<const double> q,
                                       std::size_t k);

// Throws InvalidArgument when the store holds fewer than k private examples.
// Consumes num_classes draws.
ClassIndex naive_knn_predict(const ExampleStore& store,
                             std::span<const double> q,
                             const NaiveKnnConfig& cfg, NoiseSource& src);

// Linear RDP coefficient after T queries: T * sensitivity^2 / (2 sigma^2).
RdpBudget naive_knn_rdp(std::size_t queries, double sigma);

double naive_knn_accounting(std::size_t queries, double sigma, double delta);

// Largest T whose composed cost still converts to at most target epsilon.
// Zero if even one query exceeds it.
std::size_t naive_knn_query_capacity(double sigma, const DpParams& target);

}  // namespace indknn

#endif  // INDKNN_BASELINE_H_
