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

#ifndef INDKNN_CONFIG_H_
#define INDKNN_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <optional>

#include "indknn/accounting.h"
#include "indknn/core.h"

namespace indknn {

struct EngineConfig {
  KernelSpec kernel = KernelSpec::Cosine();
  // Minimum kernel weight for an example to be selected.
  double tau = 0.5;
  // Count noise scale. Defaults to sqrt(T / (6 B)).
  std::optional<double> sigma1;
  // Vote noise scale; the vote noise variance is sigma2^2 * K_t.
  double sigma2 = 0.4;
  // Planned number of queries T, used only for the sigma1 default.
  std::size_t planned_queries = 100;
  DpParams dp;
  // Overrides the budget derived from dp. Used by tests and experiments that
  // pin B directly.
  std::optional<double> budget;
  bool reuse_predictions = false;
  // K_t is clamped from below to this value.
  std::uint32_t k_floor = 30;
  std::uint64_t seed = 0;

  // Throws InvalidArgument describing the first bad field.
  void validate() const;
};

// Values derived from an EngineConfig once, at store construction.
struct ResolvedParams {
  RdpBudget budget;
  double sigma1 = 0.0;
  // 1 / (2 sigma1^2): the count charge, and the retirement threshold.
  double count_charge = 0.0;
};

ResolvedParams resolve(const EngineConfig& config);

}  // namespace indknn

#endif  // INDKNN_CONFIG_H_
