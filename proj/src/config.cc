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

#include "indknn/config.h"

#include <cmath>

#include "indknn/errors.h"

namespace indknn {

void EngineConfig::validate() const {
  kernel.validate();
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    throw InvalidArgument("tau must be nonnegative and finite");
  }
  if (sigma1 && !(*sigma1 > 0.0 && std::isfinite(*sigma1))) {
    throw InvalidArgument("sigma1 must be positive and finite");
  }
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw InvalidArgument("sigma2 must be positive and finite");
  }
  if (k_floor < 1) throw InvalidArgument("k_floor must be at least 1");
  dp.validate();
  if (budget && !(*budget >= 0.0 && std::isfinite(*budget))) {
    throw InvalidArgument("budget must be nonnegative and finite");
  }
  if (!sigma1 && planned_queries == 0) {
    throw InvalidArgument("planned_queries must be positive when sigma1 is unset");
  }
}

ResolvedParams resolve(const EngineConfig& config) {
  config.validate();
  ResolvedParams out;
  out.budget = config.budget ? RdpBudget{*config.budget}
                             : budget_for_dp(config.dp);
  out.sigma1 = config.sigma1
                   ? *config.sigma1
                   : default_count_sigma(config.planned_queries, out.budget);
  out.count_charge = 1.0 / (2.0 * out.sigma1 * out.sigma1);
  return out;
}

}  // namespace indknn
