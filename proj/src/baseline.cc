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

#include "indknn/baseline.h"

#include <algorithm>
#include <string>

#include "indknn/accounting.h"
#include "indknn/errors.h"

namespace indknn {

void NaiveKnnConfig::validate() const {
  if (k < 1) throw InvalidArgument("baseline k must be at least 1");
  if (!(sigma > 0.0)) throw InvalidArgument("baseline sigma must be positive");
}

std::vector<ExampleId> top_k_neighbors(const ExampleStore& store,
                                       std::span<const double> q,
                                       std::size_t k) {
  store.check_query(q);
  std::vector<std::pair<double, ExampleId>> scored;
  scored.reserve(store.live_count());
  for (std::size_t i = 0; i < store.slot_count(); ++i) {
    const auto id = static_cast<ExampleId>(i);
    if (!store.ledger().is_live(id) || !store.ledger().is_private(id)) continue;
    scored.emplace_back(kernel_eval_unchecked(store.config().kernel,
                                              store.feature_data(id), q.data(),
                                              q.size()),
                        id);
  }
  if (scored.size() < k) {
    throw InvalidArgument("baseline needs at least k=" + std::to_string(k) +
                          " private examples, store has " +
                          std::to_string(scored.size()));
  }
  auto better = [](const auto& a, const auto& b) {
    return a.first > b.first || (a.first == b.first && a.second < b.second);
  };
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k),
                    scored.end(), better);
  std::vector<ExampleId> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = scored[i].second;
  return out;
}

ClassIndex naive_knn_predict(const ExampleStore& store,
                             std::span<const double> q,
                             const NaiveKnnConfig& cfg, NoiseSource& src) {
  cfg.validate();
  std::vector<double> votes(store.num_classes(), 0.0);
  for (ExampleId id : top_k_neighbors(store, q, cfg.k)) {
    votes[store.label(id)] += 1.0;
  }
  return noisy_argmax(votes, cfg.sigma * cfg.sigma, src);
}

RdpBudget naive_knn_rdp(std::size_t queries, double sigma) {
  if (!(sigma > 0.0)) throw InvalidArgument("baseline sigma must be positive");
  return {static_cast<double>(queries) * kTopKSensitivity * kTopKSensitivity /
          (2.0 * sigma * sigma)};
}

double naive_knn_accounting(std::size_t queries, double sigma, double delta) {
  return rdp_to_dp(naive_knn_rdp(queries, sigma), delta);
}

std::size_t naive_knn_query_capacity(double sigma, const DpParams& target) {
  target.validate();
  const double per_query = naive_knn_rdp(1, sigma).value;
  const RdpBudget allowed = budget_for_dp(target);
  auto fits = [&](std::size_t t) {
    return naive_knn_accounting(t, sigma, target.delta) <= target.epsilon;
  };
  auto t = static_cast<std::size_t>(allowed.value / per_query);
  // The coefficient is linear in T; settle the boundary against the exact
  // conversion.
  while (t > 0 && !fits(t)) --t;
  while (fits(t + 1)) ++t;
  return t;
}

}  // namespace indknn
