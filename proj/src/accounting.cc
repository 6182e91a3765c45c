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

#include "indknn/accounting.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "indknn/errors.h"

namespace indknn {
namespace {

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw InvalidArgument("delta must lie in (0, 1), got " +
                          std::to_string(delta));
  }
}

// Conversion of (alpha, rho)-RDP to (epsilon, delta)-DP at a single order.
// Tighter than rho + log(1/delta) / (alpha - 1) by the last two terms.
double epsilon_at_order(double rdp, double alpha, double log_inv_delta) {
  return rdp + (log_inv_delta - std::log(alpha)) / (alpha - 1.0) +
         std::log1p(-1.0 / alpha);
}

std::vector<double> make_orders() {
  std::vector<double> orders;
  for (int k = 1; k <= 900; ++k) orders.push_back(1.0 + k / 100.0);
  for (int a = 10; a <= 512; a += 2) orders.push_back(a);
  return orders;
}

}  // namespace

void DpParams::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidArgument("epsilon must be positive and finite");
  }
  check_delta(delta);
}

double gaussian_individual_rdp(double contribution_norm, double sigma,
                               double alpha) {
  if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
  if (!(alpha > 1.0)) throw InvalidArgument("alpha must exceed 1");
  if (contribution_norm < 0.0) {
    throw InvalidArgument("contribution norm must be nonnegative");
  }
  return alpha * contribution_norm * contribution_norm / (2.0 * sigma * sigma);
}

const std::vector<double>& conversion_orders() {
  static const std::vector<double> orders = make_orders();
  return orders;
}

double classical_rdp_to_dp_bound(RdpBudget budget, double delta) {
  check_delta(delta);
  const double b = budget.value;
  return b + 2.0 * std::sqrt(b * std::log(1.0 / delta));
}

double rdp_to_dp(RdpBudget budget, double delta) {
  check_delta(delta);
  const double b = budget.value;
  if (!(b >= 0.0) || !std::isfinite(b)) {
    throw InvalidArgument("rdp budget must be nonnegative and finite");
  }
  if (b == 0.0) return 0.0;
  const double log_inv_delta = -std::log(delta);
  double best = std::numeric_limits<double>::infinity();
  for (double alpha : conversion_orders()) {
    best = std::min(best, epsilon_at_order(b * alpha, alpha, log_inv_delta));
  }
  // The minimiser of the classical bound. Including it guarantees the
  // result never exceeds that bound, also when it lies beyond the grid.
  const double alpha_star = 1.0 + std::sqrt(log_inv_delta / b);
  best = std::min(best,
                  epsilon_at_order(b * alpha_star, alpha_star, log_inv_delta));
  return std::max(best, 0.0);
}

RdpBudget budget_for_dp(const DpParams& target) {
  target.validate();
  double lo = 0.0;
  double hi = target.epsilon;
  while (rdp_to_dp({hi}, target.delta) <= target.epsilon) {
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > 1e-9 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (rdp_to_dp({mid}, target.delta) <= target.epsilon) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo};
}

double default_count_sigma(std::size_t planned_queries, RdpBudget budget) {
  if (!(budget.value > 0.0)) {
    throw InvalidArgument("default sigma1 needs a positive budget");
  }
  if (planned_queries == 0) {
    throw InvalidArgument("default sigma1 needs a positive query count");
  }
  return std::sqrt(static_cast<double>(planned_queries) /
                   (6.0 * budget.value));
}

IndividualLedger::IndividualLedger(RdpBudget budget) : budget_(budget) {
  if (!(budget.value >= 0.0) || !std::isfinite(budget.value)) {
    throw InvalidArgument("ledger budget must be nonnegative and finite");
  }
}

ExampleId IndividualLedger::add_private() {
  z_.push_back(budget_.value);
  state_.push_back(EntryState::kPrivate);
  ++live_private_;
  return static_cast<ExampleId>(z_.size() - 1);
}

ExampleId IndividualLedger::add_unlimited() {
  z_.push_back(0.0);
  state_.push_back(EntryState::kUnlimited);
  return static_cast<ExampleId>(z_.size() - 1);
}

void IndividualLedger::remove(ExampleId id) {
  if (!is_live(id)) {
    throw InvalidArgument("ledger has no live entry " + std::to_string(id));
  }
  if (state_[id] == EntryState::kPrivate) --live_private_;
  state_[id] = EntryState::kRemoved;
  z_[id] = 0.0;
}

void IndividualLedger::charge(ExampleId id, double amount) {
  if (state_[id] != EntryState::kPrivate) {
    throw InvariantViolation("charge against non-private entry " +
                             std::to_string(id));
  }
  if (!(amount >= 0.0)) {
    throw InvariantViolation("negative or NaN charge");
  }
  const double next = z_[id] - amount;
  if (next < -kLedgerSlack) {
    throw InvariantViolation("entry " + std::to_string(id) +
                             " overspent its budget");
  }
  z_[id] = next;
}

void IndividualLedger::exhaust(ExampleId id) {
  if (state_[id] != EntryState::kPrivate) {
    throw InvariantViolation("exhaust on non-private entry");
  }
  z_[id] = 0.0;
}

std::vector<double> IndividualLedger::private_remaining() const {
  std::vector<double> out;
  out.reserve(live_private_);
  for (std::size_t i = 0; i < state_.size(); ++i) {
    if (state_[i] == EntryState::kPrivate) out.push_back(z_[i]);
  }
  return out;
}

std::vector<ExampleId> IndividualLedger::private_ids() const {
  std::vector<ExampleId> out;
  out.reserve(live_private_);
  for (std::size_t i = 0; i < state_.size(); ++i) {
    if (state_[i] == EntryState::kPrivate) {
      out.push_back(static_cast<ExampleId>(i));
    }
  }
  return out;
}

std::vector<ExampleId> filter_active(const IndividualLedger& ledger,
                                     double threshold) {
  std::vector<ExampleId> out;
  for (std::size_t i = 0; i < ledger.slot_count(); ++i) {
    const auto id = static_cast<ExampleId>(i);
    if (ledger.is_active(id, threshold)) out.push_back(id);
  }
  return out;
}

std::vector<double> oracle_compose(std::span<const ChargeRecord> records,
                                   std::size_t slot_count) {
  std::vector<double> totals(slot_count, 0.0);
  for (std::size_t i = 0; i < slot_count; ++i) {
    long double sum = 0.0L;
    for (const ChargeRecord& r : records) {
      if (r.example == i) {
        sum += static_cast<long double>(r.count_charge);
        sum += static_cast<long double>(r.label_charge);
      }
    }
    totals[i] = static_cast<double>(sum);
  }
  return totals;
}

}  // namespace indknn
