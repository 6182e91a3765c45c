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

// Individual Renyi-DP bookkeeping.
//
// Every private example owns a remaining budget z_i that starts at B and only
// goes down. An example whose z_i falls below the per-query count charge is
// retired by the filter. Because each example's cumulative individual RDP at
// order alpha is alpha times its spend, and the spend never exceeds B, the
// whole interaction satisfies (alpha, B * alpha)-RDP for all alpha.

#ifndef INDKNN_ACCOUNTING_H_
#define INDKNN_ACCOUNTING_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "indknn/core.h"

namespace indknn {

struct DpParams {
  double epsilon = 1.0;
  double delta = 1e-5;

  // Throws InvalidArgument unless epsilon > 0 and 0 < delta < 1.
  void validate() const;
};

// Linear RDP curve coefficient: the mechanism is (alpha, B * alpha)-RDP.
struct RdpBudget {
  double value = 0.0;
};

// Individual RDP at order alpha of a Gaussian linear query whose
// contribution from this example has L2 norm `contribution_norm`.
double gaussian_individual_rdp(double contribution_norm, double sigma,
                               double alpha);

// Orders searched by rdp_to_dp: 1.01, 1.02, ..., 10.00, then 10, 12, ..., 512.
const std::vector<double>& conversion_orders();

// Smallest epsilon such that (alpha, B * alpha)-RDP for all alpha implies
// (epsilon, delta)-DP, minimised over conversion_orders() plus the order that
// minimises the classical bound. Never exceeds B + 2 sqrt(B log(1/delta)).
double rdp_to_dp(RdpBudget budget, double delta);

// B + 2 sqrt(B log(1/delta)).
double classical_rdp_to_dp_bound(RdpBudget budget, double delta);

// Largest B with rdp_to_dp(B, delta) <= epsilon, to relative tolerance 1e-9.
RdpBudget budget_for_dp(const DpParams& target);

// Default count-noise scale sqrt(T / (6 B)).
double default_count_sigma(std::size_t planned_queries, RdpBudget budget);

struct ChargeRecord {
  std::uint64_t query = 0;
  ExampleId example = 0;
  double count_charge = 0.0;
  double label_charge = 0.0;
};

// Remaining per-example budgets, indexed by ExampleId.
//
// Public-reused entries are marked unlimited and never charged. Removed
// entries stay as tombstones so that ids remain stable.
class IndividualLedger {
 public:
  enum class EntryState : std::uint8_t { kPrivate, kUnlimited, kRemoved };

  IndividualLedger() = default;
  explicit IndividualLedger(RdpBudget budget);

  RdpBudget budget() const { return budget_; }

  ExampleId add_private();
  ExampleId add_unlimited();
  void remove(ExampleId id);

  // Number of live private entries.
  std::size_t size() const { return live_private_; }
  // Number of ids ever handed out, including tombstones.
  std::size_t slot_count() const { return state_.size(); }

  EntryState state(ExampleId id) const { return state_[id]; }
  bool is_live(ExampleId id) const {
    return id < state_.size() && state_[id] != EntryState::kRemoved;
  }
  bool is_private(ExampleId id) const {
    return state_[id] == EntryState::kPrivate;
  }
  bool is_unlimited(ExampleId id) const {
    return state_[id] == EntryState::kUnlimited;
  }

  // Remaining budget of a private entry.
  double remaining(ExampleId id) const { return z_[id]; }
  std::span<const double> raw_remaining() const { return z_; }

  // Subtracts `amount` (>= 0) from a private entry. Throws
  // InvariantViolation if the entry would drop below -1e-9.
  void charge(ExampleId id, double amount);
  // Sets a private entry to exactly zero (cap saturation).
  void exhaust(ExampleId id);

  // Active under a threshold: private with z >= threshold, or unlimited.
  bool is_active(ExampleId id, double threshold) const {
    const EntryState s = state_[id];
    return s == EntryState::kUnlimited ||
           (s == EntryState::kPrivate && z_[id] >= threshold);
  }

  // Remaining budgets of live private entries in id order.
  std::vector<double> private_remaining() const;
  std::vector<ExampleId> private_ids() const;

 private:
  RdpBudget budget_;
  std::vector<double> z_;
  std::vector<EntryState> state_;
  std::size_t live_private_ = 0;
};

// Slack allowed on the nonnegativity of remaining budgets.
inline constexpr double kLedgerSlack = 1e-9;

// Ids with z_i >= threshold, plus every unlimited entry, in id order.
std::vector<ExampleId> filter_active(const IndividualLedger& ledger,
                                     double threshold);

// Per-example total spend, re-summed from scratch in extended precision.
// Deliberately naive; tests compare it against the ledger's incremental
// updates. Result has one entry per id in [0, slot_count).
std::vector<double> oracle_compose(std::span<const ChargeRecord> records,
                                   std::size_t slot_count);

}  // namespace indknn

#endif  // INDKNN_ACCOUNTING_H_
