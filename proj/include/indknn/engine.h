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

// Kernelized nearest-neighbor prediction with individual privacy accounting.
//
// Each query runs the same fixed sequence:
//   1. retire private examples whose remaining budget z_i is below the count
//      charge 1 / (2 sigma1^2);
//   2. select active examples with kernel weight >= tau;
//   3. release K_t = max(|selected| + N(0, sigma1^2), k_floor);
//   4. for each selected private example, charge the count, cap its vote at
//      sigma2 * sqrt(2 K_t z_i), and charge |vote|^2 / (2 sigma2^2 K_t);
//   5. release argmax(votes + N(0, sigma2^2 K_t I)).
// Only selected examples are ever charged, so an example far from every query
// keeps its whole budget.

#ifndef INDKNN_ENGINE_H_
#define INDKNN_ENGINE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "indknn/accounting.h"
#include "indknn/config.h"
#include "indknn/core.h"
#include "indknn/mechanisms.h"

namespace indknn {

struct QueryOutcome {
  std::uint64_t t = 0;
  ClassIndex answer = 0;
  double k_t = 0.0;
  // In id order. Includes public-reused examples.
  std::vector<ExampleId> selected;
  // One record per selected private example, in id order.
  std::vector<ChargeRecord> charges;
};

class ExampleStore {
 public:
  // Throws InvalidArgument on a bad config, dim == 0 or num_classes < 2.
  ExampleStore(std::size_t dim, std::uint32_t num_classes,
               const EngineConfig& config);

  // The feature must already be unit norm (within 1e-6). Private examples
  // get a fresh budget B.
  ExampleId add_example(const LabeledExample& example);
  // Deletes the example and its ledger entry. Its feature is zeroed. Throws
  // InvalidArgument if the id is not live.
  void remove_example(ExampleId id);

  std::size_t dim() const { return dim_; }
  std::uint32_t num_classes() const { return num_classes_; }
  const EngineConfig& config() const { return config_; }
  const ResolvedParams& params() const { return params_; }

  std::size_t slot_count() const { return labels_.size(); }
  std::size_t live_count() const { return live_; }
  bool is_live(ExampleId id) const { return ledger_.is_live(id); }
  std::span<const double> feature(ExampleId id) const {
    return {features_.data() + static_cast<std::size_t>(id) * dim_, dim_};
  }
  const double* feature_data(ExampleId id) const {
    return features_.data() + static_cast<std::size_t>(id) * dim_;
  }
  ClassIndex label(ExampleId id) const { return labels_[id]; }
  Origin origin(ExampleId id) const {
    return ledger_.is_unlimited(id) ? Origin::kPublicReused : Origin::kPrivate;
  }

  const IndividualLedger& ledger() const { return ledger_; }
  const std::vector<QueryOutcome>& released() const { return released_; }
  // Ids removed so far, in removal order.
  const std::vector<ExampleId>& removal_log() const { return removal_log_; }

  // Throws InvalidArgument unless q has the store dimension and unit norm.
  void check_query(std::span<const double> q) const;

 private:
  friend QueryOutcome answer_candidates(ExampleStore&, std::span<const double>,
                                        NoiseSource&,
                                        std::optional<std::span<const ExampleId>>);

  std::size_t dim_;
  std::uint32_t num_classes_;
  EngineConfig config_;
  ResolvedParams params_;
  std::vector<double> features_;
  std::vector<ClassIndex> labels_;
  IndividualLedger ledger_;
  std::size_t live_ = 0;
  std::vector<QueryOutcome> released_;
  std::vector<ExampleId> removal_log_;
};

struct Selection {
  std::vector<ExampleId> ids;
  std::vector<double> weights;
};

// Active examples with kernel weight >= tau, in id order. Whether an example
// is selected depends only on its own feature, its own budget and q.
Selection select_neighbors(const ExampleStore& store, std::span<const double> q);

// Capped vote of one selected example: a one-hot vector of magnitude
// min(weight, sigma2 * sqrt(2 K_t z)) at `label`. `remaining` is the budget
// after the count charge. Throws InvariantViolation if it is negative.
std::vector<double> contribution(double weight, ClassIndex label,
                                 std::uint32_t num_classes, double k_t,
                                 double remaining, double sigma2);

// z - |f|^2 / (2 sigma2^2 K_t). A charge equal to z up to rounding leaves
// exactly zero.
double charge_label(double remaining, std::span<const double> f, double sigma2,
                    double k_t);

QueryOutcome answer_query(ExampleStore& store, std::span<const double> q,
                          NoiseSource& src);

// Runs answer_query over the candidate ids only (must be sorted ascending and
// live). With nullopt every live example is a candidate.
QueryOutcome answer_candidates(
    ExampleStore& store, std::span<const double> q, NoiseSource& src,
    std::optional<std::span<const ExampleId>> candidates);

std::vector<QueryOutcome> answer_stream(
    ExampleStore& store, std::span<const FeatureVector> queries,
    NoiseSource& src);

// Exact kernel-weighted threshold vote over all live examples with no noise
// and no budgets. nullopt when nothing reaches tau. Not private.
std::optional<ClassIndex> nonprivate_predict(const ExampleStore& store,
                                             std::span<const double> q,
                                             double tau);

}  // namespace indknn

#endif  // INDKNN_ENGINE_H_
