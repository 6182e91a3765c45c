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

#include "indknn/engine.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "indknn/errors.h"

namespace indknn {
namespace {

constexpr double kUnitNormTolerance = 1e-6;

double squared_norm(std::span<const double> v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  return sq;
}

// A label charge within this relative distance of the remaining budget is
// treated as saturating it.
constexpr double kSaturationTolerance = 1e-12;

}  // namespace

ExampleStore::ExampleStore(std::size_t dim, std::uint32_t num_classes,
                           const EngineConfig& config)
    : dim_(dim),
      num_classes_(num_classes),
      config_(config),
      params_(resolve(config)),
      ledger_(params_.budget) {
  if (dim == 0) throw InvalidArgument("feature dimension must be positive");
  if (num_classes < 2) throw InvalidArgument("need at least two classes");
}

ExampleId ExampleStore::add_example(const LabeledExample& example) {
  if (example.feature.size() != dim_) {
    throw InvalidArgument("add_example: expected dimension " +
                          std::to_string(dim_) + ", got " +
                          std::to_string(example.feature.size()));
  }
  if (example.label >= num_classes_) {
    throw InvalidArgument("add_example: label " +
                          std::to_string(example.label) + " out of range");
  }
  if (std::abs(std::sqrt(squared_norm(example.feature)) - 1.0) >
      kUnitNormTolerance) {
    throw InvalidArgument("add_example: feature is not unit norm");
  }
  const ExampleId id = example.origin == Origin::kPrivate
                           ? ledger_.add_private()
                           : ledger_.add_unlimited();
  features_.insert(features_.end(), example.feature.begin(),
                   example.feature.end());
  labels_.push_back(example.label);
  ++live_;
  return id;
}

void ExampleStore::remove_example(ExampleId id) {
  if (!ledger_.is_live(id)) {
    throw InvalidArgument("remove_example: no live example " +
                          std::to_string(id));
  }
  ledger_.remove(id);
  std::fill_n(features_.begin() + static_cast<std::ptrdiff_t>(id) * dim_, dim_,
              0.0);
  --live_;
  removal_log_.push_back(id);
}

void ExampleStore::check_query(std::span<const double> q) const {
  if (q.size() != dim_) {
    throw InvalidArgument("query dimension " + std::to_string(q.size()) +
                          " does not match store dimension " +
                          std::to_string(dim_));
  }
  if (std::abs(std::sqrt(squared_norm(q)) - 1.0) > kUnitNormTolerance) {
    throw InvalidArgument("query is not unit norm");
  }
}

Selection select_neighbors(const ExampleStore& store,
                           std::span<const double> q) {
  store.check_query(q);
  const double threshold = store.params().count_charge;
  const double tau = store.config().tau;
  const KernelSpec& kernel = store.config().kernel;
  Selection out;
  for (std::size_t i = 0; i < store.slot_count(); ++i) {
    const auto id = static_cast<ExampleId>(i);
    if (!store.ledger().is_active(id, threshold)) continue;
    const double w =
        kernel_eval_unchecked(kernel, store.feature_data(id), q.data(), q.size());
    if (w >= tau) {
      out.ids.push_back(id);
      out.weights.push_back(w);
    }
  }
  return out;
}

std::vector<double> contribution(double weight, ClassIndex label,
                                 std::uint32_t num_classes, double k_t,
                                 double remaining, double sigma2) {
  if (remaining < 0.0) {
    throw InvariantViolation("contribution: negative remaining budget");
  }
  if (label >= num_classes) throw InvalidArgument("label out of range");
  std::vector<double> f(num_classes, 0.0);
  f[label] = std::min(weight, sigma2 * std::sqrt(2.0 * k_t * remaining));
  return f;
}

double charge_label(double remaining, std::span<const double> f, double sigma2,
                    double k_t) {
  const double charge = squared_norm(f) / (2.0 * sigma2 * sigma2 * k_t);
  if (charge >= remaining * (1.0 - kSaturationTolerance)) return 0.0;
  return remaining - charge;
}

QueryOutcome answer_candidates(
    ExampleStore& store, std::span<const double> q, NoiseSource& src,
    std::optional<std::span<const ExampleId>> candidates) {
  store.check_query(q);
  const EngineConfig& cfg = store.config_;
  const double count_charge = store.params_.count_charge;
  IndividualLedger& ledger = store.ledger_;
  const std::size_t dim = store.dim_;

  QueryOutcome out;
  out.t = store.released_.size();

  std::vector<double> weights;
  auto consider = [&](ExampleId id) {
    if (!ledger.is_active(id, count_charge)) return;
    const double w =
        kernel_eval_unchecked(cfg.kernel, store.feature_data(id), q.data(), dim);
    if (w >= cfg.tau) {
      out.selected.push_back(id);
      weights.push_back(w);
    }
  };
  if (candidates) {
    const std::span<const ExampleId> ids = *candidates;
    constexpr std::size_t kAhead = 4;
    for (std::size_t k = 0; k < ids.size(); ++k) {
      if (k + kAhead < ids.size()) {
        const double* next = store.feature_data(ids[k + kAhead]);
        for (std::size_t off = 0; off < dim; off += 8) __builtin_prefetch(next + off);
      }
      consider(ids[k]);
    }
  } else {
    for (std::size_t i = 0; i < store.slot_count(); ++i) {
      consider(static_cast<ExampleId>(i));
    }
  }

  out.k_t = noisy_count(out.selected.size(), store.params_.sigma1, cfg.k_floor,
                        src);

  const double sigma2 = cfg.sigma2;
  const double label_scale = 1.0 / (2.0 * sigma2 * sigma2 * out.k_t);
  std::vector<long double> votes(store.num_classes_, 0.0L);
  for (std::size_t s = 0; s < out.selected.size(); ++s) {
    const ExampleId id = out.selected[s];
    const double w = weights[s];
    const ClassIndex y = store.labels_[id];
    if (ledger.is_unlimited(id)) {
      votes[y] += w;
      continue;
    }
    ledger.charge(id, count_charge);
    const double z = ledger.remaining(id);
    const double cap = sigma2 * std::sqrt(2.0 * out.k_t * z);
    double magnitude = w;
    double label_charge = w * w * label_scale;
    if (w >= cap || label_charge >= z * (1.0 - kSaturationTolerance)) {
      magnitude = std::min(w, cap);
      label_charge = z;
      ledger.exhaust(id);
    } else {
      ledger.charge(id, label_charge);
    }
    votes[y] += magnitude;
    out.charges.push_back({out.t, id, count_charge, label_charge});
  }

  std::vector<double> summed(votes.begin(), votes.end());
  out.answer = noisy_argmax(summed, sigma2 * sigma2 * out.k_t, src);

  if (cfg.reuse_predictions) {
    store.add_example(
        {FeatureVector(q.begin(), q.end()), out.answer, Origin::kPublicReused});
  }
  store.released_.push_back(out);
  return out;
}

QueryOutcome answer_query(ExampleStore& store, std::span<const double> q,
                          NoiseSource& src) {
  return answer_candidates(store, q, src, std::nullopt);
}

std::vector<QueryOutcome> answer_stream(ExampleStore& store,
                                        std::span<const FeatureVector> queries,
                                        NoiseSource& src) {
  std::vector<QueryOutcome> out;
  out.reserve(queries.size());
  for (const FeatureVector& q : queries) {
    out.push_back(answer_query(store, q, src));
  }
  return out;
}

std::optional<ClassIndex> nonprivate_predict(const ExampleStore& store,
                                             std::span<const double> q,
                                             double tau) {
  store.check_query(q);
  std::vector<double> votes(store.num_classes(), 0.0);
  bool any = false;
  for (std::size_t i = 0; i < store.slot_count(); ++i) {
    const auto id = static_cast<ExampleId>(i);
    if (!store.is_live(id)) continue;
    const double w = kernel_eval_unchecked(store.config().kernel,
                                           store.feature_data(id), q.data(),
                                           q.size());
    if (w >= tau) {
      votes[store.label(id)] += w;
      any = true;
    }
  }
  if (!any) return std::nullopt;
  return static_cast<ClassIndex>(
      std::max_element(votes.begin(), votes.end()) - votes.begin());
}

}  // namespace indknn
