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

// Straight-line re-implementations used as test oracles. Nothing here calls
// into the engine; only the noise stream is shared so that runs can be
// compared draw for draw.

#ifndef INDKNN_TESTS_SUPPORT_REFERENCE_H_
#define INDKNN_TESTS_SUPPORT_REFERENCE_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "indknn/accounting.h"
#include "indknn/core.h"
#include "indknn/engine.h"
#include "indknn/mechanisms.h"

namespace indknn::testing {

inline double ref_kernel(const KernelSpec& k, const FeatureVector& x,
                         const FeatureVector& q) {
  if (k.kind == KernelKind::kCosine) {
    double dot = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * q[i];
    if (dot < 0.0) dot = 0.0;
    if (dot > 1.0) dot = 1.0;
    return dot;
  }
  double d2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d2 += (x[i] - q[i]) * (x[i] - q[i]);
  return std::exp(-d2 / (k.bandwidth * k.bandwidth));
}

struct RefParams {
  KernelSpec kernel;
  double tau = 0.5;
  double sigma1 = 1.0;
  double sigma2 = 1.0;
  double budget = 1.0;
  std::uint32_t floor = 30;
  std::uint32_t classes = 2;
  bool reuse = false;
};

struct RefCharge {
  std::size_t example;
  double amount;
};

// Plain-vector state of the query loop.
struct RefState {
  std::vector<FeatureVector> x;
  std::vector<ClassIndex> y;
  std::vector<double> z;
  std::vector<bool> is_public;

  void add(const FeatureVector& f, ClassIndex label, bool pub, double budget) {
    x.push_back(f);
    y.push_back(label);
    z.push_back(pub ? 0.0 : budget);
    is_public.push_back(pub);
  }
};

struct RefAnswer {
  ClassIndex answer;
  double k_t;
  std::vector<std::size_t> selected;
  std::vector<RefCharge> charges;
};

inline RefAnswer ref_answer(RefState& s, const RefParams& p,
                            const FeatureVector& q, NoiseSource& src) {
  const double retire = 1.0 / (2.0 * p.sigma1 * p.sigma1);
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    if (s.is_public[i] || s.z[i] >= retire) active.push_back(i);
  }
  RefAnswer out;
  std::vector<double> w;
  for (std::size_t i : active) {
    const double k = ref_kernel(p.kernel, s.x[i], q);
    if (k >= p.tau) {
      out.selected.push_back(i);
      w.push_back(k);
    }
  }
  double k_t = static_cast<double>(out.selected.size()) +
               p.sigma1 * src.standard_normal();
  if (k_t < p.floor) k_t = p.floor;
  out.k_t = k_t;
  std::vector<double> votes(p.classes, 0.0);
  for (std::size_t s_idx = 0; s_idx < out.selected.size(); ++s_idx) {
    const std::size_t i = out.selected[s_idx];
    if (s.is_public[i]) {
      votes[s.y[i]] += w[s_idx];
      continue;
    }
    s.z[i] -= retire;
    const double f = std::min(w[s_idx], p.sigma2 * std::sqrt(2.0 * k_t * s.z[i]));
    const double label_charge = f * f / (2.0 * p.sigma2 * p.sigma2 * k_t);
    s.z[i] -= label_charge;
    votes[s.y[i]] += f;
    out.charges.push_back({i, retire + label_charge});
  }
  const double stddev = std::sqrt(p.sigma2 * p.sigma2 * k_t);
  ClassIndex best = 0;
  double best_v = 0.0;
  for (std::uint32_t j = 0; j < p.classes; ++j) {
    const double v = votes[j] + stddev * src.standard_normal();
    if (j == 0 || v > best_v) {
      best = j;
      best_v = v;
    }
  }
  out.answer = best;
  if (p.reuse) s.add(q, best, true, p.budget);
  return out;
}

// Exact kernel-weighted vote over every example with weight >= tau. nullopt
// when none qualifies.
inline std::optional<ClassIndex> ref_threshold_vote(
    const std::vector<FeatureVector>& x, const std::vector<ClassIndex>& y,
    std::uint32_t classes, const KernelSpec& kernel, double tau,
    const FeatureVector& q) {
  std::vector<double> votes(classes, 0.0);
  bool any = false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double k = ref_kernel(kernel, x[i], q);
    if (k >= tau) {
      votes[y[i]] += k;
      any = true;
    }
  }
  if (!any) return std::nullopt;
  ClassIndex best = 0;
  for (std::uint32_t j = 1; j < classes; ++j) {
    if (votes[j] > votes[best]) best = j;
  }
  return best;
}

inline FeatureVector random_unit(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> n(0.0, 1.0);
  FeatureVector v(dim);
  double sq = 0.0;
  for (double& x : v) {
    x = n(rng);
    sq += x * x;
  }
  const double norm = std::sqrt(sq);
  for (double& x : v) x /= norm;
  return v;
}

// Unit vector near `center`; spread is the perturbation scale.
inline FeatureVector near(std::mt19937_64& rng, const FeatureVector& center,
                          double spread) {
  std::normal_distribution<double> n(0.0, spread);
  FeatureVector v(center);
  double sq = 0.0;
  for (double& x : v) {
    x += n(rng);
    sq += x * x;
  }
  const double norm = std::sqrt(sq);
  for (double& x : v) x /= norm;
  return v;
}

}  // namespace indknn::testing

#endif  // INDKNN_TESTS_SUPPORT_REFERENCE_H_
