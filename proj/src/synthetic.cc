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

#include "indknn/synthetic.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "indknn/errors.h"

namespace indknn {
namespace {

constexpr int kMaxMeanAttempts = 20000;

FeatureVector random_unit(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(dim);
  for (double& x : v) x = normal(rng);
  return l2_normalize(v);
}

double angle(const FeatureVector& a, const FeatureVector& b) {
  double dot = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) dot += a[k] * b[k];
  return std::acos(std::clamp(dot, -1.0, 1.0));
}

// Vertices of a regular simplex centred at the origin, randomly rotated by
// Gram-Schmidt on Gaussian vectors. Pairwise angle acos(-1 / (c - 1)).
std::vector<FeatureVector> rotated_simplex(std::mt19937_64& rng,
                                           std::uint32_t c, std::size_t dim) {
  std::vector<FeatureVector> basis;
  std::normal_distribution<double> normal(0.0, 1.0);
  while (basis.size() < c) {
    FeatureVector v(dim);
    for (double& x : v) x = normal(rng);
    for (const FeatureVector& b : basis) {
      double dot = 0.0;
      for (std::size_t k = 0; k < dim; ++k) dot += v[k] * b[k];
      for (std::size_t k = 0; k < dim; ++k) v[k] -= dot * b[k];
    }
    basis.push_back(l2_normalize(v));
  }
  // c orthonormal vectors e_i; the simplex is e_i minus the centroid.
  std::vector<FeatureVector> out(c, FeatureVector(dim, 0.0));
  for (std::uint32_t i = 0; i < c; ++i) {
    for (std::size_t k = 0; k < dim; ++k) {
      double centroid = 0.0;
      for (std::uint32_t j = 0; j < c; ++j) centroid += basis[j][k];
      out[i][k] = basis[i][k] - centroid / c;
    }
    out[i] = l2_normalize(out[i]);
  }
  return out;
}

std::vector<FeatureVector> draw_means(std::mt19937_64& rng,
                                      const SyntheticParams& p) {
  std::vector<FeatureVector> means;
  int attempts = 0;
  while (means.size() < p.classes && attempts < kMaxMeanAttempts) {
    ++attempts;
    FeatureVector candidate = random_unit(rng, p.dim);
    bool ok = true;
    for (const FeatureVector& m : means) {
      if (angle(m, candidate) < p.separation) {
        ok = false;
        break;
      }
    }
    if (ok) means.push_back(std::move(candidate));
  }
  if (means.size() == p.classes) return means;

  // Rejection failed; the regular simplex maximises the minimum angle when it
  // fits in the space.
  if (p.classes <= p.dim + 1) {
    const double simplex_angle = std::acos(-1.0 / (p.classes - 1.0));
    if (p.separation <= simplex_angle + 1e-12) {
      if (p.classes <= p.dim) return rotated_simplex(rng, p.classes, p.dim);
    }
  }
  throw InvalidArgument("cannot place " + std::to_string(p.classes) +
                        " class means in dimension " + std::to_string(p.dim) +
                        " with pairwise angle >= " +
                        std::to_string(p.separation));
}

LabeledExample draw_point(std::mt19937_64& rng,
                          const std::vector<FeatureVector>& means,
                          const SyntheticParams& p) {
  std::uniform_int_distribution<std::uint32_t> pick(0, p.classes - 1);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::uint32_t label = pick(rng);
  const double scale = p.noise / std::sqrt(static_cast<double>(p.dim));
  FeatureVector v(means[label]);
  for (double& x : v) x += scale * normal(rng);
  return {l2_normalize(v), label, Origin::kPrivate};
}

}  // namespace

SyntheticData generate_synthetic(const SyntheticParams& params) {
  if (params.classes < 2) throw InvalidArgument("synthetic: need >= 2 classes");
  if (params.dim < 2) throw InvalidArgument("synthetic: need dim >= 2");
  if (!(params.separation >= 0.0) || params.separation > std::numbers::pi) {
    throw InvalidArgument("synthetic: separation must be in [0, pi]");
  }
  if (!(params.noise >= 0.0)) {
    throw InvalidArgument("synthetic: noise must be nonnegative");
  }
  std::mt19937_64 rng(params.seed);
  SyntheticData out;
  out.num_classes = params.classes;
  out.dim = params.dim;
  out.means = draw_means(rng, params);
  out.train.reserve(params.n);
  for (std::size_t i = 0; i < params.n; ++i) {
    out.train.push_back(draw_point(rng, out.means, params));
  }
  out.queries.reserve(params.queries);
  for (std::size_t i = 0; i < params.queries; ++i) {
    out.queries.push_back(draw_point(rng, out.means, params));
  }
  return out;
}

}  // namespace indknn
