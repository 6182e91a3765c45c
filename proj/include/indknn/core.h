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

// Examples, kernels and feature preprocessing.

#ifndef INDKNN_CORE_H_
#define INDKNN_CORE_H_

#include <cstdint>
#include <span>
#include <vector>

namespace indknn {

using FeatureVector = std::vector<double>;
using ClassIndex = std::uint32_t;

// Stable handle of a slot in an ExampleStore. Never reused after removal.
using ExampleId = std::uint32_t;

enum class Origin : std::uint8_t {
  kPrivate,
  // A released (query, answer) pair fed back into the store. Carries no
  // privacy budget.
  kPublicReused,
};

struct LabeledExample {
  FeatureVector feature;
  ClassIndex label = 0;
  Origin origin = Origin::kPrivate;
};

enum class KernelKind : std::uint8_t { kRbf, kCosine };

// Default RBF bandwidth, e^1.5.
inline constexpr double kDefaultBandwidth = 4.4816890703380645;

struct KernelSpec {
  KernelKind kind = KernelKind::kCosine;
  // Only read for kRbf.
  double bandwidth = kDefaultBandwidth;

  static KernelSpec Rbf(double bandwidth = kDefaultBandwidth) {
    return {KernelKind::kRbf, bandwidth};
  }
  static KernelSpec Cosine() { return {KernelKind::kCosine, kDefaultBandwidth}; }

  // Throws InvalidArgument on a non-positive RBF bandwidth.
  void validate() const;
};

const char* to_string(KernelKind kind);
// Accepts "rbf" or "cosine".
KernelKind parse_kernel_kind(const char* name);

// Scales v to unit L2 norm. Throws IngestionError naming `row` when the
// norm is zero or not finite.
FeatureVector l2_normalize(std::span<const double> v, std::size_t row = 0);

// Weight in [0, 1] of stored feature x for query q. Both must be unit norm.
// RBF: exp(-|x - q|^2 / nu^2). Cosine: max(0, x . q), so that anti-similar
// points never cast negative votes. Throws InvalidArgument on a dimension
// mismatch.
double kernel_eval(const KernelSpec& spec, std::span<const double> x,
                   std::span<const double> q);

// Same as kernel_eval without the dimension check, for hot loops.
double kernel_eval_unchecked(const KernelSpec& spec, const double* x,
                             const double* q, std::size_t dim);

}  // namespace indknn

#endif  // INDKNN_CORE_H_
