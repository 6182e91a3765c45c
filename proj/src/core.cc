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

#include "indknn/core.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "indknn/errors.h"

namespace indknn {

void KernelSpec::validate() const {
  if (kind == KernelKind::kRbf && !(bandwidth > 0.0 && std::isfinite(bandwidth))) {
    throw InvalidArgument("rbf bandwidth must be positive and finite");
  }
}

const char* to_string(KernelKind kind) {
  return kind == KernelKind::kRbf ? "rbf" : "cosine";
}

KernelKind parse_kernel_kind(const char* name) {
  if (std::strcmp(name, "rbf") == 0) return KernelKind::kRbf;
  if (std::strcmp(name, "cosine") == 0) return KernelKind::kCosine;
  throw InvalidArgument(std::string("unknown kernel '") + name + "'");
}

FeatureVector l2_normalize(std::span<const double> v, std::size_t row) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  const double norm = std::sqrt(sq);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw IngestionError(row, "feature vector has zero or non-finite norm");
  }
  FeatureVector out(v.size());
  std::transform(v.begin(), v.end(), out.begin(),
                 [norm](double x) { return x / norm; });
  return out;
}

double kernel_eval_unchecked(const KernelSpec& spec, const double* x,
                             const double* q, std::size_t dim) {
  if (spec.kind == KernelKind::kCosine) {
    double dot = 0.0;
    for (std::size_t k = 0; k < dim; ++k) dot += x[k] * q[k];
    return std::clamp(dot, 0.0, 1.0);
  }
  double dist2 = 0.0;
  for (std::size_t k = 0; k < dim; ++k) {
    const double diff = x[k] - q[k];
    dist2 += diff * diff;
  }
  return std::exp(-dist2 / (spec.bandwidth * spec.bandwidth));
}

double kernel_eval(const KernelSpec& spec, std::span<const double> x,
                   std::span<const double> q) {
  if (x.size() != q.size()) {
    throw InvalidArgument("kernel_eval: dimension mismatch (" +
                          std::to_string(x.size()) + " vs " +
                          std::to_string(q.size()) + ")");
  }
  return kernel_eval_unchecked(spec, x.data(), q.data(), x.size());
}

}  // namespace indknn
