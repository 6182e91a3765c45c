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

// Hyper-parameters that gave the best utility on the reference embedding
// datasets, keyed by (dataset, method, epsilon).

#ifndef INDKNN_PRESETS_H_
#define INDKNN_PRESETS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "indknn/core.h"

namespace indknn {

struct Preset {
  const char* dataset;  // "cifar10", "fmnist", "agnews", "dbpedia"
  const char* method;   // "cosine", "rbf", "hash"
  double epsilon;
  double sigma2;
  double tau;
  // Hash presets only; zero otherwise.
  std::uint32_t tables = 0;
  std::uint32_t bits = 0;
};

std::span<const Preset> all_presets();

// Exact match on all three keys, epsilon within 1e-9.
std::optional<Preset> find_preset(const std::string& dataset,
                                  const std::string& method, double epsilon);

// Kernel a preset's method implies; the hash presets use cosine similarity.
KernelSpec preset_kernel(const Preset& preset);

}  // namespace indknn

#endif  // INDKNN_PRESETS_H_
