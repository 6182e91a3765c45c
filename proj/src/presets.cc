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

#include "indknn/presets.h"

#include <array>
#include <cmath>
#include <cstring>

namespace indknn {
namespace {

constexpr std::array kPresets = {
    Preset{"cifar10", "cosine", 0.5, 0.7, 0.12},
    Preset{"cifar10", "cosine", 1.0, 0.4, 0.12},
    Preset{"cifar10", "cosine", 1.5, 0.4, 0.12},
    Preset{"cifar10", "cosine", 2.0, 0.4, 0.12},
    Preset{"fmnist", "cosine", 0.5, 1.3, 0.6},
    Preset{"fmnist", "cosine", 1.0, 0.6, 0.6},
    Preset{"fmnist", "cosine", 1.5, 0.3, 0.6},
    Preset{"fmnist", "cosine", 2.0, 0.3, 0.6},
    Preset{"agnews", "cosine", 0.5, 0.6, 0.35},
    Preset{"agnews", "cosine", 1.0, 0.4, 0.36},
    Preset{"agnews", "cosine", 1.5, 0.25, 0.37},
    Preset{"agnews", "cosine", 2.0, 0.2, 0.38},
    Preset{"dbpedia", "cosine", 0.5, 0.45, 0.35},
    Preset{"dbpedia", "cosine", 1.0, 0.3, 0.37},
    Preset{"dbpedia", "cosine", 1.5, 0.2, 0.37},
    Preset{"dbpedia", "cosine", 2.0, 0.1, 0.38},
    Preset{"cifar10", "rbf", 0.5, 0.6, 0.8},
    Preset{"cifar10", "rbf", 1.0, 0.5, 0.25},
    Preset{"cifar10", "rbf", 1.5, 0.4, 0.26},
    Preset{"cifar10", "rbf", 2.0, 0.2, 0.28},
    Preset{"fmnist", "rbf", 0.5, 1.3, 0.83},
    Preset{"fmnist", "rbf", 1.0, 0.7, 0.82},
    Preset{"fmnist", "rbf", 1.5, 0.4, 0.84},
    Preset{"fmnist", "rbf", 2.0, 0.3, 0.84},
    Preset{"cifar10", "hash", 0.5, 0.6, 0.25, 30, 8},
    Preset{"cifar10", "hash", 1.0, 0.4, 0.50, 30, 8},
    Preset{"cifar10", "hash", 1.5, 0.3, 0.52, 30, 8},
    Preset{"cifar10", "hash", 2.0, 0.2, 0.53, 30, 8},
    Preset{"agnews", "hash", 0.5, 0.7, 0.35, 30, 9},
    Preset{"agnews", "hash", 1.0, 0.4, 0.36, 30, 9},
    Preset{"agnews", "hash", 1.5, 0.25, 0.36, 30, 9},
    Preset{"agnews", "hash", 2.0, 0.2, 0.36, 30, 9},
};

}  // namespace

std::span<const Preset> all_presets() { return kPresets; }

std::optional<Preset> find_preset(const std::string& dataset,
                                  const std::string& method, double epsilon) {
  for (const Preset& p : kPresets) {
    if (dataset == p.dataset && method == p.method &&
        std::abs(epsilon - p.epsilon) <= 1e-9) {
      return p;
    }
  }
  return std::nullopt;
}

KernelSpec preset_kernel(const Preset& preset) {
  return std::strcmp(preset.method, "rbf") == 0 ? KernelSpec::Rbf()
                                                : KernelSpec::Cosine();
}

}  // namespace indknn
