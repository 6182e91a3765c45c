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

// Feature and label files.
//
// Features: "IKN1", u32 n, u32 d, then n * d float32 values, row-major.
// Labels:   "IKL1", u32 n, u32 c, then n u32 class indices.
// All integers and floats are little-endian. CSV alternates hold one row
// per line (comma-separated features; one label per line).

#ifndef INDKNN_DATASET_IO_H_
#define INDKNN_DATASET_IO_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "indknn/config.h"
#include "indknn/core.h"
#include "indknn/engine.h"

namespace indknn {

struct FeatureMatrix {
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::vector<float> values;

  std::span<const float> row(std::size_t i) const {
    return {values.data() + i * cols, cols};
  }
};

struct LabelArray {
  std::uint32_t num_classes = 0;
  std::vector<ClassIndex> labels;
};

inline constexpr char kFeatureMagic[4] = {'I', 'K', 'N', '1'};
inline constexpr char kLabelMagic[4] = {'I', 'K', 'L', '1'};

std::vector<std::uint8_t> encode_features(const FeatureMatrix& m);
std::vector<std::uint8_t> encode_labels(const LabelArray& l);
// Throw FormatError naming the byte offset of the first problem. Labels are
// not range-checked here.
FeatureMatrix decode_features(std::span<const std::uint8_t> bytes);
LabelArray decode_labels(std::span<const std::uint8_t> bytes);

void write_features(const std::filesystem::path& path, const FeatureMatrix& m);
void write_labels(const std::filesystem::path& path, const LabelArray& l);
FeatureMatrix read_features(const std::filesystem::path& path);
LabelArray read_labels(const std::filesystem::path& path);

// CSV readers. FormatError offsets are byte offsets of the offending line.
FeatureMatrix read_features_csv(const std::filesystem::path& path);
// num_classes defaults to max label + 1.
LabelArray read_labels_csv(const std::filesystem::path& path,
                           std::optional<std::uint32_t> num_classes);
void write_features_csv(const std::filesystem::path& path,
                        const FeatureMatrix& m);
void write_labels_csv(const std::filesystem::path& path, const LabelArray& l);

struct DatasetFiles {
  // ".csv" selects the CSV reader; anything else the binary one.
  std::filesystem::path features;
  std::filesystem::path labels;
  // Only used for CSV labels.
  std::optional<std::uint32_t> num_classes;
};

struct Dataset {
  std::uint32_t num_classes = 0;
  std::size_t dim = 0;
  std::vector<LabeledExample> examples;
};

// Normalized private examples. IngestionError on a zero row or a label >= c,
// FormatError when features and labels disagree on n.
Dataset load_examples(const DatasetFiles& files);

ExampleStore load_dataset(const DatasetFiles& files, const EngineConfig& config);

FeatureMatrix to_matrix(std::span<const LabeledExample> examples);
LabelArray to_label_array(std::span<const LabeledExample> examples,
                          std::uint32_t num_classes);

}  // namespace indknn

#endif  // INDKNN_DATASET_IO_H_
