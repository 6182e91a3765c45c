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

#include "indknn/dataset_io.h"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "indknn/errors.h"

namespace indknn {
namespace {

constexpr std::size_t kHeaderSize = 12;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> bytes, std::size_t at) {
  std::uint32_t v = 0;
  for (int b = 0; b < 4; ++b) v |= std::uint32_t{bytes[at + b]} << (8 * b);
  return v;
}

void check_header(std::span<const std::uint8_t> bytes, const char (&magic)[4],
                  const char* what) {
  if (bytes.size() < kHeaderSize) {
    throw FormatError(bytes.size(), std::string(what) +
                                        " file shorter than its 12-byte header");
  }
  if (std::memcmp(bytes.data(), magic, 4) != 0) {
    throw FormatError(0, std::string("bad magic for ") + what + " file");
  }
}

void check_payload(std::span<const std::uint8_t> bytes, std::uint64_t expected,
                   const char* what) {
  if (bytes.size() != expected) {
    throw FormatError(std::min<std::uint64_t>(bytes.size(), expected),
                      std::string(what) + " payload size mismatch: header implies " +
                          std::to_string(expected) + " bytes, file has " +
                          std::to_string(bytes.size()));
  }
}

std::vector<std::uint8_t> read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_all(const std::filesystem::path& path,
               const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InvalidArgument("short write to " + path.string());
}

bool is_csv(const std::filesystem::path& path) {
  return path.extension() == ".csv";
}

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

}  // namespace

std::vector<std::uint8_t> encode_features(const FeatureMatrix& m) {
  if (m.values.size() != std::size_t{m.rows} * m.cols) {
    throw InvalidArgument("feature matrix shape does not match its values");
  }
  std::vector<std::uint8_t> out(kFeatureMagic, kFeatureMagic + 4);
  out.reserve(kHeaderSize + m.values.size() * 4);
  put_u32(out, m.rows);
  put_u32(out, m.cols);
  for (float v : m.values) put_u32(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

std::vector<std::uint8_t> encode_labels(const LabelArray& l) {
  std::vector<std::uint8_t> out(kLabelMagic, kLabelMagic + 4);
  out.reserve(kHeaderSize + l.labels.size() * 4);
  put_u32(out, static_cast<std::uint32_t>(l.labels.size()));
  put_u32(out, l.num_classes);
  for (ClassIndex v : l.labels) put_u32(out, v);
  return out;
}

FeatureMatrix decode_features(std::span<const std::uint8_t> bytes) {
  check_header(bytes, kFeatureMagic, "feature");
  FeatureMatrix m;
  m.rows = get_u32(bytes, 4);
  m.cols = get_u32(bytes, 8);
  check_payload(bytes, kHeaderSize + std::uint64_t{m.rows} * m.cols * 4, "feature");
  m.values.resize(std::size_t{m.rows} * m.cols);
  for (std::size_t i = 0; i < m.values.size(); ++i) {
    m.values[i] = std::bit_cast<float>(get_u32(bytes, kHeaderSize + 4 * i));
  }
  return m;
}

LabelArray decode_labels(std::span<const std::uint8_t> bytes) {
  check_header(bytes, kLabelMagic, "label");
  LabelArray l;
  const std::uint32_t n = get_u32(bytes, 4);
  l.num_classes = get_u32(bytes, 8);
  check_payload(bytes, kHeaderSize + std::uint64_t{n} * 4, "label");
  l.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    l.labels[i] = get_u32(bytes, kHeaderSize + 4 * i);
  }
  return l;
}

void write_features(const std::filesystem::path& path, const FeatureMatrix& m) {
  write_all(path, encode_features(m));
}

void write_labels(const std::filesystem::path& path, const LabelArray& l) {
  write_all(path, encode_labels(l));
}

FeatureMatrix read_features(const std::filesystem::path& path) {
  return decode_features(read_all(path));
}

LabelArray read_labels(const std::filesystem::path& path) {
  return decode_labels(read_all(path));
}

FeatureMatrix read_features_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  FeatureMatrix m;
  std::string line;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    const std::size_t line_offset = offset;
    offset += line.size() + 1;
    if (trim(line).empty()) continue;
    std::stringstream fields(line);
    std::string field;
    std::uint32_t cols = 0;
    while (std::getline(fields, field, ',')) {
      const std::string t = trim(field);
      float v = 0.0f;
      const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
      if (ec != std::errc() || ptr != t.data() + t.size()) {
        throw FormatError(line_offset, "unparseable feature value '" + t + "'");
      }
      m.values.push_back(v);
      ++cols;
    }
    if (m.rows == 0) {
      m.cols = cols;
    } else if (cols != m.cols) {
      throw FormatError(line_offset, "row has " + std::to_string(cols) +
                                         " columns, expected " +
                                         std::to_string(m.cols));
    }
    ++m.rows;
  }
  return m;
}

LabelArray read_labels_csv(const std::filesystem::path& path,
                           std::optional<std::uint32_t> num_classes) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  LabelArray l;
  std::string line;
  std::size_t offset = 0;
  ClassIndex max_label = 0;
  while (std::getline(in, line)) {
    const std::size_t line_offset = offset;
    offset += line.size() + 1;
    const std::string t = trim(line);
    if (t.empty()) continue;
    ClassIndex v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
      throw FormatError(line_offset, "unparseable label '" + t + "'");
    }
    max_label = std::max(max_label, v);
    l.labels.push_back(v);
  }
  l.num_classes = num_classes ? *num_classes
                              : (l.labels.empty() ? 0 : max_label + 1);
  return l;
}

void write_features_csv(const std::filesystem::path& path,
                        const FeatureMatrix& m) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  char buf[32];
  for (std::uint32_t i = 0; i < m.rows; ++i) {
    for (std::uint32_t j = 0; j < m.cols; ++j) {
      // Shortest representation that round-trips.
      const auto res = std::to_chars(buf, buf + sizeof(buf),
                                     m.values[std::size_t{i} * m.cols + j]);
      if (j) out << ',';
      out.write(buf, res.ptr - buf);
    }
    out << '\n';
  }
}

void write_labels_csv(const std::filesystem::path& path, const LabelArray& l) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  for (ClassIndex v : l.labels) out << v << '\n';
}

Dataset load_examples(const DatasetFiles& files) {
  const FeatureMatrix m = is_csv(files.features) ? read_features_csv(files.features)
                                                 : read_features(files.features);
  const LabelArray l = is_csv(files.labels)
                           ? read_labels_csv(files.labels, files.num_classes)
                           : read_labels(files.labels);
  if (l.labels.size() != m.rows) {
    throw FormatError(4, "label count " + std::to_string(l.labels.size()) +
                             " does not match feature rows " +
                             std::to_string(m.rows));
  }
  if (m.cols == 0 && m.rows > 0) throw FormatError(8, "zero feature dimension");
  Dataset out;
  out.num_classes = l.num_classes;
  out.dim = m.cols;
  out.examples.reserve(m.rows);
  std::vector<double> row(m.cols);
  for (std::size_t i = 0; i < m.rows; ++i) {
    if (l.labels[i] >= l.num_classes) {
      throw IngestionError(i, "label " + std::to_string(l.labels[i]) +
                                  " not below class count " +
                                  std::to_string(l.num_classes));
    }
    const auto src = m.row(i);
    std::copy(src.begin(), src.end(), row.begin());
    out.examples.push_back({l2_normalize(row, i), l.labels[i], Origin::kPrivate});
  }
  return out;
}

ExampleStore load_dataset(const DatasetFiles& files, const EngineConfig& config) {
  Dataset data = load_examples(files);
  ExampleStore store(data.dim, data.num_classes, config);
  for (const LabeledExample& e : data.examples) store.add_example(e);
  return store;
}

FeatureMatrix to_matrix(std::span<const LabeledExample> examples) {
  FeatureMatrix m;
  m.rows = static_cast<std::uint32_t>(examples.size());
  m.cols = examples.empty() ? 0
                            : static_cast<std::uint32_t>(examples[0].feature.size());
  m.values.reserve(std::size_t{m.rows} * m.cols);
  for (const LabeledExample& e : examples) {
    if (e.feature.size() != m.cols) {
      throw InvalidArgument("to_matrix: ragged examples");
    }
    for (double v : e.feature) m.values.push_back(static_cast<float>(v));
  }
  return m;
}

LabelArray to_label_array(std::span<const LabeledExample> examples,
                          std::uint32_t num_classes) {
  LabelArray l;
  l.num_classes = num_classes;
  l.labels.reserve(examples.size());
  for (const LabeledExample& e : examples) l.labels.push_back(e.label);
  return l;
}

}  // namespace indknn
