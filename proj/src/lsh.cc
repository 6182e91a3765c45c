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

#include "indknn/lsh.h"

#include <algorithm>
#include <random>
#include <string>

#include "indknn/errors.h"

namespace indknn {

LshIndex::LshIndex(std::size_t dim, std::uint32_t tables, std::uint32_t bits,
                   std::uint64_t seed)
    : dim_(dim), tables_(tables), bits_(bits), seed_(seed), buckets_(tables) {
  if (tables < 1) throw InvalidArgument("lsh: need at least one table");
  if (bits < 1 || bits > 63) {
    throw InvalidArgument("lsh: bits per table must be in [1, 63], got " +
                          std::to_string(bits));
  }
  if (dim < 1) throw InvalidArgument("lsh: dimension must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  hyperplanes_.resize(static_cast<std::size_t>(tables) * bits * dim);
  for (double& v : hyperplanes_) v = normal(rng);
}

BucketCode LshIndex::code(std::uint32_t table, std::span<const double> x) const {
  if (x.size() != dim_) throw InvalidArgument("lsh: dimension mismatch");
  BucketCode out = 0;
  const double* plane =
      hyperplanes_.data() + static_cast<std::size_t>(table) * bits_ * dim_;
  for (std::uint32_t j = 0; j < bits_; ++j, plane += dim_) {
    double dot = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) dot += plane[k] * x[k];
    if (dot >= 0.0) out |= BucketCode{1} << j;
  }
  return out;
}

std::vector<BucketCode> LshIndex::codes(std::span<const double> x) const {
  std::vector<BucketCode> out(tables_);
  for (std::uint32_t t = 0; t < tables_; ++t) out[t] = code(t, x);
  return out;
}

void LshIndex::insert(ExampleId id, std::span<const double> feature) {
  if (contains(id)) return;
  if (indexed_.size() <= id) {
    indexed_.resize(id + 1, false);
    codes_.resize(static_cast<std::size_t>(id + 1) * tables_, 0);
  }
  for (std::uint32_t t = 0; t < tables_; ++t) {
    const BucketCode c = code(t, feature);
    codes_[static_cast<std::size_t>(id) * tables_ + t] = c;
    buckets_[t][c].push_back(id);
  }
  indexed_[id] = true;
  ++size_;
}

void LshIndex::erase(ExampleId id) {
  if (!contains(id)) return;
  for (std::uint32_t t = 0; t < tables_; ++t) {
    const BucketCode c = codes_[static_cast<std::size_t>(id) * tables_ + t];
    auto it = buckets_[t].find(c);
    auto& members = it->second;
    members.erase(std::find(members.begin(), members.end(), id));
    if (members.empty()) buckets_[t].erase(it);
  }
  indexed_[id] = false;
  --size_;
}

void LshIndex::sync(const ExampleStore& store) {
  if (store.dim() != dim_) throw InvalidArgument("lsh: store dimension mismatch");
  const auto& removals = store.removal_log();
  for (; synced_removals_ < removals.size(); ++synced_removals_) {
    erase(removals[synced_removals_]);
  }
  for (; synced_slots_ < store.slot_count(); ++synced_slots_) {
    const auto id = static_cast<ExampleId>(synced_slots_);
    if (store.is_live(id)) insert(id, store.feature(id));
  }
}

std::vector<ExampleId> LshIndex::retrieve(std::span<const double> q) const {
  std::vector<std::uint8_t> hit(indexed_.size(), 0);
  for (std::uint32_t t = 0; t < tables_; ++t) {
    auto it = buckets_[t].find(code(t, q));
    if (it == buckets_[t].end()) continue;
    for (ExampleId id : it->second) hit[id] = 1;
  }
  std::vector<ExampleId> out;
  for (std::size_t i = 0; i < hit.size(); ++i) {
    if (hit[i]) out.push_back(static_cast<ExampleId>(i));
  }
  return out;
}

std::vector<std::map<std::size_t, std::size_t>> LshIndex::occupancy() const {
  std::vector<std::map<std::size_t, std::size_t>> out(tables_);
  for (std::uint32_t t = 0; t < tables_; ++t) {
    for (const auto& [c, members] : buckets_[t]) ++out[t][members.size()];
  }
  return out;
}

LshIndex build_index(const ExampleStore& store, std::uint32_t tables,
                     std::uint32_t bits, std::uint64_t seed) {
  LshIndex index(store.dim(), tables, bits, seed);
  index.sync(store);
  return index;
}

QueryOutcome answer_query_hashed(ExampleStore& store, LshIndex& index,
                                 std::span<const double> q, NoiseSource& src) {
  store.check_query(q);
  index.sync(store);
  const std::vector<ExampleId> candidates = index.retrieve(q);
  return answer_candidates(store, q, src, std::span<const ExampleId>(candidates));
}

}  // namespace indknn
