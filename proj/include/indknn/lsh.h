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

// Sign-random-projection LSH over an ExampleStore.
//
// Each of L tables owns b Gaussian hyperplanes; an example's code in a table
// has bit j set iff r_j . x >= 0. A query's candidates are every example that
// shares its bucket in at least one table. Codes depend only on the
// hyperplanes and the example's own feature, so restricting the active set to
// the candidates adds no privacy cost.

#ifndef INDKNN_LSH_H_
#define INDKNN_LSH_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <unordered_map>
#include <vector>

#include "indknn/core.h"
#include "indknn/engine.h"
#include "indknn/mechanisms.h"

namespace indknn {

using BucketCode = std::uint64_t;

class LshIndex {
 public:
  // Throws InvalidArgument unless tables >= 1, 1 <= bits <= 63, dim >= 1.
  LshIndex(std::size_t dim, std::uint32_t tables, std::uint32_t bits,
           std::uint64_t seed);

  std::size_t dim() const { return dim_; }
  std::uint32_t tables() const { return tables_; }
  std::uint32_t bits() const { return bits_; }
  std::uint64_t seed() const { return seed_; }

  BucketCode code(std::uint32_t table, std::span<const double> x) const;
  // One code per table.
  std::vector<BucketCode> codes(std::span<const double> x) const;

  void insert(ExampleId id, std::span<const double> feature);
  // No-op for ids that were never inserted.
  void erase(ExampleId id);
  bool contains(ExampleId id) const {
    return id < indexed_.size() && indexed_[id];
  }
  // Codes stored for an indexed example.
  std::span<const BucketCode> stored_codes(ExampleId id) const {
    return {codes_.data() + static_cast<std::size_t>(id) * tables_, tables_};
  }

  // Brings the index up to date with removals and insertions (including
  // reused predictions) made to the store since the last call.
  void sync(const ExampleStore& store);

  // Union over tables of q's bucket, ascending and deduplicated.
  std::vector<ExampleId> retrieve(std::span<const double> q) const;

  // Bucket size -> number of buckets with that size, per table.
  std::vector<std::map<std::size_t, std::size_t>> occupancy() const;
  std::size_t size() const { return size_; }

 private:
  std::size_t dim_;
  std::uint32_t tables_;
  std::uint32_t bits_;
  std::uint64_t seed_;
  // tables * bits rows of dim Gaussian coordinates.
  std::vector<double> hyperplanes_;
  std::vector<std::unordered_map<BucketCode, std::vector<ExampleId>>> buckets_;
  std::vector<BucketCode> codes_;
  std::vector<bool> indexed_;
  std::size_t size_ = 0;
  std::size_t synced_slots_ = 0;
  std::size_t synced_removals_ = 0;
};

// Indexes every live example of the store.
LshIndex build_index(const ExampleStore& store, std::uint32_t tables,
                     std::uint32_t bits, std::uint64_t seed);

// answer_query with the candidates restricted to the query's buckets. Syncs
// the index with the store first.
QueryOutcome answer_query_hashed(ExampleStore& store, LshIndex& index,
                                 std::span<const double> q, NoiseSource& src);

}  // namespace indknn

#endif  // INDKNN_LSH_H_
