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

#include "indknn/baseline.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "indknn/errors.h"
#include "support/reference.h"

namespace indknn {
namespace {

using testing::near;
using testing::random_unit;

EngineConfig plain() {
  EngineConfig c;
  c.sigma1 = 1.0;
  c.budget = 1.0;
  return c;
}

TEST(TopKTest, MatchesBruteForceSort) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(seed);
    ExampleStore store(6, 2, plain());
    for (int i = 0; i < 80; ++i) store.add_example({random_unit(rng, 6), 0});
    store.remove_example(5);
    const FeatureVector q = random_unit(rng, 6);
    std::vector<ExampleId> ids;
    for (ExampleId i = 0; i < 80; ++i) if (i != 5) ids.push_back(i);
    std::stable_sort(ids.begin(), ids.end(), [&](ExampleId a, ExampleId b) {
      return kernel_eval(store.config().kernel, store.feature(a), q) >
             kernel_eval(store.config().kernel, store.feature(b), q);
    });
    ids.resize(12);
    EXPECT_EQ(top_k_neighbors(store, q, 12), ids);
  }
}

TEST(NaiveKnnTest, SingleNeighbor) {
  std::mt19937_64 rng(1);
  ExampleStore store(4, 3, plain());
  const FeatureVector q = random_unit(rng, 4);
  store.add_example({q, 2});
  for (int i = 0; i < 5; ++i) {
    FeatureVector far = q;
    for (double& v : far) v = -v;
    store.add_example({near(rng, far, 0.1), 0});
  }
  NoiseSource src(1);
  EXPECT_EQ(naive_knn_predict(store, q, {1, 1e-9}, src), 2u);
}

TEST(NaiveKnnTest, AllNeighborsGivePlurality) {
  std::mt19937_64 rng(1);
  ExampleStore store(4, 3, plain());
  const ClassIndex labels[] = {0, 1, 1, 2, 1, 0, 1};
  for (ClassIndex y : labels) store.add_example({random_unit(rng, 4), y});
  NoiseSource src(1);
  EXPECT_EQ(naive_knn_predict(store, random_unit(rng, 4), {7, 1e-9}, src), 1u);
}

TEST(NaiveKnnTest, TieGoesToLowerClass) {
  std::mt19937_64 rng(1);
  ExampleStore store(4, 2, plain());
  store.add_example({random_unit(rng, 4), 0});
  store.add_example({random_unit(rng, 4), 0});
  store.add_example({random_unit(rng, 4), 1});
  NoiseSource src(1);
  EXPECT_EQ(naive_knn_predict(store, random_unit(rng, 4), {3, 1e-9}, src), 0u);
}

TEST(NaiveKnnTest, TooFewExamples) {
  std::mt19937_64 rng(1);
  ExampleStore store(4, 2, plain());
  store.add_example({random_unit(rng, 4), 0});
  NoiseSource src(1);
  EXPECT_THROW(naive_knn_predict(store, random_unit(rng, 4), {2, 1.0}, src),
               InvalidArgument);
  EXPECT_THROW(naive_knn_predict(store, random_unit(rng, 4), {0, 1.0}, src),
               InvalidArgument);
}

TEST(NaiveKnnAccountingTest, SingleQuery) {
  EXPECT_NEAR(naive_knn_rdp(1, std::sqrt(2.0)).value, 0.5, 1e-15);
  EXPECT_EQ(naive_knn_rdp(0, 1.0).value, 0.0);
}

TEST(NaiveKnnAccountingTest, LinearInQueries) {
  const double one = naive_knn_rdp(1, 3.0).value;
  for (std::size_t t : {2u, 10u, 300u}) {
    EXPECT_NEAR(naive_knn_rdp(t, 3.0).value, t * one, 1e-12 * t);
  }
  EXPECT_LT(naive_knn_accounting(10, 3.0, 1e-5), naive_knn_accounting(20, 3.0, 1e-5));
}

TEST(NaiveKnnAccountingTest, CapacityIsLargestAffordableCount) {
  const DpParams target{1.0, 1e-5};
  for (double sigma : {2.0, 5.0, 20.0}) {
    const std::size_t cap = naive_knn_query_capacity(sigma, target);
    if (cap > 0) EXPECT_LE(naive_knn_accounting(cap, sigma, 1e-5), 1.0);
    EXPECT_GT(naive_knn_accounting(cap + 1, sigma, 1e-5), 1.0);
  }
  EXPECT_LT(naive_knn_query_capacity(5.0, target), naive_knn_query_capacity(20.0, target));
}

}  // namespace
}  // namespace indknn
