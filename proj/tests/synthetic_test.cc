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

#include <gtest/gtest.h>

#include "indknn/engine.h"
#include "indknn/errors.h"

namespace indknn {
namespace {

double dot(const FeatureVector& a, const FeatureVector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

TEST(SyntheticTest, SameSeedSameData) {
  SyntheticParams p;
  p.n = 200;
  p.queries = 50;
  p.seed = 9;
  const SyntheticData a = generate_synthetic(p);
  const SyntheticData b = generate_synthetic(p);
  ASSERT_EQ(a.train.size(), 200u);
  ASSERT_EQ(a.queries.size(), 50u);
  for (std::size_t i = 0; i < a.train.size(); ++i) {
    EXPECT_EQ(a.train[i].feature, b.train[i].feature);
    EXPECT_EQ(a.train[i].label, b.train[i].label);
  }
  p.seed = 10;
  EXPECT_NE(generate_synthetic(p).train[0].feature, a.train[0].feature);
}

TEST(SyntheticTest, PointsAreUnitAndMeansSeparated) {
  SyntheticParams p;
  p.classes = 5;
  p.n = 300;
  p.queries = 10;
  p.separation = 1.2;
  const SyntheticData d = generate_synthetic(p);
  for (const LabeledExample& e : d.train) {
    EXPECT_NEAR(dot(e.feature, e.feature), 1.0, 1e-12);
    EXPECT_LT(e.label, 5u);
  }
  for (std::size_t i = 0; i < d.means.size(); ++i) {
    for (std::size_t j = i + 1; j < d.means.size(); ++j) {
      EXPECT_GE(std::acos(std::clamp(dot(d.means[i], d.means[j]), -1.0, 1.0)), 1.2 - 1e-9);
    }
  }
}

TEST(SyntheticTest, OppositeMeansAreTriviallySeparable) {
  SyntheticParams p;
  p.classes = 2;
  p.n = 400;
  p.queries = 200;
  p.separation = std::numbers::pi - 1e-6;
  p.noise = 0.3;
  const SyntheticData d = generate_synthetic(p);
  EngineConfig cfg;
  cfg.budget = 1.0;
  ExampleStore store(d.dim, 2, cfg);
  for (const LabeledExample& e : d.train) store.add_example(e);
  for (const LabeledExample& e : d.queries) {
    EXPECT_EQ(nonprivate_predict(store, e.feature, 0.0), e.label);
  }
}

TEST(SyntheticTest, InfeasibleSeparationThrows) {
  SyntheticParams p;
  p.classes = 10;
  p.dim = 2;
  p.separation = 2.0;
  EXPECT_THROW(generate_synthetic(p), InvalidArgument);
  p.classes = 1;
  EXPECT_THROW(generate_synthetic(p), InvalidArgument);
}

TEST(SyntheticTest, DefaultTaskIsNearlySeparable) {
  SyntheticParams p;
  p.n = 3000;
  p.queries = 500;
  const SyntheticData d = generate_synthetic(p);
  EngineConfig cfg;
  cfg.budget = 1.0;
  ExampleStore store(d.dim, d.num_classes, cfg);
  for (const LabeledExample& e : d.train) store.add_example(e);
  int correct = 0;
  for (const LabeledExample& e : d.queries) {
    if (nonprivate_predict(store, e.feature, 0.5) == e.label) ++correct;
  }
  EXPECT_GE(correct, 0.98 * d.queries.size());
}

}  // namespace
}  // namespace indknn
