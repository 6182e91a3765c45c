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

#include "indknn/experiment.h"

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "indknn/accounting.h"
#include "indknn/errors.h"
#include "indknn/presets.h"

namespace indknn {
namespace {

using nlohmann::json;

ExperimentSpec small_spec() {
  ExperimentSpec s;
  SyntheticParams p;
  p.n = 600;
  p.queries = 300;
  p.dim = 8;
  p.seed = 3;
  s.data.synthetic = p;
  s.data.validation = 100;
  s.queries = 50;
  s.repeats = 3;
  s.seed = 5;
  s.engine.dp = {1.0, 1e-5};
  s.engine.planned_queries = s.queries;
  s.engine.tau = 0.6;
  return s;
}

TEST(ExperimentTest, NoQueriesMeansNoSpend) {
  ExperimentSpec s = small_spec();
  s.queries = 0;
  s.repeats = 1;
  s.engine.planned_queries = 1;
  const MetricsReport r = run_experiment(s);
  ASSERT_EQ(r.runs.size(), 1u);
  EXPECT_FALSE(r.median_accuracy.has_value());
  EXPECT_FALSE(r.runs[0].accuracy.has_value());
  EXPECT_EQ(r.runs[0].max_spend, 0.0);
  EXPECT_EQ(r.median_spend, 0.0);
  EXPECT_LE(r.epsilon_converted, 1.0);
  EXPECT_NEAR(r.epsilon_converted, 1.0, 1e-6);
  const json j = to_json(r);
  EXPECT_TRUE(j.at("median_accuracy").is_null());
}

TEST(ExperimentTest, ReportIsReproducible) {
  const ExperimentSpec s = small_spec();
  const std::string a = to_json(run_experiment(s)).dump(2);
  const std::string b = to_json(run_experiment(s)).dump(2);
  EXPECT_EQ(a, b);
  EXPECT_EQ(to_json(run_experiment(s)).at("schema"), kReportSchema);
}

TEST(ExperimentTest, TimingOnlyWhenRequested) {
  ExperimentSpec s = small_spec();
  s.repeats = 1;
  EXPECT_FALSE(to_json(run_experiment(s)).contains("latency_ms"));
  s.record_timing = true;
  const MetricsReport r = run_experiment(s);
  EXPECT_EQ(r.runs[0].latencies_ms.size(), s.queries);
  EXPECT_TRUE(to_json(r).contains("latency_ms"));
}

TEST(ExperimentTest, MedianSpendMatchesLedger) {
  const MetricsReport r = run_experiment(small_spec());
  for (const RunMetrics& m : r.runs) {
    EXPECT_GE(m.min_remaining, -kLedgerSlack);
    EXPECT_LE(m.max_spend, r.resolved.budget.value);
    EXPECT_LE(m.median_spend, m.max_spend);
    EXPECT_LE(m.epsilon_spent, r.epsilon_target + 1e-9);
    std::size_t total = 0;
    for (std::size_t c : m.ledger_histogram) total += c;
    EXPECT_EQ(total, m.private_examples);
  }
}

TEST(ExperimentTest, ReuseIsInvisibleWithoutNoise) {
  // With tiny noise and unlimited budget every answer is the weighted vote,
  // and reused entries sit exactly on the query they came from.
  ExperimentSpec s = small_spec();
  s.repeats = 1;
  s.engine.sigma1 = 1e-6;
  s.engine.sigma2 = 1e-9;
  s.engine.budget = 1e30;
  s.engine.tau = 0.99999;
  const MetricsReport off = run_experiment(s);
  s.engine.reuse_predictions = true;
  const MetricsReport on = run_experiment(s);
  EXPECT_EQ(off.runs[0].accuracy, on.runs[0].accuracy);
}

TEST(ExperimentTest, BaselineModeReportsCapacity) {
  ExperimentSpec s = small_spec();
  s.mode = RunMode::kBaseline;
  s.baseline = {10, 5.0};
  s.repeats = 1;
  const MetricsReport r = run_experiment(s);
  ASSERT_TRUE(r.baseline_query_capacity.has_value());
  EXPECT_EQ(*r.baseline_query_capacity, naive_knn_query_capacity(5.0, s.engine.dp));
  EXPECT_NEAR(r.epsilon_converted, naive_knn_accounting(s.queries, 5.0, 1e-5), 1e-12);
}

TEST(ExperimentTest, HashedModeRuns) {
  ExperimentSpec s = small_spec();
  s.mode = RunMode::kHashed;
  s.lsh = {4, 4};
  s.repeats = 1;
  const MetricsReport r = run_experiment(s);
  EXPECT_EQ(r.runs[0].answered, s.queries);
}

TEST(ExperimentTest, MutationsAreApplied) {
  ExperimentSpec s = small_spec();
  s.mutations = {5, 7};
  s.repeats = 2;
  const MetricsReport r = run_experiment(s);
  for (const RunMetrics& m : r.runs) {
    EXPECT_EQ(m.removals, 5u);
    EXPECT_EQ(m.insertions, 7u);
    EXPECT_EQ(m.private_examples, 600u - 5u + 7u);
  }
}

TEST(ExperimentSpecTest, JsonRoundTrip) {
  const ExperimentSpec s = small_spec();
  const json j = to_json(s);
  EXPECT_EQ(j.at("schema"), kExperimentSchema);
  const ExperimentSpec back = spec_from_json(j);
  EXPECT_EQ(to_json(back).dump(), j.dump());
}

TEST(ExperimentSpecTest, DeltaIsRequired) {
  json j = to_json(small_spec());
  j["engine"].erase("delta");
  EXPECT_THROW(spec_from_json(j), InvalidArgument);
  j["engine"]["delta"] = nullptr;
  EXPECT_THROW(spec_from_json(j), InvalidArgument);
}

TEST(ExperimentSpecTest, MalformedInput) {
  EXPECT_THROW(spec_from_json(json::array()), InvalidArgument);
  json j = to_json(small_spec());
  j["schema"] = "other/2";
  EXPECT_THROW(spec_from_json(j), InvalidArgument);
  j = to_json(small_spec());
  j["mode"] = "fast";
  EXPECT_THROW(spec_from_json(j), InvalidArgument);
  j = to_json(small_spec());
  j["engine"]["tau"] = "high";
  EXPECT_THROW(spec_from_json(j), InvalidArgument);
}

TEST(ExperimentSpecTest, PresetFillsHyperParameters) {
  json j = to_json(small_spec());
  j["engine"].erase("tau");
  j["engine"].erase("sigma2");
  j["engine"].erase("kernel");
  j["engine"]["preset"] = {{"dataset", "cifar10"}, {"method", "cosine"}};
  const ExperimentSpec s = spec_from_json(j);
  EXPECT_EQ(s.engine.sigma2, 0.4);
  EXPECT_EQ(s.engine.tau, 0.12);
  EXPECT_EQ(s.engine.kernel.kind, KernelKind::kCosine);
  j["engine"]["epsilon"] = 0.3;
  EXPECT_THROW(spec_from_json(j), InvalidArgument);
}

TEST(SweepTest, SinglePointGrid) {
  SweepSpec s;
  s.base = small_spec();
  s.stage1_taus = {0.5};
  s.sigma2s = {0.4};
  s.taus = std::vector<double>{0.5};
  const SweepResult r = sweep(s);
  ASSERT_EQ(r.choices.size(), 1u);
  EXPECT_EQ(r.choices[0].grid.size(), 1u);
  EXPECT_EQ(r.choices[0].best.sigma2, 0.4);
  EXPECT_EQ(r.choices[0].best.tau, 0.5);
  // An explicit tau grid skips the threshold search.
  EXPECT_TRUE(r.stage1.empty());
  EXPECT_FALSE(r.tau_star.has_value());
  EXPECT_NEAR(r.choices[0].budget, budget_for_dp(s.base.engine.dp).value, 1e-12);
}

TEST(SweepTest, DefaultTauGridCentersOnStageOne) {
  SweepSpec s;
  s.base = small_spec();
  s.sigma2s = {0.5};
  const SweepResult r = sweep(s);
  ASSERT_TRUE(r.tau_star.has_value());
  for (const SweepPoint& p : r.choices[0].grid) {
    EXPECT_LE(std::abs(p.tau - *r.tau_star), 0.05 + 1e-9);
  }
  EXPECT_EQ(to_json(r).at("schema"), kSweepSchema);
}

TEST(SweepTest, EmptyGridsAreRejected) {
  SweepSpec s;
  s.base = small_spec();
  s.sigma2s = {};
  EXPECT_THROW(sweep(s), InvalidArgument);
  s.sigma2s = {0.4};
  s.taus = std::vector<double>{};
  EXPECT_THROW(sweep(s), InvalidArgument);
  s.taus.reset();
  s.base.data.validation = 0;
  EXPECT_THROW(sweep(s), InvalidArgument);
}

TEST(PresetTest, KnownEntries) {
  const auto p = find_preset("cifar10", "cosine", 1.0);
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(p->sigma2, 0.4);
  EXPECT_EQ(p->tau, 0.12);
  EXPECT_FALSE(find_preset("cifar10", "cosine", 0.7).has_value());
  EXPECT_FALSE(find_preset("mnist", "cosine", 1.0).has_value());
}

TEST(DeriveSeedTest, StreamsAreDistinct) {
  EXPECT_EQ(derive_seed(1, 2, 3), derive_seed(1, 2, 3));
  EXPECT_NE(derive_seed(1, 2, 3), derive_seed(1, 2, 4));
  EXPECT_NE(derive_seed(1, 2, 3), derive_seed(1, 3, 3));
  EXPECT_NE(derive_seed(1, 2, 3), derive_seed(2, 2, 3));
}

}  // namespace
}  // namespace indknn
