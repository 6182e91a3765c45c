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

// Experiment orchestration: data preparation, repeated runs, metrics and the
// two-stage hyper-parameter sweep. Specs and reports are JSON documents.

#ifndef INDKNN_EXPERIMENT_H_
#define INDKNN_EXPERIMENT_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "indknn/baseline.h"
#include "indknn/config.h"
#include "indknn/core.h"
#include "indknn/dataset_io.h"
#include "indknn/synthetic.h"

namespace indknn {

inline constexpr const char* kExperimentSchema = "indknn.experiment/1";
inline constexpr const char* kReportSchema = "indknn.report/1";
inline constexpr const char* kSweepSchema = "indknn.sweep/1";

enum class RunMode { kExact, kHashed, kBaseline };

const char* to_string(RunMode mode);
RunMode parse_run_mode(const std::string& name);

struct DataSpec {
  // Exactly one of synthetic or (train_files, query_files) is set.
  std::optional<SyntheticParams> synthetic;
  std::optional<DatasetFiles> train_files;
  std::optional<DatasetFiles> query_files;
  // Leading entries of the shuffled query pool held out for validation.
  std::size_t validation = 0;
};

struct LshParams {
  std::uint32_t tables = 30;
  std::uint32_t bits = 8;
};

struct MutationPlan {
  std::size_t removals = 0;
  std::size_t insertions = 0;
};

struct ExperimentSpec {
  EngineConfig engine;
  DataSpec data;
  // T. Also the engine's planned query count.
  std::size_t queries = 300;
  // R. Reported accuracy is the median over runs.
  std::size_t repeats = 5;
  std::uint64_t seed = 0;
  RunMode mode = RunMode::kExact;
  LshParams lsh;
  NaiveKnnConfig baseline;
  MutationPlan mutations;
  // Wall-clock latencies make reports non-reproducible, so they are left out
  // unless asked for.
  bool record_timing = false;
  std::string output;

  void validate() const;
};

nlohmann::json to_json(const ExperimentSpec& spec);
// Throws InvalidArgument on missing or malformed fields. engine.delta is
// required.
ExperimentSpec spec_from_json(const nlohmann::json& j);

struct PreparedData {
  std::uint32_t num_classes = 0;
  std::size_t dim = 0;
  std::vector<LabeledExample> train;
  std::vector<LabeledExample> validation;
  std::vector<LabeledExample> test;
};

PreparedData prepare_data(const DataSpec& data, std::uint64_t seed);

struct LatencyStats {
  double mean_ms = 0.0;
  double median_ms = 0.0;
  double p95_ms = 0.0;
  double max_ms = 0.0;
};

LatencyStats summarize_latencies(std::vector<double> latencies_ms);

struct RunMetrics {
  std::uint64_t seed = 0;
  std::size_t answered = 0;
  // Unset when no query was answered.
  std::optional<double> accuracy;
  // Accuracy on the final floor(T / 2) queries.
  std::optional<double> accuracy_second_half;
  // Remaining budget z / B over live private examples, ten equal bins on
  // [0, 1]; the last bin is closed.
  std::vector<std::size_t> ledger_histogram;
  double median_spend = 0.0;
  double max_spend = 0.0;
  double min_remaining = 0.0;
  // Fraction of live private examples below the retirement threshold.
  double retired_fraction = 0.0;
  // rdp_to_dp of the largest individual spend.
  double epsilon_spent = 0.0;
  std::size_t private_examples = 0;
  std::size_t public_examples = 0;
  std::size_t removals = 0;
  std::size_t insertions = 0;
  std::vector<double> latencies_ms;
};

struct MetricsReport {
  ExperimentSpec spec;
  ResolvedParams resolved;
  std::vector<RunMetrics> runs;
  std::optional<double> median_accuracy;
  std::optional<double> median_accuracy_second_half;
  double median_spend = 0.0;
  double epsilon_target = 0.0;
  // rdp_to_dp(B), or the composed baseline epsilon in baseline mode.
  double epsilon_converted = 0.0;
  // Baseline mode: how many queries fit in the target epsilon.
  std::optional<std::size_t> baseline_query_capacity;
  LatencyStats latency;
};

// Runs spec.repeats independent runs with fresh ledgers and distinct query
// samples. Throws InvariantViolation if any budget guarantee breaks.
MetricsReport run_experiment(const ExperimentSpec& spec);
// Same, on data that is already prepared.
MetricsReport run_experiment(const ExperimentSpec& spec,
                             const PreparedData& data);

nlohmann::json to_json(const MetricsReport& report);

// Human-readable summary table.
std::string summary_table(const MetricsReport& report);

struct SweepSpec {
  ExperimentSpec base;
  // Defaults to base.engine.dp.epsilon alone.
  std::vector<double> epsilons;
  std::vector<double> stage1_taus;
  std::vector<double> sigma2s;
  // Explicit stage-2 tau grid. When unset, tau* +- tau_radius in tau_step.
  std::optional<std::vector<double>> taus;
  double tau_radius = 0.05;
  double tau_step = 0.01;
  std::size_t validation_repeats = 1;

  SweepSpec();
};

SweepSpec sweep_spec_from_json(const nlohmann::json& j);

struct SweepPoint {
  double sigma2 = 0.0;
  double tau = 0.0;
  double accuracy = 0.0;
};

struct SweepChoice {
  double epsilon = 0.0;
  double budget = 0.0;
  SweepPoint best;
  std::vector<SweepPoint> grid;
};

struct SweepResult {
  // Non-private validation accuracy per stage-1 tau.
  std::vector<std::pair<double, double>> stage1;
  std::optional<double> tau_star;
  std::vector<SweepChoice> choices;
};

// Needs validation data. Throws InvalidArgument on an empty grid.
SweepResult sweep(const SweepSpec& spec);
SweepResult sweep(const SweepSpec& spec, const PreparedData& data);

nlohmann::json to_json(const SweepResult& result);

// Deterministic child seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream,
                          std::uint64_t index);

}  // namespace indknn

#endif  // INDKNN_EXPERIMENT_H_
