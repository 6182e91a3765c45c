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
#include <array>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>

#include "indknn/accounting.h"
#include "indknn/engine.h"
#include "indknn/errors.h"
#include "indknn/lsh.h"
#include "indknn/mechanisms.h"
#include "indknn/presets.h"

namespace indknn {
namespace {

using nlohmann::json;

enum Stream : std::uint64_t {
  kPoolStream = 1,
  kRunStream = 2,
  kNoiseStream = 3,
  kLshStream = 4,
  kMutationStream = 5,
  kValidationStream = 6,
};

constexpr std::size_t kHistogramBins = 10;

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

std::optional<double> median_of_present(
    const std::vector<std::optional<double>>& values) {
  std::vector<double> present;
  for (const auto& v : values) {
    if (v) present.push_back(*v);
  }
  if (present.empty()) return std::nullopt;
  return median_of(std::move(present));
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("field '") + key + "': " + e.what());
  }
}

template <typename T>
std::optional<T> get_optional(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("field '") + key + "': " + e.what());
  }
}

json optional_json(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

DatasetFiles files_from_json(const json& j) {
  if (!j.is_object() || !j.contains("features") || !j.contains("labels")) {
    throw InvalidArgument("dataset entry needs 'features' and 'labels'");
  }
  DatasetFiles f;
  f.features = j.at("features").get<std::string>();
  f.labels = j.at("labels").get<std::string>();
  f.num_classes = get_optional<std::uint32_t>(j, "num_classes");
  return f;
}

json files_to_json(const DatasetFiles& f) {
  json j = {{"features", f.features.string()}, {"labels", f.labels.string()}};
  j["num_classes"] = f.num_classes ? json(*f.num_classes) : json(nullptr);
  return j;
}

EngineConfig engine_from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("'engine' must be an object");
  EngineConfig c;
  if (!j.contains("delta") || j.at("delta").is_null()) {
    throw InvalidArgument("engine.delta is required");
  }
  c.dp.delta = j.at("delta").get<double>();
  c.dp.epsilon = get_or(j, "epsilon", c.dp.epsilon);
  if (j.contains("preset") && !j.at("preset").is_null()) {
    const json& p = j.at("preset");
    const auto dataset = p.at("dataset").get<std::string>();
    const auto method = p.at("method").get<std::string>();
    const auto preset = find_preset(dataset, method, c.dp.epsilon);
    if (!preset) {
      throw InvalidArgument("no preset for " + dataset + "/" + method +
                            " at epsilon " + std::to_string(c.dp.epsilon));
    }
    c.kernel = preset_kernel(*preset);
    c.sigma2 = preset->sigma2;
    c.tau = preset->tau;
  }
  if (j.contains("kernel")) {
    c.kernel.kind = parse_kernel_kind(j.at("kernel").get<std::string>().c_str());
  }
  c.kernel.bandwidth = get_or(j, "bandwidth", c.kernel.bandwidth);
  c.tau = get_or(j, "tau", c.tau);
  c.sigma1 = get_optional<double>(j, "sigma1");
  c.sigma2 = get_or(j, "sigma2", c.sigma2);
  c.budget = get_optional<double>(j, "budget");
  c.reuse_predictions = get_or(j, "reuse", c.reuse_predictions);
  c.k_floor = get_or(j, "k_floor", c.k_floor);
  return c;
}

json engine_to_json(const EngineConfig& c) {
  return {{"kernel", to_string(c.kernel.kind)},
          {"bandwidth", c.kernel.bandwidth},
          {"tau", c.tau},
          {"sigma1", optional_json(c.sigma1)},
          {"sigma2", c.sigma2},
          {"epsilon", c.dp.epsilon},
          {"delta", c.dp.delta},
          {"budget", optional_json(c.budget)},
          {"reuse", c.reuse_predictions},
          {"k_floor", c.k_floor}};
}

SyntheticParams synthetic_from_json(const json& j, std::uint64_t seed) {
  SyntheticParams p;
  p.classes = get_or(j, "classes", p.classes);
  p.n = get_or(j, "n", p.n);
  p.dim = get_or(j, "dim", p.dim);
  p.separation = get_or(j, "separation", p.separation);
  p.noise = get_or(j, "noise", p.noise);
  p.queries = get_or(j, "queries", p.queries);
  p.seed = get_or(j, "seed", seed);
  return p;
}

json synthetic_to_json(const SyntheticParams& p) {
  return {{"classes", p.classes},       {"n", p.n},
          {"dim", p.dim},               {"separation", p.separation},
          {"noise", p.noise},           {"queries", p.queries},
          {"seed", p.seed}};
}

std::vector<double> grid(double first, double last, double step) {
  std::vector<double> out;
  const auto count = static_cast<long>(std::floor((last - first) / step + 1e-9));
  for (long k = 0; k <= count; ++k) {
    // Rounded to 1e-9 so grid points print cleanly and compare exactly.
    out.push_back(std::round((first + k * step) * 1e9) / 1e9);
  }
  return out;
}

std::vector<double> double_list(const json& j, const char* key,
                                std::vector<double> fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  return j.at(key).get<std::vector<double>>();
}

struct Event {
  enum Kind { kRemove, kInsert } kind;
  std::size_t pool_index = 0;
};

double accuracy_of(std::size_t correct, std::size_t total) {
  return static_cast<double>(correct) / static_cast<double>(total);
}

RunMetrics run_once(const ExperimentSpec& spec, const PreparedData& data,
                    std::size_t run_index, const ResolvedParams& resolved) {
  const std::uint64_t run_seed = derive_seed(spec.seed, kRunStream, run_index);
  std::mt19937_64 rng(run_seed);
  EngineConfig cfg = spec.engine;
  cfg.planned_queries = std::max<std::size_t>(spec.queries, 1);
  cfg.seed = run_seed;

  ExampleStore store(data.dim, data.num_classes, cfg);
  for (const LabeledExample& e : data.train) store.add_example(e);

  const std::size_t T = spec.queries;
  if (T > 0 && data.test.empty()) {
    throw InvalidArgument("experiment has no test queries");
  }
  std::vector<std::size_t> order(data.test.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> query_idx;
  std::vector<std::size_t> spare_idx;
  if (T <= order.size()) {
    query_idx.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(T));
    spare_idx.assign(order.begin() + static_cast<std::ptrdiff_t>(T), order.end());
  } else {
    std::uniform_int_distribution<std::size_t> pick(0, data.test.size() - 1);
    for (std::size_t t = 0; t < T; ++t) query_idx.push_back(pick(rng));
  }

  std::vector<std::vector<Event>> events(T);
  std::mt19937_64 mutation_rng(derive_seed(run_seed, kMutationStream, 0));
  if (spec.mutations.removals + spec.mutations.insertions > 0) {
    if (T == 0) throw InvalidArgument("mutations need at least one query");
    if (spec.mutations.insertions > spare_idx.size()) {
      throw InvalidArgument("not enough unused queries to draw insertions from");
    }
    std::uniform_int_distribution<std::size_t> when(0, T - 1);
    for (std::size_t k = 0; k < spec.mutations.removals; ++k) {
      events[when(mutation_rng)].push_back({Event::kRemove, 0});
    }
    for (std::size_t k = 0; k < spec.mutations.insertions; ++k) {
      events[when(mutation_rng)].push_back({Event::kInsert, spare_idx[k]});
    }
  }

  NoiseSource src(derive_seed(run_seed, kNoiseStream, 0));
  std::optional<LshIndex> index;
  if (spec.mode == RunMode::kHashed) {
    index.emplace(build_index(store, spec.lsh.tables, spec.lsh.bits,
                              derive_seed(run_seed, kLshStream, 0)));
  }

  RunMetrics m;
  m.seed = run_seed;
  std::size_t correct = 0;
  std::size_t correct_late = 0;
  const std::size_t late_start = T - T / 2;
  m.latencies_ms.reserve(T);
  for (std::size_t t = 0; t < T; ++t) {
    for (const Event& ev : events[t]) {
      if (ev.kind == Event::kRemove) {
        const std::vector<ExampleId> ids = store.ledger().private_ids();
        if (ids.empty()) continue;
        std::uniform_int_distribution<std::size_t> pick(0, ids.size() - 1);
        store.remove_example(ids[pick(mutation_rng)]);
        ++m.removals;
      } else {
        LabeledExample e = data.test[ev.pool_index];
        e.origin = Origin::kPrivate;
        store.add_example(e);
        ++m.insertions;
      }
    }
    const LabeledExample& q = data.test[query_idx[t]];
    const auto start = std::chrono::steady_clock::now();
    ClassIndex answer = 0;
    switch (spec.mode) {
      case RunMode::kExact:
        answer = answer_query(store, q.feature, src).answer;
        break;
      case RunMode::kHashed:
        answer = answer_query_hashed(store, *index, q.feature, src).answer;
        break;
      case RunMode::kBaseline:
        answer = naive_knn_predict(store, q.feature, spec.baseline, src);
        break;
    }
    const auto stop = std::chrono::steady_clock::now();
    m.latencies_ms.push_back(
        std::chrono::duration<double, std::milli>(stop - start).count());
    if (answer == q.label) {
      ++correct;
      if (t >= late_start) ++correct_late;
    }
  }
  m.answered = T;
  if (T > 0) m.accuracy = accuracy_of(correct, T);
  if (T / 2 > 0) m.accuracy_second_half = accuracy_of(correct_late, T / 2);

  const double B = resolved.budget.value;
  const std::vector<double> z = store.ledger().private_remaining();
  m.private_examples = z.size();
  m.public_examples = store.live_count() - z.size();
  m.ledger_histogram.assign(kHistogramBins, 0);
  std::size_t retired = 0;
  m.min_remaining = z.empty() ? B : *std::min_element(z.begin(), z.end());
  for (double zi : z) {
    const double frac = B > 0.0 ? zi / B : 0.0;
    const auto bin = static_cast<std::size_t>(
        std::clamp(frac * kHistogramBins, 0.0, kHistogramBins - 1.0));
    ++m.ledger_histogram[bin];
    if (zi < resolved.count_charge) ++retired;
  }
  m.retired_fraction =
      z.empty() ? 0.0 : static_cast<double>(retired) / static_cast<double>(z.size());
  m.median_spend = z.empty() ? 0.0 : B - median_of(z);
  m.max_spend = B - m.min_remaining;

  if (m.min_remaining < -kLedgerSlack) {
    throw InvariantViolation("run " + std::to_string(run_index) +
                             ": remaining budget below zero");
  }
  for (double zi : z) {
    if (zi > B) throw InvariantViolation("remaining budget above B");
  }
  m.epsilon_spent = rdp_to_dp({std::max(m.max_spend, 0.0)}, spec.engine.dp.delta);
  return m;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream,
                          std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (std::uint64_t{out[0]} << 32) | out[1];
}

const char* to_string(RunMode mode) {
  switch (mode) {
    case RunMode::kExact:
      return "exact";
    case RunMode::kHashed:
      return "hashed";
    case RunMode::kBaseline:
      return "baseline";
  }
  return "exact";
}

RunMode parse_run_mode(const std::string& name) {
  if (name == "exact") return RunMode::kExact;
  if (name == "hashed") return RunMode::kHashed;
  if (name == "baseline") return RunMode::kBaseline;
  throw InvalidArgument("unknown mode '" + name + "'");
}

void ExperimentSpec::validate() const {
  engine.validate();
  if (repeats < 1) throw InvalidArgument("repeats must be at least 1");
  const bool files = data.train_files.has_value() || data.query_files.has_value();
  if (data.synthetic.has_value() == files) {
    throw InvalidArgument("data needs exactly one of 'synthetic' or train/query files");
  }
  if (files && !(data.train_files && data.query_files)) {
    throw InvalidArgument("file data needs both 'train' and 'queries'");
  }
  if (mode == RunMode::kBaseline) baseline.validate();
  if (mode == RunMode::kHashed && (lsh.tables < 1 || lsh.bits < 1 || lsh.bits > 63)) {
    throw InvalidArgument("lsh needs tables >= 1 and 1 <= bits <= 63");
  }
}

json to_json(const ExperimentSpec& spec) {
  json data;
  if (spec.data.synthetic) data["synthetic"] = synthetic_to_json(*spec.data.synthetic);
  if (spec.data.train_files) data["train"] = files_to_json(*spec.data.train_files);
  if (spec.data.query_files) data["queries"] = files_to_json(*spec.data.query_files);
  data["validation"] = spec.data.validation;
  return {{"schema", kExperimentSchema},
          {"engine", engine_to_json(spec.engine)},
          {"data", data},
          {"queries", spec.queries},
          {"repeats", spec.repeats},
          {"seed", spec.seed},
          {"mode", to_string(spec.mode)},
          {"lsh", {{"tables", spec.lsh.tables}, {"bits", spec.lsh.bits}}},
          {"baseline", {{"k", spec.baseline.k}, {"sigma", spec.baseline.sigma}}},
          {"mutations",
           {{"removals", spec.mutations.removals},
            {"insertions", spec.mutations.insertions}}},
          {"record_timing", spec.record_timing},
          {"output", spec.output}};
}

ExperimentSpec spec_from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("experiment spec must be a JSON object");
  if (j.contains("schema") && j.at("schema") != kExperimentSchema) {
    throw InvalidArgument("unsupported schema " + j.at("schema").dump());
  }
  ExperimentSpec s;
  try {
    s.seed = get_or(j, "seed", s.seed);
    if (!j.contains("engine")) throw InvalidArgument("missing 'engine'");
    s.engine = engine_from_json(j.at("engine"));
    if (!j.contains("data")) throw InvalidArgument("missing 'data'");
    const json& d = j.at("data");
    if (d.contains("synthetic")) s.data.synthetic = synthetic_from_json(d.at("synthetic"), s.seed);
    if (d.contains("train")) s.data.train_files = files_from_json(d.at("train"));
    if (d.contains("queries")) s.data.query_files = files_from_json(d.at("queries"));
    s.data.validation = get_or(d, "validation", s.data.validation);
    s.queries = get_or(j, "queries", s.queries);
    s.repeats = get_or(j, "repeats", s.repeats);
    s.mode = parse_run_mode(get_or<std::string>(j, "mode", "exact"));
    if (j.contains("lsh")) {
      s.lsh.tables = get_or(j.at("lsh"), "tables", s.lsh.tables);
      s.lsh.bits = get_or(j.at("lsh"), "bits", s.lsh.bits);
    }
    if (j.contains("baseline")) {
      s.baseline.k = get_or(j.at("baseline"), "k", s.baseline.k);
      s.baseline.sigma = get_or(j.at("baseline"), "sigma", s.baseline.sigma);
    }
    if (j.contains("mutations")) {
      s.mutations.removals = get_or(j.at("mutations"), "removals", s.mutations.removals);
      s.mutations.insertions = get_or(j.at("mutations"), "insertions", s.mutations.insertions);
    }
    s.record_timing = get_or(j, "record_timing", s.record_timing);
    s.output = get_or<std::string>(j, "output", "");
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed experiment spec: ") + e.what());
  }
  s.engine.planned_queries = std::max<std::size_t>(s.queries, 1);
  s.validate();
  return s;
}

PreparedData prepare_data(const DataSpec& data, std::uint64_t seed) {
  PreparedData out;
  std::vector<LabeledExample> pool;
  if (data.synthetic) {
    SyntheticData synth = generate_synthetic(*data.synthetic);
    out.num_classes = synth.num_classes;
    out.dim = synth.dim;
    out.train = std::move(synth.train);
    pool = std::move(synth.queries);
  } else {
    if (!data.train_files || !data.query_files) {
      throw InvalidArgument("file data needs train and query files");
    }
    Dataset train = load_examples(*data.train_files);
    Dataset queries = load_examples(*data.query_files);
    if (train.dim != queries.dim && !queries.examples.empty()) {
      throw InvalidArgument("train and query feature dimensions differ");
    }
    if (train.num_classes < queries.num_classes) {
      throw InvalidArgument("query labels exceed the training class count");
    }
    out.num_classes = train.num_classes;
    out.dim = train.dim;
    out.train = std::move(train.examples);
    pool = std::move(queries.examples);
  }
  if (data.validation > pool.size()) {
    throw InvalidArgument("validation split larger than the query pool");
  }
  std::mt19937_64 rng(derive_seed(seed, kPoolStream, 0));
  std::shuffle(pool.begin(), pool.end(), rng);
  const auto split = pool.begin() + static_cast<std::ptrdiff_t>(data.validation);
  out.validation.assign(pool.begin(), split);
  out.test.assign(split, pool.end());
  return out;
}

LatencyStats summarize_latencies(std::vector<double> latencies_ms) {
  LatencyStats s;
  if (latencies_ms.empty()) return s;
  std::sort(latencies_ms.begin(), latencies_ms.end());
  s.mean_ms = std::accumulate(latencies_ms.begin(), latencies_ms.end(), 0.0) /
              static_cast<double>(latencies_ms.size());
  s.median_ms = median_of(latencies_ms);
  const auto p95 = static_cast<std::size_t>(
      std::ceil(0.95 * static_cast<double>(latencies_ms.size()))) - 1;
  s.p95_ms = latencies_ms[std::min(p95, latencies_ms.size() - 1)];
  s.max_ms = latencies_ms.back();
  return s;
}

MetricsReport run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  return run_experiment(spec, prepare_data(spec.data, spec.seed));
}

MetricsReport run_experiment(const ExperimentSpec& spec, const PreparedData& data) {
  spec.validate();
  MetricsReport report;
  report.spec = spec;
  EngineConfig cfg = spec.engine;
  cfg.planned_queries = std::max<std::size_t>(spec.queries, 1);
  report.resolved = resolve(cfg);
  report.epsilon_target = spec.engine.dp.epsilon;

  std::vector<std::optional<double>> acc;
  std::vector<std::optional<double>> acc_late;
  std::vector<double> spends;
  std::vector<double> all_latencies;
  for (std::size_t r = 0; r < spec.repeats; ++r) {
    RunMetrics m = run_once(spec, data, r, report.resolved);
    acc.push_back(m.accuracy);
    acc_late.push_back(m.accuracy_second_half);
    spends.push_back(m.median_spend);
    all_latencies.insert(all_latencies.end(), m.latencies_ms.begin(),
                         m.latencies_ms.end());
    report.runs.push_back(std::move(m));
  }
  report.median_accuracy = median_of_present(acc);
  report.median_accuracy_second_half = median_of_present(acc_late);
  report.median_spend = median_of(spends);
  report.latency = summarize_latencies(std::move(all_latencies));

  if (spec.mode == RunMode::kBaseline) {
    report.epsilon_converted =
        spec.queries == 0 ? 0.0
                          : naive_knn_accounting(spec.queries, spec.baseline.sigma,
                                                 spec.engine.dp.delta);
    report.baseline_query_capacity =
        naive_knn_query_capacity(spec.baseline.sigma, spec.engine.dp);
  } else {
    report.epsilon_converted =
        rdp_to_dp(report.resolved.budget, spec.engine.dp.delta);
    if (!spec.engine.budget && report.epsilon_converted > report.epsilon_target) {
      throw InvariantViolation("converted epsilon exceeds the target");
    }
  }
  return report;
}

json to_json(const MetricsReport& report) {
  json runs = json::array();
  for (const RunMetrics& m : report.runs) {
    json r = {{"seed", m.seed},
              {"answered", m.answered},
              {"accuracy", optional_json(m.accuracy)},
              {"accuracy_second_half", optional_json(m.accuracy_second_half)},
              {"ledger_histogram", m.ledger_histogram},
              {"median_spend", m.median_spend},
              {"max_spend", m.max_spend},
              {"min_remaining", m.min_remaining},
              {"retired_fraction", m.retired_fraction},
              {"epsilon_spent", m.epsilon_spent},
              {"private_examples", m.private_examples},
              {"public_examples", m.public_examples},
              {"removals", m.removals},
              {"insertions", m.insertions}};
    if (report.spec.record_timing) {
      const LatencyStats s = summarize_latencies(m.latencies_ms);
      r["latency_ms"] = {{"mean", s.mean_ms}, {"median", s.median_ms},
                         {"p95", s.p95_ms}, {"max", s.max_ms}};
    }
    runs.push_back(std::move(r));
  }
  json j = {{"schema", kReportSchema},
            {"spec", to_json(report.spec)},
            {"resolved",
             {{"budget", report.resolved.budget.value},
              {"sigma1", report.resolved.sigma1},
              {"count_charge", report.resolved.count_charge}}},
            {"runs", runs},
            {"median_accuracy", optional_json(report.median_accuracy)},
            {"median_accuracy_second_half",
             optional_json(report.median_accuracy_second_half)},
            {"median_spend", report.median_spend},
            {"epsilon_target", report.epsilon_target},
            {"epsilon_converted", report.epsilon_converted}};
  if (report.spec.mode == RunMode::kBaseline) {
    j["baseline"] = {{"sensitivity", kTopKSensitivity},
                     {"query_capacity", *report.baseline_query_capacity}};
  }
  if (report.spec.record_timing) {
    j["latency_ms"] = {{"mean", report.latency.mean_ms},
                       {"median", report.latency.median_ms},
                       {"p95", report.latency.p95_ms},
                       {"max", report.latency.max_ms}};
  }
  return j;
}

std::string summary_table(const MetricsReport& report) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4);
  out << "mode=" << to_string(report.spec.mode) << " T=" << report.spec.queries
      << " R=" << report.spec.repeats << " B=" << report.resolved.budget.value
      << " sigma1=" << report.resolved.sigma1 << "\n";
  out << "run  accuracy  late_acc  median_spend  retired  eps_spent\n";
  for (std::size_t r = 0; r < report.runs.size(); ++r) {
    const RunMetrics& m = report.runs[r];
    out << std::setw(3) << r << "  ";
    if (m.accuracy) {
      out << std::setw(8) << *m.accuracy;
    } else {
      out << std::setw(8) << "n/a";
    }
    out << "  ";
    if (m.accuracy_second_half) {
      out << std::setw(8) << *m.accuracy_second_half;
    } else {
      out << std::setw(8) << "n/a";
    }
    out << "  " << std::setw(12) << m.median_spend << "  " << std::setw(7)
        << m.retired_fraction << "  " << std::setw(9) << m.epsilon_spent << "\n";
  }
  out << "median accuracy: ";
  if (report.median_accuracy) {
    out << *report.median_accuracy;
  } else {
    out << "n/a";
  }
  out << "\nepsilon target " << report.epsilon_target << ", converted "
      << report.epsilon_converted << "\n";
  out << "latency ms: mean " << report.latency.mean_ms << ", median "
      << report.latency.median_ms << ", p95 " << report.latency.p95_ms << "\n";
  return out.str();
}

SweepSpec::SweepSpec()
    : stage1_taus(grid(0.05, 0.95, 0.05)), sigma2s(grid(0.1, 0.9, 0.1)) {}

SweepSpec sweep_spec_from_json(const json& j) {
  SweepSpec s;
  s.base = spec_from_json(j);
  if (j.contains("sweep")) {
    const json& g = j.at("sweep");
    s.epsilons = double_list(g, "epsilons", s.epsilons);
    s.stage1_taus = double_list(g, "stage1_taus", s.stage1_taus);
    s.sigma2s = double_list(g, "sigma2s", s.sigma2s);
    if (g.contains("taus") && !g.at("taus").is_null()) {
      s.taus = g.at("taus").get<std::vector<double>>();
    }
    s.tau_radius = get_or(g, "tau_radius", s.tau_radius);
    s.tau_step = get_or(g, "tau_step", s.tau_step);
    s.validation_repeats = get_or(g, "validation_repeats", s.validation_repeats);
  }
  return s;
}

SweepResult sweep(const SweepSpec& spec) {
  spec.base.validate();
  return sweep(spec, prepare_data(spec.base.data, spec.base.seed));
}

SweepResult sweep(const SweepSpec& spec, const PreparedData& data) {
  if (data.validation.empty()) {
    throw InvalidArgument("sweep needs a validation split (data.validation > 0)");
  }
  if (spec.sigma2s.empty()) throw InvalidArgument("sweep: empty sigma2 grid");
  if (spec.taus && spec.taus->empty()) throw InvalidArgument("sweep: empty tau grid");
  if (!spec.taus && spec.stage1_taus.empty()) {
    throw InvalidArgument("sweep: empty stage-1 tau grid");
  }
  if (spec.validation_repeats < 1) {
    throw InvalidArgument("sweep: validation_repeats must be positive");
  }

  SweepResult result;
  std::vector<double> taus;
  if (spec.taus) {
    taus = *spec.taus;
  } else {
    // Stage 1: non-private threshold voting on the validation set.
    const KernelSpec& kernel = spec.base.engine.kernel;
    std::vector<std::size_t> correct(spec.stage1_taus.size(), 0);
    std::vector<double> weights(data.train.size());
    std::vector<double> votes(data.num_classes);
    for (const LabeledExample& q : data.validation) {
      for (std::size_t i = 0; i < data.train.size(); ++i) {
        weights[i] = kernel_eval(kernel, data.train[i].feature, q.feature);
      }
      for (std::size_t k = 0; k < spec.stage1_taus.size(); ++k) {
        std::fill(votes.begin(), votes.end(), 0.0);
        bool any = false;
        for (std::size_t i = 0; i < data.train.size(); ++i) {
          if (weights[i] >= spec.stage1_taus[k]) {
            votes[data.train[i].label] += weights[i];
            any = true;
          }
        }
        if (!any) continue;
        const auto guess = static_cast<ClassIndex>(
            std::max_element(votes.begin(), votes.end()) - votes.begin());
        if (guess == q.label) ++correct[k];
      }
    }
    std::size_t best = 0;
    for (std::size_t k = 0; k < spec.stage1_taus.size(); ++k) {
      result.stage1.emplace_back(spec.stage1_taus[k],
                                 accuracy_of(correct[k], data.validation.size()));
      // Ties go to the larger threshold: it selects fewer neighbors and so
      // spends less budget per query.
      if (correct[k] > correct[best] ||
          (correct[k] == correct[best] &&
           spec.stage1_taus[k] > spec.stage1_taus[best])) {
        best = k;
      }
    }
    const double tau_star = spec.stage1_taus[best];
    result.tau_star = tau_star;
    for (double t : grid(tau_star - spec.tau_radius, tau_star + spec.tau_radius,
                         spec.tau_step)) {
      if (t >= 0.0 && t <= 1.0) taus.push_back(t);
    }
  }

  std::vector<double> epsilons = spec.epsilons;
  if (epsilons.empty()) epsilons.push_back(spec.base.engine.dp.epsilon);

  PreparedData val = data;
  val.test = data.validation;
  for (double eps : epsilons) {
    SweepChoice choice;
    choice.epsilon = eps;
    ExperimentSpec run = spec.base;
    run.mode = RunMode::kExact;
    run.repeats = spec.validation_repeats;
    run.mutations = {};
    run.record_timing = false;
    run.queries = std::min(spec.base.queries, val.test.size());
    run.engine.dp.epsilon = eps;
    run.seed = derive_seed(spec.base.seed, kValidationStream, 0);
    choice.budget = resolve(run.engine).budget.value;
    bool have_best = false;
    for (double s2 : spec.sigma2s) {
      for (double tau : taus) {
        run.engine.sigma2 = s2;
        run.engine.tau = tau;
        const MetricsReport rep = run_experiment(run, val);
        const SweepPoint point{s2, tau, rep.median_accuracy.value_or(0.0)};
        choice.grid.push_back(point);
        auto closer = [&](const SweepPoint& a, const SweepPoint& b) {
          if (!result.tau_star) return a.tau < b.tau;
          const double da = std::abs(a.tau - *result.tau_star);
          const double db = std::abs(b.tau - *result.tau_star);
          return da < db || (da == db && a.tau < b.tau);
        };
        const SweepPoint& cur = choice.best;
        const bool better =
            !have_best || point.accuracy > cur.accuracy ||
            (point.accuracy == cur.accuracy &&
             (point.sigma2 > cur.sigma2 ||
              (point.sigma2 == cur.sigma2 && closer(point, cur))));
        if (better) {
          choice.best = point;
          have_best = true;
        }
      }
    }
    result.choices.push_back(std::move(choice));
  }
  return result;
}

json to_json(const SweepResult& result) {
  json stage1 = json::array();
  for (const auto& [tau, acc] : result.stage1) {
    stage1.push_back({{"tau", tau}, {"accuracy", acc}});
  }
  json choices = json::array();
  for (const SweepChoice& c : result.choices) {
    json g = json::array();
    for (const SweepPoint& p : c.grid) {
      g.push_back({{"sigma2", p.sigma2}, {"tau", p.tau}, {"accuracy", p.accuracy}});
    }
    choices.push_back({{"epsilon", c.epsilon},
                       {"budget", c.budget},
                       {"sigma2", c.best.sigma2},
                       {"tau", c.best.tau},
                       {"validation_accuracy", c.best.accuracy},
                       {"grid", g}});
  }
  return {{"schema", kSweepSchema},
          {"stage1", stage1},
          {"tau_star", optional_json(result.tau_star)},
          {"choices", choices}};
}

}  // namespace indknn
