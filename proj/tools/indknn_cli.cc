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

// indknn: experiments, data generation and privacy accounting from the shell.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "indknn/accounting.h"
#include "indknn/baseline.h"
#include "indknn/dataset_io.h"
#include "indknn/errors.h"
#include "indknn/experiment.h"
#include "indknn/lsh.h"
#include "indknn/synthetic.h"

namespace {

using nlohmann::json;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string mode;
  std::string reuse;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "Experiment spec (JSON)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "Override the experiment seed");
  cmd->add_option("--out", f.out, "Output path (default: spec output or stdout)");
  cmd->add_option("--mode", f.mode, "exact, hashed or baseline")
      ->check(CLI::IsMember({"exact", "hashed", "baseline"}));
  cmd->add_option("--reuse", f.reuse, "Prediction reuse")
      ->check(CLI::IsMember({"on", "off"}));
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw indknn::InvalidArgument("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw indknn::InvalidArgument(path + ": " + e.what());
  }
}

json load_spec_json(const CommonFlags& f) {
  if (f.config.empty()) throw indknn::InvalidArgument("--config is required");
  json j = read_json(f.config);
  if (f.seed) j["seed"] = *f.seed;
  if (!f.mode.empty()) j["mode"] = f.mode;
  if (!f.reuse.empty()) j["engine"]["reuse"] = (f.reuse == "on");
  return j;
}

std::string destination(const CommonFlags& f, const std::string& spec_output) {
  return f.out.empty() ? spec_output : f.out;
}

void emit(const json& j, const std::string& path) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw indknn::InvalidArgument("cannot write " + path);
  out << text;
}

int fail(const char* kind, const std::string& message, int code) {
  std::cerr << json{{"error", {{"kind", kind}, {"message", message}}}}.dump()
            << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Private kernel nearest-neighbor prediction with individual accounting"};
  app.require_subcommand(1);

  // synth
  indknn::SyntheticParams synth;
  std::string synth_out;
  bool synth_csv = false;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic clustered dataset");
  synth_cmd->add_option("--classes", synth.classes)->capture_default_str();
  synth_cmd->add_option("--n", synth.n, "Training examples")->capture_default_str();
  synth_cmd->add_option("--dim", synth.dim)->capture_default_str();
  synth_cmd->add_option("--separation", synth.separation, "Min angle between class means")
      ->capture_default_str();
  synth_cmd->add_option("--noise", synth.noise)->capture_default_str();
  synth_cmd->add_option("--queries", synth.queries, "Held-out labeled queries")
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed)->capture_default_str();
  synth_cmd->add_option("--out", synth_out, "Output prefix")->required();
  synth_cmd->add_flag("--csv", synth_csv, "Write CSV instead of binary");

  // run / sweep / baseline
  CommonFlags run_flags;
  bool run_timing = false;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment and write its report");
  add_common(run_cmd, run_flags);
  run_cmd->add_flag("--timing", run_timing, "Include wall-clock latencies in the report");

  CommonFlags sweep_flags;
  auto* sweep_cmd = app.add_subcommand("sweep", "Two-stage (sigma2, tau) search on validation data");
  add_common(sweep_cmd, sweep_flags);

  CommonFlags base_flags;
  std::optional<std::size_t> base_queries;
  std::optional<double> base_sigma;
  std::optional<double> base_delta;
  auto* base_cmd = app.add_subcommand(
      "baseline", "Naive private kNN: run with --config, or account with --queries/--sigma/--delta");
  add_common(base_cmd, base_flags);
  base_cmd->add_option("--queries", base_queries);
  base_cmd->add_option("--sigma", base_sigma);
  base_cmd->add_option("--delta", base_delta);

  // account
  std::optional<double> acc_eps;
  std::optional<double> acc_budget;
  double acc_delta = 0.0;
  std::optional<std::size_t> acc_queries;
  auto* account_cmd = app.add_subcommand("account", "Convert between (epsilon, delta) and the RDP budget B");
  account_cmd->add_option("--epsilon", acc_eps);
  account_cmd->add_option("--budget", acc_budget);
  account_cmd->add_option("--delta", acc_delta)->required();
  account_cmd->add_option("--queries", acc_queries, "Planned T, reports the default sigma1");

  // index
  CommonFlags index_flags;
  std::string index_features;
  std::uint32_t index_tables = 30;
  std::uint32_t index_bits = 8;
  auto* index_cmd = app.add_subcommand("index", "LSH bucket occupancy diagnostics");
  add_common(index_cmd, index_flags);
  index_cmd->add_option("--features", index_features, "Feature file (.ikn or .csv)");
  index_cmd->add_option("--tables", index_tables)->capture_default_str();
  index_cmd->add_option("--bits", index_bits)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (synth_cmd->parsed()) {
      const indknn::SyntheticData data = indknn::generate_synthetic(synth);
      const std::string f_ext = synth_csv ? ".csv" : ".ikn";
      const std::string l_ext = synth_csv ? ".csv" : ".ikl";
      auto write = [&](const std::string& name,
                       const std::vector<indknn::LabeledExample>& xs) {
        const auto m = indknn::to_matrix(xs);
        const auto l = indknn::to_label_array(xs, data.num_classes);
        if (synth_csv) {
          indknn::write_features_csv(synth_out + "." + name + ".features" + f_ext, m);
          indknn::write_labels_csv(synth_out + "." + name + ".labels" + l_ext, l);
        } else {
          indknn::write_features(synth_out + "." + name + f_ext, m);
          indknn::write_labels(synth_out + "." + name + l_ext, l);
        }
      };
      write("train", data.train);
      write("queries", data.queries);
      emit({{"classes", synth.classes}, {"n", synth.n}, {"dim", synth.dim},
            {"queries", synth.queries}, {"seed", synth.seed}, {"prefix", synth_out}},
           "");
      return 0;
    }
    if (run_cmd->parsed()) {
      json j = load_spec_json(run_flags);
      if (run_timing) j["record_timing"] = true;
      const indknn::ExperimentSpec spec = indknn::spec_from_json(j);
      const indknn::MetricsReport report = indknn::run_experiment(spec);
      std::cerr << indknn::summary_table(report);
      emit(indknn::to_json(report), destination(run_flags, spec.output));
      return 0;
    }
    if (sweep_cmd->parsed()) {
      const json j = load_spec_json(sweep_flags);
      const indknn::SweepSpec spec = indknn::sweep_spec_from_json(j);
      const indknn::SweepResult result = indknn::sweep(spec);
      json out = indknn::to_json(result);
      out["spec"] = indknn::to_json(spec.base);
      emit(out, destination(sweep_flags, spec.base.output));
      return 0;
    }
    if (base_cmd->parsed()) {
      if (!base_flags.config.empty()) {
        json j = load_spec_json(base_flags);
        j["mode"] = "baseline";
        const indknn::ExperimentSpec spec = indknn::spec_from_json(j);
        const indknn::MetricsReport report = indknn::run_experiment(spec);
        std::cerr << indknn::summary_table(report);
        emit(indknn::to_json(report), destination(base_flags, spec.output));
        return 0;
      }
      if (!base_queries || !base_sigma || !base_delta) {
        throw indknn::InvalidArgument("baseline needs --config, or --queries, --sigma and --delta");
      }
      const auto rdp = indknn::naive_knn_rdp(*base_queries, *base_sigma);
      emit({{"queries", *base_queries},
            {"sigma", *base_sigma},
            {"delta", *base_delta},
            {"sensitivity", indknn::kTopKSensitivity},
            {"rdp_coefficient", rdp.value},
            {"epsilon", indknn::rdp_to_dp(rdp, *base_delta)}},
           base_flags.out);
      return 0;
    }
    if (account_cmd->parsed()) {
      if (acc_eps.has_value() == acc_budget.has_value()) {
        throw indknn::InvalidArgument("account needs exactly one of --epsilon or --budget");
      }
      json out = {{"delta", acc_delta}};
      indknn::RdpBudget b;
      if (acc_eps) {
        b = indknn::budget_for_dp({*acc_eps, acc_delta});
        out["epsilon"] = *acc_eps;
        out["budget"] = b.value;
      } else {
        b = {*acc_budget};
        out["budget"] = b.value;
        out["epsilon"] = indknn::rdp_to_dp(b, acc_delta);
      }
      out["classical_bound"] = indknn::classical_rdp_to_dp_bound(b, acc_delta);
      if (acc_queries) out["sigma1"] = indknn::default_count_sigma(*acc_queries, b);
      emit(out, "");
      return 0;
    }
    if (index_cmd->parsed()) {
      indknn::EngineConfig cfg;
      cfg.budget = 1.0;
      std::vector<indknn::LabeledExample> examples;
      std::size_t dim = 0;
      std::uint64_t seed = index_flags.seed.value_or(0);
      if (!index_features.empty()) {
        const indknn::FeatureMatrix m =
            index_features.ends_with(".csv") ? indknn::read_features_csv(index_features)
                                             : indknn::read_features(index_features);
        dim = m.cols;
        std::vector<double> row(m.cols);
        for (std::size_t i = 0; i < m.rows; ++i) {
          const auto r = m.row(i);
          std::copy(r.begin(), r.end(), row.begin());
          examples.push_back({indknn::l2_normalize(row, i), 0, indknn::Origin::kPrivate});
        }
      } else {
        const indknn::ExperimentSpec spec = indknn::spec_from_json(load_spec_json(index_flags));
        const indknn::PreparedData data = indknn::prepare_data(spec.data, spec.seed);
        dim = data.dim;
        examples = data.train;
        for (auto& e : examples) e.label = 0;
        seed = index_flags.seed.value_or(spec.seed);
      }
      indknn::ExampleStore store(dim, 2, cfg);
      for (const auto& e : examples) store.add_example(e);
      const indknn::LshIndex index = indknn::build_index(store, index_tables, index_bits, seed);
      json tables = json::array();
      std::map<std::size_t, std::size_t> overall;
      for (const auto& hist : index.occupancy()) {
        json h = json::object();
        std::size_t buckets = 0;
        std::size_t largest = 0;
        for (const auto& [size, count] : hist) {
          h[std::to_string(size)] = count;
          buckets += count;
          largest = std::max(largest, size);
          overall[size] += count;
        }
        tables.push_back({{"buckets", buckets}, {"largest", largest}, {"histogram", h}});
      }
      json all = json::object();
      for (const auto& [size, count] : overall) all[std::to_string(size)] = count;
      emit({{"examples", store.live_count()},
            {"tables", index_tables},
            {"bits", index_bits},
            {"seed", seed},
            {"occupancy", all},
            {"per_table", tables}},
           index_flags.out);
      return 0;
    }
  } catch (const indknn::InvariantViolation& e) {
    return fail(e.kind(), e.what(), 3);
  } catch (const indknn::Error& e) {
    return fail(e.kind(), e.what(), 2);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 1);
  }
  return 0;
}
