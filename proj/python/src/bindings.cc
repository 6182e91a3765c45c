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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "indknn/accounting.h"
#include "indknn/baseline.h"
#include "indknn/config.h"
#include "indknn/core.h"
#include "indknn/engine.h"
#include "indknn/errors.h"
#include "indknn/experiment.h"
#include "indknn/lsh.h"
#include "indknn/mechanisms.h"
#include "indknn/synthetic.h"

namespace py = pybind11;

namespace indknn {
namespace {

using Matrix = py::array_t<double, py::array::c_style | py::array::forcecast>;

// Store plus its noise stream and an optional LSH index.
class Predictor {
 public:
  Predictor(std::size_t dim, std::uint32_t num_classes, const EngineConfig& config,
            std::uint64_t seed)
      : store_(dim, num_classes, config), src_(seed) {}

  std::vector<ExampleId> add(const Matrix& features, const std::vector<ClassIndex>& labels,
                             bool public_reused) {
    const auto rows = check_rows(features);
    if (labels.size() != rows) throw InvalidArgument("one label per feature row");
    std::vector<ExampleId> ids;
    ids.reserve(rows);
    for (std::size_t i = 0; i < rows; ++i) {
      LabeledExample e;
      e.feature = normalized(features, i);
      e.label = labels[i];
      e.origin = public_reused ? Origin::kPublicReused : Origin::kPrivate;
      ids.push_back(store_.add_example(e));
    }
    return ids;
  }

  void remove(ExampleId id) { store_.remove_example(id); }

  void build_index(std::uint32_t tables, std::uint32_t bits, std::uint64_t seed) {
    index_ = std::make_unique<LshIndex>(indknn::build_index(store_, tables, bits, seed));
  }

  QueryOutcome query(const Matrix& q) {
    if (q.ndim() != 1) throw InvalidArgument("query must be one-dimensional");
    const FeatureVector v =
        l2_normalize(std::span<const double>(q.data(), static_cast<std::size_t>(q.shape(0))));
    if (index_) return answer_query_hashed(store_, *index_, v, src_);
    return answer_query(store_, v, src_);
  }

  py::array_t<std::uint32_t> predict(const Matrix& queries) {
    const auto rows = check_rows(queries);
    py::array_t<std::uint32_t> out(static_cast<py::ssize_t>(rows));
    auto w = out.mutable_unchecked<1>();
    for (std::size_t i = 0; i < rows; ++i) {
      const FeatureVector v = normalized(queries, i);
      w(i) = index_ ? answer_query_hashed(store_, *index_, v, src_).answer
                    : answer_query(store_, v, src_).answer;
    }
    return out;
  }

  py::array_t<double> remaining() const {
    const auto z = store_.ledger().raw_remaining();
    py::array_t<double> out(static_cast<py::ssize_t>(z.size()));
    std::copy(z.begin(), z.end(), out.mutable_data());
    return out;
  }

  const ExampleStore& store() const { return store_; }
  bool hashed() const { return index_ != nullptr; }

 private:
  std::size_t check_rows(const Matrix& m) const {
    if (m.ndim() != 2 || static_cast<std::size_t>(m.shape(1)) != store_.dim()) {
      throw InvalidArgument("expected an (n, " + std::to_string(store_.dim()) + ") array");
    }
    return static_cast<std::size_t>(m.shape(0));
  }

  FeatureVector normalized(const Matrix& m, std::size_t row) const {
    return l2_normalize(std::span<const double>(m.data() + row * store_.dim(), store_.dim()),
                        row);
  }

  ExampleStore store_;
  NoiseSource src_;
  std::unique_ptr<LshIndex> index_;
};

py::array_t<double> to_array(const std::vector<LabeledExample>& examples, std::size_t dim) {
  py::array_t<double> out({static_cast<py::ssize_t>(examples.size()),
                           static_cast<py::ssize_t>(dim)});
  double* p = out.mutable_data();
  for (const LabeledExample& e : examples) p = std::copy(e.feature.begin(), e.feature.end(), p);
  return out;
}

py::array_t<std::uint32_t> labels_of(const std::vector<LabeledExample>& examples) {
  py::array_t<std::uint32_t> out(static_cast<py::ssize_t>(examples.size()));
  auto w = out.mutable_unchecked<1>();
  for (std::size_t i = 0; i < examples.size(); ++i) w(i) = examples[i].label;
  return out;
}

}  // namespace
}  // namespace indknn

PYBIND11_MODULE(_core, m) {
  using namespace indknn;
  m.doc() = "Private kernel nearest-neighbor prediction with individual accounting";

  auto& error = py::register_exception<Error>(m, "Error");
  auto& invalid = py::register_exception<InvalidArgument>(m, "InvalidArgument", error.ptr());
  py::register_exception<InvariantViolation>(m, "InvariantViolation", error.ptr());
  py::register_exception<IngestionError>(m, "IngestionError", invalid.ptr());
  py::register_exception<FormatError>(m, "FormatError", invalid.ptr());

  py::enum_<KernelKind>(m, "KernelKind")
      .value("RBF", KernelKind::kRbf)
      .value("COSINE", KernelKind::kCosine);

  py::class_<KernelSpec>(m, "KernelSpec")
      .def(py::init([](KernelKind kind, double bandwidth) {
             KernelSpec k{kind, bandwidth};
             k.validate();
             return k;
           }),
           py::arg("kind") = KernelKind::kCosine, py::arg("bandwidth") = kDefaultBandwidth)
      .def_readwrite("kind", &KernelSpec::kind)
      .def_readwrite("bandwidth", &KernelSpec::bandwidth)
      .def_static("rbf", &KernelSpec::Rbf, py::arg("bandwidth") = kDefaultBandwidth)
      .def_static("cosine", &KernelSpec::Cosine);

  py::class_<EngineConfig>(m, "EngineConfig")
      .def(py::init<>())
      .def_readwrite("kernel", &EngineConfig::kernel)
      .def_readwrite("tau", &EngineConfig::tau)
      .def_readwrite("sigma1", &EngineConfig::sigma1)
      .def_readwrite("sigma2", &EngineConfig::sigma2)
      .def_readwrite("planned_queries", &EngineConfig::planned_queries)
      .def_property(
          "epsilon", [](const EngineConfig& c) { return c.dp.epsilon; },
          [](EngineConfig& c, double v) { c.dp.epsilon = v; })
      .def_property(
          "delta", [](const EngineConfig& c) { return c.dp.delta; },
          [](EngineConfig& c, double v) { c.dp.delta = v; })
      .def_readwrite("budget", &EngineConfig::budget)
      .def_readwrite("reuse_predictions", &EngineConfig::reuse_predictions)
      .def_readwrite("k_floor", &EngineConfig::k_floor);

  py::class_<ChargeRecord>(m, "ChargeRecord")
      .def_readonly("query", &ChargeRecord::query)
      .def_readonly("example", &ChargeRecord::example)
      .def_readonly("count_charge", &ChargeRecord::count_charge)
      .def_readonly("label_charge", &ChargeRecord::label_charge);

  py::class_<QueryOutcome>(m, "QueryOutcome")
      .def_readonly("t", &QueryOutcome::t)
      .def_readonly("answer", &QueryOutcome::answer)
      .def_readonly("k_t", &QueryOutcome::k_t)
      .def_readonly("selected", &QueryOutcome::selected)
      .def_readonly("charges", &QueryOutcome::charges);

  py::class_<Predictor>(m, "Predictor")
      .def(py::init<std::size_t, std::uint32_t, const EngineConfig&, std::uint64_t>(),
           py::arg("dim"), py::arg("num_classes"), py::arg("config") = EngineConfig{},
           py::arg("seed") = 0)
      .def("add", &Predictor::add, py::arg("features"), py::arg("labels"),
           py::arg("public") = false, "Rows are L2-normalized on the way in.")
      .def("remove", &Predictor::remove, py::arg("id"))
      .def("build_index", &Predictor::build_index, py::arg("tables") = 30,
           py::arg("bits") = 8, py::arg("seed") = 0,
           "Switches queries to LSH candidate retrieval.")
      .def("query", &Predictor::query, py::arg("q"))
      .def("predict", &Predictor::predict, py::arg("queries"))
      .def("remaining", &Predictor::remaining,
           "Remaining budget per slot; removed and public slots hold 0.")
      .def_property_readonly("budget",
                             [](const Predictor& p) { return p.store().params().budget.value; })
      .def_property_readonly("sigma1",
                             [](const Predictor& p) { return p.store().params().sigma1; })
      .def_property_readonly("count_charge",
                             [](const Predictor& p) { return p.store().params().count_charge; })
      .def_property_readonly("live_count",
                             [](const Predictor& p) { return p.store().live_count(); })
      .def_property_readonly("private_count",
                             [](const Predictor& p) { return p.store().ledger().size(); })
      .def_property_readonly("hashed", &Predictor::hashed);

  m.def("rdp_to_dp", [](double budget, double delta) { return rdp_to_dp({budget}, delta); },
        py::arg("budget"), py::arg("delta"));
  m.def("budget_for_dp",
        [](double epsilon, double delta) { return budget_for_dp({epsilon, delta}).value; },
        py::arg("epsilon"), py::arg("delta"));
  m.def("default_count_sigma",
        [](std::size_t queries, double budget) { return default_count_sigma(queries, {budget}); },
        py::arg("queries"), py::arg("budget"));
  m.def("naive_knn_accounting", &naive_knn_accounting, py::arg("queries"), py::arg("sigma"),
        py::arg("delta"));
  m.def("naive_knn_query_capacity",
        [](double sigma, double epsilon, double delta) {
          return naive_knn_query_capacity(sigma, {epsilon, delta});
        },
        py::arg("sigma"), py::arg("epsilon"), py::arg("delta"));

  m.def(
      "generate_synthetic",
      [](std::uint32_t classes, std::size_t n, std::size_t dim, double separation, double noise,
         std::size_t queries, std::uint64_t seed) {
        const SyntheticData d =
            generate_synthetic({classes, n, dim, separation, noise, queries, seed});
        return py::make_tuple(to_array(d.train, d.dim), labels_of(d.train),
                              to_array(d.queries, d.dim), labels_of(d.queries));
      },
      py::arg("classes") = 3, py::arg("n") = 6000, py::arg("dim") = 16,
      py::arg("separation") = 1.0, py::arg("noise") = 0.9, py::arg("queries") = 2000,
      py::arg("seed") = 0, "Returns (x_train, y_train, x_query, y_query).");

  m.def(
      "_run_experiment",
      [](const std::string& spec) {
        const ExperimentSpec s = spec_from_json(nlohmann::json::parse(spec));
        MetricsReport r;
        {
          py::gil_scoped_release release;
          r = run_experiment(s);
        }
        return to_json(r).dump();
      },
      py::arg("spec_json"));
  m.def(
      "_sweep",
      [](const std::string& spec) {
        const SweepSpec s = sweep_spec_from_json(nlohmann::json::parse(spec));
        SweepResult r;
        {
          py::gil_scoped_release release;
          r = sweep(s);
        }
        nlohmann::json out = to_json(r);
        out["spec"] = to_json(s.base);
        return out.dump();
      },
      py::arg("spec_json"));
}
