// Copyright 2026 The lunadtn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "lunadtn/cli.hpp"
#include "lunadtn/engine.hpp"
#include "lunadtn/mobility.hpp"
#include "lunadtn/reports.hpp"
#include "lunadtn/rng.hpp"
#include "lunadtn/routing.hpp"
#include "lunadtn/scenario.hpp"
#include "lunadtn/training.hpp"

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace py = pybind11;
using namespace lunadtn;

namespace {

py::dict counters_dict(const Counters& c) {
  py::dict d;
  d["created"] = c.created;
  d["started"] = c.started;
  d["relayed"] = c.relayed;
  d["dropped"] = c.dropped;
  d["delivered"] = c.delivered;
  return d;
}

std::vector<TrainingSample> to_samples(
    const std::vector<std::pair<std::array<double, 4>, double>>& rows) {
  std::vector<TrainingSample> out;
  out.reserve(rows.size());
  for (const auto& [f, label] : rows) out.push_back({f, label});
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Lunar relay DTN simulator: routers, simulation and the next-hop regressor.";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);
  py::register_exception<LookupError>(m, "LookupError", PyExc_KeyError);

  m.def("node_numeric_id", [](std::string_view name) { return node_numeric_id(name).value; },
        py::arg("name"));
  m.def("node_name", [](char prefix, std::uint32_t id) { return node_name(prefix, NodeId{id}); },
        py::arg("prefix"), py::arg("id"));
  m.def("epoch_of", &epoch_of, py::arg("creation_time"), py::arg("epoch_duration"));

  m.def("prophet_direct_update", &prophet_direct_update, py::arg("p"), py::arg("p_init"));
  m.def("prophet_transitive_update", &prophet_transitive_update, py::arg("p_ac"),
        py::arg("p_ab"), py::arg("p_bc"), py::arg("beta"));
  m.def("prophet_age", &prophet_age, py::arg("p"), py::arg("gamma"), py::arg("elapsed"),
        py::arg("aging_unit"));

  m.def("mse", [](const std::vector<double>& p, const std::vector<double>& t) { return mse(p, t); },
        py::arg("predictions"), py::arg("targets"));

  py::class_<MlpModel>(m, "MlpModel")
      .def_static("zeros", &MlpModel::zeros, py::arg("dims"))
      .def_static("random", [](std::vector<std::size_t> dims, std::uint64_t seed) {
            Rng rng(seed);
            return MlpModel::random_uniform(std::move(dims), rng);
          }, py::arg("dims"), py::arg("seed"))
      .def_property_readonly("dims", &MlpModel::dims)
      .def_property_readonly("parameter_count", &MlpModel::parameter_count)
      .def("forward", [](const MlpModel& model, const std::vector<double>& x) {
            Eigen::VectorXd y = mlp_forward(model, x);
            return std::vector<double>(y.data(), y.data() + y.size());
          }, py::arg("x"))
      .def("save", [](const MlpModel& model, const std::filesystem::path& p) { save_model(model, p); },
           py::arg("path"))
      .def_static("load", &load_model, py::arg("path"));

  m.def("build_dataset", [](std::string_view report, double epochDuration) {
        std::vector<std::pair<std::array<double, 4>, double>> rows;
        for (const auto& s : build_dataset(report, epochDuration)) rows.emplace_back(s.features, s.label);
        return rows;
      }, py::arg("report_text"), py::arg("epoch_duration") = 3600.0,
      "List of (features, next_hop) pairs, features = [epoch, source, destination, current].");

  m.def("train", [](const std::vector<std::pair<std::array<double, 4>, double>>& rows,
                    std::size_t epochs, double lr, std::uint64_t seed,
                    std::vector<std::size_t> dims) {
        TrainConfig cfg;
        cfg.epochs = epochs;
        cfg.learningRate = lr;
        cfg.seed = seed;
        cfg.dims = std::move(dims);
        auto samples = to_samples(rows);
        TrainResult r;
        {
          py::gil_scoped_release release;
          r = train(samples, cfg);
        }
        return py::make_tuple(std::move(r.model), std::move(r.lossCurve));
      }, py::arg("samples"), py::arg("epochs") = 70000, py::arg("lr") = 0.007,
      py::arg("seed") = 1, py::arg("dims") = kRoutingDims,
      "Full-batch Adam training. Returns (model, loss_curve).");

  m.def("neuraluna_gate", [](const MlpModel& model, std::int64_t epoch, std::uint32_t from,
                             std::uint32_t to, std::uint32_t current, std::uint32_t candidate,
                             double tolerance) {
        return neuraluna_gate(model, epoch, NodeId{from}, NodeId{to}, NodeId{current},
                              NodeId{candidate}, tolerance);
      }, py::arg("model"), py::arg("epoch"), py::arg("source"), py::arg("destination"),
      py::arg("current"), py::arg("candidate"), py::arg("tolerance") = 5.0);

  m.def("gen_synthetic_orbits", [](std::uint32_t orbiters, std::uint32_t rovers, double duration,
                                   double interval, std::uint64_t seed) {
        OrbitSpec spec;
        spec.orbiterCount = orbiters;
        spec.roverCount = rovers;
        spec.duration = duration;
        spec.sampleInterval = interval;
        return format_trace(gen_synthetic_orbits(spec, seed));
      }, py::arg("orbiters") = 130, py::arg("rovers") = 20, py::arg("duration") = 1800.0,
      py::arg("interval") = 10.0, py::arg("seed") = 1,
      "Trace file text for a synthetic orbiter/rover constellation.");

  m.def("simulate", [](const std::filesystem::path& scenarioFile, std::optional<std::uint64_t> seed,
                       std::optional<std::string> router, std::optional<std::string> bufferSize,
                       std::optional<std::filesystem::path> model) {
        Scenario s = load_scenario(scenarioFile);
        if (seed) s.seed = *seed;
        if (router) s.router.kind = parse_router_kind(*router);
        if (bufferSize) s.bufferSize = parse_byte_count(*bufferSize);
        if (model) s.router.modelFile = std::filesystem::absolute(*model);
        RunResult r;
        {
          py::gil_scoped_release release;
          r = run(s);
        }
        py::dict d;
        d["counters"] = counters_dict(r.counters);
        d["nn_trainer_report"] = r.nn_trainer_report();
        d["message_stats"] = r.message_stats_report();
        return d;
      }, py::arg("scenario"), py::arg("seed") = py::none(), py::arg("router") = py::none(),
      py::arg("buffer_size") = py::none(), py::arg("model") = py::none(),
      "Run one scenario; returns counters and both report texts.");

  m.def("cli", [](std::vector<std::string> args) {
        args.insert(args.begin(), "lunadtn");
        std::vector<const char*> argv;
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
      }, py::arg("args"), "Invoke a CLI subcommand in-process; returns (exit_code, stdout, stderr).");

#ifdef VERSION_INFO
  m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}
