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

#include "lunadtn/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>

#include "lunadtn/engine.hpp"
#include "lunadtn/mobility.hpp"
#include "lunadtn/training.hpp"
#include "text.hpp"

namespace fs = std::filesystem;

namespace lunadtn {

std::string format_byte_count(ByteCount bytes) {
  if (bytes != 0) {
    if (bytes % 1'000'000'000 == 0) return std::to_string(bytes / 1'000'000'000) + "G";
    if (bytes % 1'000'000 == 0) return std::to_string(bytes / 1'000'000) + "M";
    if (bytes % 1'000 == 0) return std::to_string(bytes / 1'000) + "k";
  }
  return std::to_string(bytes);
}

std::vector<CompareCell> run_compare(const Scenario& base, const std::vector<RouterKind>& routers,
                                     const std::vector<ByteCount>& bufferSizes,
                                     std::uint64_t seed) {
  std::vector<CompareCell> cells;
  for (auto kind : routers) {
    for (auto size : bufferSizes) {
      Scenario s = base;
      s.router.kind = kind;
      s.bufferSize = size;
      s.seed = seed;
      const std::string cell =
          std::string(router_kind_name(kind)) + " @ " + format_byte_count(size);
      try {
        cells.push_back({kind, size, run(s).counters});
      } catch (const ValidationError& e) {
        throw ValidationError("cell " + cell + ": " + e.what());
      } catch (const ConfigError& e) {
        throw ConfigError("cell " + cell + ": " + e.what());
      } catch (const std::exception& e) {
        throw Error("cell " + cell + ": " + e.what());
      }
    }
  }
  return cells;
}

std::string format_compare_table(const std::vector<CompareCell>& cells) {
  std::ostringstream os;
  std::size_t i = 0;
  while (i < cells.size()) {
    std::size_t j = i;
    while (j < cells.size() && cells[j].router == cells[i].router) ++j;
    if (i) os << '\n';
    os << std::left << std::setw(20) << router_kind_name(cells[i].router);
    for (std::size_t k = i; k < j; ++k)
      os << std::right << std::setw(16) << (format_byte_count(cells[k].bufferSize) + " Buffer");
    os << '\n';
    const std::pair<const char*, std::uint64_t Counters::*> rows[] = {
        {"Messages Created", &Counters::created},   {"Messages Started", &Counters::started},
        {"Messages Relayed", &Counters::relayed},   {"Messages Dropped", &Counters::dropped},
        {"Messages Delivered", &Counters::delivered}};
    for (const auto& [name, field] : rows) {
      os << std::left << std::setw(20) << name;
      for (std::size_t k = i; k < j; ++k) os << std::right << std::setw(16) << cells[k].counters.*field;
      os << '\n';
    }
    i = j;
  }
  return os.str();
}

namespace {

struct SimulateArgs {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  std::string name;
  std::string router;
  std::string model;
  std::optional<double> tolerance;
  std::string bufferSize;
};

void apply_overrides(Scenario& s, const SimulateArgs& a) {
  if (a.seed) s.seed = *a.seed;
  if (!a.router.empty()) s.router.kind = parse_router_kind(a.router);
  if (!a.model.empty()) s.router.modelFile = fs::absolute(a.model);
  if (a.tolerance) s.router.tolerance = *a.tolerance;
  if (!a.bufferSize.empty()) s.bufferSize = parse_byte_count(a.bufferSize);
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  Scenario s = load_scenario(a.scenario);
  apply_overrides(s, a);
  const std::string name = a.name.empty() ? fs::path(a.scenario).stem().string() : a.name;
  if (name.empty()) throw ValidationError("run name must not be empty");
  RunResult r = run(s);
  write_reports(r, fs::path(a.out) / name, name);
  out << "run: " << name << " (" << router_kind_name(s.router.kind) << ", seed " << s.seed
      << ")\n";
  out << r.message_stats_report();
  return kExitOk;
}

struct ConvertArgs {
  std::string input;
  std::string out;
  ConversionParams params;
  std::optional<double> startTime;
  std::optional<std::size_t> maxNodes;
};

int cmd_convert_trace(const ConvertArgs& a, std::ostream& out) {
  ConversionParams p = a.params;
  p.datasetStartTime = a.startTime;
  p.maxNodes = a.maxNodes;
  auto records = load_raw_dataset(a.input);
  auto converted = convert_raw_dataset(records, p);
  save_trace(converted.trace, a.out);
  std::int64_t maxEpoch = 0;
  for (auto e : converted.epochs) maxEpoch = std::max(maxEpoch, e);
  out << "wrote " << converted.trace.waypoints().size() << " waypoints for "
      << converted.trace.nodes().size() << " nodes, epochs 0.." << maxEpoch << " -> " << a.out
      << '\n';
  return kExitOk;
}

struct OrbitArgs {
  std::string out;
  std::uint64_t seed = 1;
  OrbitSpec spec;
};

int cmd_gen_orbits(const OrbitArgs& a, std::ostream& out) {
  Trace t = gen_synthetic_orbits(a.spec, a.seed);
  save_trace(t, a.out);
  out << "wrote " << t.waypoints().size() << " waypoints for " << t.nodes().size()
      << " nodes -> " << a.out << '\n';
  return kExitOk;
}

std::vector<TrainingSample> collect_samples(const std::vector<std::string>& reports,
                                            double epochDuration) {
  std::vector<TrainingSample> samples;
  for (const auto& r : reports) {
    auto part = load_dataset_from_report(r, epochDuration);
    samples.insert(samples.end(), part.begin(), part.end());
  }
  return samples;
}

struct DatasetArgs {
  std::vector<std::string> reports;
  std::string out;
  double epochDuration = 3600.0;
};

int cmd_build_dataset(const DatasetArgs& a, std::ostream& out) {
  auto samples = collect_samples(a.reports, a.epochDuration);
  std::string csv = "epoch,source,destination,current,next_hop\n";
  for (const auto& s : samples) {
    for (double f : s.features) csv += text::format_exact(f) + ',';
    csv += text::format_exact(s.label) + '\n';
  }
  text::write_file(a.out, csv);
  out << "wrote " << samples.size() << " samples -> " << a.out << '\n';
  return kExitOk;
}

struct TrainArgs {
  std::vector<std::string> reports;
  std::string model;
  std::string lossOut;
  double epochDuration = 3600.0;
  TrainConfig cfg;
  std::size_t logEvery = 1000;
};

int cmd_train(const TrainArgs& a, std::ostream& out) {
  auto samples = collect_samples(a.reports, a.epochDuration);
  if (samples.empty()) throw ValidationError("empty dataset: the reports contain no deliveries");
  out << "training on " << samples.size() << " samples for " << a.cfg.epochs << " epochs\n";
  auto result = train(samples, a.cfg, [&](std::size_t epoch, double loss) {
    if (a.logEvery && epoch % a.logEvery == 0)
      out << "epoch " << epoch << " mse " << text::format_fixed(loss, 6) << '\n';
  });
  save_model(result.model, a.model);
  const std::string lossPath = a.lossOut.empty() ? a.model + ".loss.csv" : a.lossOut;
  std::string csv = "epoch,mse\n";
  for (std::size_t e = 0; e < result.lossCurve.size(); ++e)
    csv += std::to_string(e) + ',' + text::format_exact(result.lossCurve[e]) + '\n';
  text::write_file(lossPath, csv);
  out << "final mse " << text::format_fixed(result.lossCurve.back(), 6) << " -> " << a.model
      << '\n';
  return kExitOk;
}

struct CompareArgs {
  SimulateArgs base;
  std::vector<std::string> routers{"epidemic", "prophet"};
  std::vector<std::string> buffers{"50M", "100M"};
};

int cmd_compare(const CompareArgs& a, std::ostream& out) {
  Scenario s = load_scenario(a.base.scenario);
  apply_overrides(s, a.base);
  std::vector<RouterKind> routers;
  for (const auto& r : a.routers) routers.push_back(parse_router_kind(r));
  std::vector<ByteCount> buffers;
  for (const auto& b : a.buffers) buffers.push_back(parse_byte_count(b));
  auto cells = run_compare(s, routers, buffers, s.seed);
  const std::string table = format_compare_table(cells);
  out << table;
  if (a.base.out != "-") {
    const std::string name =
        a.base.name.empty() ? fs::path(a.base.scenario).stem().string() : a.base.name;
    const fs::path dir = fs::path(a.base.out) / name;
    fs::create_directories(dir);
    text::write_file(dir / (name + "_Comparison.txt"), table);
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lunar relay DTN simulator with PRoPHET and neural-gated routing"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run one scenario and write its reports");
  simulate->add_option("--scenario", sim.scenario, "Scenario config file")->required();
  simulate->add_option("--seed", sim.seed, "Override the scenario seed");
  simulate->add_option("--out", sim.out, "Output directory")->capture_default_str();
  simulate->add_option("--name", sim.name, "Run name (default: scenario file stem)");
  simulate->add_option("--router", sim.router, "Override router: epidemic|prophet|neuraluna");
  simulate->add_option("--model", sim.model, "Gate model file for neuraluna");
  simulate->add_option("--tolerance", sim.tolerance, "Gate tolerance for neuraluna");
  simulate->add_option("--buffer-size", sim.bufferSize, "Override bufferSize, e.g. 100M");

  ConvertArgs conv;
  auto* convert = app.add_subcommand("convert-trace", "Convert a raw 3D dataset to a trace file");
  convert->add_option("--input", conv.input, "Raw CSV: time,id,x,y,z")->required();
  convert->add_option("--out", conv.out, "Output trace file")->required();
  convert->add_option("--width", conv.params.targetWidth, "Target width (km)")->capture_default_str();
  convert->add_option("--height", conv.params.targetHeight, "Target height (km)")->capture_default_str();
  convert->add_option("--epoch-duration", conv.params.epochDuration, "Seconds per epoch")->capture_default_str();
  convert->add_option("--start-time", conv.startTime, "Dataset start time (default: earliest record)");
  convert->add_option("--max-nodes", conv.maxNodes, "Keep the first K distinct source ids");
  convert->add_option("--id-offset", conv.params.idOffset, "First node id after renumbering")->capture_default_str();

  OrbitArgs orb;
  auto* orbits = app.add_subcommand("gen-orbits", "Generate a synthetic orbiter/rover trace");
  orbits->add_option("--out", orb.out, "Output trace file")->required();
  orbits->add_option("--seed", orb.seed, "Generator seed")->capture_default_str();
  orbits->add_option("--orbiters", orb.spec.orbiterCount)->capture_default_str();
  orbits->add_option("--rovers", orb.spec.roverCount)->capture_default_str();
  orbits->add_option("--center-x", orb.spec.center.x)->capture_default_str();
  orbits->add_option("--center-y", orb.spec.center.y)->capture_default_str();
  orbits->add_option("--radius-min", orb.spec.radiusMin)->capture_default_str();
  orbits->add_option("--radius-max", orb.spec.radiusMax)->capture_default_str();
  orbits->add_option("--period-min", orb.spec.periodMin)->capture_default_str();
  orbits->add_option("--period-max", orb.spec.periodMax)->capture_default_str();
  orbits->add_option("--surface-radius", orb.spec.surfaceRadius)->capture_default_str();
  orbits->add_option("--duration", orb.spec.duration)->capture_default_str();
  orbits->add_option("--interval", orb.spec.sampleInterval, "Sample interval (s)")->capture_default_str();

  DatasetArgs ds;
  auto* dataset = app.add_subcommand("build-dataset", "Turn NN trainer reports into a sample CSV");
  dataset->add_option("--report", ds.reports, "NNTrainerReport file(s)")->required();
  dataset->add_option("--out", ds.out, "Output CSV")->required();
  dataset->add_option("--epoch-duration", ds.epochDuration)->capture_default_str();

  TrainArgs tr;
  auto* training = app.add_subcommand("train", "Train the next-hop regressor");
  training->add_option("--report", tr.reports, "NNTrainerReport file(s)")->required();
  training->add_option("--model", tr.model, "Output model file")->required();
  training->add_option("--loss-out", tr.lossOut, "Loss curve CSV (default: <model>.loss.csv)");
  training->add_option("--epochs", tr.cfg.epochs)->capture_default_str();
  training->add_option("--lr", tr.cfg.learningRate)->capture_default_str();
  training->add_option("--seed", tr.cfg.seed)->capture_default_str();
  training->add_option("--epoch-duration", tr.epochDuration)->capture_default_str();
  training->add_option("--log-every", tr.logEvery, "Print the loss every N epochs (0: never)")->capture_default_str();
  training->add_flag("--normalize", tr.cfg.normalize, "Min-max scale features while training");

  CompareArgs cmp;
  auto* compare = app.add_subcommand("compare", "Run routers x buffer sizes with one seed");
  compare->add_option("--scenario", cmp.base.scenario, "Base scenario config")->required();
  compare->add_option("--seed", cmp.base.seed, "Override the scenario seed");
  compare->add_option("--out", cmp.base.out, "Output directory ('-' for stdout only)")->capture_default_str();
  compare->add_option("--name", cmp.base.name, "Run name (default: scenario file stem)");
  compare->add_option("--routers", cmp.routers, "Routers to compare")->delimiter(',')->capture_default_str();
  compare->add_option("--buffers", cmp.buffers, "Buffer sizes to compare")->delimiter(',')->capture_default_str();
  compare->add_option("--model", cmp.base.model, "Gate model file for neuraluna");
  compare->add_option("--tolerance", cmp.base.tolerance, "Gate tolerance for neuraluna");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*simulate) return cmd_simulate(sim, out);
    if (*convert) return cmd_convert_trace(conv, out);
    if (*orbits) return cmd_gen_orbits(orb, out);
    if (*dataset) return cmd_build_dataset(ds, out);
    if (*training) return cmd_train(tr, out);
    if (*compare) return cmd_compare(cmp, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ShapeError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const LookupError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace lunadtn
