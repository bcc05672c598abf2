// Copyright 2026 The aggroute Authors
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


// Command-line front end: simulation runs, one-shot routing, oracle
// comparison and parameter sweeps.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "aggroute/config.hpp"
#include "aggroute/results.hpp"
#include "aggroute/sim.hpp"
#include "aggroute/solver.hpp"

namespace fs = std::filesystem;
using namespace aggroute;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;

struct RunOptions {
  std::string input;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string grid;
  std::optional<int> horizon;
};

fs::path out_dir(const RunOptions& o) {
  if (!o.out.empty()) return o.out;
  if (const char* env = std::getenv("AGGROUTE_OUT"); env && *env) return env;
  return "out";
}

GridSpec parse_grid(const std::string& text) {
  const auto x = text.find('x');
  if (x == std::string::npos) throw ConfigError(fmt::format("--grid expects HEADINGSxSPEEDS, got '{}'", text));
  GridSpec g;
  try {
    g.headings = std::stoi(text.substr(0, x));
    g.speeds = std::stoi(text.substr(x + 1));
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("--grid expects HEADINGSxSPEEDS, got '{}'", text));
  }
  if (g.headings < 1 || g.speeds < 1) throw ConfigError("--grid needs at least one heading and one speed");
  return g;
}

SimConfig load_config(const RunOptions& o, ScenarioKind expected) {
  SimConfig c = parse_config(o.input);
  if (c.kind != expected)
    throw ConfigError(fmt::format("'{}' is a {} config", o.input, c.kind == ScenarioKind::Tracking ? "tracking" : "mapping"));
  if (o.seed) c.seed = *o.seed;
  if (!o.grid.empty()) c.grid = parse_grid(o.grid);
  if (o.horizon) c.horizon = *o.horizon;
  c.validate();
  return c;
}

void print_summary(const SimConfig& c, const SimResult& r, const ResultPaths& paths) {
  const NormalizedSeries s = normalized_energy_series(r.rounds);
  int fallbacks = 0;
  for (const auto& rec : r.rounds) fallbacks += rec.fallback ? 1 : 0;
  std::cout << fmt::format("rounds={} stop={} fallback_rounds={} normalized min={:.6g} mean={:.6g} max={:.6g}\n",
                           r.rounds.size(), r.stop_reason, fallbacks, s.min, s.mean, s.max);
  std::cout << fmt::format("wrote {}\n", paths.csv.string());
  (void)c;
}

int run_sim_command(const RunOptions& o, ScenarioKind kind) {
  const SimConfig c = load_config(o, kind);
  const SimResult r = run_sim(c);
  const ResultPaths paths = write_results(c, r, out_dir(o));
  print_summary(c, r, paths);
  return kExitOk;
}

void print_plan(const Plan& plan) {
  std::cout << fmt::format("objective {:.12g} J\n", plan.objective);
  for (const Link& l : plan.topology.active_links()) {
    if (l.from == 0) {
      std::cout << fmt::format("  sense  uav {} type {}\n", l.to, l.type);
    } else {
      std::cout << fmt::format("  link   {} -> {} type {} rate {:.9g}\n", l.from, l.to, l.type,
                               plan.flows.rate(l.from, l.to, l.type));
    }
  }
  const Aggregators aggs = derive_aggregators(plan.topology);
  for (std::size_t i = 0; i < plan.per_node.size(); ++i) {
    std::string roles;
    for (int z = 0; z < aggs.type_count(); ++z)
      if (aggs(static_cast<int>(i) + 1, z)) roles += fmt::format(" aggregator(type {})", z);
    std::cout << fmt::format("  uav {} energy {:.9g} J{}\n", i + 1, plan.per_node[i].total, roles);
  }
}

int run_solve(const RunOptions& o) {
  const RoutingInstance inst = parse_instance(o.input);
  const SolveReport report = solve_routing(inst.geometry, inst.sensors, inst.params, inst.energy);
  const fs::path dir = out_dir(o);
  fs::create_directories(dir);
  if (!report.plan) {
    std::cout << "infeasible: " << report.infeasible_reason << "\n";
    write_text(dir / "plan.csv", "kind,from,to,type,value\n");
    return kExitInfeasible;
  }
  print_plan(*report.plan);
  write_text(dir / "plan.csv", plan_csv(*report.plan));
  return kExitOk;
}

int run_oracle(const RoutingInstance& inst, const fs::path& dir) {
  const SolveReport fast = solve_routing(inst.geometry, inst.sensors, inst.params, inst.energy);
  const SolveReport exact = brute_force_oracle(inst.geometry, inst.sensors, inst.params, inst.energy);
  fs::create_directories(dir);
  write_text(dir / "plan.csv", fast.plan ? plan_csv(*fast.plan) : "kind,from,to,type,value\n");
  write_text(dir / "oracle_plan.csv", exact.plan ? plan_csv(*exact.plan) : "kind,from,to,type,value\n");
  auto show = [](const SolveReport& r) {
    return r.plan ? fmt::format("{:.12g}", r.plan->objective) : std::string("infeasible");
  };
  std::cout << fmt::format("solver {}\noracle {}\n", show(fast), show(exact));
  if (fast.plan.has_value() != exact.plan.has_value()) {
    std::cout << "MISMATCH: feasibility verdicts differ\n";
    return kExitError;
  }
  if (!fast.plan) return kExitInfeasible;
  const double a = fast.plan->objective, b = exact.plan->objective;
  if (std::abs(a - b) > 1e-9 * std::max(std::abs(a), std::abs(b))) {
    std::cout << "MISMATCH: objectives differ\n";
    return kExitError;
  }
  std::cout << "match\n";
  return kExitOk;
}

int run_sweep(const RunOptions& o, const std::string& param, const std::vector<std::string>& values, int jobs) {
  SimConfig base = parse_config(o.input);
  if (o.seed) base.seed = *o.seed;
  if (!o.grid.empty()) base.grid = parse_grid(o.grid);
  if (o.horizon) base.horizon = *o.horizon;

  std::vector<SimConfig> configs;
  std::vector<std::string> labels;
  for (const std::string& v : values) {
    SimConfig c = base;
    if (param == "B") {
      c.params.bandwidth = parse_quantity(v, Unit::Bandwidth);
      labels.push_back(fmt::format("B_{:.9g}", c.params.bandwidth));
    } else if (param == "zeta") {
      if (c.kind != ScenarioKind::Mapping) throw ConfigError("--param zeta applies to mapping configs");
      c.mapping.zeta = parse_quantity(v, Unit::Dimensionless);
      c.params.aggregation_ratio.assign(c.params.sensing_rate.size(), c.mapping.zeta);
      labels.push_back(fmt::format("zeta_{:.9g}", c.mapping.zeta));
    } else {
      throw ConfigError(fmt::format("--param must be B or zeta, got '{}'", param));
    }
    c.validate();
    configs.push_back(std::move(c));
  }

  const fs::path dir = out_dir(o);
  std::vector<SimResult> results(configs.size());
  std::vector<std::string> errors(configs.size());
  std::size_t next = 0;
  std::mutex lock;
  auto worker = [&] {
    for (;;) {
      std::size_t k;
      {
        std::lock_guard<std::mutex> guard(lock);
        if (next >= configs.size()) return;
        k = next++;
      }
      try {
        results[k] = run_sim(configs[k]);
        write_results(configs[k], results[k], dir / labels[k]);
      } catch (const std::exception& e) {
        errors[k] = e.what();
      }
    }
  };
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(configs.size())));
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (std::size_t k = 0; k < errors.size(); ++k)
    if (!errors[k].empty()) throw std::runtime_error(fmt::format("{}: {}", labels[k], errors[k]));

  std::string table = "run,rounds,normalized_min,normalized_mean,normalized_max,fallback_rounds\n";
  std::vector<ChartSeries> series;
  for (std::size_t k = 0; k < configs.size(); ++k) {
    const NormalizedSeries s = normalized_energy_series(results[k].rounds);
    int fallbacks = 0;
    for (const auto& r : results[k].rounds) fallbacks += r.fallback ? 1 : 0;
    table += fmt::format("{},{},{:.9g},{:.9g},{:.9g},{}\n", labels[k], results[k].rounds.size(), s.min, s.mean,
                         s.max, fallbacks);
    series.push_back(ChartSeries{labels[k], s.values});
    std::cout << fmt::format("{}: rounds={} normalized min={:.6g} mean={:.6g}\n", labels[k],
                             results[k].rounds.size(), s.min, s.mean);
  }
  fs::create_directories(dir);
  write_text(dir / "sweep.csv", table);
  write_text(dir / "sweep_normalized.svg", normalized_chart_svg(series, "Normalized energy per decision interval"));
  return kExitOk;
}

void add_run_flags(CLI::App* cmd, RunOptions& o, bool with_grid) {
  cmd->add_option("--seed", o.seed, "Random seed (overrides the config)");
  cmd->add_option("--out", o.out, "Output directory (default: $AGGROUTE_OUT or ./out)");
  cmd->add_option("--horizon", o.horizon, "Number of rounds (overrides the config)")->check(CLI::PositiveNumber);
  if (with_grid) cmd->add_option("--grid", o.grid, "Control grid as HEADINGSxSPEEDS, e.g. 16x3");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-aware routing and aggregation planner for UAV teams"};
  app.require_subcommand(1);

  RunOptions track_opts, map_opts, solve_opts, oracle_opts, sweep_opts;
  auto* track = app.add_subcommand("track", "Run the target-tracking simulation");
  track->add_option("config", track_opts.input, "Tracking config file")->required()->check(CLI::ExistingFile);
  add_run_flags(track, track_opts, true);

  auto* map = app.add_subcommand("map", "Run the area-mapping simulation");
  map->add_option("config", map_opts.input, "Mapping config file")->required()->check(CLI::ExistingFile);
  add_run_flags(map, map_opts, false);

  auto* solve = app.add_subcommand("solve", "Solve one routing instance and print the plan");
  solve->add_option("instance", solve_opts.input, "Instance file")->required()->check(CLI::ExistingFile);
  solve->add_option("--out", solve_opts.out, "Output directory (default: $AGGROUTE_OUT or ./out)");

  auto* oracle = app.add_subcommand("oracle", "Solve one instance with the solver and by exhaustion, and compare");
  oracle->add_option("instance", oracle_opts.input, "Instance file")->required()->check(CLI::ExistingFile);
  oracle->add_option("--out", oracle_opts.out, "Output directory (default: $AGGROUTE_OUT or ./out)");

  std::string sweep_param;
  std::vector<std::string> sweep_values;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  auto* sweep = app.add_subcommand("sweep", "Run one simulation per parameter value, in parallel");
  sweep->add_option("config", sweep_opts.input, "Config file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--param", sweep_param, "Parameter to vary: B or zeta")->required();
  sweep->add_option("--values", sweep_values, "Values, e.g. 5Kbps,6Kbps,7Kbps")->required()->delimiter(',');
  sweep->add_option("--jobs", jobs, "Parallel runs")->check(CLI::PositiveNumber);
  add_run_flags(sweep, sweep_opts, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitError;
  }

  try {
    if (*track) return run_sim_command(track_opts, ScenarioKind::Tracking);
    if (*map) return run_sim_command(map_opts, ScenarioKind::Mapping);
    if (*solve) return run_solve(solve_opts);
    if (*oracle) return run_oracle(parse_instance(oracle_opts.input), out_dir(oracle_opts));
    if (*sweep) return run_sweep(sweep_opts, sweep_param, sweep_values, jobs);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
