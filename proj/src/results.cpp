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


#include "aggroute/results.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

#include "json.hpp"

namespace aggroute {

namespace {

std::string g9(double v) { return fmt::format("{:.9g}", v); }

int type_slots(const SimConfig& config) {
  return config.kind == ScenarioKind::Mapping ? config.params.n : config.params.type_count();
}

struct Roles {
  bool sense = false;
  bool relay = false;
  bool agg = false;
};

Roles roles_of(const RoundRecord& r, const Aggregators* aggregators, int uav, int type) {
  Roles out;
  if (type >= r.sensors.type_count()) return out;
  out.sense = r.sensors.senses(uav, type);
  if (!r.plan || !aggregators) return out;
  const Topology& t = r.plan->topology;
  out.agg = (*aggregators)(uav, type);
  bool from_uav = false;
  for (int j = 1; j <= t.uav_count(); ++j)
    if (t.link(j, uav, type)) from_uav = true;
  out.relay = from_uav && !out.agg && t.out_link(uav, type).has_value();
  return out;
}

}  // namespace

std::string results_csv(const SimConfig& config, const SimResult& result) {
  const int n = config.params.n;
  const int slots = type_slots(config);
  const bool tracking = config.kind == ScenarioKind::Tracking;
  std::string out = "round";
  for (int i = 1; i <= n; ++i) out += fmt::format(",x_{0},y_{0},e_{0}", i);
  for (int i = 1; i <= n; ++i)
    for (int z = 0; z < slots; ++z) out += fmt::format(",sense_{0}_{1},relay_{0}_{1},agg_{0}_{1}", i, z);
  out += ",optimal_J,baseline_J,normalized";
  if (tracking) out += ",pi";
  out += ",fallback\n";

  for (const RoundRecord& r : result.rounds) {
    out += fmt::format("{}", r.round);
    for (int i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      out += fmt::format(",{},{},{}", g9(r.positions[ui].x), g9(r.positions[ui].y), g9(r.energy[ui]));
    }
    std::optional<Aggregators> aggs;
    if (r.plan) aggs = derive_aggregators(r.plan->topology);
    for (int i = 1; i <= n; ++i) {
      for (int z = 0; z < slots; ++z) {
        const Roles role = roles_of(r, aggs ? &*aggs : nullptr, i, z);
        out += fmt::format(",{},{},{}", int(role.sense), int(role.relay), int(role.agg));
      }
    }
    out += fmt::format(",{},{},{}", r.plan ? g9(r.plan->objective) : "", r.baseline ? g9(r.baseline->objective) : "",
                       r.normalized ? g9(*r.normalized) : "");
    if (tracking) out += "," + g9(r.pi);
    out += fmt::format(",{}\n", int(r.fallback));
  }
  return out;
}

std::string summary_json(const SimConfig& config, const SimResult& result) {
  using nlohmann::ordered_json;
  const NormalizedSeries series = normalized_energy_series(result.rounds);
  CompensatedSum optimal_sum, baseline_sum, spent_sum;
  int fallbacks = 0;
  for (const RoundRecord& r : result.rounds) {
    optimal_sum.add(r.optimal_energy());
    baseline_sum.add(r.baseline_energy());
    fallbacks += r.fallback ? 1 : 0;
  }
  for (std::size_t i = 0; i < result.initial_energy.size(); ++i)
    spent_sum.add(result.initial_energy[i] - result.final_energy[i]);
  const double optimal = optimal_sum.value();
  const double baseline = baseline_sum.value();
  const double spent = spent_sum.value();

  ordered_json j;
  j["kind"] = config.kind == ScenarioKind::Tracking ? "tracking" : "mapping";
  j["seed"] = config.seed;
  j["uavs"] = config.params.n;
  j["bandwidth_bps"] = config.params.bandwidth;
  if (config.kind == ScenarioKind::Mapping) j["zeta"] = config.mapping.zeta;
  j["horizon"] = config.horizon;
  j["rounds"] = result.rounds.size();
  j["stop_reason"] = result.stop_reason;
  j["fallback_rounds"] = fallbacks;
  auto finite_or_null = [](double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); };
  j["normalized"] = {{"min", finite_or_null(series.min)},
                     {"mean", finite_or_null(series.mean)},
                     {"max", finite_or_null(series.max)},
                     {"excluded_rounds", series.excluded}};
  j["energy"] = {{"optimal_total_J", optimal},
                 {"baseline_total_J", baseline},
                 {"spent_J", spent},
                 {"closure_error_J", spent - optimal},
                 {"initial_J", result.initial_energy},
                 {"final_J", result.final_energy}};
  return j.dump(2) + "\n";
}

std::string plan_csv(const Plan& plan) {
  std::string out = "kind,from,to,type,value\n";
  for (const Link& l : plan.topology.active_links()) {
    const double rate = l.from == 0 ? 0.0 : plan.flows.rate(l.from, l.to, l.type);
    out += fmt::format("link,{},{},{},{}\n", l.from, l.to, l.type, g9(rate));
  }
  for (std::size_t i = 0; i < plan.per_node.size(); ++i) {
    const EnergyBreakdown& e = plan.per_node[i];
    out += fmt::format("energy,{},,,{}\n", i + 1, g9(e.total));
  }
  out += fmt::format("objective,,,,{}\n", g9(plan.objective));
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error(fmt::format("cannot open '{}' for writing", path.string()));
  f << text;
  f.flush();
  if (!f) throw std::runtime_error(fmt::format("write to '{}' failed", path.string()));
}

ResultPaths write_results(const SimConfig& config, const SimResult& result, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error(fmt::format("cannot create '{}': {}", out_dir.string(), ec.message()));
  ResultPaths paths{out_dir / "rounds.csv", out_dir / "summary.json", out_dir / "normalized.svg",
                    out_dir / "aggregators.svg"};
  write_text(paths.csv, results_csv(config, result));
  write_text(paths.summary, summary_json(config, result));
  const std::string label = fmt::format("B = {} bps", g9(config.params.bandwidth));
  write_text(paths.normalized_chart,
             normalized_chart_svg({ChartSeries{label, normalized_energy_series(result.rounds).values}},
                                  "Normalized energy per decision interval"));
  write_text(paths.aggregator_chart, aggregator_chart_svg(aggregator_roles(result.rounds), "Aggregator roles"));
  return paths;
}

}  // namespace aggroute
