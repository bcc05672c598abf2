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


#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "aggroute/kernels.hpp"
#include "aggroute/solver.hpp"
#include "route_eval.hpp"

namespace aggroute {

using detail::elapsed_since;
using detail::evaluate_route;
using detail::kCheckSlack;
using detail::kTieWindow;
using detail::RouteEvaluation;
using detail::violates_budget;

std::optional<Plan> make_plan(const Topology& topology, const FleetGeometry& geometry,
                              const ScenarioParams& params, const PlanChecks& checks,
                              std::string* reason) {
  auto reject = [&](const std::string& why) -> std::optional<Plan> {
    if (reason) *reason = why;
    return std::nullopt;
  };
  const auto structure = validate_link_structure(topology, params);
  if (!structure.empty()) return reject("link structure: " + to_string(structure.front().constraint));

  FlowResult flow = propagate_flows(topology, params);
  if (!flow) return reject("flows: " + to_string(flow.failure));

  if (checks.bandwidth && !within_bandwidth(check_bandwidth(topology, *flow.flows, params)))
    return reject("bandwidth exceeded");

  if (checks.sensing_range || checks.motion) {
    auto geo = check_geometry(geometry, topology, params, checks.motion);
    if (!checks.sensing_range) {
      std::erase_if(geo, [](const Violation& v) { return v.constraint == Constraint::SensingRange; });
    }
    if (!geo.empty()) return reject("geometry: " + to_string(geo.front().constraint));
  }

  Plan plan;
  plan.per_node = evaluate_energy(topology, *flow.flows, geometry, params);
  for (std::size_t i = 0; i < plan.per_node.size(); ++i) {
    if (violates_budget(checks.energy_budget, i, plan.per_node[i].total, 0.0))
      return reject("energy budget exceeded");
  }
  plan.objective = total_energy(plan.per_node);
  plan.topology = topology;
  plan.flows = std::move(*flow.flows);
  plan.geometry = geometry;
  return plan;
}

bool plan_preferred(const Plan& a, const Plan& b) {
  if (a.objective != b.objective) return a.objective < b.objective;
  return topology_tie_less(a.topology, b.topology);
}

// ---------------------------------------------------------------------------

namespace {

// True when every node with an out-link carries flow, every carrying node has
// one, and following out-links always ends at the sink.
bool valid_route(const TypeRoute& parent, const std::vector<bool>& sensing) {
  const int n = static_cast<int>(parent.size());
  std::vector<bool> has_child(static_cast<std::size_t>(n + 2), false);
  for (int i = 1; i <= n; ++i) has_child[static_cast<std::size_t>(parent[i - 1])] = true;
  for (int i = 1; i <= n; ++i) {
    const bool carries = sensing[static_cast<std::size_t>(i - 1)] || has_child[static_cast<std::size_t>(i)];
    const bool sends = parent[static_cast<std::size_t>(i - 1)] != 0;
    if (carries != sends) return false;
  }
  for (int i = 1; i <= n; ++i) {
    int node = i;
    int steps = 0;
    while (node >= 1 && node <= n && parent[static_cast<std::size_t>(node - 1)] != 0) {
      node = parent[static_cast<std::size_t>(node - 1)];
      if (++steps > n) return false;
    }
  }
  return true;
}

void extend_routes(TypeRoute& parent, int uav, const std::vector<bool>& sensing,
                   std::vector<TypeRoute>& out) {
  const int n = static_cast<int>(parent.size());
  if (uav > n) {
    if (valid_route(parent, sensing)) out.push_back(parent);
    return;
  }
  for (int choice = 0; choice <= n + 1; ++choice) {
    if (choice == uav) continue;
    parent[static_cast<std::size_t>(uav - 1)] = choice;
    extend_routes(parent, uav + 1, sensing, out);
  }
  parent[static_cast<std::size_t>(uav - 1)] = 0;
}

}  // namespace

std::vector<TypeRoute> enumerate_type_routes(const std::vector<bool>& sensing) {
  std::vector<TypeRoute> out;
  if (std::none_of(sensing.begin(), sensing.end(), [](bool s) { return s; })) return out;
  TypeRoute parent(sensing.size(), 0);
  extend_routes(parent, 1, sensing, out);
  return out;
}

namespace {

std::vector<bool> sensing_column(const SensorAssignment& sensors, int type) {
  std::vector<bool> column(static_cast<std::size_t>(sensors.uav_count()));
  for (int i = 1; i <= sensors.uav_count(); ++i)
    column[static_cast<std::size_t>(i - 1)] = sensors.senses(i, type);
  return column;
}

void apply_route(Topology& topology, const TypeRoute& route, int type) {
  for (int i = 1; i <= topology.uav_count(); ++i) {
    for (int j = 1; j <= topology.sink(); ++j) topology.set_link(i, j, type, false);
    const int p = route[static_cast<std::size_t>(i - 1)];
    if (p != 0) topology.set_link(i, p, type, true);
  }
}

}  // namespace

void for_each_topology(const SensorAssignment& sensors,
                       const std::function<void(const Topology&)>& visit) {
  const int m = sensors.type_count();
  std::vector<std::vector<TypeRoute>> routes;
  for (int z = 0; z < m; ++z) {
    routes.push_back(enumerate_type_routes(sensing_column(sensors, z)));
    if (routes.back().empty()) return;
  }
  Topology topology(sensors.uav_count(), m);
  topology.apply_sensors(sensors);
  std::vector<std::size_t> pick(static_cast<std::size_t>(m), 0);
  while (true) {
    for (int z = 0; z < m; ++z) apply_route(topology, routes[static_cast<std::size_t>(z)][pick[static_cast<std::size_t>(z)]], z);
    visit(topology);
    int z = m - 1;
    while (z >= 0 && ++pick[static_cast<std::size_t>(z)] == routes[static_cast<std::size_t>(z)].size()) {
      pick[static_cast<std::size_t>(z)] = 0;
      --z;
    }
    if (z < 0) return;
  }
}

std::vector<Topology> enumerate_topologies(const SensorAssignment& sensors) {
  std::vector<Topology> out;
  for_each_topology(sensors, [&](const Topology& t) { out.push_back(t); });
  return out;
}

// ---------------------------------------------------------------------------

namespace {

/// Per-bit transmit cost from every UAV (rows 1..n) to every node 1..n+1.
class LinkCostTable {
 public:
  LinkCostTable(const FleetGeometry& geometry, const ScenarioParams& params)
      : n_(geometry.uav_count()), cost_(static_cast<std::size_t>(n_ * (n_ + 1))) {
    std::vector<double> xs, ys;
    for (const Vec2& p : geometry.uavs) {
      xs.push_back(p.x);
      ys.push_back(p.y);
    }
    std::vector<double> d2(static_cast<std::size_t>(n_));
    std::vector<double> column(static_cast<std::size_t>(n_));
    for (int j = 1; j <= n_ + 1; ++j) {
      const Vec2 target = geometry.position(j);
      kernels::squared_distances_to_point(xs, ys, target.x, target.y, d2);
      kernels::transmit_cost_per_bit(d2, params.eps_transmit, params.eps_amplifier,
                                     params.path_loss_exponent, column);
      for (int i = 1; i <= n_; ++i) cost_[index(i, j)] = column[static_cast<std::size_t>(i - 1)];
    }
  }

  double operator()(int from, int to) const { return cost_[index(from, to)]; }

 private:
  std::size_t index(int from, int to) const {
    return static_cast<std::size_t>((from - 1) * (n_ + 1) + (to - 1));
  }

  int n_;
  std::vector<double> cost_;
};

struct TypeCandidate {
  const TypeRoute* route = nullptr;
  double energy = 0.0;
  std::vector<double> node_energy;
  std::vector<double> bits;
  int links = 0;
};

struct RoutingSearch {
  const FleetGeometry& geometry;
  const ScenarioParams& params;
  std::span<const double> budget;
  std::vector<std::vector<TypeCandidate>> candidates;
  std::vector<double> suffix_min;
  Topology scratch;
  std::optional<Plan> best;
  std::uint64_t expanded = 0;
  std::uint64_t pruned = 0;

  void descend(std::size_t z, double committed, std::vector<double>& bits,
               std::vector<double>& energy) {
    ++expanded;
    if (z == candidates.size()) {
      PlanChecks checks;
      checks.energy_budget = budget;
      auto plan = make_plan(scratch, geometry, params, checks);
      if (plan && (!best || plan_preferred(*plan, *best))) best = std::move(plan);
      return;
    }
    const double limit = params.bits_per_interval() * (1.0 + kCheckSlack);
    const auto& list = candidates[z];
    for (std::size_t k = 0; k < list.size(); ++k) {
      const TypeCandidate& c = list[k];
      const double bound = committed + c.energy + suffix_min[z + 1];
      if (best && bound > best->objective * (1.0 + kTieWindow)) {
        // Sorted by energy: everything after this one is no better.
        pruned += list.size() - k;
        return;
      }
      bool fits = true;
      for (std::size_t i = 0; i < bits.size() && fits; ++i) {
        fits = bits[i] + c.bits[i] <= limit &&
               !violates_budget(budget, i, energy[i] + c.node_energy[i], kCheckSlack);
      }
      if (!fits) {
        ++pruned;
        continue;
      }
      for (std::size_t i = 0; i < bits.size(); ++i) {
        bits[i] += c.bits[i];
        energy[i] += c.node_energy[i];
      }
      apply_route(scratch, *c.route, static_cast<int>(z));
      descend(z + 1, committed + c.energy, bits, energy);
      for (std::size_t i = 0; i < bits.size(); ++i) {
        bits[i] -= c.bits[i];
        energy[i] -= c.node_energy[i];
      }
    }
  }
};

}  // namespace

SolveReport solve_routing(const FleetGeometry& geometry, const SensorAssignment& sensors,
                          const ScenarioParams& params, std::span<const double> energy_budget) {
  const auto start = std::chrono::steady_clock::now();
  const int n = params.n;
  const int m = params.type_count();
  if (geometry.uav_count() != n || sensors.uav_count() != n || sensors.type_count() != m)
    throw std::invalid_argument("solve_routing: geometry, sensors and params disagree on size");
  if (!energy_budget.empty() && energy_budget.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("solve_routing: energy budget needs one entry per UAV");

  SolveReport report;
  const LinkCostTable cost(geometry, params);
  const double limit = params.bits_per_interval() * (1.0 + kCheckSlack);

  std::vector<std::vector<TypeRoute>> routes(static_cast<std::size_t>(m));
  RoutingSearch search{geometry, params, energy_budget, {}, {}, Topology(n, m), std::nullopt, 0, 0};
  search.scratch.apply_sensors(sensors);

  for (int z = 0; z < m; ++z) {
    const auto uz = static_cast<std::size_t>(z);
    const auto sensing = sensing_column(sensors, z);
    routes[uz] = enumerate_type_routes(sensing);
    std::vector<TypeCandidate> list;
    for (const TypeRoute& route : routes[uz]) {
      const RouteEvaluation ev =
          evaluate_route(route, sensing, params.sensing_rate[uz], params.aggregation_ratio[uz], params);
      if (!ev.feasible) {
        ++report.candidates_pruned;
        continue;
      }
      TypeCandidate c;
      c.route = &route;
      c.bits = ev.bits;
      c.node_energy = ev.fixed_energy;
      bool fits = true;
      for (int i = 1; i <= n; ++i) {
        const auto ui = static_cast<std::size_t>(i - 1);
        const int p = route[ui];
        if (p != 0) {
          c.node_energy[ui] += cost(i, p) * ev.out_rate[ui] * params.packet_bits;
          ++c.links;
        }
        c.energy += c.node_energy[ui];
        if (c.bits[ui] > limit || violates_budget(energy_budget, ui, c.node_energy[ui], kCheckSlack))
          fits = false;
      }
      if (!fits) {
        ++report.candidates_pruned;
        continue;
      }
      list.push_back(std::move(c));
    }
    std::stable_sort(list.begin(), list.end(), [](const TypeCandidate& a, const TypeCandidate& b) {
      if (a.energy != b.energy) return a.energy < b.energy;
      return a.links < b.links;
    });
    if (list.empty()) {
      report.infeasible_reason = sensors.sensor_count(z) == 0
                                     ? "data type " + std::to_string(z) + " has no sensor"
                                     : "no route for data type " + std::to_string(z) +
                                           " satisfies bandwidth, rate and energy limits";
      report.wall_time = elapsed_since(start);
      return report;
    }
    search.candidates.push_back(std::move(list));
  }

  search.suffix_min.assign(static_cast<std::size_t>(m + 1), 0.0);
  for (int z = m - 1; z >= 0; --z) {
    const auto uz = static_cast<std::size_t>(z);
    search.suffix_min[uz] = search.suffix_min[uz + 1] + search.candidates[uz].front().energy;
  }
  std::vector<double> bits(static_cast<std::size_t>(n), 0.0);
  std::vector<double> energy(static_cast<std::size_t>(n), 0.0);
  if (m > 0) search.descend(0, 0.0, bits, energy);

  report.nodes_expanded = search.expanded;
  report.candidates_pruned += search.pruned;
  report.plan = std::move(search.best);
  if (!report.plan) report.infeasible_reason = "no topology satisfies the joint bandwidth and energy limits";
  report.wall_time = elapsed_since(start);
  return report;
}

SolveReport baseline_plan(const FleetGeometry& geometry, const SensorAssignment& sensors,
                          const ScenarioParams& params, const PlanChecks& checks) {
  const auto start = std::chrono::steady_clock::now();
  Topology topology(params.n, params.type_count());
  topology.apply_sensors(sensors);
  for (int i = 1; i <= params.n; ++i)
    for (int z = 0; z < params.type_count(); ++z)
      if (sensors.senses(i, z)) topology.set_link(i, topology.sink(), z);

  SolveReport report;
  report.nodes_expanded = 1;
  report.plan = make_plan(topology, geometry, params, checks, &report.infeasible_reason);
  report.wall_time = elapsed_since(start);
  return report;
}

// ---------------------------------------------------------------------------

std::vector<Control> control_grid(const ScenarioParams& params, const GridSpec& grid) {
  if (grid.headings < 1 || grid.speeds < 1)
    throw std::invalid_argument("control grid needs at least one heading and one speed");
  std::vector<Control> out;
  out.reserve(static_cast<std::size_t>(grid.size()));
  for (int s = 0; s < grid.speeds; ++s) {
    const double speed = grid.speeds == 1
                             ? params.v_min
                             : params.v_min + (params.v_max - params.v_min) * s / (grid.speeds - 1);
    for (int k = 0; k < grid.headings; ++k) {
      out.push_back(Control{speed, 2.0 * std::numbers::pi * k / grid.headings});
    }
  }
  return out;
}

Vec2 advance(Vec2 position, const Control& control, double interval) {
  const double step = control.speed * interval;
  return Vec2{position.x + step * std::cos(control.heading),
              position.y + step * std::sin(control.heading)};
}

double sensor_set_information(std::span<const Vec2> positions, unsigned sensor_mask, Vec2 target,
                              const SensorModel& model) {
  std::vector<double> distances;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (sensor_mask & (1u << i)) distances.push_back(sensing_distance(positions[i], target));
  }
  return info_contribution(distances, model);
}

SensorAssignment in_range_sensors(std::span<const Vec2> positions, Vec2 target,
                                  const ScenarioParams& params) {
  const double rs2 = params.sensing_range * params.sensing_range;
  SensorAssignment s(static_cast<int>(positions.size()), 1);
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (squared_distance(positions[i], target) - rs2 <= 0.0) s.set(static_cast<int>(i) + 1, 0);
  }
  return s;
}

}  // namespace aggroute
