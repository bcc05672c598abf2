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


// Exhaustive reference searches. Nothing here shares search logic with the
// branch-and-bound or grid-scan solvers; they only share the constraint and
// energy evaluation in make_plan.

#include <chrono>
#include <stdexcept>

#include "aggroute/solver.hpp"

namespace aggroute {

namespace {

constexpr int kOracleMaxUavs = 4;
constexpr int kOracleMaxTypes = 2;
constexpr std::uint64_t kOracleMaxGridPoints = 4096;

// Out-links of UAV i to every other node in 1..n+1, in (i, j) order.
std::vector<std::pair<int, int>> link_slots(int n) {
  std::vector<std::pair<int, int>> slots;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n + 1; ++j)
      if (j != i) slots.emplace_back(i, j);
  return slots;
}

}  // namespace

SolveReport brute_force_oracle(const FleetGeometry& geometry, const SensorAssignment& sensors,
                               const ScenarioParams& params, std::span<const double> energy_budget) {
  const auto start = std::chrono::steady_clock::now();
  const int n = params.n;
  const int m = params.type_count();
  if (n > kOracleMaxUavs || m > kOracleMaxTypes)
    throw std::invalid_argument("brute_force_oracle is limited to n <= 4 and m <= 2");
  if (sensors.uav_count() != n || sensors.type_count() != m || geometry.uav_count() != n)
    throw std::invalid_argument("brute_force_oracle: inputs disagree on size");

  SolveReport report;
  const auto slots = link_slots(n);
  const std::uint64_t slices = std::uint64_t{1} << slots.size();

  // Every constraint except the bandwidth and energy limits is separable by
  // type, so each type's slice of the tensor is screened on its own and the
  // survivors are then combined exhaustively.
  std::vector<std::vector<std::uint64_t>> survivors(static_cast<std::size_t>(m));
  for (int z = 0; z < m; ++z) {
    const auto uz = static_cast<std::size_t>(z);
    ScenarioParams single = params;
    single.sensing_rate = {params.sensing_rate[uz]};
    single.aggregation_ratio = {params.aggregation_ratio[uz]};
    Topology slice(n, 1);
    for (int i = 1; i <= n; ++i) slice.set_link(0, i, 0, sensors.senses(i, z));
    for (std::uint64_t bits = 0; bits < slices; ++bits) {
      ++report.nodes_expanded;
      for (std::size_t s = 0; s < slots.size(); ++s)
        slice.set_link(slots[s].first, slots[s].second, 0, (bits >> s) & 1u);
      if (!validate_link_structure(slice, single).empty()) continue;
      if (!propagate_flows(slice, single)) continue;
      survivors[uz].push_back(bits);
    }
    if (survivors[uz].empty()) {
      report.infeasible_reason = "no valid link structure for data type " + std::to_string(z);
      report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      return report;
    }
  }

  Topology topology(n, m);
  topology.apply_sensors(sensors);
  PlanChecks checks;
  checks.energy_budget = energy_budget;
  std::vector<std::size_t> pick(static_cast<std::size_t>(m), 0);
  while (true) {
    for (int z = 0; z < m; ++z) {
      const std::uint64_t bits = survivors[static_cast<std::size_t>(z)][pick[static_cast<std::size_t>(z)]];
      for (std::size_t s = 0; s < slots.size(); ++s)
        topology.set_link(slots[s].first, slots[s].second, z, (bits >> s) & 1u);
    }
    ++report.nodes_expanded;
    auto plan = make_plan(topology, geometry, params, checks);
    if (plan && (!report.plan || plan_preferred(*plan, *report.plan))) report.plan = std::move(plan);

    int z = m - 1;
    while (z >= 0 && ++pick[static_cast<std::size_t>(z)] == survivors[static_cast<std::size_t>(z)].size()) {
      pick[static_cast<std::size_t>(z)] = 0;
      --z;
    }
    if (z < 0) break;
  }
  if (!report.plan) report.infeasible_reason = "no link tensor satisfies every constraint";
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

SolveReport brute_force_tracking_oracle(const TrackingStepInput& input,
                                        const ScenarioParams& params, const GridSpec& grid) {
  const auto start = std::chrono::steady_clock::now();
  const int n = params.n;
  if (n > kOracleMaxUavs || params.type_count() != 1)
    throw std::invalid_argument("tracking oracle is limited to n <= 4 and one data type");
  const auto controls = control_grid(params, grid);
  const auto G = static_cast<std::uint64_t>(controls.size());
  std::uint64_t joint = 1;
  for (int i = 0; i < n; ++i) {
    joint *= G;
    if (joint > kOracleMaxGridPoints)
      throw std::invalid_argument("tracking oracle is limited to 4096 joint grid points");
  }

  SolveReport report;
  FleetGeometry geometry;
  geometry.sink = input.sink;
  geometry.source = input.predicted_target;
  geometry.uavs.resize(static_cast<std::size_t>(n));
  std::vector<Control> chosen(static_cast<std::size_t>(n));
  const double rs2 = params.sensing_range * params.sensing_range;

  for (std::uint64_t J = 0; J < joint; ++J) {
    std::uint64_t rest = J;
    for (int i = n - 1; i >= 0; --i) {
      const auto ui = static_cast<std::size_t>(i);
      chosen[ui] = controls[rest % G];
      rest /= G;
      geometry.uavs[ui] = advance(input.uavs[ui], chosen[ui], params.interval);
    }
    if (!check_geometry(geometry, Topology(n, 1), params, true).empty()) continue;

    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      ++report.nodes_expanded;
      bool in_range = true;
      for (int i = 0; i < n; ++i) {
        if ((mask & (1u << i)) &&
            squared_distance(geometry.uavs[static_cast<std::size_t>(i)], input.predicted_target) - rs2 > 0.0)
          in_range = false;
      }
      if (!in_range) continue;
      if (sensor_set_information(geometry.uavs, mask, input.predicted_target, input.sensor) < input.pi_min)
        continue;
      SensorAssignment sensors(n, 1);
      for (int i = 0; i < n; ++i) sensors.set(i + 1, 0, (mask & (1u << i)) != 0);
      SolveReport routed = brute_force_oracle(geometry, sensors, params, input.energy);
      if (!routed.plan) continue;
      if (!report.plan || plan_preferred(*routed.plan, *report.plan)) {
        report.plan = std::move(routed.plan);
        report.plan->controls = chosen;
        report.plan->grid_index = J;
      }
    }
  }
  if (!report.plan) report.infeasible_reason = "no grid point satisfies every tracking constraint";
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace aggroute
