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


#pragma once

// Exact minimum-energy planning: routing over link topologies, the joint
// control/sensor/topology search for tracking, the single-hop baseline, and
// exhaustive oracles used to certify the search.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aggroute/energy.hpp"
#include "aggroute/model.hpp"
#include "aggroute/tracking.hpp"

namespace aggroute {

/// Constant speed (m/s) and heading (rad) held over one decision interval.
struct Control {
  double speed = 0.0;
  double heading = 0.0;

  friend bool operator==(const Control&, const Control&) = default;
};

struct Plan {
  Topology topology;
  FlowAssignment flows;
  FleetGeometry geometry;         // positions the energies were evaluated at
  std::vector<Control> controls;  // empty for fixed-trajectory problems
  double objective = 0.0;
  std::vector<EnergyBreakdown> per_node;
  std::uint64_t grid_index = 0;
};

struct SolveReport {
  std::optional<Plan> plan;
  std::string infeasible_reason;
  std::uint64_t nodes_expanded = 0;
  std::uint64_t candidates_pruned = 0;
  double wall_time = 0.0;

  explicit operator bool() const { return plan.has_value(); }
};

/// Which constraints a candidate plan is checked against.
struct PlanChecks {
  bool bandwidth = true;
  bool sensing_range = false;  // sensing links vs. geometry.source
  bool motion = false;         // pairwise comm range and safety distance
  std::span<const double> energy_budget;  // per UAV; empty means unlimited
};

/// Propagates flows and evaluates energies for a fixed topology. Returns
/// nullopt (with `reason` filled in when given) if any check fails.
std::optional<Plan> make_plan(const Topology& topology, const FleetGeometry& geometry,
                              const ScenarioParams& params, const PlanChecks& checks,
                              std::string* reason = nullptr);

/// Strict preference: lower objective, then fewer active links, then
/// lexicographic link order.
bool plan_preferred(const Plan& a, const Plan& b);

// ----------------------------------------------------------------------------
// Routing with fixed positions and sensors

/// Out-link choice per UAV for one data type: 0 means no out-link, 1..n a
/// UAV, n+1 the sink.
using TypeRoute = std::vector<int>;

/// Every out-link assignment for one type in which exactly the nodes carrying
/// flow (sensors and anything they route through) have one out-link and all
/// flow reaches the sink. `sensing[i-1]` flags UAV i. Empty when no UAV senses.
std::vector<TypeRoute> enumerate_type_routes(const std::vector<bool>& sensing);

void for_each_topology(const SensorAssignment& sensors,
                       const std::function<void(const Topology&)>& visit);
std::vector<Topology> enumerate_topologies(const SensorAssignment& sensors);

/// Minimum total energy over all valid topologies for the given sensors.
SolveReport solve_routing(const FleetGeometry& geometry, const SensorAssignment& sensors,
                          const ScenarioParams& params,
                          std::span<const double> energy_budget = {});

/// Every sensor sends its own packets straight to the sink.
SolveReport baseline_plan(const FleetGeometry& geometry, const SensorAssignment& sensors,
                          const ScenarioParams& params, const PlanChecks& checks = {});

/// Exhaustive search over every binary link tensor (n <= 4, m <= 2). Throws
/// std::invalid_argument beyond that size.
SolveReport brute_force_oracle(const FleetGeometry& geometry, const SensorAssignment& sensors,
                               const ScenarioParams& params,
                               std::span<const double> energy_budget = {});

// ----------------------------------------------------------------------------
// Tracking: joint controls, sensors and topology

struct GridSpec {
  int headings = 16;
  int speeds = 3;

  int size() const { return headings * speeds; }
};

/// Candidate controls in grid order: index = speed_index * headings +
/// heading_index, headings 2*pi*k/headings, speeds evenly spaced on
/// [v_min, v_max] (v_min alone when speeds == 1).
std::vector<Control> control_grid(const ScenarioParams& params, const GridSpec& grid);

/// Exact end-of-interval position under constant speed and heading.
Vec2 advance(Vec2 position, const Control& control, double interval);

struct TrackingStepInput {
  std::vector<Vec2> uavs;
  std::vector<double> energy;  // stored energy per UAV; empty means unlimited
  Vec2 sink;
  Vec2 predicted_target;
  SensorModel sensor;
  double pi_min = 0.0;
};

/// Information contribution of UAVs at `positions` flagged in `sensor_mask`
/// (bit i-1 for UAV i) about a target at `target`.
double sensor_set_information(std::span<const Vec2> positions, unsigned sensor_mask,
                              Vec2 target, const SensorModel& model);

/// Minimum-energy plan over the Cartesian control grid, sensor subsets within
/// sensing range of the predicted target meeting pi_min, and topologies. Ties
/// go to fewer links, lexicographic link order, then lower grid index.
/// Single data type only.
SolveReport solve_tracking_step(const TrackingStepInput& input, const ScenarioParams& params,
                                const GridSpec& grid);

/// Same problem by exhaustion: every grid point, every sensor subset, and
/// brute_force_oracle routing. n <= 4 and at most 4096 joint grid points.
SolveReport brute_force_tracking_oracle(const TrackingStepInput& input,
                                        const ScenarioParams& params, const GridSpec& grid);

/// Controls for the baseline strategy when no plan satisfies every
/// constraint: the grid point minimizing baseline energy with all in-range
/// UAVs sensing (bandwidth ignored), else the point closest in sum of squared
/// distances to the predicted target. Comm range and safety still hold when
/// any grid point allows it.
std::vector<Control> fallback_controls(const TrackingStepInput& input,
                                       const ScenarioParams& params, const GridSpec& grid);

/// UAVs whose end position is within sensing range of `target`.
SensorAssignment in_range_sensors(std::span<const Vec2> positions, Vec2 target,
                                  const ScenarioParams& params);

}  // namespace aggroute
