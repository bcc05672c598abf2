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

// Round-based closed loop for both applications: plan, move, sense, fuse and
// account energy, next to the single-hop baseline.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aggroute/mapping.hpp"
#include "aggroute/model.hpp"
#include "aggroute/solver.hpp"
#include "aggroute/tracking.hpp"

namespace aggroute {

enum class ScenarioKind { Tracking, Mapping };

struct TrackingSetup {
  TargetState target;
  Matrix4 transition = Matrix4::Identity();
  Matrix4 process_noise = Matrix4::Zero();
  SensorModel sensor;
  double pi_min = 0.0;
  FilterState filter;  // prediction for the first round
};

struct MappingSetup {
  Region region;
  double zeta = 0.5;
  GuidanceParams guidance;
  double substep = 0.1;  // s
};

struct SimConfig {
  ScenarioKind kind = ScenarioKind::Tracking;
  ScenarioParams params;  // mapping: rate and ratio of the first type are the template
  std::vector<Vec2> uavs;
  Vec2 sink;
  std::vector<double> energy;  // initial stored energy per UAV
  int horizon = 1;
  std::uint64_t seed = 1;
  GridSpec grid;
  TrackingSetup tracking;
  MappingSetup mapping;

  /// Throws std::invalid_argument naming the first problem found.
  void validate() const;
};

struct RoundRecord {
  int round = 0;  // 1-based
  std::vector<Vec2> positions;  // end of the round
  std::vector<double> energy;   // stored energy after the round
  SensorAssignment sensors;     // sensing flags of the executed plan
  std::optional<Plan> plan;      // executed plan
  std::optional<Plan> baseline;  // single-hop comparison at the same positions
  bool fallback = false;  // no plan met every constraint; the baseline ran without the bandwidth check
  std::optional<double> normalized;  // plan / baseline energy when both exist
  double pi = 0.0;                   // tracking: information of the executed sensors
  Vector4 estimate = Vector4::Zero();  // tracking: filtered estimate after the update
  Vector4 truth = Vector4::Zero();     // tracking: true target state
  std::string note;

  double optimal_energy() const { return plan ? plan->objective : 0.0; }
  double baseline_energy() const { return baseline ? baseline->objective : 0.0; }
};

struct SimResult {
  std::vector<RoundRecord> rounds;
  std::vector<double> initial_energy;
  std::vector<double> final_energy;
  std::string stop_reason;  // "horizon", "completed" or "depleted: ..."
};

SimResult run_tracking_sim(const SimConfig& config);
SimResult run_mapping_sim(const SimConfig& config);
SimResult run_sim(const SimConfig& config);

struct NormalizedSeries {
  std::vector<std::optional<double>> values;  // per round; empty where excluded
  std::size_t excluded = 0;
  double min = 0.0;
  double mean = 0.0;
  double max = 0.0;
};

NormalizedSeries normalized_energy_series(const std::vector<RoundRecord>& records);

/// Every UAV with an aggregator role in the executed plan, per round: [round][uav-1].
std::vector<std::vector<bool>> aggregator_roles(const std::vector<RoundRecord>& records);

}  // namespace aggroute
