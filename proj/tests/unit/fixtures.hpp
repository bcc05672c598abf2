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

#include <random>
#include <vector>

#include "aggroute/model.hpp"
#include "aggroute/sim.hpp"
#include "aggroute/solver.hpp"

namespace fixtures {

using namespace aggroute;

// Three-UAV tracking constants, one data type.
inline ScenarioParams tracking_params() {
  ScenarioParams p;
  p.n = 3;
  p.sensing_rate = {5.0};
  p.aggregation_ratio = {0.7};
  p.packet_bits = 1024.0;
  p.bandwidth = 7000.0;
  p.interval = 1.0;
  p.eps_sense = 50e-9;
  p.eps_process = 10e-9;
  p.eps_receive = 135e-9;
  p.eps_transmit = 45e-9;
  p.eps_amplifier = 0.1e-9;
  p.path_loss_exponent = 2.0;
  p.comm_range = 500.0;
  p.sensing_range = 200.0;
  p.safety_range = 50.0;
  p.v_min = 10.0;
  p.v_max = 30.0;
  return p;
}

inline SensorModel tracking_sensor() {
  SensorModel s;
  s.H = position_observation();
  s.K = Matrix2::Identity() * 1e-6;
  s.beta = 2.0;
  return s;
}

inline SimConfig tracking_config() {
  SimConfig c;
  c.kind = ScenarioKind::Tracking;
  c.params = tracking_params();
  c.uavs = {{0, 100}, {100, 0}, {100, 100}};
  c.sink = {0, 0};
  c.energy = {10.0, 10.0, 10.0};
  c.horizon = 20;
  c.seed = 1;
  c.tracking.target.x << 20, 20, 10, 15;
  c.tracking.transition = constant_velocity_transition(1.0);
  c.tracking.process_noise = Vector4(2, 2, 0.04, 0.04).asDiagonal();
  c.tracking.sensor = tracking_sensor();
  c.tracking.pi_min = 6.0;
  c.tracking.filter = FilterState{};
  return c;
}

inline SimConfig mapping_config() {
  SimConfig c;
  c.kind = ScenarioKind::Mapping;
  c.params = tracking_params();
  c.params.packet_bits = 1280.0 * 720.0;
  c.params.bandwidth = 6e6;
  c.params.interval = 5.0;
  c.params.sensing_range = 100.0;
  c.params.safety_range = 10.0;
  c.params.v_min = c.params.v_max = 10.0;
  c.params.aggregation_ratio = {0.5};
  c.uavs = {{0, 0}, {100, 0}, {200, 0}};
  c.sink = {1500, 1500};
  c.energy = {1e6, 1e6, 1e6};
  c.horizon = 200;
  c.mapping.region = Region{3000.0, 3000.0, {0, 0}};
  c.mapping.zeta = 0.5;
  return c;
}

// Five UAVs, three types. Node 3 aggregates types 0 and 1, node 5 relays both
// and senses type 2.
inline Topology two_aggregator_topology() {
  Topology t(5, 3);
  t.set_link(0, 1, 0);
  t.set_link(0, 2, 0);
  t.set_link(1, 3, 0);
  t.set_link(2, 3, 0);
  t.set_link(3, 5, 0);
  t.set_link(5, 6, 0);
  t.set_link(0, 2, 1);
  t.set_link(0, 3, 1);
  t.set_link(0, 4, 1);
  t.set_link(2, 3, 1);
  t.set_link(4, 3, 1);
  t.set_link(3, 5, 1);
  t.set_link(5, 6, 1);
  t.set_link(0, 5, 2);
  t.set_link(5, 6, 2);
  return t;
}

inline ScenarioParams three_type_params() {
  ScenarioParams p = tracking_params().with_uniform_types(3, 5.0, 0.7);
  p.n = 5;
  p.bandwidth = 1e6;
  return p;
}

// Random routing instance with n <= max_n UAVs and m <= max_m types.
struct Instance {
  ScenarioParams params;
  FleetGeometry geometry;
  SensorAssignment sensors;
  std::vector<double> budget;
};

inline Instance random_instance(std::mt19937_64& rng, int max_n = 4, int max_m = 2) {
  std::uniform_int_distribution<int> n_dist(1, max_n), m_dist(1, max_m);
  std::uniform_real_distribution<double> coord(-400.0, 400.0), ratio(0.2, 1.0), unit(0.0, 1.0);
  Instance inst;
  const int n = n_dist(rng);
  const int m = m_dist(rng);
  inst.params = tracking_params();
  inst.params.n = n;
  inst.params.sensing_rate.clear();
  inst.params.aggregation_ratio.clear();
  for (int z = 0; z < m; ++z) {
    inst.params.sensing_rate.push_back(std::uniform_int_distribution<int>(1, 6)(rng));
    inst.params.aggregation_ratio.push_back(ratio(rng));
  }
  // Bandwidth between "nothing fits" and "everything fits".
  const double bits = 1024.0 * 6.0;
  inst.params.bandwidth = bits * std::uniform_real_distribution<double>(0.5, 4.0 * n)(rng);
  if (unit(rng) < 0.3) inst.params.path_loss_exponent = 4.0, inst.params.eps_amplifier = 1.3e-15;
  for (int i = 0; i < n; ++i) inst.geometry.uavs.push_back({coord(rng), coord(rng)});
  inst.geometry.sink = {coord(rng), coord(rng)};
  inst.sensors = SensorAssignment(n, m);
  for (int z = 0; z < m; ++z) {
    for (int i = 1; i <= n; ++i)
      if (unit(rng) < 0.5) inst.sensors.set(i, z);
    if (inst.sensors.sensor_count(z) == 0 && unit(rng) < 0.9)
      inst.sensors.set(std::uniform_int_distribution<int>(1, n)(rng), z);
  }
  if (unit(rng) < 0.25) {
    for (int i = 0; i < n; ++i) inst.budget.push_back(std::uniform_real_distribution<double>(0.002, 0.05)(rng));
  }
  return inst;
}

inline bool relative_equal(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace fixtures
