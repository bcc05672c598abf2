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


#include "aggroute/energy.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace aggroute {

namespace {

std::string depletion_message(int node, double remaining, double required) {
  std::ostringstream os;
  os << "UAV " << node << " would deplete its energy: has " << remaining << " J, needs "
     << required << " J";
  return os.str();
}

}  // namespace

DepletionError::DepletionError(int node, double remaining, double required)
    : std::runtime_error(depletion_message(node, remaining, required)), node_(node) {}

double transmit_cost_per_bit(double squared_distance, const ScenarioParams& params) {
  const double beta = params.path_loss_exponent;
  double path;
  if (beta == 2.0) {
    path = squared_distance;
  } else if (beta == 4.0) {
    path = squared_distance * squared_distance;
  } else {
    path = std::pow(squared_distance, 0.5 * beta);
  }
  return params.eps_transmit + params.eps_amplifier * path;
}

double sensing_energy(const Topology& topology, const ScenarioParams& params, int node) {
  double packets = 0.0;
  for (int z = 0; z < topology.type_count(); ++z) {
    if (topology.link(0, node, z)) packets += params.sensing_rate[static_cast<std::size_t>(z)];
  }
  return params.eps_sense * params.packet_bits * packets;
}

double processing_energy(const Topology& topology, const Aggregators& aggregators,
                         const FlowAssignment& flows, const ScenarioParams& params, int node) {
  const int n = topology.uav_count();
  double packets = 0.0;
  for (int z = 0; z < topology.type_count(); ++z) {
    if (!aggregators(node, z)) continue;
    if (topology.link(0, node, z)) packets += params.sensing_rate[static_cast<std::size_t>(z)];
    for (int j = 1; j <= n; ++j) {
      if (topology.link(j, node, z)) packets += flows.rate(j, node, z);
    }
  }
  return params.eps_process * params.packet_bits * packets;
}

double processing_energy(const Topology& topology, const FlowAssignment& flows,
                         const ScenarioParams& params, int node) {
  return processing_energy(topology, derive_aggregators(topology), flows, params, node);
}

double receiving_energy(const FlowAssignment& flows, const Topology& topology,
                        const ScenarioParams& params, int node) {
  const int n = topology.uav_count();
  double packets = 0.0;
  for (int z = 0; z < topology.type_count(); ++z) {
    for (int j = 1; j <= n; ++j) {
      if (topology.link(j, node, z)) packets += flows.rate(j, node, z);
    }
  }
  return params.eps_receive * params.packet_bits * packets;
}

double transmitting_energy(const FlowAssignment& flows, const Topology& topology,
                           const FleetGeometry& geometry, const ScenarioParams& params,
                           int node) {
  const int n = topology.uav_count();
  double joules = 0.0;
  for (int z = 0; z < topology.type_count(); ++z) {
    for (int j = 1; j <= n + 1; ++j) {
      if (!topology.link(node, j, z)) continue;
      const double per_bit = transmit_cost_per_bit(geometry.squared_distance(node, j), params);
      joules += per_bit * flows.rate(node, j, z) * params.packet_bits;
    }
  }
  return joules;
}

EnergyBreakdown node_total(double sensing, double processing, double receiving,
                           double transmitting) {
  return EnergyBreakdown{sensing, processing, receiving, transmitting,
                         sensing + processing + receiving + transmitting};
}

EnergyBreakdown node_energy(const Topology& topology, const Aggregators& aggregators,
                            const FlowAssignment& flows, const FleetGeometry& geometry,
                            const ScenarioParams& params, int node) {
  return node_total(sensing_energy(topology, params, node),
                    processing_energy(topology, aggregators, flows, params, node),
                    receiving_energy(flows, topology, params, node),
                    transmitting_energy(flows, topology, geometry, params, node));
}

std::vector<EnergyBreakdown> evaluate_energy(const Topology& topology,
                                             const FlowAssignment& flows,
                                             const FleetGeometry& geometry,
                                             const ScenarioParams& params) {
  const Aggregators aggregators = derive_aggregators(topology);
  std::vector<EnergyBreakdown> out;
  out.reserve(static_cast<std::size_t>(topology.uav_count()));
  for (int i = 1; i <= topology.uav_count(); ++i)
    out.push_back(node_energy(topology, aggregators, flows, geometry, params, i));
  return out;
}

double total_energy(const std::vector<EnergyBreakdown>& per_node) {
  double sum = 0.0;
  for (const auto& b : per_node) sum += b.total;
  return sum;
}

EnergyState apply_energy_update(const EnergyState& state,
                                const std::vector<EnergyBreakdown>& per_node) {
  if (state.e.size() != per_node.size())
    throw std::invalid_argument("energy state and breakdown sizes differ");
  EnergyState next = state;
  for (std::size_t i = 0; i < per_node.size(); ++i) {
    const double remaining = state.e[i] - per_node[i].total;
    if (remaining < 0.0)
      throw DepletionError(static_cast<int>(i) + 1, state.e[i], per_node[i].total);
    next.e[i] = remaining;
  }
  return next;
}

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

EnergyLedger::EnergyLedger(std::vector<double> initial)
    : initial_(std::move(initial)), consumed_(initial_.size()), stored_(initial_) {}

void EnergyLedger::charge(const std::vector<EnergyBreakdown>& per_node) {
  if (per_node.size() != stored_.size())
    throw std::invalid_argument("energy state and breakdown sizes differ");
  for (std::size_t i = 0; i < per_node.size(); ++i) {
    if (stored_[i] - per_node[i].total < 0.0)
      throw DepletionError(static_cast<int>(i) + 1, stored_[i], per_node[i].total);
  }
  for (std::size_t i = 0; i < per_node.size(); ++i) {
    consumed_[i].add(per_node[i].total);
    stored_[i] = initial_[i] - consumed_[i].value();
  }
}

}  // namespace aggroute
