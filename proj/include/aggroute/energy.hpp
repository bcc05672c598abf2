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

#include <stdexcept>
#include <string>
#include <vector>

#include "aggroute/model.hpp"

namespace aggroute {

/// Energy spent by one UAV in one decision interval, in joules.
struct EnergyBreakdown {
  double sensing = 0.0;
  double processing = 0.0;
  double receiving = 0.0;
  double transmitting = 0.0;
  double total = 0.0;
};

/// Stored energy per UAV (UAV i at e[i-1]).
struct EnergyState {
  std::vector<double> e;
};

class DepletionError : public std::runtime_error {
 public:
  DepletionError(int node, double remaining, double required);
  int node() const { return node_; }

 private:
  int node_;
};

/// Per-bit radio cost eps_t + eps_rf * d^beta, from a squared distance.
double transmit_cost_per_bit(double squared_distance, const ScenarioParams& params);

double sensing_energy(const Topology& topology, const ScenarioParams& params, int node);

// Own sensed bits are processed only when the node aggregates that type.
double processing_energy(const Topology& topology, const Aggregators& aggregators,
                         const FlowAssignment& flows, const ScenarioParams& params, int node);
double processing_energy(const Topology& topology, const FlowAssignment& flows,
                         const ScenarioParams& params, int node);

// Sensing in-links are not received over the radio.
double receiving_energy(const FlowAssignment& flows, const Topology& topology,
                        const ScenarioParams& params, int node);

double transmitting_energy(const FlowAssignment& flows, const Topology& topology,
                           const FleetGeometry& geometry, const ScenarioParams& params,
                           int node);

EnergyBreakdown node_total(double sensing, double processing, double receiving,
                           double transmitting);

EnergyBreakdown node_energy(const Topology& topology, const Aggregators& aggregators,
                            const FlowAssignment& flows, const FleetGeometry& geometry,
                            const ScenarioParams& params, int node);

/// Breakdown for UAVs 1..n. The base station is not accounted.
std::vector<EnergyBreakdown> evaluate_energy(const Topology& topology,
                                             const FlowAssignment& flows,
                                             const FleetGeometry& geometry,
                                             const ScenarioParams& params);

double total_energy(const std::vector<EnergyBreakdown>& per_node);

/// e_i - E_i for every UAV. Throws DepletionError naming the first UAV whose
/// stored energy would go negative; the state is left untouched in that case.
EnergyState apply_energy_update(const EnergyState& state,
                                const std::vector<EnergyBreakdown>& per_node);

/// Running sum with Neumaier compensation.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// Stored energy over a run, kept as initial minus a compensated running total
/// of consumption so that rounding does not build up round after round.
class EnergyLedger {
 public:
  explicit EnergyLedger(std::vector<double> initial);

  /// Charges one round. Throws DepletionError, leaving the ledger unchanged,
  /// if any UAV would go negative.
  void charge(const std::vector<EnergyBreakdown>& per_node);

  const std::vector<double>& stored() const { return stored_; }
  double consumed(std::size_t i) const { return consumed_[i].value(); }

 private:
  std::vector<double> initial_;
  std::vector<CompensatedSum> consumed_;
  std::vector<double> stored_;
};

}  // namespace aggroute
