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

// Nodes, links, flows and aggregators of the routing network, together with
// validators for every communication constraint.
//
// Node numbering: 0 is the data source (target or survey area), 1..n are the
// UAVs, n+1 is the base station (sink). Data types are 0-based.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace aggroute {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double squared_distance(Vec2 a, Vec2 b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

double distance(Vec2 a, Vec2 b);

/// Index into the node set {0, 1..n, n+1}.
struct NodeId {
  int index = 0;

  static constexpr NodeId source() { return NodeId{0}; }
  static constexpr NodeId sink(int n) { return NodeId{n + 1}; }
  constexpr bool is_source() const { return index == 0; }
  constexpr bool is_uav(int n) const { return index >= 1 && index <= n; }
  constexpr bool is_sink(int n) const { return index == n + 1; }

  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

/// Physical, energy and protocol constants of a scenario. Energies are in
/// J/bit, the radio amplifier constant in J/bit/m^beta, distances in m.
struct ScenarioParams {
  int n = 0;                              // UAV count
  std::vector<double> sensing_rate;       // packets per interval, per type
  std::vector<double> aggregation_ratio;  // per type, in [0, 1]
  double packet_bits = 0.0;               // L
  double bandwidth = 0.0;                 // B, bits/s
  double interval = 1.0;                  // h, s
  double eps_sense = 0.0;
  double eps_process = 0.0;
  double eps_receive = 0.0;
  double eps_transmit = 0.0;
  double eps_amplifier = 0.0;
  double path_loss_exponent = 2.0;
  double comm_range = 0.0;
  double sensing_range = 0.0;
  double safety_range = 0.0;
  double v_min = 0.0;
  double v_max = 0.0;
  double eps_small = 1e-3;  // lower bound on an active link's rate

  int type_count() const { return static_cast<int>(sensing_rate.size()); }
  double bits_per_interval() const { return bandwidth * interval; }

  /// Throws std::invalid_argument naming the first violated invariant.
  void validate() const;

  /// Same constants with `m` data types sharing one rate and ratio.
  ScenarioParams with_uniform_types(int m, double rate, double ratio) const;
};

/// Per-UAV, per-type sensing flags c_0iz. Rows are UAVs 1..n (stored 0-based).
class SensorAssignment {
 public:
  SensorAssignment() = default;
  SensorAssignment(int n, int m);

  int uav_count() const { return n_; }
  int type_count() const { return m_; }
  bool senses(int uav, int type) const;  // uav in 1..n
  void set(int uav, int type, bool on = true);
  int sensor_count(int type) const;
  bool any() const;

  friend bool operator==(const SensorAssignment&, const SensorAssignment&) = default;

 private:
  int n_ = 0;
  int m_ = 0;
  std::vector<std::uint8_t> flags_;
};

struct Link {
  int from = 0;
  int to = 0;
  int type = 0;

  friend auto operator<=>(const Link&, const Link&) = default;
};

/// Binary link tensor c_ijz over nodes 0..n+1 and types 0..m-1.
class Topology {
 public:
  Topology() = default;
  Topology(int n, int m);

  int uav_count() const { return n_; }
  int type_count() const { return m_; }
  int node_count() const { return n_ + 2; }
  int sink() const { return n_ + 1; }

  bool link(int from, int to, int type) const;
  void set_link(int from, int to, int type, bool on = true);

  bool senses(int uav, int type) const { return link(0, uav, type); }
  SensorAssignment sensors() const;
  void apply_sensors(const SensorAssignment& sensors);

  /// Number of active links of `type` entering `node`, counting the
  /// sensing link from node 0.
  int in_degree(int node, int type) const;
  int out_degree(int node, int type) const;
  /// Target of the unique out-link of `node` for `type`, if any.
  std::optional<int> out_link(int node, int type) const;

  /// Active links sorted by (type, from, to). This order is the
  /// lexicographic link order used for deterministic tie-breaking.
  std::vector<Link> active_links() const;
  int active_link_count() const;

  friend bool operator==(const Topology&, const Topology&) = default;

 private:
  std::size_t offset(int from, int to, int type) const;

  int n_ = 0;
  int m_ = 0;
  std::vector<std::uint8_t> c_;
};

/// True when `a` precedes `b` under (fewest active links, then lexicographic
/// link order).
bool topology_tie_less(const Topology& a, const Topology& b);

/// Aggregator flags a_iz for UAVs 1..n.
class Aggregators {
 public:
  Aggregators() = default;
  Aggregators(int n, int m);

  bool operator()(int uav, int type) const;
  void set(int uav, int type, bool on);
  int uav_count() const { return n_; }
  int type_count() const { return m_; }

  friend bool operator==(const Aggregators&, const Aggregators&) = default;

 private:
  int n_ = 0;
  int m_ = 0;
  std::vector<std::uint8_t> a_;
};

/// Packet rates lambda_ijz per decision interval.
class FlowAssignment {
 public:
  FlowAssignment() = default;
  FlowAssignment(int n, int m);

  double rate(int from, int to, int type) const;
  void set_rate(int from, int to, int type, double value);
  int uav_count() const { return n_; }
  int type_count() const { return m_; }

  /// Packets of `type` arriving at `node` from other UAVs (sensing excluded).
  double uav_inflow(int node, int type) const;
  /// Packets of `type` leaving `node` on any link to 1..n+1.
  double outflow(int node, int type) const;

  friend bool operator==(const FlowAssignment&, const FlowAssignment&) = default;

 private:
  std::size_t offset(int from, int to, int type) const;

  int n_ = 0;
  int m_ = 0;
  std::vector<double> lambda_;
};

struct FleetGeometry {
  std::vector<Vec2> uavs;  // UAV i at uavs[i-1]
  Vec2 source;
  Vec2 sink;

  int uav_count() const { return static_cast<int>(uavs.size()); }
  Vec2 position(int node) const;
  double squared_distance(int a, int b) const;
};

enum class Constraint {
  Dimensions,        // tensor shapes disagree with the scenario
  SourceCoverage,    // every type needs at least one sensing link
  SinkReachability,  // every type needs at least one link into the sink
  SingleOutLink,     // a UAV sends each type on at most one link
  SelfLink,          // no node links to itself
  LinkDomain,        // links into the source or out of the sink
  CommRange,         // UAV pair at or beyond communication range
  SafetyDistance,    // UAV pair closer than the safety distance
  SensingRange,      // sensor farther than the sensing range from node 0
};

std::string to_string(Constraint c);

struct Violation {
  Constraint constraint;
  int node = -1;
  int other = -1;
  int type = -1;
  std::string detail;
};

/// Checks binary structure, source coverage, sink reachability, the single
/// out-link rule and the no-self-link rule. Throws std::invalid_argument on a
/// dimension mismatch with `params`.
std::vector<Violation> validate_link_structure(const Topology& topology,
                                               const ScenarioParams& params);

/// a_iz = 1 iff more than one link of type z (sensing included) enters i.
Aggregators derive_aggregators(const Topology& topology);

/// Checks the linearized aggregator pair
///   (1-n) a + s <= 1,  (1+eps) a - s <= 0,  s = in-degree,
/// for every UAV and type.
bool satisfies_aggregator_linearization(const Topology& topology,
                                        const Aggregators& aggregators,
                                        double eps_small);

enum class FlowFailure { None, Cycle, MissingOutLink, RateBelowMinimum, RateAboveMaximum };

std::string to_string(FlowFailure f);

struct FlowResult {
  std::optional<FlowAssignment> flows;
  FlowFailure failure = FlowFailure::None;
  int node = -1;
  int type = -1;

  explicit operator bool() const { return flows.has_value(); }
};

/// Derives every link rate from the topology, per type, in topological
/// order: a node forwards (sensed + received) packets, scaled by the type's
/// aggregation ratio when it aggregates.
FlowResult propagate_flows(const Topology& topology, const ScenarioParams& params);

struct NodeLoad {
  int node = 0;
  double bits = 0.0;
  bool over_limit = false;
};

/// Per-UAV channel load: L * (packets sent to 1..n+1 + packets received from
/// 1..n), compared with B*h.
std::vector<NodeLoad> check_bandwidth(const Topology& topology,
                                      const FlowAssignment& flows,
                                      const ScenarioParams& params);

bool within_bandwidth(const std::vector<NodeLoad>& loads);

/// Pairwise range and safety checks (when `require_motion_constraints`) and
/// the sensing-range check on active sensing links, on squared distances.
std::vector<Violation> check_geometry(const FleetGeometry& geometry,
                                      const Topology& topology,
                                      const ScenarioParams& params,
                                      bool require_motion_constraints);

}  // namespace aggroute
