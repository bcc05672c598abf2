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


#include "aggroute/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace aggroute {

double distance(Vec2 a, Vec2 b) { return std::sqrt(squared_distance(a, b)); }

void ScenarioParams::validate() const {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("invalid scenario parameters: " + what);
  };
  if (n < 1) fail("n must be at least 1");
  if (sensing_rate.size() != aggregation_ratio.size())
    fail("sensing_rate and aggregation_ratio need one entry per data type");
  if (packet_bits <= 0.0) fail("packet length must be positive");
  if (bandwidth <= 0.0) fail("bandwidth must be positive");
  if (interval <= 0.0) fail("decision interval must be positive");
  for (double e : {eps_sense, eps_process, eps_receive, eps_transmit, eps_amplifier}) {
    if (!(e >= 0.0)) fail("energy constants must be non-negative");
  }
  for (double g : aggregation_ratio) {
    if (!(g >= 0.0 && g <= 1.0)) fail("aggregation ratio must lie in [0, 1]");
  }
  if (!(path_loss_exponent >= 2.0)) fail("path-loss exponent must be >= 2");
  if (!(v_min > 0.0 && v_min <= v_max)) fail("speed bounds need 0 < v_min <= v_max");
  if (!(safety_range < comm_range)) fail("safety distance must be below communication range");
  if (!(sensing_range > 0.0)) fail("sensing range must be positive");
  if (!(eps_small > 0.0)) fail("eps_small must be positive");
  for (double rate : sensing_rate) {
    if (!(eps_small < rate)) fail("eps_small must be below every sensing rate");
  }
}

ScenarioParams ScenarioParams::with_uniform_types(int m, double rate, double ratio) const {
  ScenarioParams out = *this;
  out.sensing_rate.assign(static_cast<std::size_t>(m), rate);
  out.aggregation_ratio.assign(static_cast<std::size_t>(m), ratio);
  return out;
}

// ---------------------------------------------------------------------------

SensorAssignment::SensorAssignment(int n, int m)
    : n_(n), m_(m), flags_(static_cast<std::size_t>(n * m), 0) {}

bool SensorAssignment::senses(int uav, int type) const {
  return flags_[static_cast<std::size_t>((uav - 1) * m_ + type)] != 0;
}

void SensorAssignment::set(int uav, int type, bool on) {
  if (uav < 1 || uav > n_ || type < 0 || type >= m_)
    throw std::out_of_range("sensor assignment index out of range");
  flags_[static_cast<std::size_t>((uav - 1) * m_ + type)] = on ? 1 : 0;
}

int SensorAssignment::sensor_count(int type) const {
  int count = 0;
  for (int i = 1; i <= n_; ++i) count += senses(i, type) ? 1 : 0;
  return count;
}

bool SensorAssignment::any() const {
  return std::any_of(flags_.begin(), flags_.end(), [](auto f) { return f != 0; });
}

// ---------------------------------------------------------------------------

Topology::Topology(int n, int m)
    : n_(n), m_(m), c_(static_cast<std::size_t>((n + 2) * (n + 2) * m), 0) {}

std::size_t Topology::offset(int from, int to, int type) const {
  if (from < 0 || from > n_ + 1 || to < 0 || to > n_ + 1 || type < 0 || type >= m_)
    throw std::out_of_range("link index out of range");
  return static_cast<std::size_t>((type * (n_ + 2) + from) * (n_ + 2) + to);
}

bool Topology::link(int from, int to, int type) const { return c_[offset(from, to, type)] != 0; }

void Topology::set_link(int from, int to, int type, bool on) {
  c_[offset(from, to, type)] = on ? 1 : 0;
}

SensorAssignment Topology::sensors() const {
  SensorAssignment s(n_, m_);
  for (int i = 1; i <= n_; ++i)
    for (int z = 0; z < m_; ++z) s.set(i, z, senses(i, z));
  return s;
}

void Topology::apply_sensors(const SensorAssignment& sensors) {
  if (sensors.uav_count() != n_ || sensors.type_count() != m_)
    throw std::invalid_argument("sensor assignment shape does not match topology");
  for (int i = 1; i <= n_; ++i)
    for (int z = 0; z < m_; ++z) set_link(0, i, z, sensors.senses(i, z));
}

int Topology::in_degree(int node, int type) const {
  int count = 0;
  for (int j = 0; j <= n_; ++j) count += link(j, node, type) ? 1 : 0;
  return count;
}

int Topology::out_degree(int node, int type) const {
  int count = 0;
  for (int j = 1; j <= n_ + 1; ++j) count += link(node, j, type) ? 1 : 0;
  return count;
}

std::optional<int> Topology::out_link(int node, int type) const {
  for (int j = 1; j <= n_ + 1; ++j) {
    if (link(node, j, type)) return j;
  }
  return std::nullopt;
}

std::vector<Link> Topology::active_links() const {
  std::vector<Link> links;
  for (int z = 0; z < m_; ++z)
    for (int i = 0; i < n_ + 2; ++i)
      for (int j = 0; j < n_ + 2; ++j)
        if (link(i, j, z)) links.push_back(Link{i, j, z});
  return links;
}

int Topology::active_link_count() const {
  return static_cast<int>(std::count_if(c_.begin(), c_.end(), [](auto c) { return c != 0; }));
}

bool topology_tie_less(const Topology& a, const Topology& b) {
  const int ca = a.active_link_count();
  const int cb = b.active_link_count();
  if (ca != cb) return ca < cb;
  const auto la = a.active_links();
  const auto lb = b.active_links();
  return std::lexicographical_compare(la.begin(), la.end(), lb.begin(), lb.end());
}

// ---------------------------------------------------------------------------

Aggregators::Aggregators(int n, int m)
    : n_(n), m_(m), a_(static_cast<std::size_t>(n * m), 0) {}

bool Aggregators::operator()(int uav, int type) const {
  return a_[static_cast<std::size_t>((uav - 1) * m_ + type)] != 0;
}

void Aggregators::set(int uav, int type, bool on) {
  a_[static_cast<std::size_t>((uav - 1) * m_ + type)] = on ? 1 : 0;
}

// ---------------------------------------------------------------------------

FlowAssignment::FlowAssignment(int n, int m)
    : n_(n), m_(m), lambda_(static_cast<std::size_t>((n + 2) * (n + 2) * m), 0.0) {}

std::size_t FlowAssignment::offset(int from, int to, int type) const {
  return static_cast<std::size_t>((type * (n_ + 2) + from) * (n_ + 2) + to);
}

double FlowAssignment::rate(int from, int to, int type) const {
  return lambda_[offset(from, to, type)];
}

void FlowAssignment::set_rate(int from, int to, int type, double value) {
  lambda_[offset(from, to, type)] = value;
}

double FlowAssignment::uav_inflow(int node, int type) const {
  double sum = 0.0;
  for (int j = 1; j <= n_; ++j) sum += rate(j, node, type);
  return sum;
}

double FlowAssignment::outflow(int node, int type) const {
  double sum = 0.0;
  for (int j = 1; j <= n_ + 1; ++j) sum += rate(node, j, type);
  return sum;
}

// ---------------------------------------------------------------------------

Vec2 FleetGeometry::position(int node) const {
  if (node == 0) return source;
  if (node == uav_count() + 1) return sink;
  if (node < 0 || node > uav_count()) throw std::out_of_range("node outside fleet geometry");
  return uavs[static_cast<std::size_t>(node - 1)];
}

double FleetGeometry::squared_distance(int a, int b) const {
  return aggroute::squared_distance(position(a), position(b));
}

// ---------------------------------------------------------------------------

std::string to_string(Constraint c) {
  switch (c) {
    case Constraint::Dimensions: return "dimensions";
    case Constraint::SourceCoverage: return "source-coverage";
    case Constraint::SinkReachability: return "sink-reachability";
    case Constraint::SingleOutLink: return "single-out-link";
    case Constraint::SelfLink: return "self-link";
    case Constraint::LinkDomain: return "link-domain";
    case Constraint::CommRange: return "comm-range";
    case Constraint::SafetyDistance: return "safety-distance";
    case Constraint::SensingRange: return "sensing-range";
  }
  return "unknown";
}

std::string to_string(FlowFailure f) {
  switch (f) {
    case FlowFailure::None: return "none";
    case FlowFailure::Cycle: return "cycle";
    case FlowFailure::MissingOutLink: return "missing-out-link";
    case FlowFailure::RateBelowMinimum: return "rate-below-minimum";
    case FlowFailure::RateAboveMaximum: return "rate-above-maximum";
  }
  return "unknown";
}

namespace {

void require_dimensions(const Topology& topology, const ScenarioParams& params) {
  if (topology.uav_count() != params.n || topology.type_count() != params.type_count()) {
    std::ostringstream os;
    os << "topology is " << topology.uav_count() << " UAVs x " << topology.type_count()
       << " types but scenario has " << params.n << " x " << params.type_count();
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

std::vector<Violation> validate_link_structure(const Topology& topology,
                                               const ScenarioParams& params) {
  require_dimensions(topology, params);
  const int n = topology.uav_count();
  const int sink = topology.sink();
  std::vector<Violation> out;

  for (int z = 0; z < topology.type_count(); ++z) {
    for (int i = 0; i <= sink; ++i) {
      if (topology.link(i, i, z))
        out.push_back({Constraint::SelfLink, i, i, z, "node links to itself"});
    }
    int sensing = 0;
    int into_sink = 0;
    for (int i = 1; i <= n; ++i) {
      sensing += topology.link(0, i, z) ? 1 : 0;
      into_sink += topology.link(i, sink, z) ? 1 : 0;
    }
    if (sensing < 1)
      out.push_back({Constraint::SourceCoverage, 0, -1, z, "no sensing link for type"});
    if (into_sink < 1)
      out.push_back({Constraint::SinkReachability, sink, -1, z, "no link into the sink for type"});
    for (int i = 1; i <= n; ++i) {
      if (topology.out_degree(i, z) > 1)
        out.push_back({Constraint::SingleOutLink, i, -1, z, "more than one out-link for type"});
    }
    for (int i = 0; i <= sink; ++i) {
      if (i != 0 && topology.link(i, 0, z))
        out.push_back({Constraint::LinkDomain, i, 0, z, "link into the source"});
      if (i != sink && topology.link(sink, i, z))
        out.push_back({Constraint::LinkDomain, sink, i, z, "link out of the sink"});
    }
    if (topology.link(0, sink, z))
      out.push_back({Constraint::LinkDomain, 0, sink, z, "source linked straight to sink"});
  }
  return out;
}

Aggregators derive_aggregators(const Topology& topology) {
  Aggregators a(topology.uav_count(), topology.type_count());
  for (int i = 1; i <= topology.uav_count(); ++i)
    for (int z = 0; z < topology.type_count(); ++z) a.set(i, z, topology.in_degree(i, z) > 1);
  return a;
}

bool satisfies_aggregator_linearization(const Topology& topology,
                                        const Aggregators& aggregators,
                                        double eps_small) {
  const int n = topology.uav_count();
  for (int i = 1; i <= n; ++i) {
    for (int z = 0; z < topology.type_count(); ++z) {
      const double a = aggregators(i, z) ? 1.0 : 0.0;
      const double s = topology.in_degree(i, z);
      if ((1.0 - n) * a + s > 1.0) return false;
      if ((1.0 + eps_small) * a - s > 0.0) return false;
    }
  }
  return true;
}

FlowResult propagate_flows(const Topology& topology, const ScenarioParams& params) {
  require_dimensions(topology, params);
  const int n = topology.uav_count();
  const int m = topology.type_count();
  const int sink = n + 1;
  const Aggregators aggregators = derive_aggregators(topology);

  FlowResult result;
  FlowAssignment flows(n, m);
  std::vector<double> inflow(static_cast<std::size_t>(n + 2));
  std::vector<int> pending(static_cast<std::size_t>(n + 2));
  std::vector<int> ready;

  for (int z = 0; z < m; ++z) {
    const double rate = params.sensing_rate[static_cast<std::size_t>(z)];
    const double gamma = params.aggregation_ratio[static_cast<std::size_t>(z)];
    int sensors = 0;
    for (int i = 1; i <= n; ++i) {
      if (topology.out_degree(i, z) > 1)
        throw std::invalid_argument("propagate_flows needs at most one out-link per node and type");
      inflow[static_cast<std::size_t>(i)] = 0.0;
      pending[static_cast<std::size_t>(i)] = 0;
      if (topology.link(0, i, z)) {
        ++sensors;
        flows.set_rate(0, i, z, rate);
        inflow[static_cast<std::size_t>(i)] = rate;
      }
    }
    const double max_rate = sensors * rate;

    for (int i = 1; i <= n; ++i) {
      const auto j = topology.out_link(i, z);
      if (j && *j != sink) ++pending[static_cast<std::size_t>(*j)];
    }
    ready.clear();
    for (int i = n; i >= 1; --i) {
      if (pending[static_cast<std::size_t>(i)] == 0) ready.push_back(i);
    }

    int processed = 0;
    while (!ready.empty()) {
      // Lowest index first keeps the processing order deterministic.
      const auto it = std::min_element(ready.begin(), ready.end());
      const int i = *it;
      ready.erase(it);
      ++processed;

      const double in = inflow[static_cast<std::size_t>(i)];
      const auto j = topology.out_link(i, z);
      if (!j) {
        if (in > 0.0) {
          result.failure = FlowFailure::MissingOutLink;
          result.node = i;
          result.type = z;
          return result;
        }
        continue;
      }
      const double out = in * (1.0 + (gamma - 1.0) * (aggregators(i, z) ? 1.0 : 0.0));
      if (out < params.eps_small) {
        result.failure = FlowFailure::RateBelowMinimum;
        result.node = i;
        result.type = z;
        return result;
      }
      if (out > max_rate * (1.0 + 1e-12)) {
        result.failure = FlowFailure::RateAboveMaximum;
        result.node = i;
        result.type = z;
        return result;
      }
      flows.set_rate(i, *j, z, out);
      if (*j != sink) {
        inflow[static_cast<std::size_t>(*j)] += out;
        if (--pending[static_cast<std::size_t>(*j)] == 0) ready.push_back(*j);
      }
    }
    if (processed < n) {
      result.failure = FlowFailure::Cycle;
      result.type = z;
      for (int i = 1; i <= n; ++i) {
        if (pending[static_cast<std::size_t>(i)] > 0) {
          result.node = i;
          break;
        }
      }
      return result;
    }
  }
  result.flows = std::move(flows);
  return result;
}

std::vector<NodeLoad> check_bandwidth(const Topology& topology, const FlowAssignment& flows,
                                      const ScenarioParams& params) {
  const int n = topology.uav_count();
  const double limit = params.bits_per_interval();
  std::vector<NodeLoad> loads;
  loads.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    double packets = 0.0;
    for (int z = 0; z < topology.type_count(); ++z) {
      for (int j = 1; j <= n + 1; ++j) {
        if (topology.link(i, j, z)) packets += flows.rate(i, j, z);
      }
      for (int j = 1; j <= n; ++j) {
        if (topology.link(j, i, z)) packets += flows.rate(j, i, z);
      }
    }
    const double bits = packets * params.packet_bits;
    loads.push_back(NodeLoad{i, bits, bits > limit});
  }
  return loads;
}

bool within_bandwidth(const std::vector<NodeLoad>& loads) {
  return std::none_of(loads.begin(), loads.end(), [](const NodeLoad& l) { return l.over_limit; });
}

std::vector<Violation> check_geometry(const FleetGeometry& geometry, const Topology& topology,
                                      const ScenarioParams& params,
                                      bool require_motion_constraints) {
  const int n = geometry.uav_count();
  if (topology.uav_count() != n)
    throw std::invalid_argument("geometry and topology disagree on UAV count");
  std::vector<Violation> out;
  if (require_motion_constraints) {
    const double rc2 = params.comm_range * params.comm_range;
    const double rsafe2 = params.safety_range * params.safety_range;
    for (int i = 1; i <= n; ++i) {
      for (int j = i + 1; j <= n; ++j) {
        const double d2 = geometry.squared_distance(i, j);
        if (d2 >= rc2)
          out.push_back({Constraint::CommRange, i, j, -1, "pair at or beyond communication range"});
        if (d2 < rsafe2)
          out.push_back({Constraint::SafetyDistance, i, j, -1, "pair closer than safety distance"});
      }
    }
  }
  const double rs2 = params.sensing_range * params.sensing_range;
  for (int j = 1; j <= n; ++j) {
    const double d2 = geometry.squared_distance(0, j);
    for (int z = 0; z < topology.type_count(); ++z) {
      if (topology.link(0, j, z) && d2 - rs2 > 0.0)
        out.push_back({Constraint::SensingRange, j, 0, z, "sensor beyond sensing range"});
    }
  }
  return out;
}

}  // namespace aggroute
