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


#include "aggroute/mapping.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <bit>
#include <stdexcept>

namespace aggroute {

int lane_count(double length, double sensing_range, double zeta) {
  if (!(zeta > 0.0 && zeta <= 1.0)) throw std::invalid_argument("overlap factor must lie in (0, 1]");
  if (!(length > 0.0) || !(sensing_range > 0.0))
    throw std::invalid_argument("region length and sensing range must be positive");
  const double ratio = length / (2.0 * zeta * sensing_range);
  // Treat ratios within rounding noise of an integer as that integer.
  const double nearest = std::round(ratio);
  const double intervals = std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio) ? nearest : std::ceil(ratio);
  return static_cast<int>(intervals) + 1;
}

LanePlan decompose_lanes(const Region& region, double sensing_range, double zeta) {
  if (!(region.width > 0.0)) throw std::invalid_argument("region width must be positive");
  const int count = lane_count(region.length, sensing_range, zeta);
  LanePlan plan;
  plan.zeta = zeta;
  plan.lanes.reserve(static_cast<std::size_t>(count));
  const double spacing = region.length / static_cast<double>(count - 1);
  for (int k = 0; k < count; ++k) {
    const double x = region.origin.x + spacing * k;
    plan.lanes.push_back(Lane{{x, region.origin.y}, {x, region.origin.y + region.width}});
  }
  return plan;
}

std::optional<LaneLeg> next_lane_assignment(int uav, int lanes_completed, int n, const LanePlan& plan) {
  if (uav < 1 || uav > n || lanes_completed < 0) return std::nullopt;
  const long lane = uav + static_cast<long>(lanes_completed) * n;
  if (lane > plan.count()) return std::nullopt;
  const Lane& l = plan.lanes[static_cast<std::size_t>(lane - 1)];
  if (lanes_completed % 2 == 0) return LaneLeg{static_cast<int>(lane), l.bottom, l.top};
  return LaneLeg{static_cast<int>(lane), l.top, l.bottom};
}

double desired_heading(Vec2 from, Vec2 to) {
  if (from == to) throw std::invalid_argument("desired_heading: coincident waypoints");
  return std::atan2(to.y - from.y, to.x - from.x);
}

double cross_track_error(Vec2 position, const LaneLeg& leg) {
  const double dx = leg.to.x - leg.from.x;
  const double dy = leg.to.y - leg.from.y;
  const double len = std::hypot(dx, dy);
  return (dx * (position.y - leg.from.y) - dy * (position.x - leg.from.x)) / len;
}

double along_track(Vec2 position, const LaneLeg& leg) {
  const double dx = leg.to.x - leg.from.x;
  const double dy = leg.to.y - leg.from.y;
  const double len = std::hypot(dx, dy);
  return (dx * (position.x - leg.from.x) + dy * (position.y - leg.from.y)) / len;
}

double wrap_angle(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double a = std::fmod(angle, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  if (a > std::numbers::pi) a -= two_pi;
  return a;
}

double vector_field_heading(Vec2 position, const LaneLeg& leg, const GuidanceParams& guidance) {
  const double lane_heading = desired_heading(leg.from, leg.to);
  const double e = cross_track_error(position, leg);
  if (e == 0.0) return wrap_angle(lane_heading);
  const double sign = e > 0.0 ? 1.0 : -1.0;
  const double magnitude = std::abs(e);
  const double offset = magnitude > guidance.tau ? guidance.chi : guidance.chi * (magnitude / guidance.tau);
  return wrap_angle(lane_heading - sign * offset);
}

namespace {

using Mask = std::uint64_t;

std::vector<Mask> overlap_graph(std::span<const Vec2> positions, double sensing_range,
                                std::span<const bool> active, Mask& vertices) {
  const std::size_t n = positions.size();
  if (n > 64) throw std::invalid_argument("data type assignment supports at most 64 UAVs");
  if (!active.empty() && active.size() != n) throw std::invalid_argument("active mask size differs from UAV count");
  const double limit = 4.0 * sensing_range * sensing_range;
  std::vector<Mask> adj(n, 0);
  vertices = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!active.empty() && !active[i]) continue;
    vertices |= Mask{1} << i;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(vertices >> i & 1u)) continue;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!(vertices >> j & 1u)) continue;
      if (squared_distance(positions[i], positions[j]) <= limit) {
        adj[i] |= Mask{1} << j;
        adj[j] |= Mask{1} << i;
      }
    }
  }
  return adj;
}

void bron_kerbosch(Mask r, Mask p, Mask x, const std::vector<Mask>& adj, std::vector<Mask>& out) {
  if (p == 0 && x == 0) {
    out.push_back(r);
    return;
  }
  const Mask px = p | x;
  const int pivot = std::countr_zero(px);
  Mask candidates = p & ~adj[static_cast<std::size_t>(pivot)];
  while (candidates) {
    const int v = std::countr_zero(candidates);
    const Mask bit = Mask{1} << v;
    candidates &= ~bit;
    bron_kerbosch(r | bit, p & adj[static_cast<std::size_t>(v)], x & adj[static_cast<std::size_t>(v)], adj, out);
    p &= ~bit;
    x |= bit;
  }
}

std::vector<int> members(Mask m) {
  std::vector<int> out;
  while (m) {
    out.push_back(std::countr_zero(m));
    m &= m - 1;
  }
  return out;
}

SensorAssignment from_groups(std::vector<Mask> groups, std::size_t n) {
  std::sort(groups.begin(), groups.end(), [](Mask a, Mask b) { return members(a) < members(b); });
  SensorAssignment out(static_cast<int>(n), static_cast<int>(groups.size()));
  for (std::size_t z = 0; z < groups.size(); ++z)
    for (int i : members(groups[z])) out.set(i + 1, static_cast<int>(z));
  return out;
}

}  // namespace

SensorAssignment data_type_assignment(std::span<const Vec2> positions, double sensing_range,
                                      std::span<const bool> active) {
  Mask vertices = 0;
  const auto adj = overlap_graph(positions, sensing_range, active, vertices);
  std::vector<Mask> cliques;
  if (vertices) bron_kerbosch(0, vertices, 0, adj, cliques);
  return from_groups(std::move(cliques), positions.size());
}

SensorAssignment scenario_assignment(std::span<const Vec2> positions, std::span<const double> order,
                                     double sensing_range, double zeta, std::span<const bool> active) {
  if (order.size() != positions.size()) throw std::invalid_argument("order size differs from UAV count");
  Mask vertices = 0;
  const auto adj = overlap_graph(positions, sensing_range, active, vertices);
  std::vector<Mask> groups;
  Mask seen = 0;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const Mask bit = Mask{1} << i;
    if (!(vertices & bit) || (seen & bit)) continue;
    Mask component = bit;
    Mask frontier = bit;
    while (frontier) {
      const int v = std::countr_zero(frontier);
      frontier &= frontier - 1;
      const Mask fresh = adj[static_cast<std::size_t>(v)] & ~component;
      component |= fresh;
      frontier |= fresh;
    }
    seen |= component;
    std::vector<int> nodes = members(component);
    if (nodes.size() < 3) {
      std::vector<Mask> cliques;
      Mask sub_vertices = component;
      bron_kerbosch(0, sub_vertices, 0, adj, cliques);
      groups.insert(groups.end(), cliques.begin(), cliques.end());
    } else if (zeta >= 0.75) {
      groups.push_back(component);
    } else {
      std::stable_sort(nodes.begin(), nodes.end(), [&](int a, int b) {
        return order[static_cast<std::size_t>(a)] < order[static_cast<std::size_t>(b)];
      });
      for (std::size_t k = 0; k + 1 < nodes.size(); ++k)
        groups.push_back((Mask{1} << nodes[k]) | (Mask{1} << nodes[k + 1]));
    }
  }
  return from_groups(std::move(groups), positions.size());
}

}  // namespace aggroute
