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

// Survey-region lane decomposition, lane-following guidance and the
// overlap-driven data-type assignment used by the mapping application.

#include <optional>
#include <span>
#include <vector>

#include "aggroute/model.hpp"

namespace aggroute {

struct Region {
  double length = 0.0;  // T, across the lanes (x)
  double width = 0.0;   // W, along the lanes (y)
  Vec2 origin;          // lower-left corner
};

struct Lane {
  Vec2 bottom;
  Vec2 top;
};

struct LanePlan {
  std::vector<Lane> lanes;  // lane k is lanes[k - 1]
  double zeta = 1.0;
  int count() const { return static_cast<int>(lanes.size()); }
};

/// A lane with its flying direction.
struct LaneLeg {
  int lane = 0;  // 1-based
  Vec2 from;
  Vec2 to;
};

struct GuidanceParams {
  double tau = 20.0;   // transition boundary, m
  double chi = 1.0471975511965976;  // entry angle, rad
  double speed = 10.0;  // m/s
};

/// ceil(T / (2 zeta r_s)) + 1
int lane_count(double length, double sensing_range, double zeta);

/// Lanes run along y and are spaced evenly across x, first and last on the
/// region boundary. Throws std::invalid_argument for zeta outside (0, 1].
LanePlan decompose_lanes(const Region& region, double sensing_range, double zeta);

/// Leg flown by UAV `uav` (1-based) after it completed `lanes_completed` of its
/// own lanes: lane uav + k*n, bottom-to-top for even k, top-to-bottom for odd k.
/// Empty once the lane index passes the plan.
std::optional<LaneLeg> next_lane_assignment(int uav, int lanes_completed, int n, const LanePlan& plan);

/// Heading from `from` toward `to`. Throws for coincident points.
double desired_heading(Vec2 from, Vec2 to);

/// Signed distance from the leg's line, positive to the left of travel.
double cross_track_error(Vec2 position, const LaneLeg& leg);

/// Distance travelled along the leg direction from leg.from.
double along_track(Vec2 position, const LaneLeg& leg);

double wrap_angle(double angle);  // into (-pi, pi]

double vector_field_heading(Vec2 position, const LaneLeg& leg, const GuidanceParams& guidance);

/// One data type per maximal group of mutually overlapping UAVs (pairwise
/// distance at most 2 r_s). Types are ordered by their smallest member list.
/// UAVs with active[i] == false sense nothing; an empty span means all active.
SensorAssignment data_type_assignment(std::span<const Vec2> positions, double sensing_range,
                                      std::span<const bool> active = {});

/// Assignment used by the mapping runs. Groups of two or fewer overlapping
/// UAVs follow data_type_assignment. A connected group of three or more shares
/// one type when zeta >= 0.75, and otherwise gets one type per consecutive pair
/// when ordered by `order` (ties by UAV index).
SensorAssignment scenario_assignment(std::span<const Vec2> positions, std::span<const double> order,
                                     double sensing_range, double zeta,
                                     std::span<const bool> active = {});

}  // namespace aggroute
