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


#include "aggroute/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <stdexcept>

namespace aggroute {

void SimConfig::validate() const {
  params.validate();
  auto fail = [](const std::string& what) { throw std::invalid_argument("invalid simulation config: " + what); };
  if (horizon < 1) fail("horizon must be at least 1");
  if (static_cast<int>(uavs.size()) != params.n) fail("need one initial position per UAV");
  if (static_cast<int>(energy.size()) != params.n) fail("need one initial energy per UAV");
  if (params.sensing_rate.empty()) fail("at least one data type is required");
  if (kind == ScenarioKind::Tracking) {
    if (params.type_count() != 1) fail("tracking uses exactly one data type");
    if (grid.headings < 1 || grid.speeds < 1) fail("grid needs at least one heading and one speed");
    if (static_cast<int>(uavs.size()) == params.n) {
      FleetGeometry start{uavs, tracking.target.position(), sink};
      const auto v = check_geometry(start, Topology(params.n, 1), params, true);
      if (!v.empty()) fail("initial positions violate " + to_string(v.front().constraint));
    }
  } else {
    if (!(mapping.zeta > 0.0 && mapping.zeta <= 1.0)) fail("overlap factor must lie in (0, 1]");
    if (!(mapping.region.length > 0.0 && mapping.region.width > 0.0)) fail("region must have positive size");
    if (!(mapping.guidance.tau > 0.0)) fail("transition boundary must be positive");
    if (!(mapping.guidance.speed > 0.0)) fail("cruise speed must be positive");
    if (!(mapping.substep > 0.0) || mapping.substep > params.interval) fail("substep must lie in (0, interval]");
  }
}

namespace {

unsigned sensor_mask(const Topology& topology) {
  unsigned mask = 0;
  for (int i = 1; i <= topology.uav_count(); ++i)
    if (topology.senses(i, 0)) mask |= 1u << (i - 1);
  return mask;
}

SensorAssignment sensors_of(const Topology& topology) {
  SensorAssignment s(topology.uav_count(), topology.type_count());
  for (int i = 1; i <= topology.uav_count(); ++i)
    for (int z = 0; z < topology.type_count(); ++z)
      if (topology.senses(i, z)) s.set(i, z);
  return s;
}

void set_normalized(RoundRecord& r) {
  if (r.plan && r.baseline && r.baseline->objective > 0.0) {
    r.normalized = r.fallback ? 1.0 : r.plan->objective / r.baseline->objective;
  }
}

// Charges the executed plan's energy. Returns false (with the reason filled
// in) when a UAV would run out.
bool account(EnergyLedger& ledger, const RoundRecord& record, std::string& reason) {
  if (!record.plan) return true;
  try {
    ledger.charge(record.plan->per_node);
  } catch (const DepletionError& e) {
    reason = std::string("depleted: ") + e.what();
    return false;
  }
  return true;
}

}  // namespace

SimResult run_tracking_sim(const SimConfig& config) {
  config.validate();
  const ScenarioParams& params = config.params;
  const TrackingSetup& setup = config.tracking;
  const int n = params.n;
  std::mt19937_64 rng(config.seed);

  SimResult result;
  result.initial_energy = config.energy;
  EnergyLedger ledger(config.energy);
  const std::vector<double>& energy = ledger.stored();
  std::vector<Vec2> uavs = config.uavs;
  TargetState truth = setup.target;
  FilterState filter = setup.filter;
  result.stop_reason = "horizon";

  for (int k = 1; k <= config.horizon; ++k) {
    RoundRecord rec;
    rec.round = k;
    const Vec2 predicted = filter.position();

    TrackingStepInput input;
    input.uavs = uavs;
    input.energy = energy;
    input.sink = config.sink;
    input.predicted_target = predicted;
    input.sensor = setup.sensor;
    input.pi_min = setup.pi_min;
    SolveReport report = solve_tracking_step(input, params, config.grid);

    std::vector<Vec2> next(static_cast<std::size_t>(n));
    std::vector<Control> controls;
    if (report.plan) {
      rec.plan = std::move(report.plan);
      next = rec.plan->geometry.uavs;
    } else {
      rec.fallback = true;
      rec.note = report.infeasible_reason;
      controls = fallback_controls(input, params, config.grid);
      for (int i = 0; i < n; ++i)
        next[static_cast<std::size_t>(i)] = advance(uavs[static_cast<std::size_t>(i)],
                                                    controls[static_cast<std::size_t>(i)], params.interval);
    }

    FleetGeometry geometry{next, predicted, config.sink};
    const SensorAssignment in_range = in_range_sensors(next, predicted, params);
    if (in_range.any()) {
      PlanChecks checks;
      checks.bandwidth = !rec.fallback;
      checks.sensing_range = true;
      SolveReport base = baseline_plan(geometry, in_range, params, checks);
      if (base.plan) {
        if (rec.fallback) {
          base.plan->controls = controls;
          rec.plan = base.plan;
        }
        rec.baseline = std::move(base.plan);
      } else if (rec.note.empty()) {
        rec.note = "baseline infeasible: " + base.infeasible_reason;
      }
    } else if (rec.fallback) {
      rec.note += "; no UAV within sensing range of the predicted target";
    }
    set_normalized(rec);

    // Move, let the target evolve, sense and fuse.
    uavs = next;
    truth = target_step(truth, setup.transition, setup.process_noise, rng);
    std::vector<Measurement> measurements;
    if (rec.plan) {
      rec.sensors = sensors_of(rec.plan->topology);
      const unsigned mask = sensor_mask(rec.plan->topology);
      rec.pi = sensor_set_information(uavs, mask, predicted, setup.sensor);
      for (int i = 1; i <= n; ++i) {
        if (!(mask & (1u << (i - 1)))) continue;
        const double d = sensing_distance(uavs[static_cast<std::size_t>(i - 1)], truth.position());
        measurements.push_back(measure(truth, setup.sensor, d, rng));
      }
    } else {
      rec.sensors = SensorAssignment(n, 1);
    }
    filter = filter_update_multi(filter, setup.sensor.H, measurements);
    rec.estimate = filter.estimate();
    rec.truth = truth.x;

    std::string reason;
    const bool alive = account(ledger, rec, reason);
    rec.positions = uavs;
    rec.energy = energy;
    if (!alive) {
      result.stop_reason = reason;
      break;
    }
    result.rounds.push_back(std::move(rec));
    filter = filter_predict(filter, setup.transition, setup.process_noise);
  }
  result.final_energy = energy;
  return result;
}

SimResult run_mapping_sim(const SimConfig& config) {
  config.validate();
  const ScenarioParams& base_params = config.params;
  const MappingSetup& setup = config.mapping;
  const int n = base_params.n;
  const auto un = static_cast<std::size_t>(n);
  const LanePlan lanes = decompose_lanes(setup.region, base_params.sensing_range, setup.zeta);
  const double rate = base_params.sensing_rate[0];
  const Vec2 centre{setup.region.origin.x + setup.region.length / 2.0,
                    setup.region.origin.y + setup.region.width / 2.0};
  const int substeps = std::max(1, static_cast<int>(std::lround(base_params.interval / setup.substep)));
  const double dt = base_params.interval / substeps;

  SimResult result;
  result.initial_energy = config.energy;
  EnergyLedger ledger(config.energy);
  const std::vector<double>& energy = ledger.stored();
  std::vector<Vec2> uavs = config.uavs;
  std::vector<int> completed(un, 0);
  std::vector<std::optional<LaneLeg>> legs(un);
  for (int i = 1; i <= n; ++i) legs[static_cast<std::size_t>(i - 1)] = next_lane_assignment(i, 0, n, lanes);
  result.stop_reason = "horizon";

  for (int k = 1; k <= config.horizon; ++k) {
    if (std::none_of(legs.begin(), legs.end(), [](const auto& l) { return l.has_value(); })) {
      result.stop_reason = "completed";
      break;
    }
    RoundRecord rec;
    rec.round = k;

    std::vector<bool> productive(un, false);
    for (int s = 0; s < substeps; ++s) {
      for (std::size_t i = 0; i < un; ++i) {
        if (!legs[i]) continue;
        const LaneLeg& leg = *legs[i];
        const double heading = vector_field_heading(uavs[i], leg, setup.guidance);
        const double step = setup.guidance.speed * dt;
        uavs[i] = Vec2{uavs[i].x + step * std::cos(heading), uavs[i].y + step * std::sin(heading)};
        const double along = along_track(uavs[i], leg);
        const double length = distance(leg.from, leg.to);
        if (std::abs(cross_track_error(uavs[i], leg)) <= setup.guidance.tau && along >= 0.0 && along <= length)
          productive[i] = true;
        if (along >= length) {
          ++completed[i];
          legs[i] = next_lane_assignment(static_cast<int>(i) + 1, completed[i], n, lanes);
        }
      }
    }

    std::vector<double> order(un);
    for (std::size_t i = 0; i < un; ++i) order[i] = uavs[i].x;
    std::unique_ptr<bool[]> active(new bool[un]);
    for (std::size_t i = 0; i < un; ++i) active[i] = productive[i];
    rec.sensors = scenario_assignment(uavs, order, base_params.sensing_range, setup.zeta,
                                      std::span<const bool>(active.get(), un));

    const int m = rec.sensors.type_count();
    if (m == 0) {
      rec.note = "no UAV produced sensing data";
    } else {
      const ScenarioParams params = base_params.with_uniform_types(m, rate, setup.zeta);
      FleetGeometry geometry{uavs, centre, config.sink};
      SolveReport report = solve_routing(geometry, rec.sensors, params, energy);
      PlanChecks checks;
      checks.bandwidth = report.plan.has_value();
      SolveReport base = baseline_plan(geometry, rec.sensors, params, checks);
      if (report.plan) {
        rec.plan = std::move(report.plan);
      } else {
        rec.fallback = true;
        rec.note = report.infeasible_reason;
        rec.plan = base.plan;
      }
      rec.baseline = std::move(base.plan);
      if (!rec.baseline && rec.note.empty()) rec.note = "baseline infeasible: " + base.infeasible_reason;
      set_normalized(rec);
    }

    std::string reason;
    const bool alive = account(ledger, rec, reason);
    rec.positions = uavs;
    rec.energy = energy;
    if (!alive) {
      result.stop_reason = reason;
      break;
    }
    result.rounds.push_back(std::move(rec));
  }
  if (result.stop_reason == "horizon" &&
      std::none_of(legs.begin(), legs.end(), [](const auto& l) { return l.has_value(); }))
    result.stop_reason = "completed";
  result.final_energy = energy;
  return result;
}

SimResult run_sim(const SimConfig& config) {
  return config.kind == ScenarioKind::Tracking ? run_tracking_sim(config) : run_mapping_sim(config);
}

NormalizedSeries normalized_energy_series(const std::vector<RoundRecord>& records) {
  NormalizedSeries out;
  double sum = 0.0;
  std::size_t count = 0;
  out.min = std::numeric_limits<double>::infinity();
  out.max = -std::numeric_limits<double>::infinity();
  for (const RoundRecord& r : records) {
    out.values.push_back(r.normalized);
    if (!r.normalized) {
      ++out.excluded;
      continue;
    }
    sum += *r.normalized;
    ++count;
    out.min = std::min(out.min, *r.normalized);
    out.max = std::max(out.max, *r.normalized);
  }
  if (count == 0) {
    out.min = out.max = out.mean = std::numeric_limits<double>::quiet_NaN();
  } else {
    out.mean = sum / static_cast<double>(count);
  }
  return out;
}

std::vector<std::vector<bool>> aggregator_roles(const std::vector<RoundRecord>& records) {
  std::vector<std::vector<bool>> out;
  for (const RoundRecord& r : records) {
    const int n = static_cast<int>(r.positions.size());
    std::vector<bool> row(static_cast<std::size_t>(n), false);
    if (r.plan) {
      const Aggregators a = derive_aggregators(r.plan->topology);
      for (int i = 1; i <= n; ++i)
        for (int z = 0; z < a.type_count(); ++z)
          if (a(i, z)) row[static_cast<std::size_t>(i - 1)] = true;
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace aggroute
