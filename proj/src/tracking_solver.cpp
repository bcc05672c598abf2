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


// Joint search over the control grid, sensor subsets and routing topologies
// for one tracking decision interval.
//
// Flows, sensing/processing/receiving energy and channel loads depend only on
// the sensor subset and topology, so they are computed once per "structure".
// Only transmit energy, the pairwise range constraints and the information
// requirement depend on where the UAVs end up. The scan walks every prefix
// (g_1..g_{n-1}) of grid choices and evaluates each structure for all choices
// of the last UAV at once with the batched kernels.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "aggroute/kernels.hpp"
#include "aggroute/solver.hpp"
#include "route_eval.hpp"

namespace aggroute {

namespace {

using detail::kCheckSlack;
using detail::kTieWindow;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Transmission {
  int from = 0;  // UAV 1..n
  int to = 0;    // UAV 1..n or sink n+1
  double weight = 0.0;  // bits sent
};

struct Structure {
  unsigned mask = 0;
  Topology topology;
  double fixed_total = 0.0;
  std::vector<double> fixed;  // per UAV, 0-based
  std::vector<Transmission> tx;
};

/// Everything about the grid that is independent of sensors and topology.
class GridTables {
 public:
  GridTables(const TrackingStepInput& input, const ScenarioParams& params, const GridSpec& grid)
      : n_(params.n), controls_(control_grid(params, grid)), G_(controls_.size()) {
    const auto un = static_cast<std::size_t>(n_);
    xs_.assign(un, std::vector<double>(G_));
    ys_.assign(un, std::vector<double>(G_));
    sink_cost_.assign(un, std::vector<double>(G_));
    target_d2_.assign(un, std::vector<double>(G_));
    info_.assign(un, std::vector<double>(G_));
    std::vector<double> d2(G_);
    for (std::size_t i = 0; i < un; ++i) {
      for (std::size_t g = 0; g < G_; ++g) {
        const Vec2 p = advance(input.uavs[i], controls_[g], params.interval);
        xs_[i][g] = p.x;
        ys_[i][g] = p.y;
        const Vec2 one[] = {p};
        info_[i][g] = sensor_set_information(one, 1u, input.predicted_target, input.sensor);
      }
      kernels::squared_distances_to_point(xs_[i], ys_[i], input.sink.x, input.sink.y, d2);
      kernels::transmit_cost_per_bit(d2, params.eps_transmit, params.eps_amplifier,
                                     params.path_loss_exponent, sink_cost_[i]);
      kernels::squared_distances_to_point(xs_[i], ys_[i], input.predicted_target.x,
                                          input.predicted_target.y, target_d2_[i]);
    }
    // Pair tables for i < j, row-major [g_i][g_j].
    pair_d2_.resize(un * un);
    pair_cost_.resize(un * un);
    pair_min_cost_.assign(un * un, 0.0);
    for (std::size_t i = 0; i < un; ++i) {
      for (std::size_t j = i + 1; j < un; ++j) {
        auto& table = pair_d2_[i * un + j];
        auto& cost = pair_cost_[i * un + j];
        table.resize(G_ * G_);
        cost.resize(G_ * G_);
        for (std::size_t gi = 0; gi < G_; ++gi) {
          std::span<double> row(table.data() + gi * G_, G_);
          kernels::squared_distances_to_point(xs_[j], ys_[j], xs_[i][gi], ys_[i][gi], row);
        }
        kernels::transmit_cost_per_bit(table, params.eps_transmit, params.eps_amplifier,
                                       params.path_loss_exponent, cost);
        pair_min_cost_[i * un + j] = *std::min_element(cost.begin(), cost.end());
      }
    }
  }

  std::size_t grid_size() const { return G_; }
  const std::vector<Control>& controls() const { return controls_; }
  Vec2 position(int uav, std::size_t g) const {
    const auto i = static_cast<std::size_t>(uav - 1);
    return Vec2{xs_[i][g], ys_[i][g]};
  }
  double sink_cost(int uav, std::size_t g) const { return sink_cost_[static_cast<std::size_t>(uav - 1)][g]; }
  std::span<const double> sink_cost_row(int uav) const { return sink_cost_[static_cast<std::size_t>(uav - 1)]; }
  double target_d2(int uav, std::size_t g) const { return target_d2_[static_cast<std::size_t>(uav - 1)][g]; }
  double info(int uav, std::size_t g) const { return info_[static_cast<std::size_t>(uav - 1)][g]; }
  double min_sink_cost(int uav) const {
    const auto& row = sink_cost_[static_cast<std::size_t>(uav - 1)];
    return *std::min_element(row.begin(), row.end());
  }

  // Pair lookups take 1-based UAV indices in either order.
  double pair_d2(int a, std::size_t ga, int b, std::size_t gb) const {
    return a < b ? pair_d2_[key(a, b)][ga * G_ + gb] : pair_d2_[key(b, a)][gb * G_ + ga];
  }
  double pair_cost(int a, std::size_t ga, int b, std::size_t gb) const {
    return a < b ? pair_cost_[key(a, b)][ga * G_ + gb] : pair_cost_[key(b, a)][gb * G_ + ga];
  }
  /// Row over the grid choices of the last UAV `b` (> a) with `a` fixed at ga.
  std::span<const double> pair_d2_row(int a, std::size_t ga, int b) const {
    return {pair_d2_[key(a, b)].data() + ga * G_, G_};
  }
  std::span<const double> pair_cost_row(int a, std::size_t ga, int b) const {
    return {pair_cost_[key(a, b)].data() + ga * G_, G_};
  }
  double pair_min_cost(int a, int b) const { return pair_min_cost_[a < b ? key(a, b) : key(b, a)]; }

 private:
  std::size_t key(int a, int b) const {
    return static_cast<std::size_t>(a - 1) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(b - 1);
  }

  int n_;
  std::vector<Control> controls_;
  std::size_t G_;
  std::vector<std::vector<double>> xs_, ys_, sink_cost_, target_d2_, info_;
  std::vector<std::vector<double>> pair_d2_, pair_cost_;
  std::vector<double> pair_min_cost_;
};

std::vector<Structure> build_structures(const ScenarioParams& params, std::uint64_t& rejected) {
  const int n = params.n;
  const double limit = params.bits_per_interval() * (1.0 + kCheckSlack);
  std::vector<Structure> out;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<bool> sensing(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) sensing[static_cast<std::size_t>(i)] = (mask >> i) & 1u;
    for (const TypeRoute& route : enumerate_type_routes(sensing)) {
      const auto ev = detail::evaluate_route(route, sensing, params.sensing_rate[0],
                                             params.aggregation_ratio[0], params);
      if (!ev.feasible ||
          std::any_of(ev.bits.begin(), ev.bits.end(), [&](double b) { return b > limit; })) {
        ++rejected;
        continue;
      }
      Structure s;
      s.mask = mask;
      s.topology = Topology(n, 1);
      s.fixed = ev.fixed_energy;
      for (int i = 1; i <= n; ++i) {
        const auto ui = static_cast<std::size_t>(i - 1);
        if (sensing[ui]) s.topology.set_link(0, i, 0);
        const int p = route[ui];
        if (p != 0) {
          s.topology.set_link(i, p, 0);
          s.tx.push_back(Transmission{i, p, ev.out_rate[ui] * params.packet_bits});
        }
        s.fixed_total += ev.fixed_energy[ui];
      }
      out.push_back(std::move(s));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Structure& a, const Structure& b) {
    return topology_tie_less(a.topology, b.topology);
  });
  return out;
}

struct Candidate {
  double fast_value;
  std::uint64_t joint;
  std::size_t structure;
};

bool pair_ok(double d2, double rsafe2, double rc2) { return d2 < rc2 && !(d2 < rsafe2); }

}  // namespace

SolveReport solve_tracking_step(const TrackingStepInput& input, const ScenarioParams& params,
                                const GridSpec& grid) {
  const auto start = std::chrono::steady_clock::now();
  const int n = params.n;
  if (params.type_count() != 1)
    throw std::invalid_argument("solve_tracking_step handles a single data type");
  if (static_cast<int>(input.uavs.size()) != n)
    throw std::invalid_argument("solve_tracking_step: UAV count differs from params.n");
  if (!input.energy.empty() && static_cast<int>(input.energy.size()) != n)
    throw std::invalid_argument("solve_tracking_step: energy needs one entry per UAV");

  SolveReport report;
  const GridTables tables(input, params, grid);
  const std::vector<Structure> structures = build_structures(params, report.candidates_pruned);
  const std::size_t G = tables.grid_size();
  const double rc2 = params.comm_range * params.comm_range;
  const double rsafe2 = params.safety_range * params.safety_range;
  const double rs2 = params.sensing_range * params.sensing_range;
  const bool budgeted = !input.energy.empty();
  auto budget_of = [&](int uav) {
    return budgeted ? input.energy[static_cast<std::size_t>(uav - 1)] * (1.0 + kCheckSlack)
                    : std::numeric_limits<double>::infinity();
  };

  std::uint64_t prefixes = 1;
  for (int i = 1; i < n; ++i) prefixes *= G;

  std::vector<std::size_t> g(static_cast<std::size_t>(n), 0);  // g[i-1] for UAV i
  std::vector<double> values(G), row_ok(G), node_energy(G);
  std::vector<Candidate> candidates;
  double best = std::numeric_limits<double>::infinity();

  for (std::uint64_t prefix = 0; prefix < prefixes; ++prefix) {
    std::uint64_t rest = prefix;
    for (int i = n - 1; i >= 1; --i) {
      g[static_cast<std::size_t>(i - 1)] = rest % G;
      rest /= G;
    }
    bool prefix_ok = true;
    for (int a = 1; a < n && prefix_ok; ++a)
      for (int b = a + 1; b < n && prefix_ok; ++b)
        prefix_ok = pair_ok(tables.pair_d2(a, g[a - 1], b, g[b - 1]), rsafe2, rc2);
    if (!prefix_ok) continue;

    std::fill(row_ok.begin(), row_ok.end(), 1.0);
    for (int a = 1; a < n; ++a) {
      const auto row = tables.pair_d2_row(a, g[static_cast<std::size_t>(a - 1)], n);
      for (std::size_t k = 0; k < G; ++k)
        if (!pair_ok(row[k], rsafe2, rc2)) row_ok[k] = 0.0;
    }
    if (std::none_of(row_ok.begin(), row_ok.end(), [](double v) { return v != 0.0; })) continue;

    for (std::size_t s = 0; s < structures.size(); ++s) {
      const Structure& st = structures[s];
      ++report.nodes_expanded;
      bool sensors_ok = true;
      double info_prefix = 0.0;
      for (int i = 1; i < n; ++i) {
        if (!(st.mask & (1u << (i - 1)))) continue;
        const std::size_t gi = g[static_cast<std::size_t>(i - 1)];
        if (tables.target_d2(i, gi) - rs2 > 0.0) {
          sensors_ok = false;
          break;
        }
        info_prefix += tables.info(i, gi);
      }
      if (!sensors_ok) continue;
      const bool last_senses = (st.mask >> (n - 1)) & 1u;
      if (!last_senses && info_prefix < input.pi_min) continue;

      double constant = st.fixed_total;
      double lower = 0.0;
      bool budget_ok = true;
      for (const Transmission& t : st.tx) {
        if (t.from != n && t.to != n) {
          const double c = t.to == n + 1
                               ? tables.sink_cost(t.from, g[static_cast<std::size_t>(t.from - 1)])
                               : tables.pair_cost(t.from, g[static_cast<std::size_t>(t.from - 1)], t.to,
                                                  g[static_cast<std::size_t>(t.to - 1)]);
          constant += t.weight * c;
          if (st.fixed[static_cast<std::size_t>(t.from - 1)] + t.weight * c > budget_of(t.from))
            budget_ok = false;
        } else {
          const int other = t.from == n ? t.to : t.from;
          lower += t.weight * (other == n + 1 ? tables.min_sink_cost(n) : tables.pair_min_cost(other, n));
        }
      }
      if (!budget_ok) continue;
      if (constant + lower > best * (1.0 + kTieWindow)) {
        ++report.candidates_pruned;
        continue;
      }

      std::fill(values.begin(), values.end(), constant);
      for (const Transmission& t : st.tx) {
        if (t.from != n && t.to != n) continue;
        std::span<const double> cost_row =
            t.to == n + 1 ? tables.sink_cost_row(n)
                          : tables.pair_cost_row(t.from == n ? t.to : t.from,
                                                 g[static_cast<std::size_t>((t.from == n ? t.to : t.from) - 1)], n);
        kernels::scaled_accumulate(values, cost_row, t.weight);
        if (budgeted) {
          std::fill(node_energy.begin(), node_energy.end(), st.fixed[static_cast<std::size_t>(t.from - 1)]);
          kernels::scaled_accumulate(node_energy, cost_row, t.weight);
          const double cap = budget_of(t.from);
          for (std::size_t k = 0; k < G; ++k)
            if (node_energy[k] > cap) values[k] = kNaN;
        }
      }
      for (std::size_t k = 0; k < G; ++k) {
        bool ok = row_ok[k] != 0.0;
        if (ok && last_senses) {
          ok = tables.target_d2(n, k) - rs2 <= 0.0 && info_prefix + tables.info(n, k) >= input.pi_min;
        }
        if (!ok) values[k] = kNaN;
      }

      const std::size_t k = kernels::argmin(values);
      if (k == G) continue;
      const double v = values[k];
      if (v > best * (1.0 + kTieWindow)) continue;
      best = std::min(best, v);
      const double window = best * (1.0 + kTieWindow);
      for (std::size_t kk = k; kk < G; ++kk) {
        if (values[kk] <= window) candidates.push_back(Candidate{values[kk], prefix * G + kk, s});
      }
      if (candidates.size() > 4096) {
        std::erase_if(candidates, [&](const Candidate& c) { return c.fast_value > window; });
      }
    }
  }

  // Exact re-evaluation of everything inside the tie window.
  const double window = best * (1.0 + kTieWindow);
  std::erase_if(candidates, [&](const Candidate& c) { return c.fast_value > window; });
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return a.joint != b.joint ? a.joint < b.joint : a.structure < b.structure;
  });

  PlanChecks checks;
  checks.bandwidth = true;
  checks.sensing_range = true;
  checks.motion = true;
  checks.energy_budget = input.energy;
  for (const Candidate& c : candidates) {
    FleetGeometry geometry;
    geometry.sink = input.sink;
    geometry.source = input.predicted_target;
    std::vector<Control> controls(static_cast<std::size_t>(n));
    std::uint64_t rest = c.joint;
    for (int i = n; i >= 1; --i) {
      const std::size_t gi = rest % G;
      rest /= G;
      controls[static_cast<std::size_t>(i - 1)] = tables.controls()[gi];
    }
    for (int i = 1; i <= n; ++i) {
      const auto ui = static_cast<std::size_t>(i - 1);
      geometry.uavs.push_back(advance(input.uavs[ui], controls[ui], params.interval));
    }
    const Structure& st = structures[c.structure];
    if (sensor_set_information(geometry.uavs, st.mask, input.predicted_target, input.sensor) < input.pi_min)
      continue;
    auto plan = make_plan(st.topology, geometry, params, checks);
    if (!plan) continue;
    plan->controls = std::move(controls);
    plan->grid_index = c.joint;
    if (!report.plan || plan_preferred(*plan, *report.plan)) report.plan = std::move(plan);
  }
  if (!report.plan) report.infeasible_reason = "no grid point satisfies every tracking constraint";
  report.wall_time = detail::elapsed_since(start);
  return report;
}

std::vector<Control> fallback_controls(const TrackingStepInput& input, const ScenarioParams& params,
                                       const GridSpec& grid) {
  const int n = params.n;
  const GridTables tables(input, params, grid);
  const std::size_t G = tables.grid_size();
  const double rc2 = params.comm_range * params.comm_range;
  const double rsafe2 = params.safety_range * params.safety_range;
  const double rs2 = params.sensing_range * params.sensing_range;
  const double sensed_bits = params.sensing_rate[0] * params.packet_bits;

  std::uint64_t joint = 1;
  for (int i = 0; i < n; ++i) joint *= G;

  std::vector<std::size_t> g(static_cast<std::size_t>(n));
  double best_energy = std::numeric_limits<double>::infinity();
  double best_pursuit = std::numeric_limits<double>::infinity();
  double best_any = std::numeric_limits<double>::infinity();
  std::uint64_t pick_energy = joint, pick_pursuit = joint, pick_any = 0;

  for (std::uint64_t J = 0; J < joint; ++J) {
    std::uint64_t rest = J;
    for (int i = n; i >= 1; --i) {
      g[static_cast<std::size_t>(i - 1)] = rest % G;
      rest /= G;
    }
    double pursuit = 0.0;
    for (int i = 1; i <= n; ++i) pursuit += tables.target_d2(i, g[static_cast<std::size_t>(i - 1)]);
    if (pursuit < best_any) {
      best_any = pursuit;
      pick_any = J;
    }
    bool ok = true;
    for (int a = 1; a <= n && ok; ++a)
      for (int b = a + 1; b <= n && ok; ++b)
        ok = pair_ok(tables.pair_d2(a, g[a - 1], b, g[b - 1]), rsafe2, rc2);
    if (!ok) continue;
    if (pursuit < best_pursuit) {
      best_pursuit = pursuit;
      pick_pursuit = J;
    }
    double energy = 0.0;
    double info = 0.0;
    bool any = false;
    for (int i = 1; i <= n; ++i) {
      const std::size_t gi = g[static_cast<std::size_t>(i - 1)];
      if (tables.target_d2(i, gi) - rs2 > 0.0) continue;
      any = true;
      info += tables.info(i, gi);
      energy += params.eps_sense * sensed_bits + tables.sink_cost(i, gi) * sensed_bits;
    }
    if (any && info >= input.pi_min && energy < best_energy) {
      best_energy = energy;
      pick_energy = J;
    }
  }
  const std::uint64_t pick = pick_energy != joint ? pick_energy : pick_pursuit != joint ? pick_pursuit : pick_any;
  std::vector<Control> controls(static_cast<std::size_t>(n));
  std::uint64_t rest = pick;
  for (int i = n; i >= 1; --i) {
    controls[static_cast<std::size_t>(i - 1)] = tables.controls()[rest % G];
    rest /= G;
  }
  return controls;
}

}  // namespace aggroute
