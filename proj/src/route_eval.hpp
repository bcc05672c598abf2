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

// Shared internals of the routing and tracking searches.

#include <algorithm>
#include <chrono>
#include <span>
#include <vector>

#include "aggroute/model.hpp"
#include "aggroute/solver.hpp"

namespace aggroute::detail {

// Fast-path feasibility checks are slightly permissive; make_plan has the
// final word, so the search never discards a plan the exact checks accept.
constexpr double kCheckSlack = 1e-12;
// Candidates within this relative distance of the incumbent are re-evaluated
// exactly so that tie-breaking does not depend on summation order.
constexpr double kTieWindow = 1e-9;

inline double elapsed_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

inline bool violates_budget(std::span<const double> budget, std::size_t i, double joules,
                            double slack) {
  return !budget.empty() && joules > budget[i] * (1.0 + slack);
}

/// One type's route with its geometry-independent consequences.
struct RouteEvaluation {
  bool feasible = false;
  std::vector<double> out_rate;      // per UAV, packets on its out-link
  std::vector<double> fixed_energy;  // per UAV: sensing + processing + receiving
  std::vector<double> bits;          // per UAV channel load
};

inline RouteEvaluation evaluate_route(const TypeRoute& route, const std::vector<bool>& sensing,
                                      double rate, double gamma, const ScenarioParams& params) {
  const int n = static_cast<int>(route.size());
  const auto un = static_cast<std::size_t>(n);
  RouteEvaluation ev;
  ev.out_rate.assign(un, 0.0);
  ev.fixed_energy.assign(un, 0.0);
  ev.bits.assign(un, 0.0);

  std::vector<int> pending(un + 2, 0);
  std::vector<int> in_links(un, 0);
  std::vector<double> inflow(un, 0.0);
  std::vector<double> received(un, 0.0);
  for (int i = 1; i <= n; ++i) {
    const auto ui = static_cast<std::size_t>(i - 1);
    if (sensing[ui]) {
      inflow[ui] = rate;
      in_links[ui] += 1;
    }
    const int p = route[ui];
    if (p >= 1 && p <= n) {
      ++pending[static_cast<std::size_t>(p)];
      ++in_links[static_cast<std::size_t>(p - 1)];
    }
  }
  std::vector<int> ready;
  for (int i = n; i >= 1; --i)
    if (pending[static_cast<std::size_t>(i)] == 0) ready.push_back(i);
  int processed = 0;
  while (!ready.empty()) {
    const auto it = std::min_element(ready.begin(), ready.end());
    const int i = *it;
    ready.erase(it);
    ++processed;
    const auto ui = static_cast<std::size_t>(i - 1);
    const int p = route[ui];
    if (p == 0) continue;
    const double aggregate = in_links[ui] > 1 ? 1.0 : 0.0;
    const double out = inflow[ui] * (1.0 + (gamma - 1.0) * aggregate);
    if (out < params.eps_small * (1.0 - kCheckSlack)) return ev;
    ev.out_rate[ui] = out;
    if (p <= n) {
      const auto up = static_cast<std::size_t>(p - 1);
      inflow[up] += out;
      received[up] += out;
      if (--pending[static_cast<std::size_t>(p)] == 0) ready.push_back(p);
    }
  }
  if (processed < n) return ev;

  const double L = params.packet_bits;
  for (std::size_t ui = 0; ui < un; ++ui) {
    const double sensed = sensing[ui] ? rate : 0.0;
    const bool aggregates = in_links[ui] > 1;
    ev.fixed_energy[ui] = params.eps_sense * L * sensed +
                          (aggregates ? params.eps_process * L * (sensed + received[ui]) : 0.0) +
                          params.eps_receive * L * received[ui];
    ev.bits[ui] = L * (ev.out_rate[ui] + received[ui]);
  }
  ev.feasible = true;
  return ev;
}


}  // namespace aggroute::detail
