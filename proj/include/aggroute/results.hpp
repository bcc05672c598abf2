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

// Per-round CSV tables, run summaries and SVG charts.

#include <filesystem>
#include <string>
#include <vector>

#include "aggroute/sim.hpp"

namespace aggroute {

/// Column order: round, then x_i, y_i, e_i for every UAV, then sense_i_z,
/// relay_i_z, agg_i_z for every UAV and type slot, then optimal_J, baseline_J,
/// normalized, pi (tracking only) and fallback. Mapping files carry n type
/// slots, tracking files one. Numbers use 9 significant digits.
std::string results_csv(const SimConfig& config, const SimResult& result);

/// Run summary as JSON text (no timing information, so reruns match).
std::string summary_json(const SimConfig& config, const SimResult& result);

/// Links, flows and per-UAV energy of one plan as CSV.
std::string plan_csv(const Plan& plan);

struct ResultPaths {
  std::filesystem::path csv;
  std::filesystem::path summary;
  std::filesystem::path normalized_chart;
  std::filesystem::path aggregator_chart;
};

/// Writes rounds.csv, summary.json, normalized.svg and aggregators.svg into
/// `out_dir`, creating it if needed. Throws std::runtime_error on IO failure.
ResultPaths write_results(const SimConfig& config, const SimResult& result, const std::filesystem::path& out_dir);

void write_text(const std::filesystem::path& path, const std::string& text);

struct ChartSeries {
  std::string label;
  std::vector<std::optional<double>> values;  // per round, gaps allowed
};

/// Line chart of normalized energy against round, one polyline per series.
std::string normalized_chart_svg(const std::vector<ChartSeries>& series, const std::string& title);

/// Step plot of aggregator roles: one 0/1 track per UAV.
std::string aggregator_chart_svg(const std::vector<std::vector<bool>>& roles, const std::string& title);

}  // namespace aggroute
