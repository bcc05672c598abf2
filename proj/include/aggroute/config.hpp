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

// Scenario and instance files (YAML) with unit-bearing quantities.
//
// A quantity is a bare number in SI units or a string "<number><unit>":
//   bits:            bit, bits, Kbit, Mbit
//   bandwidth:       bps, Kbps, Mbps, Gbps  (K = 1e3)
//   energy per bit:  J/bit, mJ/bit, uJ/bit, nJ/bit, pJ/bit
//   amplifier:       the same followed by /m^k, where k is the path-loss exponent
//   length:          m, km
//   speed:           m/s, km/h
//   time:            s, ms, min
//   energy:          J, mJ, uJ, kJ
//   angle:           rad, deg

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "aggroute/sim.hpp"

namespace aggroute {

inline constexpr int kConfigSchemaVersion = 1;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Unit { Bits, Bandwidth, EnergyPerBit, Amplifier, Length, Speed, Time, Energy, Angle, Dimensionless };

/// Expected unit spelled for error messages, e.g. "bits/s (e.g. 7Kbps)".
std::string_view unit_hint(Unit unit);

/// Parses "7Kbps", "50nJ/bit", "3000" and so on into SI. For Amplifier the
/// /m^k suffix is returned through `exponent` when present.
double parse_quantity(std::string_view text, Unit unit, std::optional<double>* exponent = nullptr);

SimConfig parse_config_string(std::string_view text);
SimConfig parse_config(const std::filesystem::path& path);

/// Canonical form: every quantity in SI with an explicit unit, 17 significant
/// digits. parse_config_string(write_config(c)) reproduces c.
std::string write_config(const SimConfig& config);

/// One-shot routing problem for `solve` and `oracle`.
struct RoutingInstance {
  ScenarioParams params;
  FleetGeometry geometry;
  SensorAssignment sensors;
  std::vector<double> energy;  // empty means unlimited
};

RoutingInstance parse_instance_string(std::string_view text);
RoutingInstance parse_instance(const std::filesystem::path& path);

}  // namespace aggroute
