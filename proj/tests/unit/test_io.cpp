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


#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "aggroute/config.hpp"
#include "aggroute/results.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace aggroute;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = AGGROUTE_CONFIG_DIR;

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
  return out;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / fmt::format("aggroute_io_{}", name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int cli(const std::string& args) {
  const std::string cmd = fmt::format("\"{}\" {} > /dev/null 2>&1", AGGROUTE_CLI_PATH, args);
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string error_of(const std::string& text) {
  try {
    parse_config_string(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_SUITE("cli-io") {
  TEST_CASE("quantities with units") {
    CHECK(parse_quantity("7Kbps", Unit::Bandwidth) == 7000.0);
    CHECK(parse_quantity("6Mbps", Unit::Bandwidth) == 6e6);
    CHECK(parse_quantity("7000", Unit::Bandwidth) == 7000.0);
    CHECK(parse_quantity("50nJ/bit", Unit::EnergyPerBit) == doctest::Approx(50e-9).epsilon(1e-15));
    CHECK(parse_quantity("1Kbit", Unit::Bits) == 1000.0);
    CHECK(parse_quantity("2km", Unit::Length) == 2000.0);
    CHECK(parse_quantity("36km/h", Unit::Speed) == doctest::Approx(10.0));
    CHECK(parse_quantity("2min", Unit::Time) == 120.0);
    CHECK(parse_quantity("180deg", Unit::Angle) == doctest::Approx(3.141592653589793));
    std::optional<double> k;
    CHECK(parse_quantity("0.1nJ/bit/m^2", Unit::Amplifier, &k) == doctest::Approx(1e-10).epsilon(1e-15));
    REQUIRE(k);
    CHECK(*k == 2.0);
    CHECK_THROWS_AS(parse_quantity("7Kbps", Unit::Length), ConfigError);
    CHECK_THROWS_AS(parse_quantity("fast", Unit::Speed), ConfigError);
    CHECK_THROWS_AS(parse_quantity("", Unit::Speed), ConfigError);
  }

  TEST_CASE("shipped tracking config values") {
    const SimConfig c = parse_config(kConfigs / "tracking.cfg");
    const ScenarioParams& p = c.params;
    CHECK(c.kind == ScenarioKind::Tracking);
    CHECK(p.n == 3);
    CHECK(p.packet_bits == 1024.0);
    CHECK(p.bandwidth == 7000.0);
    CHECK(p.interval == 1.0);
    CHECK(p.eps_sense == doctest::Approx(50e-9).epsilon(1e-15));
    CHECK(p.eps_process == doctest::Approx(10e-9).epsilon(1e-15));
    CHECK(p.eps_receive == doctest::Approx(135e-9).epsilon(1e-15));
    CHECK(p.eps_transmit == doctest::Approx(45e-9).epsilon(1e-15));
    CHECK(p.eps_amplifier == doctest::Approx(0.1e-9).epsilon(1e-15));
    CHECK(p.path_loss_exponent == 2.0);
    CHECK(p.comm_range == 500.0);
    CHECK(p.sensing_range == 200.0);
    CHECK(p.safety_range == 50.0);
    CHECK(p.v_min == 10.0);
    CHECK(p.v_max == 30.0);
    CHECK(p.sensing_rate == std::vector<double>{5.0});
    CHECK(p.aggregation_ratio == std::vector<double>{0.7});
    CHECK(c.tracking.pi_min == 6.0);
    CHECK(c.uavs == std::vector<Vec2>{{0, 100}, {100, 0}, {100, 100}});
    CHECK(c.sink == Vec2{0, 0});
    CHECK(c.tracking.target.position() == Vec2{20, 20});
    CHECK(c.horizon == 20);
    CHECK(c.grid.headings == 16);
    CHECK(c.grid.speeds == 3);
  }

  TEST_CASE("shipped mapping config") {
    const SimConfig c = parse_config(kConfigs / "mapping.cfg");
    CHECK(c.kind == ScenarioKind::Mapping);
    CHECK(c.params.n == 3);
    CHECK(c.params.bandwidth == 6e6);
    CHECK(c.params.interval == 5.0);
    CHECK(c.params.sensing_range == 100.0);
    CHECK(c.mapping.zeta == 0.5);
    CHECK(c.params.aggregation_ratio == std::vector<double>{0.5});
    CHECK(c.mapping.region.length == 3000.0);
    CHECK(c.sink == Vec2{1500, 1500});
    CHECK(c.mapping.guidance.tau == 20.0);
  }

  TEST_CASE("canonical config round trip") {
    for (const char* name : {"tracking.cfg", "mapping.cfg"}) {
      CAPTURE(name);
      const SimConfig c = parse_config(kConfigs / name);
      const std::string text = write_config(c);
      const SimConfig again = parse_config_string(text);
      CHECK(write_config(again) == text);
      CHECK(again.params.eps_amplifier == c.params.eps_amplifier);
      CHECK(again.params.eps_sense == c.params.eps_sense);
      CHECK(again.uavs == c.uavs);
      CHECK(again.energy == c.energy);
      CHECK(again.seed == c.seed);
      CHECK(again.tracking.process_noise == c.tracking.process_noise);
      CHECK(again.tracking.sensor.K == c.tracking.sensor.K);
      CHECK(again.mapping.guidance.chi == c.mapping.guidance.chi);
    }
    SimConfig c = fixtures::tracking_config();
    c.params.bandwidth = 1.0 / 3.0;
    c.energy = {0.1, 0.2, 0.30000000000000004};
    const SimConfig again = parse_config_string(write_config(c));
    CHECK(again.params.bandwidth == c.params.bandwidth);
    CHECK(again.energy == c.energy);
  }

  TEST_CASE("config errors") {
    const std::string empty = error_of("");
    CHECK(empty.find("required keys") != std::string::npos);
    for (const char* key : {"schema_version", "kind", "horizon", "scenario", "fleet"})
      CHECK(empty.find(key) != std::string::npos);

    const std::string base = read_file(kConfigs / "tracking.cfg");
    std::string unknown = base;
    unknown.replace(unknown.find("  interval: 1s"), 13, "  interval: 1s\n  colour: red");
    CHECK(error_of(unknown).find("unknown key 'scenario.colour'") != std::string::npos);

    std::string missing = base;
    missing.erase(missing.find("  bandwidth: 7Kbps\n"), 18);
    const std::string m = error_of(missing);
    CHECK(m.find("scenario.bandwidth") != std::string::npos);
    CHECK(m.find("bits/s") != std::string::npos);

    std::string wrong_unit = base;
    wrong_unit.replace(wrong_unit.find("7Kbps"), 5, "7m/s");
    CHECK(error_of(wrong_unit).find("scenario.bandwidth") != std::string::npos);

    std::string version = base;
    version.replace(version.find("schema_version: 1"), 17, "schema_version: 9");
    CHECK(error_of(version).find("schema_version") != std::string::npos);
  }

  TEST_CASE("instance files") {
    const RoutingInstance inst = parse_instance(kConfigs / "instance_three_sensors.yaml");
    CHECK(inst.params.n == 3);
    CHECK(inst.sensors.sensor_count(0) == 3);
    CHECK(inst.energy.empty());
    const SolveReport base = baseline_plan(inst.geometry, inst.sensors, inst.params);
    REQUIRE(base.plan);
    CHECK(base.plan->objective == doctest::Approx(2.19392e-2).epsilon(1e-12));
    CHECK_THROWS_AS(parse_instance_string(""), ConfigError);
    const RoutingInstance two = parse_instance(kConfigs / "instance_two_types.yaml");
    CHECK(two.params.type_count() == 2);
  }

  TEST_CASE("results table layout and stability") {
    const SimConfig c = fixtures::tracking_config();
    const SimResult r = run_sim(c);
    const std::string csv = results_csv(c, r);
    const auto rows = lines(csv);
    REQUIRE(rows.size() == 21);
    const auto header = split(rows[0]);
    CHECK(header.front() == "round");
    CHECK(header[1] == "x_1");
    CHECK(header[2] == "y_1");
    CHECK(header[3] == "e_1");
    CHECK(header.back() == "fallback");
    CHECK(std::find(header.begin(), header.end(), "pi") != header.end());
    for (std::size_t k = 1; k < rows.size(); ++k) CHECK(split(rows[k]).size() == header.size());
    CHECK(results_csv(c, run_sim(c)) == csv);
    CHECK(summary_json(c, r) == summary_json(c, run_sim(c)));
    CHECK(summary_json(c, r).find("\"closure_error_J\"") != std::string::npos);
  }

  TEST_CASE("normalized column is 1 at 4 Kbps") {
    SimConfig c = fixtures::tracking_config();
    c.params.bandwidth = 4000.0;
    const auto rows = lines(results_csv(c, run_sim(c)));
    const auto header = split(rows[0]);
    const auto col = std::find(header.begin(), header.end(), "normalized") - header.begin();
    REQUIRE(rows.size() == 21);
    for (std::size_t k = 1; k < rows.size(); ++k) CHECK(split(rows[k])[static_cast<std::size_t>(col)] == "1");
  }

  TEST_CASE("mapping table has one type slot per UAV") {
    SimConfig c = fixtures::mapping_config();
    c.horizon = 4;
    const auto rows = lines(results_csv(c, run_sim(c)));
    const auto header = split(rows[0]);
    CHECK(std::find(header.begin(), header.end(), "agg_3_2") != header.end());
    CHECK(std::find(header.begin(), header.end(), "pi") == header.end());
  }

  TEST_CASE("charts") {
    SimConfig c = fixtures::tracking_config();
    c.horizon = 1;
    const SimResult r = run_sim(c);
    const auto series = normalized_energy_series(r.rounds);
    const std::string one = normalized_chart_svg({ChartSeries{"7 Kbps", series.values}}, "single round");
    CHECK(one.rfind("<svg", 0) == 0);
    CHECK(one.find("viewBox=\"0 0 640 360\"") != std::string::npos);
    CHECK(one.find("</svg>") != std::string::npos);
    CHECK_NOTHROW(normalized_chart_svg({}, "empty"));
    CHECK_NOTHROW(normalized_chart_svg({ChartSeries{"gaps", {std::nullopt, std::nullopt}}}, "gaps"));
    const std::string agg = aggregator_chart_svg({{true, false}, {false, false}, {true, true}}, "roles");
    CHECK(agg.find("UAV 2") != std::string::npos);
    const fs::path dir = scratch_dir("charts");
    const ResultPaths paths = write_results(c, r, dir);
    CHECK(fs::exists(paths.csv));
    CHECK(fs::exists(paths.summary));
    CHECK(fs::exists(paths.normalized_chart));
    CHECK(fs::exists(paths.aggregator_chart));
  }

  TEST_CASE("command line exit codes and outputs") {
    const fs::path dir = scratch_dir("cli");
    const std::string three_sensors = (kConfigs / "instance_three_sensors.yaml").string();
    CHECK(cli(fmt::format("solve \"{}\" --out \"{}\"", three_sensors, (dir / "solve").string())) == 0);
    CHECK(fs::exists(dir / "solve" / "plan.csv"));
    CHECK(cli(fmt::format("oracle \"{}\" --out \"{}\"", three_sensors, (dir / "oracle").string())) == 0);
    CHECK(read_file(dir / "solve" / "plan.csv") == read_file(dir / "oracle" / "oracle_plan.csv"));

    // One sensor's stream alone exceeds a 4 Kbps channel.
    std::string tight = read_file(three_sensors);
    tight.replace(tight.find("7Kbps"), 5, "4Kbps");
    write_text(dir / "tight.yaml", tight);
    CHECK(cli(fmt::format("solve \"{}\" --out \"{}\"", (dir / "tight.yaml").string(), dir.string())) == 2);
    CHECK(cli(fmt::format("oracle \"{}\" --out \"{}\"", (dir / "tight.yaml").string(), dir.string())) == 2);

    CHECK(cli("") == 1);
    CHECK(cli("--help") == 0);
    CHECK(cli("frobnicate") == 1);
    CHECK(cli(fmt::format("solve \"{}\"", (dir / "missing.yaml").string())) == 1);
    write_text(dir / "broken.cfg", "schema_version: 1\nkind: tracking\n");
    CHECK(cli(fmt::format("track \"{}\" --out \"{}\"", (dir / "broken.cfg").string(), dir.string())) == 1);
    // A mapping config handed to the tracking command is an error.
    CHECK(cli(fmt::format("track \"{}\" --horizon 1 --out \"{}\"", (kConfigs / "mapping.cfg").string(),
                          dir.string())) == 1);

    const std::string track = (kConfigs / "tracking.cfg").string();
    CHECK(cli(fmt::format("track \"{}\" --horizon 3 --grid 8x2 --out \"{}\"", track, (dir / "a").string())) == 0);
    CHECK(cli(fmt::format("track \"{}\" --horizon 3 --grid 8x2 --out \"{}\"", track, (dir / "b").string())) == 0);
    CHECK(read_file(dir / "a" / "rounds.csv") == read_file(dir / "b" / "rounds.csv"));
    CHECK(lines(read_file(dir / "a" / "rounds.csv")).size() == 4);
    CHECK(cli(fmt::format("track \"{}\" --grid 8by2 --out \"{}\"", track, dir.string())) == 1);

    CHECK(cli(fmt::format("sweep \"{}\" --param B --values 4Kbps,7Kbps --horizon 2 --out \"{}\"", track,
                          (dir / "sweep").string())) == 0);
    CHECK(fs::exists(dir / "sweep" / "sweep.csv"));
    CHECK(cli(fmt::format("sweep \"{}\" --param colour --values 1 --out \"{}\"", track, dir.string())) == 1);
    fs::remove_all(dir);
  }
}
