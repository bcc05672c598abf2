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


#include "aggroute/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

namespace aggroute {

namespace {

struct UnitScale {
  std::string_view suffix;
  double scale;
};

// Longer suffixes first so that "mJ/bit" is not read as "m" + junk.
const std::vector<UnitScale>& unit_table(Unit unit) {
  static const std::vector<UnitScale> bits{{"Mbit", 1e6}, {"Kbit", 1e3}, {"bits", 1.0}, {"bit", 1.0}};
  static const std::vector<UnitScale> bandwidth{{"Gbps", 1e9}, {"Mbps", 1e6}, {"Kbps", 1e3}, {"bps", 1.0}};
  static const std::vector<UnitScale> per_bit{
      {"mJ/bit", 1e-3}, {"uJ/bit", 1e-6}, {"nJ/bit", 1e-9}, {"pJ/bit", 1e-12}, {"J/bit", 1.0}};
  static const std::vector<UnitScale> length{{"km", 1e3}, {"m", 1.0}};
  static const std::vector<UnitScale> speed{{"km/h", 1.0 / 3.6}, {"m/s", 1.0}};
  static const std::vector<UnitScale> time{{"min", 60.0}, {"ms", 1e-3}, {"s", 1.0}};
  static const std::vector<UnitScale> energy{{"kJ", 1e3}, {"mJ", 1e-3}, {"uJ", 1e-6}, {"J", 1.0}};
  static const std::vector<UnitScale> angle{{"rad", 1.0}, {"deg", 3.14159265358979323846 / 180.0}};
  static const std::vector<UnitScale> none{};
  switch (unit) {
    case Unit::Bits: return bits;
    case Unit::Bandwidth: return bandwidth;
    case Unit::EnergyPerBit:
    case Unit::Amplifier: return per_bit;
    case Unit::Length: return length;
    case Unit::Speed: return speed;
    case Unit::Time: return time;
    case Unit::Energy: return energy;
    case Unit::Angle: return angle;
    case Unit::Dimensionless: return none;
  }
  return none;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool parse_number(std::string_view text, double& value, std::string_view& rest) {
  text = trim(text);
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc()) return false;
  rest = trim(std::string_view(ptr, static_cast<std::size_t>(last - ptr)));
  return true;
}

}  // namespace

std::string_view unit_hint(Unit unit) {
  switch (unit) {
    case Unit::Bits: return "bits (e.g. 1024 or 1Kbit)";
    case Unit::Bandwidth: return "bits/s (e.g. 7Kbps)";
    case Unit::EnergyPerBit: return "J/bit (e.g. 50nJ/bit)";
    case Unit::Amplifier: return "J/bit/m^beta (e.g. 0.1nJ/bit/m^2)";
    case Unit::Length: return "m (e.g. 200m)";
    case Unit::Speed: return "m/s (e.g. 10m/s)";
    case Unit::Time: return "s (e.g. 1s)";
    case Unit::Energy: return "J (e.g. 10J)";
    case Unit::Angle: return "rad (e.g. 1.0471975511965976rad or 60deg)";
    case Unit::Dimensionless: return "a plain number";
  }
  return "";
}

double parse_quantity(std::string_view text, Unit unit, std::optional<double>* exponent) {
  double value = 0.0;
  std::string_view rest;
  if (!parse_number(text, value, rest))
    throw ConfigError(fmt::format("'{}' is not a number; expected {}", text, unit_hint(unit)));
  if (rest.empty()) return value;
  if (unit == Unit::Amplifier) {
    const auto slash = rest.rfind("/m^");
    if (slash == std::string_view::npos)
      throw ConfigError(fmt::format("'{}': expected {}", text, unit_hint(unit)));
    double k = 0.0;
    std::string_view tail;
    if (!parse_number(rest.substr(slash + 3), k, tail) || !tail.empty())
      throw ConfigError(fmt::format("'{}': bad distance exponent; expected {}", text, unit_hint(unit)));
    if (exponent) *exponent = k;
    rest = rest.substr(0, slash);
  }
  for (const UnitScale& u : unit_table(unit)) {
    if (rest == u.suffix) return value * u.scale;
  }
  throw ConfigError(fmt::format("'{}': unknown unit '{}'; expected {}", text, rest, unit_hint(unit)));
}

namespace {

// Node with its dotted path, for error messages.
struct Field {
  YAML::Node node;
  std::string path;

  bool has(const std::string& key) const { return node.IsMap() && node[key]; }

  Field at(const std::string& key) const {
    if (!node.IsMap() || !node[key]) throw ConfigError(fmt::format("missing key '{}'", join(key)));
    return Field{node[key], join(key)};
  }
  // Like at(), but a missing key also names the expected unit.
  double quantity_at(const std::string& key, Unit unit, std::optional<double>* exponent = nullptr) const {
    if (!node.IsMap() || !node[key])
      throw ConfigError(fmt::format("missing key '{}'; expected {}", join(key), unit_hint(unit)));
    return at(key).quantity(unit, exponent);
  }
  Field index(std::size_t i) const { return Field{node[i], fmt::format("{}[{}]", path, i)}; }
  std::string join(const std::string& key) const { return path.empty() ? key : path + "." + key; }

  void expect_map(const std::set<std::string>& allowed) const {
    if (!node.IsMap()) throw ConfigError(fmt::format("'{}' must be a mapping", path.empty() ? "<root>" : path));
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.count(key)) throw ConfigError(fmt::format("unknown key '{}'", join(key)));
    }
  }

  std::string scalar() const {
    if (!node.IsScalar()) throw ConfigError(fmt::format("'{}' must be a scalar", path));
    return node.Scalar();
  }

  double quantity(Unit unit, std::optional<double>* exponent = nullptr) const {
    if (!node.IsScalar())
      throw ConfigError(fmt::format("'{}' must be a quantity in {}", path, unit_hint(unit)));
    try {
      return parse_quantity(node.Scalar(), unit, exponent);
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("'{}': {}", path, e.what()));
    }
  }

  long integer() const {
    const std::string s = scalar();
    long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw ConfigError(fmt::format("'{}' must be an integer", path));
    return v;
  }

  std::uint64_t unsigned_integer() const {
    const std::string s = scalar();
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw ConfigError(fmt::format("'{}' must be a non-negative integer", path));
    return v;
  }

  std::size_t length() const {
    if (!node.IsSequence()) throw ConfigError(fmt::format("'{}' must be a list", path));
    return node.size();
  }

  Vec2 point(Unit unit = Unit::Length) const {
    if (length() != 2) throw ConfigError(fmt::format("'{}' must be a point [x, y] in {}", path, unit_hint(unit)));
    return Vec2{index(0).quantity(unit), index(1).quantity(unit)};
  }

  template <int R, int C>
  Eigen::Matrix<double, R, C> matrix() const {
    Eigen::Matrix<double, R, C> m;
    if (length() != static_cast<std::size_t>(R))
      throw ConfigError(fmt::format("'{}' must be a {}x{} matrix", path, R, C));
    for (int r = 0; r < R; ++r) {
      const Field row = index(static_cast<std::size_t>(r));
      if (row.length() != static_cast<std::size_t>(C))
        throw ConfigError(fmt::format("'{}' must be a {}x{} matrix", path, R, C));
      for (int c = 0; c < C; ++c) m(r, c) = row.index(static_cast<std::size_t>(c)).quantity(Unit::Dimensionless);
    }
    return m;
  }
};

YAML::Node load(std::string_view text) {
  try {
    return YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(fmt::format("malformed YAML: {}", e.what()));
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void check_schema(const Field& root) {
  const long version = root.at("schema_version").integer();
  if (version != kConfigSchemaVersion)
    throw ConfigError(fmt::format("unsupported schema_version {} (this build reads {})", version,
                                  kConfigSchemaVersion));
}

ScenarioParams parse_scenario(const Field& f, bool mapping) {
  f.expect_map({"uavs", "packet_length", "bandwidth", "interval", "eps_sense", "eps_process", "eps_receive",
                "eps_transmit", "eps_amplifier", "path_loss_exponent", "comm_range", "sensing_range",
                "safety_range", "v_min", "v_max", "eps_small", "data_types"});
  ScenarioParams p;
  p.n = static_cast<int>(f.at("uavs").integer());
  p.packet_bits = f.quantity_at("packet_length", Unit::Bits);
  p.bandwidth = f.quantity_at("bandwidth", Unit::Bandwidth);
  p.interval = f.quantity_at("interval", Unit::Time);
  p.eps_sense = f.quantity_at("eps_sense", Unit::EnergyPerBit);
  p.eps_process = f.quantity_at("eps_process", Unit::EnergyPerBit);
  p.eps_receive = f.quantity_at("eps_receive", Unit::EnergyPerBit);
  p.eps_transmit = f.quantity_at("eps_transmit", Unit::EnergyPerBit);
  p.path_loss_exponent = f.quantity_at("path_loss_exponent", Unit::Dimensionless);
  std::optional<double> exponent;
  p.eps_amplifier = f.quantity_at("eps_amplifier", Unit::Amplifier, &exponent);
  if (exponent && *exponent != p.path_loss_exponent)
    throw ConfigError(fmt::format("'{}': distance exponent {} differs from path_loss_exponent {}",
                                  f.join("eps_amplifier"), *exponent, p.path_loss_exponent));
  p.comm_range = f.quantity_at("comm_range", Unit::Length);
  p.sensing_range = f.quantity_at("sensing_range", Unit::Length);
  p.safety_range = f.quantity_at("safety_range", Unit::Length);
  p.v_min = f.quantity_at("v_min", Unit::Speed);
  p.v_max = f.quantity_at("v_max", Unit::Speed);
  if (f.has("eps_small")) p.eps_small = f.quantity_at("eps_small", Unit::Dimensionless);

  const Field types = f.at("data_types");
  if (types.length() == 0) throw ConfigError(fmt::format("'{}' needs at least one entry", types.path));
  if (mapping && types.length() != 1)
    throw ConfigError(fmt::format("'{}': mapping takes one entry; the type count follows the overlap pattern",
                                  types.path));
  for (std::size_t z = 0; z < types.length(); ++z) {
    const Field t = types.index(z);
    if (mapping) {
      t.expect_map({"sensing_rate"});
    } else {
      t.expect_map({"sensing_rate", "aggregation_ratio"});
    }
    p.sensing_rate.push_back(t.quantity_at("sensing_rate", Unit::Dimensionless));
    p.aggregation_ratio.push_back(mapping ? 1.0 : t.quantity_at("aggregation_ratio", Unit::Dimensionless));
  }
  return p;
}

void rethrow_invalid(const std::invalid_argument& e) { throw ConfigError(e.what()); }

constexpr std::string_view kRequiredTop =
    "schema_version, kind, horizon, scenario, fleet, and tracking or mapping";

}  // namespace

SimConfig parse_config_string(std::string_view text) {
  const YAML::Node root_node = load(text);
  if (!root_node || root_node.IsNull())
    throw ConfigError(fmt::format("empty config; required keys: {}", kRequiredTop));
  const Field root{root_node, ""};
  root.expect_map({"schema_version", "kind", "seed", "horizon", "grid", "scenario", "fleet", "tracking", "mapping"});
  check_schema(root);

  SimConfig c;
  const std::string kind = root.at("kind").scalar();
  if (kind == "tracking") {
    c.kind = ScenarioKind::Tracking;
  } else if (kind == "mapping") {
    c.kind = ScenarioKind::Mapping;
  } else {
    throw ConfigError(fmt::format("'kind' must be tracking or mapping, got '{}'", kind));
  }
  const bool mapping = c.kind == ScenarioKind::Mapping;
  if (root.has(mapping ? "tracking" : "mapping"))
    throw ConfigError(fmt::format("'{}' section given for a {} config", mapping ? "tracking" : "mapping", kind));

  if (root.has("seed")) c.seed = root.at("seed").unsigned_integer();
  c.horizon = static_cast<int>(root.at("horizon").integer());
  if (root.has("grid")) {
    const Field g = root.at("grid");
    g.expect_map({"headings", "speeds"});
    if (g.has("headings")) c.grid.headings = static_cast<int>(g.at("headings").integer());
    if (g.has("speeds")) c.grid.speeds = static_cast<int>(g.at("speeds").integer());
  }
  c.params = parse_scenario(root.at("scenario"), mapping);

  const Field fleet = root.at("fleet");
  fleet.expect_map({"positions", "sink", "energy"});
  const Field pos = fleet.at("positions");
  for (std::size_t i = 0; i < pos.length(); ++i) c.uavs.push_back(pos.index(i).point());
  c.sink = fleet.at("sink").point();
  const Field energy = fleet.at("energy");
  if (energy.node.IsSequence()) {
    for (std::size_t i = 0; i < energy.length(); ++i) c.energy.push_back(energy.index(i).quantity(Unit::Energy));
  } else {
    c.energy.assign(static_cast<std::size_t>(std::max(c.params.n, 0)), energy.quantity(Unit::Energy));
  }

  if (!mapping) {
    const Field t = root.at("tracking");
    t.expect_map({"target", "transition", "process_noise", "observation", "noise_coefficient", "pi_min", "filter"});
    const Field target = t.at("target");
    target.expect_map({"position", "velocity"});
    const Vec2 p = target.at("position").point();
    const Vec2 v = target.at("velocity").point(Unit::Speed);
    c.tracking.target.x << p.x, p.y, v.x, v.y;
    c.tracking.transition = t.at("transition").matrix<4, 4>();
    c.tracking.process_noise = t.at("process_noise").matrix<4, 4>();
    c.tracking.sensor.H = t.at("observation").matrix<2, 4>();
    c.tracking.sensor.K = t.at("noise_coefficient").matrix<2, 2>();
    c.tracking.sensor.beta = c.params.path_loss_exponent;
    c.tracking.pi_min = t.quantity_at("pi_min", Unit::Dimensionless);
    const Field filter = t.at("filter");
    filter.expect_map({"info", "info_matrix"});
    c.tracking.filter.info = filter.at("info").matrix<4, 1>();
    c.tracking.filter.info_matrix = filter.at("info_matrix").matrix<4, 4>();
  } else {
    const Field m = root.at("mapping");
    m.expect_map({"region", "zeta", "tau", "chi", "speed", "substep"});
    const Field region = m.at("region");
    region.expect_map({"length", "width", "origin"});
    c.mapping.region.length = region.quantity_at("length", Unit::Length);
    c.mapping.region.width = region.quantity_at("width", Unit::Length);
    c.mapping.region.origin = region.at("origin").point();
    c.mapping.zeta = m.quantity_at("zeta", Unit::Dimensionless);
    c.mapping.guidance.tau = m.quantity_at("tau", Unit::Length);
    c.mapping.guidance.chi = m.quantity_at("chi", Unit::Angle);
    c.mapping.guidance.speed = m.quantity_at("speed", Unit::Speed);
    c.mapping.substep = m.quantity_at("substep", Unit::Time);
    c.params.aggregation_ratio.assign(c.params.sensing_rate.size(), c.mapping.zeta);
  }

  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    rethrow_invalid(e);
  }
  return c;
}

SimConfig parse_config(const std::filesystem::path& path) { return parse_config_string(read_file(path)); }

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }
std::string qty(double v, std::string_view unit) { return num(v) + std::string(unit); }
std::string point(Vec2 p, std::string_view unit = "m") {
  return fmt::format("[{}, {}]", qty(p.x, unit), qty(p.y, unit));
}

template <typename M>
std::string matrix(const M& m) {
  std::string out = "[";
  for (int r = 0; r < m.rows(); ++r) {
    out += r ? ", [" : "[";
    for (int c = 0; c < m.cols(); ++c) out += (c ? ", " : "") + num(m(r, c));
    out += "]";
  }
  return out + "]";
}

void write_scenario(std::string& out, const ScenarioParams& p, bool mapping) {
  out += "scenario:\n";
  out += fmt::format("  uavs: {}\n", p.n);
  out += fmt::format("  packet_length: {}\n", qty(p.packet_bits, "bit"));
  out += fmt::format("  bandwidth: {}\n", qty(p.bandwidth, "bps"));
  out += fmt::format("  interval: {}\n", qty(p.interval, "s"));
  out += fmt::format("  eps_sense: {}\n", qty(p.eps_sense, "J/bit"));
  out += fmt::format("  eps_process: {}\n", qty(p.eps_process, "J/bit"));
  out += fmt::format("  eps_receive: {}\n", qty(p.eps_receive, "J/bit"));
  out += fmt::format("  eps_transmit: {}\n", qty(p.eps_transmit, "J/bit"));
  out += fmt::format("  eps_amplifier: {}J/bit/m^{}\n", num(p.eps_amplifier), num(p.path_loss_exponent));
  out += fmt::format("  path_loss_exponent: {}\n", num(p.path_loss_exponent));
  out += fmt::format("  comm_range: {}\n", qty(p.comm_range, "m"));
  out += fmt::format("  sensing_range: {}\n", qty(p.sensing_range, "m"));
  out += fmt::format("  safety_range: {}\n", qty(p.safety_range, "m"));
  out += fmt::format("  v_min: {}\n", qty(p.v_min, "m/s"));
  out += fmt::format("  v_max: {}\n", qty(p.v_max, "m/s"));
  out += fmt::format("  eps_small: {}\n", num(p.eps_small));
  out += "  data_types:\n";
  for (std::size_t z = 0; z < p.sensing_rate.size(); ++z) {
    if (mapping) {
      out += fmt::format("    - {{sensing_rate: {}}}\n", num(p.sensing_rate[z]));
    } else {
      out += fmt::format("    - {{sensing_rate: {}, aggregation_ratio: {}}}\n", num(p.sensing_rate[z]),
                         num(p.aggregation_ratio[z]));
    }
  }
}

}  // namespace

std::string write_config(const SimConfig& c) {
  const bool mapping = c.kind == ScenarioKind::Mapping;
  std::string out;
  out += fmt::format("schema_version: {}\n", kConfigSchemaVersion);
  out += fmt::format("kind: {}\n", mapping ? "mapping" : "tracking");
  out += fmt::format("seed: {}\n", c.seed);
  out += fmt::format("horizon: {}\n", c.horizon);
  out += fmt::format("grid: {{headings: {}, speeds: {}}}\n", c.grid.headings, c.grid.speeds);
  write_scenario(out, c.params, mapping);
  out += "fleet:\n  positions:\n";
  for (const Vec2& p : c.uavs) out += fmt::format("    - {}\n", point(p));
  out += fmt::format("  sink: {}\n", point(c.sink));
  out += "  energy: [";
  for (std::size_t i = 0; i < c.energy.size(); ++i) out += (i ? ", " : "") + qty(c.energy[i], "J");
  out += "]\n";
  if (!mapping) {
    const TrackingSetup& t = c.tracking;
    out += "tracking:\n";
    out += fmt::format("  target: {{position: {}, velocity: {}}}\n", point(t.target.position()),
                       point(Vec2{t.target.x(2), t.target.x(3)}, "m/s"));
    out += fmt::format("  transition: {}\n", matrix(t.transition));
    out += fmt::format("  process_noise: {}\n", matrix(t.process_noise));
    out += fmt::format("  observation: {}\n", matrix(t.sensor.H));
    out += fmt::format("  noise_coefficient: {}\n", matrix(t.sensor.K));
    out += fmt::format("  pi_min: {}\n", num(t.pi_min));
    out += fmt::format("  filter: {{info: {}, info_matrix: {}}}\n", matrix(t.filter.info), matrix(t.filter.info_matrix));
  } else {
    const MappingSetup& m = c.mapping;
    out += "mapping:\n";
    out += fmt::format("  region: {{length: {}, width: {}, origin: {}}}\n", qty(m.region.length, "m"),
                       qty(m.region.width, "m"), point(m.region.origin));
    out += fmt::format("  zeta: {}\n", num(m.zeta));
    out += fmt::format("  tau: {}\n", qty(m.guidance.tau, "m"));
    out += fmt::format("  chi: {}\n", qty(m.guidance.chi, "rad"));
    out += fmt::format("  speed: {}\n", qty(m.guidance.speed, "m/s"));
    out += fmt::format("  substep: {}\n", qty(m.substep, "s"));
  }
  return out;
}

RoutingInstance parse_instance_string(std::string_view text) {
  const YAML::Node root_node = load(text);
  if (!root_node || root_node.IsNull())
    throw ConfigError("empty instance; required keys: schema_version, scenario, geometry, sensors");
  const Field root{root_node, ""};
  root.expect_map({"schema_version", "scenario", "geometry", "sensors", "energy"});
  check_schema(root);

  RoutingInstance inst;
  inst.params = parse_scenario(root.at("scenario"), false);
  const int n = inst.params.n;
  const int m = inst.params.type_count();

  const Field geo = root.at("geometry");
  geo.expect_map({"uavs", "sink", "source"});
  const Field uavs = geo.at("uavs");
  for (std::size_t i = 0; i < uavs.length(); ++i) inst.geometry.uavs.push_back(uavs.index(i).point());
  if (static_cast<int>(inst.geometry.uavs.size()) != n)
    throw ConfigError(fmt::format("'geometry.uavs' needs {} points", n));
  inst.geometry.sink = geo.at("sink").point();
  if (geo.has("source")) inst.geometry.source = geo.at("source").point();

  const Field sensors = root.at("sensors");
  if (static_cast<int>(sensors.length()) != n)
    throw ConfigError(fmt::format("'sensors' needs one row per UAV ({})", n));
  inst.sensors = SensorAssignment(n, m);
  for (int i = 0; i < n; ++i) {
    const Field row = sensors.index(static_cast<std::size_t>(i));
    if (static_cast<int>(row.length()) != m)
      throw ConfigError(fmt::format("'{}' needs one 0/1 flag per data type ({})", row.path, m));
    for (int z = 0; z < m; ++z) {
      const long flag = row.index(static_cast<std::size_t>(z)).integer();
      if (flag != 0 && flag != 1) throw ConfigError(fmt::format("'{}[{}]' must be 0 or 1", row.path, z));
      if (flag) inst.sensors.set(i + 1, z);
    }
  }
  if (root.has("energy")) {
    const Field e = root.at("energy");
    for (std::size_t i = 0; i < e.length(); ++i) inst.energy.push_back(e.index(i).quantity(Unit::Energy));
    if (static_cast<int>(inst.energy.size()) != n)
      throw ConfigError(fmt::format("'energy' needs one entry per UAV ({})", n));
  }
  try {
    inst.params.validate();
  } catch (const std::invalid_argument& e) {
    rethrow_invalid(e);
  }
  return inst;
}

RoutingInstance parse_instance(const std::filesystem::path& path) {
  return parse_instance_string(read_file(path));
}

}  // namespace aggroute
