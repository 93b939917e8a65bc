#include "kljn/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "kljn/errors.hpp"

namespace kljn {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw config_error("config field '" + path + "': " + what);
}

double get_number(const json& j, const std::string& path, const char* key,
                  double fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

std::uint64_t get_uint(const json& j, const std::string& path, const char* key,
                       std::uint64_t fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
    fail(path + "." + key, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

std::string get_string(const json& j, const std::string& path, const char* key,
                       const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

Endpoint parse_endpoint(const json& j, const std::string& path) {
  Endpoint e;
  e.r_low_ohm = get_number(j, path, "r_low_ohm", -1.0);
  e.r_high_ohm = get_number(j, path, "r_high_ohm", -1.0);
  e.t_low_kelvin = get_number(j, path, "t_low_kelvin", -1.0);
  e.t_high_kelvin = get_number(j, path, "t_high_kelvin", -1.0);
  return e;
}

LineModel parse_line(const json& j, const std::string& path) {
  LineModel line;
  const std::string kind = get_string(j, path, "kind", "ideal");
  if (kind == "ideal") {
    line.kind = LineModel::Kind::ideal;
  } else if (kind == "resistive") {
    line.kind = LineModel::Kind::resistive;
  } else if (kind == "rc") {
    line.kind = LineModel::Kind::rc;
  } else {
    fail(path + ".kind", "expected one of ideal, resistive, rc");
  }
  line.r_wire_ohm = get_number(j, path, "r_wire_ohm", 0.0);
  line.c_line_farad = get_number(j, path, "c_line_farad", 0.0);
  return line;
}

ProtocolConfig parse_protocol(const json& j) {
  ProtocolConfig c;
  const std::string path = "protocol";
  c.r_low_ohm = get_number(j, path, "r_low_ohm", c.r_low_ohm);
  c.r_high_ohm = get_number(j, path, "r_high_ohm", c.r_high_ohm);
  c.t_eff_kelvin = get_number(j, path, "t_eff_kelvin", c.t_eff_kelvin);
  c.bandwidth_hz = get_number(j, path, "bandwidth_hz", c.bandwidth_hz);
  c.sample_rate_hz = get_number(j, path, "sample_rate_hz", c.sample_rate_hz);
  c.clock_period_s = get_number(j, path, "clock_period_s", c.clock_period_s);
  const std::string noise = get_string(j, path, "noise", "gaussian");
  if (noise == "gaussian") {
    c.noise_kind = NoiseKind::gaussian;
  } else if (noise == "uniform_white") {
    c.noise_kind = NoiseKind::uniform_white;
  } else {
    fail(path + ".noise", "expected gaussian or uniform_white");
  }
  if (j.contains("line")) c.line = parse_line(j.at("line"), path + ".line");
  if (j.contains("alice"))
    c.alice = parse_endpoint(j.at("alice"), path + ".alice");
  if (j.contains("bob")) c.bob = parse_endpoint(j.at("bob"), path + ".bob");
  if (j.contains("classify_thresholds_ohm")) {
    const auto& t = j.at("classify_thresholds_ohm");
    if (!t.is_array() || t.size() != 2)
      fail(path + ".classify_thresholds_ohm", "expected [low, high]");
    c.classify_threshold_low_ohm = t.at(0).get<double>();
    c.classify_threshold_high_ohm = t.at(1).get<double>();
  }
  c.alarm_rel_tol = get_number(j, path, "alarm_rel_tol", c.alarm_rel_tol);
  c.alarm_check_stride = static_cast<std::size_t>(
      get_uint(j, path, "alarm_check_stride", c.alarm_check_stride));
  return c;
}

}  // namespace

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  RunConfig rc;
  if (j.contains("protocol")) {
    if (!j.at("protocol").is_object())
      fail("protocol", "expected an object");
    rc.protocol = parse_protocol(j.at("protocol"));
  }
  rc.n_periods = static_cast<std::size_t>(
      get_uint(j, "", "n_periods", rc.n_periods));
  rc.seed = get_uint(j, "", "seed", rc.seed);
  rc.attack_name = get_string(j, "", "attack", "");
  if (j.contains("injection")) {
    const auto& ji = j.at("injection");
    const std::string wave = get_string(ji, "injection", "wave", "gaussian");
    if (wave == "gaussian") {
      rc.injection.wave = InjectionSpec::Wave::gaussian;
    } else if (wave == "dc") {
      rc.injection.wave = InjectionSpec::Wave::dc;
    } else {
      fail("injection.wave", "expected gaussian or dc");
    }
    rc.injection.relative_amplitude = get_number(
        ji, "injection", "relative_amplitude", rc.injection.relative_amplitude);
    rc.injection.onset_period = static_cast<std::size_t>(
        get_uint(ji, "injection", "onset_period", rc.injection.onset_period));
    rc.injection.onset_sample = static_cast<std::size_t>(
        get_uint(ji, "injection", "onset_sample", rc.injection.onset_sample));
  }
  if (j.contains("sweep")) {
    const auto& js = j.at("sweep");
    rc.sweep.parameter = get_string(js, "sweep", "parameter", "");
    if (js.contains("values")) {
      const auto& v = js.at("values");
      if (!v.is_array()) fail("sweep.values", "expected an array of numbers");
      for (const auto& x : v) {
        if (!x.is_number()) fail("sweep.values", "expected an array of numbers");
        rc.sweep.values.push_back(x.get<double>());
      }
    }
  }
  if (j.contains("chain")) {
    const auto& jc = j.at("chain");
    rc.chain.n_agents =
        static_cast<int>(get_uint(jc, "chain", "n_agents", rc.chain.n_agents));
    rc.chain.n_bits = static_cast<std::size_t>(
        get_uint(jc, "chain", "n_bits", rc.chain.n_bits));
    rc.chain.periods_per_link = static_cast<std::size_t>(get_uint(
        jc, "chain", "periods_per_link", rc.chain.periods_per_link));
  }
  if (j.contains("psd")) {
    rc.psd.state = get_string(j.at("psd"), "psd", "state", rc.psd.state);
  }
  return rc;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw config_error(std::string("config parse error in ") + path + ": " +
                       e.what());
  }
  return from_json(j);
}

nlohmann::ordered_json RunConfig::echo_json() const {
  nlohmann::ordered_json p;
  p["r_low_ohm"] = protocol.r_low_ohm;
  p["r_high_ohm"] = protocol.r_high_ohm;
  p["t_eff_kelvin"] = protocol.t_eff_kelvin;
  p["bandwidth_hz"] = protocol.bandwidth_hz;
  p["sample_rate_hz"] = protocol.sample_rate_hz;
  p["clock_period_s"] = protocol.clock_period_s;
  p["noise"] = protocol.noise_kind == NoiseKind::gaussian ? "gaussian"
                                                          : "uniform_white";
  const char* kind = "ideal";
  if (protocol.line.kind == LineModel::Kind::resistive) kind = "resistive";
  if (protocol.line.kind == LineModel::Kind::rc) kind = "rc";
  p["line"] = {{"kind", kind},
               {"r_wire_ohm", protocol.line.r_wire_ohm},
               {"c_line_farad", protocol.line.c_line_farad}};
  const Endpoint a = protocol.effective_endpoint(protocol.alice);
  const Endpoint b = protocol.effective_endpoint(protocol.bob);
  p["alice"] = {{"r_low_ohm", a.r_low_ohm},
                {"r_high_ohm", a.r_high_ohm},
                {"t_low_kelvin", a.t_low_kelvin},
                {"t_high_kelvin", a.t_high_kelvin}};
  p["bob"] = {{"r_low_ohm", b.r_low_ohm},
              {"r_high_ohm", b.r_high_ohm},
              {"t_low_kelvin", b.t_low_kelvin},
              {"t_high_kelvin", b.t_high_kelvin}};
  p["alarm_rel_tol"] = protocol.alarm_rel_tol;
  p["alarm_check_stride"] = protocol.alarm_check_stride;

  nlohmann::ordered_json out;
  out["protocol"] = std::move(p);
  out["n_periods"] = n_periods;
  out["seed"] = seed;
  if (!attack_name.empty()) out["attack"] = attack_name;
  return out;
}

const std::vector<std::string>& known_attack_names() {
  static const std::vector<std::string> names = {
      "correlation",       "wire_resistance", "temperature_mismatch",
      "resistor_mismatch", "higher_moment",   "inject",
      "mitm"};
  return names;
}

namespace {

using Setter = std::function<void(ProtocolConfig&, double)>;

const std::map<std::string, Setter>& sweep_setters() {
  static const std::map<std::string, Setter> setters = {
      {"line.r_wire_ohm",
       [](ProtocolConfig& c, double v) {
         c.line.r_wire_ohm = v;
         if (v > 0.0 && c.line.kind == LineModel::Kind::ideal)
           c.line.kind = LineModel::Kind::resistive;
       }},
      {"line.c_line_farad",
       [](ProtocolConfig& c, double v) {
         c.line.c_line_farad = v;
         if (v > 0.0) c.line.kind = LineModel::Kind::rc;
       }},
      {"t_eff_kelvin", [](ProtocolConfig& c, double v) { c.t_eff_kelvin = v; }},
      {"bandwidth_hz", [](ProtocolConfig& c, double v) { c.bandwidth_hz = v; }},
      {"clock_period_s",
       [](ProtocolConfig& c, double v) { c.clock_period_s = v; }},
      {"alice.r_low_ohm",
       [](ProtocolConfig& c, double v) { c.alice.r_low_ohm = v; }},
      {"alice.r_high_ohm",
       [](ProtocolConfig& c, double v) { c.alice.r_high_ohm = v; }},
      {"alice.t_low_kelvin",
       [](ProtocolConfig& c, double v) { c.alice.t_low_kelvin = v; }},
      {"alice.t_high_kelvin",
       [](ProtocolConfig& c, double v) { c.alice.t_high_kelvin = v; }},
      {"bob.r_low_ohm",
       [](ProtocolConfig& c, double v) { c.bob.r_low_ohm = v; }},
      {"bob.r_high_ohm",
       [](ProtocolConfig& c, double v) { c.bob.r_high_ohm = v; }},
      {"bob.t_low_kelvin",
       [](ProtocolConfig& c, double v) { c.bob.t_low_kelvin = v; }},
      {"bob.t_high_kelvin",
       [](ProtocolConfig& c, double v) { c.bob.t_high_kelvin = v; }},
  };
  return setters;
}

}  // namespace

const std::vector<std::string>& known_sweep_parameters() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, setter] : sweep_setters()) out.push_back(name);
    return out;
  }();
  return names;
}

void apply_sweep_value(ProtocolConfig& config, const std::string& parameter,
                       double value) {
  const auto& setters = sweep_setters();
  auto it = setters.find(parameter);
  if (it == setters.end()) {
    std::ostringstream msg;
    msg << "unknown sweep parameter '" << parameter << "'; valid parameters:";
    for (const auto& name : known_sweep_parameters()) msg << ' ' << name;
    throw config_error(msg.str());
  }
  it->second(config, value);
}

}  // namespace kljn
