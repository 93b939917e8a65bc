#ifndef KLJN_CONFIG_HPP_
#define KLJN_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "kljn/attacks.hpp"
#include "kljn/protocol.hpp"

namespace kljn {

struct SweepSpec {
  std::string parameter;  // e.g. "line.r_wire_ohm", "alice.t_low_kelvin"
  std::vector<double> values;
};

struct ChainSpec {
  int n_agents = 5;
  std::size_t n_bits = 100;
  /// Clock periods run per link; 0 sizes it automatically from n_bits.
  std::size_t periods_per_link = 0;
};

struct PsdSpec {
  std::string state = "LH";  // LL, LH, HL or HH
};

/// One experiment description as loaded from a config file.
struct RunConfig {
  ProtocolConfig protocol{};
  std::size_t n_periods = 1000;
  std::uint64_t seed = 1;
  std::string attack_name;  // for the attack and sweep experiments
  InjectionSpec injection{};
  SweepSpec sweep{};
  ChainSpec chain{};
  PsdSpec psd{};

  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig from_file(const std::string& path);
  nlohmann::ordered_json echo_json() const;
};

/// Names accepted by the attack experiment.
const std::vector<std::string>& known_attack_names();

/// Parameter paths accepted by the sweep experiment.
const std::vector<std::string>& known_sweep_parameters();

/// Applies one sweep value to a copy of the protocol config. Throws
/// config_error for unknown parameter paths.
void apply_sweep_value(ProtocolConfig& config, const std::string& parameter,
                       double value);

}  // namespace kljn

#endif  // KLJN_CONFIG_HPP_
