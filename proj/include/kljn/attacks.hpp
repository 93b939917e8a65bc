#ifndef KLJN_ATTACKS_HPP_
#define KLJN_ATTACKS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kljn/protocol.hpp"
#include "kljn/stats.hpp"

namespace kljn {

/// What Eve legitimately knows: the publicly agreed protocol parameters.
/// Endpoint mismatches are calibratable from public data, so the worst-case
/// passive Eve is given the resolved endpoint values too.
struct EvePublicParams {
  double r_low_ohm = 0.0;
  double r_high_ohm = 0.0;
  double t_eff_kelvin = 0.0;
  double bandwidth_hz = 0.0;
  double sample_rate_hz = 0.0;
  LineModel line{};
  Endpoint alice{};
  Endpoint bob{};

  /// Effective independent sample count of one period of band-limited noise.
  double effective_samples(std::size_t n_samples) const {
    return 2.0 * bandwidth_hz * static_cast<double>(n_samples) /
           sample_rate_hz;
  }
};

/// Read-only view of the channel taps Eve can measure during one period.
/// Spans alias the recorded waveforms; an observation must not outlive them.
struct EveObservation {
  std::span<const double> u_alice_end;
  std::span<const double> u_bob_end;
  std::span<const double> i_alice_end;
  std::span<const double> i_bob_end;
  std::span<const double> u_mid;
  EvePublicParams params;

  static EveObservation from(const ChannelWaveforms& wf,
                             const ProtocolConfig& config);
};

/// One attacked period: Eve's bit guess, the decision statistic and whether
/// the statistic cleared the 3-sigma confidence band around its null value.
struct BitGuess {
  int bit = 0;
  double statistic = 0.0;
  bool confident = false;
};

/// Sign of <u*i>: positive mean power flow Alice->Bob reads as bit 1.
BitGuess attack_correlation(const EveObservation& obs);

/// Sign of var(u_alice_end) - var(u_bob_end): the end with the larger
/// voltage variance sits next to the larger resistor. Requires a line with
/// nonzero wire resistance; throws domain_error for an ideal line.
BitGuess attack_wire_resistance(const EveObservation& obs);

/// Compares the measured channel-voltage variance against the two analytic
/// LH/HL predictions computed with the per-generator temperatures.
BitGuess attack_temperature_mismatch(const EveObservation& obs);

/// Loop-resistance estimate against the two hypotheses that Alice's or
/// Bob's side contributed the (1+delta)-scaled low resistor.
BitGuess attack_resistor_mismatch(const EveObservation& obs, double delta);

/// Third-order statistic <u^3 * i>; informative only for non-Gaussian noise.
BitGuess attack_higher_moment(const EveObservation& obs);

struct AttackReport {
  std::string attack_name;
  std::size_t n_bits = 0;
  double p_correct = 0.0;
  stats::Interval wilson95{0.0, 0.0};
  stats::Interval wilson99{0.0, 0.0};
  double leak_fraction = 0.0;  // fraction of bits guessed with confidence
  bool detected = false;
  std::optional<std::size_t> detection_sample;  // global sample index
  std::size_t compromised_kept_bits = 0;  // kept while the attack was active
};

/// Scores per-bit guesses against the true key bits. Throws domain_error on
/// empty or mismatched inputs.
AttackReport leak_metrics(std::span<const BitGuess> guesses,
                          std::span<const int> truth, std::string attack_name);

enum class PassiveAttack {
  correlation,
  wire_resistance,
  temperature_mismatch,
  resistor_mismatch,
  higher_moment,
};

std::string to_string(PassiveAttack a);

/// Runs an exchange and evaluates the given passive attack on every kept
/// period. Eve sees only the channel taps and public parameters.
AttackReport evaluate_passive_attack(const ProtocolConfig& config,
                                     PassiveAttack attack,
                                     std::size_t n_periods,
                                     std::uint64_t seed);

struct InjectionSpec {
  enum class Wave { gaussian, dc };
  Wave wave = Wave::gaussian;
  /// Injection amplitude relative to the nominal channel current RMS
  /// (gaussian: RMS ratio; dc: level ratio).
  double relative_amplitude = 0.1;
  std::size_t onset_period = 0;
  std::size_t onset_sample = 0;
};

/// Invasive attack: a current source at the wire midpoint from the given
/// onset. The exchange stops at the first alarm; kept periods overlapping an
/// active injection count as compromised.
AttackReport attack_inject(const ProtocolConfig& config,
                           const InjectionSpec& injection,
                           std::size_t n_periods, std::uint64_t seed);

/// Man-in-the-middle: Eve severs the line and runs two independent KLJN
/// endpoints, one facing each party. The endpoint comparison then spans two
/// unrelated loops and trips at the first compared sample.
/// eve_noise_scale scales Eve's generator PSD (0 = silent Eve).
AttackReport attack_mitm(const ProtocolConfig& config, std::uint64_t seed,
                         double eve_noise_scale = 1.0);

}  // namespace kljn

#endif  // KLJN_ATTACKS_HPP_
