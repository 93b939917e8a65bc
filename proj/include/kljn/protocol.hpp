#ifndef KLJN_PROTOCOL_HPP_
#define KLJN_PROTOCOL_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kljn/loop.hpp"
#include "kljn/noise.hpp"
#include "kljn/series.hpp"

namespace kljn {

enum class Bit : std::uint8_t { L = 0, H = 1 };

inline Bit other(Bit b) { return b == Bit::L ? Bit::H : Bit::L; }
std::string to_string(Bit b);

/// One party's resistor pair and per-resistor effective temperatures.
/// Negative fields mean "inherit the nominal ProtocolConfig value"; an
/// explicit 0 K temperature is a legitimate (degenerate) setting.
struct Endpoint {
  double r_low_ohm = -1.0;
  double r_high_ohm = -1.0;
  double t_low_kelvin = -1.0;
  double t_high_kelvin = -1.0;

  double resistance(Bit b) const {
    return b == Bit::L ? r_low_ohm : r_high_ohm;
  }
  double temperature(Bit b) const {
    return b == Bit::L ? t_low_kelvin : t_high_kelvin;
  }
};

enum class LoopState { LL, LH, HL, HH };
std::string to_string(LoopState s);
inline bool is_mixed(LoopState s) {
  return s == LoopState::LH || s == LoopState::HL;
}

struct AlarmEvent {
  enum class Kind { voltage_mismatch, current_mismatch };
  std::size_t sample_index = 0;  // position of the first violation
  Kind kind = Kind::voltage_mismatch;
  double magnitude = 0.0;  // relative deviation at that sample
};

/// Full run configuration of one key exchange.
///
/// The nominal values (r_low_ohm, r_high_ohm, t_eff_kelvin) are the publicly
/// agreed parameters used for classification and alarm scaling; `alice` and
/// `bob` carry the endpoints actually placed in the circuit, which may be
/// deliberately mismatched for attack studies.
struct ProtocolConfig {
  double r_low_ohm = 1e3;
  double r_high_ohm = 1e4;
  double t_eff_kelvin = 1e9;
  double bandwidth_hz = 1e4;
  double sample_rate_hz = 2e5;
  double clock_period_s = 0.2;
  NoiseKind noise_kind = NoiseKind::gaussian;
  LineModel line{};
  Endpoint alice{};  // zero-filled fields default to the nominal values
  Endpoint bob{};

  // Loop-resistance decision boundaries; 0 means "use the defaults"
  // (geometric means between the loop values of the adjacent states).
  double classify_threshold_low_ohm = 0.0;
  double classify_threshold_high_ohm = 0.0;

  double alarm_rel_tol = 1e-9;
  std::size_t alarm_check_stride = 1;

  std::size_t samples_per_period() const;
  double effective_threshold_low() const;
  double effective_threshold_high() const;
  /// Endpoint with unset (zero) fields replaced by the nominal values.
  Endpoint effective_endpoint(const Endpoint& e) const;
  NoiseParams noise_params(double resistance_ohm, double t_kelvin,
                           std::uint64_t seed) const;
  /// Throws domain_error when any invariant is violated.
  void validate() const;
};

struct ClassifyResult {
  Bit far_bit = Bit::L;
  double loop_estimate_ohm = 0.0;
  double far_estimate_ohm = 0.0;
};

/// Estimates the loop resistance from the current variance
/// (R = 4 k T B / var(i)) and classifies the far-end resistor given the
/// caller's own resistance. Throws estimation_error when var(i) == 0.
ClassifyResult classify_far_resistor(const SampleSeries& current,
                                     double own_r_ohm,
                                     const ProtocolConfig& config);

/// Compares the two endpoints' broadcast samples against the line-model
/// prediction every alarm_check_stride samples; returns the first violation.
std::optional<AlarmEvent> alarm_scan(const ChannelWaveforms& waveforms,
                                     const ProtocolConfig& config);

struct KeyMaterial {
  std::vector<std::uint8_t> bits;
  int generation = 0;  // 0 = raw exchange output
  bool trailing_bit_dropped = false;
};

struct PeriodOutcome {
  Bit alice_bit = Bit::L;
  Bit bob_bit = Bit::L;
  Bit alice_classified_far = Bit::L;
  Bit bob_classified_far = Bit::L;
  double alice_loop_estimate_ohm = 0.0;
  double bob_loop_estimate_ohm = 0.0;
  LoopState state = LoopState::LL;
  bool kept = false;
  std::optional<int> key_bit;  // present iff kept; 1 for HL, 0 for LH
  std::optional<AlarmEvent> alarm;
  ChannelWaveforms waveforms;  // cleared after the observer runs unless retained

  bool alice_believes_kept() const {
    return alice_classified_far != alice_bit;
  }
  bool bob_believes_kept() const { return bob_classified_far != bob_bit; }
  /// Key bit as each party records it: Alice's resistor defines the bit,
  /// Bob reads it from his classification of Alice.
  int alice_recorded_bit() const { return alice_bit == Bit::H ? 1 : 0; }
  int bob_recorded_bit() const {
    return bob_classified_far == Bit::H ? 1 : 0;
  }
};

/// Runs one clock period with derived per-generator noise seeds.
PeriodOutcome run_period(const ProtocolConfig& config, Bit alice_bit,
                         Bit bob_bit, std::uint64_t seed);

/// Same, with the two generator noise seeds given explicitly.
PeriodOutcome run_period_seeded(const ProtocolConfig& config, Bit alice_bit,
                                Bit bob_bit, std::uint64_t alice_noise_seed,
                                std::uint64_t bob_noise_seed);

struct ExchangeOptions {
  /// Keep per-period waveforms in the transcript (memory grows with
  /// n_periods * samples_per_period; leave off for long runs).
  bool retain_waveforms = false;
  /// Stop the exchange at the first alarm.
  bool stop_on_alarm = true;
  /// Called for every period with waveforms populated, before they are
  /// dropped from the stored transcript.
  std::function<void(const PeriodOutcome&)> observer;
};

struct ExchangeResult {
  KeyMaterial alice_key;
  KeyMaterial bob_key;
  std::vector<PeriodOutcome> transcript;
  std::size_t n_periods = 0;
  std::size_t kept_count = 0;
  std::size_t alarm_count = 0;

  double kept_fraction() const {
    return n_periods > 0 ? static_cast<double>(kept_count) /
                               static_cast<double>(n_periods)
                         : 0.0;
  }
  /// Fraction of kept positions where the two recorded keys agree.
  double fidelity() const;
};

/// Runs the full bit-exchange protocol: random resistor selection each
/// period, classification at both ends, kept/discarded bookkeeping and the
/// endpoint-comparison alarm. Deterministic for a given (config, seed).
/// Per-period noise seeds are derive_seed(seed, "noise-alice"/"noise-bob", p)
/// and the bit choices come from a generator seeded with
/// derive_seed(seed, "bits", 0).
ExchangeResult run_exchange(const ProtocolConfig& config,
                            std::size_t n_periods, std::uint64_t seed,
                            const ExchangeOptions& options = {});

}  // namespace kljn

#endif  // KLJN_PROTOCOL_HPP_
