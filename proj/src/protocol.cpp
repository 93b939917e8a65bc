#include "kljn/protocol.hpp"

#include <cmath>
#include <random>

#include "kljn/errors.hpp"
#include "kljn/seed.hpp"
#include "kljn/stats.hpp"

namespace kljn {

std::string to_string(Bit b) { return b == Bit::L ? "L" : "H"; }

std::string to_string(LoopState s) {
  switch (s) {
    case LoopState::LL: return "LL";
    case LoopState::LH: return "LH";
    case LoopState::HL: return "HL";
    case LoopState::HH: return "HH";
  }
  return "?";
}

std::size_t ProtocolConfig::samples_per_period() const {
  return static_cast<std::size_t>(
      std::llround(sample_rate_hz * clock_period_s));
}

Endpoint ProtocolConfig::effective_endpoint(const Endpoint& e) const {
  Endpoint out = e;
  if (out.r_low_ohm < 0.0) out.r_low_ohm = r_low_ohm;
  if (out.r_high_ohm < 0.0) out.r_high_ohm = r_high_ohm;
  if (out.t_low_kelvin < 0.0) out.t_low_kelvin = t_eff_kelvin;
  if (out.t_high_kelvin < 0.0) out.t_high_kelvin = t_eff_kelvin;
  return out;
}

double ProtocolConfig::effective_threshold_low() const {
  if (classify_threshold_low_ohm > 0.0) return classify_threshold_low_ohm;
  const double rw = line.r_wire_ohm;
  return std::sqrt((2.0 * r_low_ohm + rw) * (r_low_ohm + r_high_ohm + rw));
}

double ProtocolConfig::effective_threshold_high() const {
  if (classify_threshold_high_ohm > 0.0) return classify_threshold_high_ohm;
  const double rw = line.r_wire_ohm;
  return std::sqrt((r_low_ohm + r_high_ohm + rw) * (2.0 * r_high_ohm + rw));
}

NoiseParams ProtocolConfig::noise_params(double resistance_ohm,
                                         double t_kelvin,
                                         std::uint64_t seed) const {
  NoiseParams p;
  p.psd_level = johnson_psd(resistance_ohm, t_kelvin);
  p.bandwidth_hz = bandwidth_hz;
  p.sample_rate_hz = sample_rate_hz;
  p.duration_s = clock_period_s;
  p.seed = seed;
  p.kind = noise_kind;
  return p;
}

void ProtocolConfig::validate() const {
  if (!(r_low_ohm > 0.0) || !(r_low_ohm < r_high_ohm))
    throw domain_error("config: need 0 < r_low_ohm < r_high_ohm");
  if (t_eff_kelvin < 0.0)
    throw domain_error("config: t_eff_kelvin must be >= 0");
  if (!(bandwidth_hz > 0.0) || !(sample_rate_hz > 0.0) ||
      !(clock_period_s > 0.0))
    throw domain_error("config: bandwidth, sample rate and period must be > 0");
  if (bandwidth_hz > sample_rate_hz / 2.0 * (1.0 + 1e-12))
    throw domain_error("config: bandwidth_hz must be <= sample_rate_hz / 2");
  if (samples_per_period() < 16)
    throw domain_error("config: fewer than 16 samples per clock period");
  line.validate();
  // The RC discretization needs heavy oversampling to stay accurate; the
  // purely algebraic ideal/resistive solves do not.
  if (line.kind == LineModel::Kind::rc &&
      sample_rate_hz < 20.0 * bandwidth_hz * (1.0 - 1e-12))
    throw domain_error("config: rc line requires sample_rate_hz >= 20 * bandwidth_hz");
  const double lo = effective_threshold_low();
  const double hi = effective_threshold_high();
  if (!(lo < hi) || !(lo > 2.0 * r_low_ohm) || !(hi < 2.0 * r_high_ohm))
    throw domain_error(
        "config: classify thresholds must be strictly ordered between "
        "2*r_low_ohm and 2*r_high_ohm");
  if (!(alarm_rel_tol > 0.0))
    throw domain_error("config: alarm_rel_tol must be > 0");
  if (alarm_check_stride < 1)
    throw domain_error("config: alarm_check_stride must be >= 1");
  const Endpoint a = effective_endpoint(alice);
  const Endpoint b = effective_endpoint(bob);
  for (const Endpoint& e : {a, b}) {
    if (!(e.r_low_ohm > 0.0) || !(e.r_low_ohm < e.r_high_ohm))
      throw domain_error("config: endpoint needs 0 < r_low < r_high");
    if (e.t_low_kelvin < 0.0 || e.t_high_kelvin < 0.0)
      throw domain_error("config: endpoint temperatures must be >= 0");
  }
}

ClassifyResult classify_far_resistor(const SampleSeries& current,
                                     double own_r_ohm,
                                     const ProtocolConfig& config) {
  if (current.empty()) throw domain_error("classify: empty current series");
  const double v = stats::variance(current.view());
  if (!(v > 0.0))
    throw estimation_error("classify: zero current variance, cannot estimate");
  ClassifyResult res;
  res.loop_estimate_ohm =
      4.0 * kBoltzmann * config.t_eff_kelvin * config.bandwidth_hz / v;
  res.far_estimate_ohm =
      res.loop_estimate_ohm - own_r_ohm - config.line.r_wire_ohm;

  // The party knows which resistor it connected; the loop estimate then only
  // has to fall on the right side of the single relevant boundary.
  const bool own_is_low = std::abs(own_r_ohm - config.r_low_ohm) <
                          std::abs(own_r_ohm - config.r_high_ohm);
  if (own_is_low) {
    res.far_bit = res.loop_estimate_ohm > config.effective_threshold_low()
                      ? Bit::H
                      : Bit::L;
  } else {
    res.far_bit = res.loop_estimate_ohm < config.effective_threshold_high()
                      ? Bit::L
                      : Bit::H;
  }
  return res;
}

namespace {

struct AlarmScales {
  double u = 0.0;
  double i = 0.0;
};

AlarmScales alarm_scales(const ProtocolConfig& config) {
  // Nominal channel RMS in the mixed state; public knowledge, so both
  // parties normalize their comparison identically.
  const ChannelSpectra s = analytic_channel_spectra(
      config.r_low_ohm, config.r_high_ohm, config.t_eff_kelvin);
  constexpr double tiny = 1e-300;
  return {std::max(std::sqrt(s.s_u_ch * config.bandwidth_hz), tiny),
          std::max(std::sqrt(s.s_i_ch * config.bandwidth_hz), tiny)};
}

}  // namespace

std::optional<AlarmEvent> alarm_scan(const ChannelWaveforms& wf,
                                     const ProtocolConfig& config) {
  const std::size_t n = wf.size();
  if (n == 0 || wf.u_bob_end.size() != n || wf.i_alice_end.size() != n ||
      wf.i_bob_end.size() != n)
    return std::nullopt;

  const AlarmScales scale = alarm_scales(config);
  const double tol = config.alarm_rel_tol;
  const auto& ua = wf.u_alice_end.samples;
  const auto& ub = wf.u_bob_end.samples;
  const auto& ia = wf.i_alice_end.samples;
  const auto& ib = wf.i_bob_end.samples;
  const double rw = config.line.r_wire_ohm;
  const double half_rw = rw / 2.0;
  const bool rc = config.line.kind == LineModel::Kind::rc &&
                  config.line.c_line_farad > 0.0;
  const double fs = config.sample_rate_hz;
  const double cap = config.line.c_line_farad;

  for (std::size_t k = 0; k < n; k += config.alarm_check_stride) {
    // Voltage consistency: both ends must reconstruct the same midpoint
    // potential from their local taps.
    const double v_from_a = ua[k] - ia[k] * half_rw;
    const double v_from_b = ub[k] + ib[k] * half_rw;
    const double ru = std::abs(v_from_a - v_from_b) / scale.u;
    if (ru > tol)
      return AlarmEvent{k, AlarmEvent::Kind::voltage_mismatch, ru};

    double ri;
    if (!rc) {
      ri = std::abs(ia[k] - ib[k]) / scale.i;
    } else if (k >= 1) {
      // Current balance at the midpoint capacitor, discretized exactly as
      // the solver integrates it.
      const double va_k = ua[k] - ia[k] * half_rw;
      const double va_prev = ua[k - 1] - ia[k - 1] * half_rw;
      const double cap_current = cap * (va_k - va_prev) * fs;
      const double net = 0.5 * ((ia[k] - ib[k]) + (ia[k - 1] - ib[k - 1]));
      ri = std::abs(cap_current + net) / scale.i;
    } else {
      continue;
    }
    if (ri > tol)
      return AlarmEvent{k, AlarmEvent::Kind::current_mismatch, ri};
  }
  return std::nullopt;
}

namespace {

LoopState state_of(Bit a, Bit b) {
  if (a == Bit::L) return b == Bit::L ? LoopState::LL : LoopState::LH;
  return b == Bit::L ? LoopState::HL : LoopState::HH;
}

}  // namespace

PeriodOutcome run_period_seeded(const ProtocolConfig& config, Bit alice_bit,
                                Bit bob_bit, std::uint64_t alice_noise_seed,
                                std::uint64_t bob_noise_seed) {
  config.validate();
  const Endpoint a = config.effective_endpoint(config.alice);
  const Endpoint b = config.effective_endpoint(config.bob);
  const double ra = a.resistance(alice_bit);
  const double rb = b.resistance(bob_bit);

  const SampleSeries ua = synth_noise(
      config.noise_params(ra, a.temperature(alice_bit), alice_noise_seed));
  const SampleSeries ub = synth_noise(
      config.noise_params(rb, b.temperature(bob_bit), bob_noise_seed));

  PeriodOutcome out;
  out.alice_bit = alice_bit;
  out.bob_bit = bob_bit;
  out.state = state_of(alice_bit, bob_bit);
  out.waveforms = solve_loop(ua, ub, ra, rb, config.line);

  const ClassifyResult ca =
      classify_far_resistor(out.waveforms.i_alice_end, ra, config);
  const ClassifyResult cb =
      classify_far_resistor(out.waveforms.i_bob_end, rb, config);
  out.alice_classified_far = ca.far_bit;
  out.bob_classified_far = cb.far_bit;
  out.alice_loop_estimate_ohm = ca.loop_estimate_ohm;
  out.bob_loop_estimate_ohm = cb.loop_estimate_ohm;

  out.alarm = alarm_scan(out.waveforms, config);
  out.kept = is_mixed(out.state) && !out.alarm.has_value();
  if (out.kept) out.key_bit = out.state == LoopState::HL ? 1 : 0;
  return out;
}

PeriodOutcome run_period(const ProtocolConfig& config, Bit alice_bit,
                         Bit bob_bit, std::uint64_t seed) {
  return run_period_seeded(config, alice_bit, bob_bit,
                           derive_seed(seed, "noise-alice", 0),
                           derive_seed(seed, "noise-bob", 0));
}

double ExchangeResult::fidelity() const {
  if (alice_key.bits.empty() && bob_key.bits.empty()) return 1.0;
  const std::size_t n = std::min(alice_key.bits.size(), bob_key.bits.size());
  if (n == 0) return 0.0;
  std::size_t agree = 0;
  for (std::size_t i = 0; i < n; ++i)
    agree += alice_key.bits[i] == bob_key.bits[i];
  return static_cast<double>(agree) / static_cast<double>(n);
}

ExchangeResult run_exchange(const ProtocolConfig& config,
                            std::size_t n_periods, std::uint64_t seed,
                            const ExchangeOptions& options) {
  if (n_periods < 1) throw domain_error("run_exchange: n_periods must be >= 1");
  config.validate();

  std::mt19937_64 bit_rng(derive_seed(seed, "bits", 0));
  auto draw_bit = [&bit_rng]() {
    return (bit_rng() >> 63) != 0 ? Bit::H : Bit::L;
  };

  ExchangeResult res;
  for (std::size_t p = 0; p < n_periods; ++p) {
    const Bit a = draw_bit();
    const Bit b = draw_bit();
    PeriodOutcome out =
        run_period_seeded(config, a, b, derive_seed(seed, "noise-alice", p),
                          derive_seed(seed, "noise-bob", p));
    ++res.n_periods;
    if (out.alarm.has_value()) ++res.alarm_count;
    if (out.kept) {
      ++res.kept_count;
      res.alice_key.bits.push_back(
          static_cast<std::uint8_t>(out.alice_recorded_bit()));
      res.bob_key.bits.push_back(
          static_cast<std::uint8_t>(out.bob_recorded_bit()));
    }
    if (options.observer) options.observer(out);
    const bool alarmed = out.alarm.has_value();
    if (!options.retain_waveforms) out.waveforms = ChannelWaveforms{};
    res.transcript.push_back(std::move(out));
    if (alarmed && options.stop_on_alarm) break;
  }
  return res;
}

}  // namespace kljn
