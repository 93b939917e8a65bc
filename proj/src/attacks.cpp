#include "kljn/attacks.hpp"

#include <cmath>
#include <random>

#include "kljn/errors.hpp"
#include "kljn/seed.hpp"

namespace kljn {

EveObservation EveObservation::from(const ChannelWaveforms& wf,
                                    const ProtocolConfig& config) {
  EveObservation obs;
  obs.u_alice_end = wf.u_alice_end.view();
  obs.u_bob_end = wf.u_bob_end.view();
  obs.i_alice_end = wf.i_alice_end.view();
  obs.i_bob_end = wf.i_bob_end.view();
  obs.u_mid = wf.u_mid.view();
  obs.params.r_low_ohm = config.r_low_ohm;
  obs.params.r_high_ohm = config.r_high_ohm;
  obs.params.t_eff_kelvin = config.t_eff_kelvin;
  obs.params.bandwidth_hz = config.bandwidth_hz;
  obs.params.sample_rate_hz = config.sample_rate_hz;
  obs.params.line = config.line;
  obs.params.alice = config.effective_endpoint(config.alice);
  obs.params.bob = config.effective_endpoint(config.bob);
  return obs;
}

BitGuess attack_correlation(const EveObservation& obs) {
  BitGuess g;
  const double corr = stats::pearson(obs.u_alice_end, obs.i_alice_end);
  g.statistic = stats::mean_product(obs.u_alice_end, obs.i_alice_end);
  g.bit = g.statistic > 0.0 ? 1 : 0;
  const double n_eff = obs.params.effective_samples(obs.u_alice_end.size());
  g.confident = n_eff > 0.0 && std::abs(corr) > 3.0 / std::sqrt(n_eff);
  return g;
}

BitGuess attack_wire_resistance(const EveObservation& obs) {
  if (!obs.params.line.has_wire_resistance())
    throw domain_error(
        "attack_wire_resistance: requires a line with r_wire_ohm > 0");
  BitGuess g;
  const double va = stats::variance(obs.u_alice_end);
  const double vb = stats::variance(obs.u_bob_end);
  g.statistic = va - vb;
  g.bit = g.statistic > 0.0 ? 1 : 0;
  // Null spread of the variance difference: the common-mode fluctuation
  // cancels, leaving D = r_wire * mean(i * (u_a + u_b)).
  const double n_eff = obs.params.effective_samples(obs.u_alice_end.size());
  if (n_eff > 0.0) {
    const double vi = stats::variance(obs.i_alice_end);
    const double sigma = obs.params.line.r_wire_ohm *
                         std::sqrt(4.0 * vi * std::max(va, vb) / n_eff);
    g.confident = std::abs(g.statistic) > 3.0 * sigma;
  }
  return g;
}

BitGuess attack_temperature_mismatch(const EveObservation& obs) {
  const Endpoint& a = obs.params.alice;
  const Endpoint& b = obs.params.bob;
  const double s_lh = two_temperature_voltage_psd(a.r_low_ohm, a.t_low_kelvin,
                                                  b.r_high_ohm, b.t_high_kelvin);
  const double s_hl = two_temperature_voltage_psd(
      a.r_high_ohm, a.t_high_kelvin, b.r_low_ohm, b.t_low_kelvin);
  BitGuess g;
  const double measured = stats::variance(obs.u_alice_end);
  const double var_lh = s_lh * obs.params.bandwidth_hz;
  const double var_hl = s_hl * obs.params.bandwidth_hz;
  if (var_lh == var_hl) {
    // Matched temperatures: the two hypotheses coincide and carry no
    // information; fall back to a fixed guess.
    g.statistic = 0.0;
    g.bit = 0;
    return g;
  }
  const double mid = 0.5 * (var_lh + var_hl);
  g.statistic = (measured - mid) * (var_hl > var_lh ? 1.0 : -1.0);
  g.bit = g.statistic > 0.0 ? 1 : 0;
  const double n_eff = obs.params.effective_samples(obs.u_alice_end.size());
  if (n_eff > 0.0 && measured > 0.0) {
    const double sigma = measured * std::sqrt(2.0 / n_eff);
    g.confident = std::abs(measured - mid) > 3.0 * sigma;
  }
  return g;
}

BitGuess attack_resistor_mismatch(const EveObservation& obs, double delta) {
  BitGuess g;
  const double vi = stats::variance(obs.i_alice_end);
  if (!(vi > 0.0)) return g;
  const double rw = obs.params.line.r_wire_ohm;
  const double loop_lh = obs.params.r_low_ohm * (1.0 + delta) +
                         obs.params.r_high_ohm + rw;
  const double loop_hl = obs.params.r_low_ohm + obs.params.r_high_ohm + rw;
  if (loop_lh == loop_hl) {
    g.statistic = 0.0;
    g.bit = 0;
    return g;
  }
  const double est = 4.0 * kBoltzmann * obs.params.t_eff_kelvin *
                     obs.params.bandwidth_hz / vi;
  const double mid = 0.5 * (loop_lh + loop_hl);
  // The larger-loop hypothesis corresponds to Alice holding the scaled
  // low resistor (state LH, bit 0).
  g.statistic = (mid - est) * (loop_lh > loop_hl ? 1.0 : -1.0);
  g.bit = g.statistic > 0.0 ? 1 : 0;
  const double n_eff = obs.params.effective_samples(obs.i_alice_end.size());
  if (n_eff > 0.0) {
    const double sigma = est * std::sqrt(2.0 / n_eff);
    g.confident = std::abs(est - mid) > 3.0 * sigma;
  }
  return g;
}

BitGuess attack_higher_moment(const EveObservation& obs) {
  BitGuess g;
  const std::size_t n = obs.u_alice_end.size();
  if (n == 0) return g;
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double u = obs.u_alice_end[k];
    const double term = u * u * u * obs.i_alice_end[k];
    sum += term;
    sum_sq += term * term;
  }
  const double nn = static_cast<double>(n);
  g.statistic = sum / nn;
  g.bit = g.statistic > 0.0 ? 1 : 0;
  const double n_eff = obs.params.effective_samples(n);
  if (n_eff > 0.0) {
    const double var_term =
        std::max(sum_sq / nn - g.statistic * g.statistic, 0.0);
    const double sigma = std::sqrt(var_term / n_eff);
    g.confident = sigma > 0.0 && std::abs(g.statistic) > 3.0 * sigma;
  }
  return g;
}

AttackReport leak_metrics(std::span<const BitGuess> guesses,
                          std::span<const int> truth,
                          std::string attack_name) {
  if (guesses.empty()) throw domain_error("leak_metrics: empty input");
  if (guesses.size() != truth.size())
    throw domain_error("leak_metrics: guess/truth length mismatch");
  AttackReport rep;
  rep.attack_name = std::move(attack_name);
  rep.n_bits = guesses.size();
  std::size_t hits = 0, confident = 0;
  for (std::size_t i = 0; i < guesses.size(); ++i) {
    hits += guesses[i].bit == truth[i];
    confident += guesses[i].confident;
  }
  rep.p_correct = static_cast<double>(hits) / static_cast<double>(rep.n_bits);
  rep.wilson95 = stats::wilson_interval(hits, rep.n_bits, stats::kZ95);
  rep.wilson99 = stats::wilson_interval(hits, rep.n_bits, stats::kZ99);
  rep.leak_fraction =
      static_cast<double>(confident) / static_cast<double>(rep.n_bits);
  return rep;
}

std::string to_string(PassiveAttack a) {
  switch (a) {
    case PassiveAttack::correlation: return "correlation";
    case PassiveAttack::wire_resistance: return "wire_resistance";
    case PassiveAttack::temperature_mismatch: return "temperature_mismatch";
    case PassiveAttack::resistor_mismatch: return "resistor_mismatch";
    case PassiveAttack::higher_moment: return "higher_moment";
  }
  return "?";
}

AttackReport evaluate_passive_attack(const ProtocolConfig& config,
                                     PassiveAttack attack,
                                     std::size_t n_periods,
                                     std::uint64_t seed) {
  const Endpoint alice = config.effective_endpoint(config.alice);
  const double delta = alice.r_low_ohm / config.r_low_ohm - 1.0;

  std::vector<BitGuess> guesses;
  std::vector<int> truth;
  ExchangeOptions opts;
  opts.observer = [&](const PeriodOutcome& out) {
    if (!out.kept) return;
    const EveObservation obs = EveObservation::from(out.waveforms, config);
    BitGuess g;
    switch (attack) {
      case PassiveAttack::correlation:
        g = attack_correlation(obs);
        break;
      case PassiveAttack::wire_resistance:
        g = attack_wire_resistance(obs);
        break;
      case PassiveAttack::temperature_mismatch:
        g = attack_temperature_mismatch(obs);
        break;
      case PassiveAttack::resistor_mismatch:
        g = attack_resistor_mismatch(obs, delta);
        break;
      case PassiveAttack::higher_moment:
        g = attack_higher_moment(obs);
        break;
    }
    guesses.push_back(g);
    truth.push_back(*out.key_bit);
  };
  // Surface precondition failures (e.g. wire attack on an ideal line)
  // before running the whole exchange.
  if (attack == PassiveAttack::wire_resistance &&
      !config.line.has_wire_resistance())
    throw domain_error(
        "attack_wire_resistance: requires a line with r_wire_ohm > 0");

  run_exchange(config, n_periods, seed, opts);
  return leak_metrics(guesses, truth, to_string(attack));
}

AttackReport attack_inject(const ProtocolConfig& config,
                           const InjectionSpec& injection,
                           std::size_t n_periods, std::uint64_t seed) {
  config.validate();
  if (injection.relative_amplitude < 0.0)
    throw domain_error("attack_inject: relative_amplitude must be >= 0");

  const std::size_t n = config.samples_per_period();
  const ChannelSpectra nominal = analytic_channel_spectra(
      config.r_low_ohm, config.r_high_ohm, config.t_eff_kelvin);
  const double channel_rms_i =
      std::sqrt(nominal.s_i_ch * config.bandwidth_hz);
  const double level = injection.relative_amplitude * channel_rms_i;

  const Endpoint a = config.effective_endpoint(config.alice);
  const Endpoint b = config.effective_endpoint(config.bob);

  std::mt19937_64 bit_rng(derive_seed(seed, "bits", 0));
  auto draw_bit = [&bit_rng]() {
    return (bit_rng() >> 63) != 0 ? Bit::H : Bit::L;
  };

  AttackReport rep;
  rep.attack_name = injection.wave == InjectionSpec::Wave::dc
                        ? "inject_dc"
                        : "inject_gaussian";
  std::vector<BitGuess> guesses;
  std::vector<int> truth;

  for (std::size_t p = 0; p < n_periods; ++p) {
    const Bit abit = draw_bit();
    const Bit bbit = draw_bit();
    const double ra = a.resistance(abit);
    const double rb = b.resistance(bbit);
    const SampleSeries ua = synth_noise(config.noise_params(
        ra, a.temperature(abit), derive_seed(seed, "noise-alice", p)));
    const SampleSeries ub = synth_noise(config.noise_params(
        rb, b.temperature(bbit), derive_seed(seed, "noise-bob", p)));

    const bool active_this_period = level > 0.0 && p >= injection.onset_period;
    ChannelWaveforms wf;
    if (active_this_period) {
      SampleSeries inj;
      inj.sample_rate_hz = config.sample_rate_hz;
      if (injection.wave == InjectionSpec::Wave::dc) {
        inj.samples.assign(n, level);
      } else {
        NoiseParams ip;
        ip.psd_level = level * level / config.bandwidth_hz;
        ip.bandwidth_hz = config.bandwidth_hz;
        ip.sample_rate_hz = config.sample_rate_hz;
        ip.duration_s = config.clock_period_s;
        ip.seed = derive_seed(seed, "inject", p);
        ip.kind = NoiseKind::gaussian;
        inj = synth_noise(ip);
      }
      if (p == injection.onset_period) {
        for (std::size_t k = 0;
             k < std::min(injection.onset_sample, inj.samples.size()); ++k)
          inj.samples[k] = 0.0;
      }
      wf = solve_loop_injected(ua, ub, ra, rb, config.line, &inj);
    } else {
      wf = solve_loop(ua, ub, ra, rb, config.line);
    }

    const auto alarm = alarm_scan(wf, config);
    const LoopState state = abit == Bit::L
                                ? (bbit == Bit::L ? LoopState::LL : LoopState::LH)
                                : (bbit == Bit::L ? LoopState::HL : LoopState::HH);
    const bool kept = is_mixed(state) && !alarm.has_value();
    if (kept) {
      if (active_this_period) ++rep.compromised_kept_bits;
      const EveObservation obs = EveObservation::from(wf, config);
      guesses.push_back(attack_correlation(obs));
      truth.push_back(state == LoopState::HL ? 1 : 0);
    }
    if (alarm.has_value()) {
      rep.detected = true;
      rep.detection_sample = p * n + alarm->sample_index;
      break;  // the protocol terminates on alarm
    }
  }

  if (!guesses.empty()) {
    AttackReport scored = leak_metrics(guesses, truth, rep.attack_name);
    scored.detected = rep.detected;
    scored.detection_sample = rep.detection_sample;
    scored.compromised_kept_bits = rep.compromised_kept_bits;
    return scored;
  }
  return rep;
}

AttackReport attack_mitm(const ProtocolConfig& config, std::uint64_t seed,
                         double eve_noise_scale) {
  config.validate();
  if (eve_noise_scale < 0.0)
    throw domain_error("attack_mitm: eve_noise_scale must be >= 0");

  const Endpoint a = config.effective_endpoint(config.alice);
  const Endpoint b = config.effective_endpoint(config.bob);

  std::mt19937_64 rng(derive_seed(seed, "mitm-bits", 0));
  auto draw_bit = [&rng]() { return (rng() >> 63) != 0 ? Bit::H : Bit::L; };
  const Bit alice_bit = draw_bit();
  const Bit bob_bit = draw_bit();
  const Bit eve_facing_alice = draw_bit();
  const Bit eve_facing_bob = draw_bit();

  auto eve_noise = [&](Bit bit, const char* label) {
    const double r = bit == Bit::L ? config.r_low_ohm : config.r_high_ohm;
    NoiseParams p = config.noise_params(r, config.t_eff_kelvin,
                                        derive_seed(seed, label, 0));
    p.psd_level *= eve_noise_scale * eve_noise_scale;
    return synth_noise(p);
  };

  // Loop 1: Alice against Eve's impersonation of Bob.
  const SampleSeries ua = synth_noise(
      config.noise_params(a.resistance(alice_bit), a.temperature(alice_bit),
                          derive_seed(seed, "noise-alice", 0)));
  const SampleSeries ue_b = eve_noise(eve_facing_alice, "eve-bobside");
  const ChannelWaveforms loop1 =
      solve_loop(ua, ue_b, a.resistance(alice_bit),
                 eve_facing_alice == Bit::L ? config.r_low_ohm : config.r_high_ohm,
                 config.line);

  // Loop 2: Eve's impersonation of Alice against Bob.
  const SampleSeries ue_a = eve_noise(eve_facing_bob, "eve-aliceside");
  const SampleSeries ub = synth_noise(
      config.noise_params(b.resistance(bob_bit), b.temperature(bob_bit),
                          derive_seed(seed, "noise-bob", 0)));
  const ChannelWaveforms loop2 = solve_loop(
      ue_a, ub,
      eve_facing_bob == Bit::L ? config.r_low_ohm : config.r_high_ohm,
      b.resistance(bob_bit), config.line);

  // The public comparison now spans two disjoint loops: Alice broadcasts
  // loop-1 values, Bob broadcasts loop-2 values. Whatever Eve relays, Bob's
  // own local taps come from Eve's loop, so the consistency check fails.
  ChannelWaveforms crossed;
  crossed.u_alice_end = loop1.u_alice_end;
  crossed.i_alice_end = loop1.i_alice_end;
  crossed.u_bob_end = loop2.u_bob_end;
  crossed.i_bob_end = loop2.i_bob_end;
  crossed.u_mid = loop1.u_mid;

  AttackReport rep;
  rep.attack_name = "mitm";
  const auto alarm = alarm_scan(crossed, config);
  if (alarm.has_value()) {
    rep.detected = true;
    rep.detection_sample = alarm->sample_index;
  }
  rep.n_bits = 0;  // the alarm fires before any period completes
  rep.compromised_kept_bits = 0;
  return rep;
}

}  // namespace kljn
