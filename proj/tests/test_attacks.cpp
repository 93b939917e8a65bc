#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "kljn/attacks.hpp"
#include "kljn/errors.hpp"
#include "test_util.hpp"

using namespace kljn;
using kljn::test::default_config;
using kljn::test::fast_config;

TEST_SUITE("attacks") {

TEST_CASE("leak_metrics scores guesses") {
  std::vector<BitGuess> guesses;
  std::vector<int> truth;
  for (int i = 0; i < 100; ++i) {
    guesses.push_back({i % 2, 0.0, false});
    truth.push_back(i % 2);
  }
  AttackReport rep = leak_metrics(guesses, truth, "t");
  CHECK(rep.p_correct == 1.0);
  CHECK(rep.leak_fraction == 0.0);

  for (auto& g : guesses) g.bit = 1 - g.bit;
  rep = leak_metrics(guesses, truth, "t");
  CHECK(rep.p_correct == 0.0);

  std::mt19937_64 rng(5);
  guesses.clear();
  truth.clear();
  for (int i = 0; i < 10000; ++i) {
    guesses.push_back({static_cast<int>(rng() & 1), 0.0, false});
    truth.push_back(static_cast<int>(rng() & 1));
  }
  rep = leak_metrics(guesses, truth, "t");
  CHECK(rep.p_correct > 0.48);
  CHECK(rep.p_correct < 0.52);
  CHECK(rep.wilson95.low < rep.p_correct);
  CHECK(rep.wilson95.high > rep.p_correct);

  CHECK_THROWS_AS(leak_metrics({}, {}, "t"), domain_error);
  std::vector<int> short_truth(10, 0);
  CHECK_THROWS_AS(leak_metrics(guesses, short_truth, "t"), domain_error);
}

TEST_CASE("correlation attack learns nothing from the ideal configuration") {
  const AttackReport rep = evaluate_passive_attack(
      default_config(), PassiveAttack::correlation, 800, 1001);
  CHECK(rep.n_bits > 300);
  CHECK(rep.wilson99.contains(0.5));
  CHECK(rep.leak_fraction < 0.02);
}

TEST_CASE("correlation attack ties to zero on silent waveforms") {
  ChannelWaveforms wf;
  for (SampleSeries* s : {&wf.u_alice_end, &wf.u_bob_end, &wf.i_alice_end,
                          &wf.i_bob_end}) {
    s->sample_rate_hz = 2e5;
    s->samples.assign(2000, 0.0);
  }
  const EveObservation obs = EveObservation::from(wf, default_config());
  const BitGuess g = attack_correlation(obs);
  CHECK(g.bit == 0);
  CHECK(g.statistic == 0.0);
  CHECK_FALSE(g.confident);
}

TEST_CASE("per-resistor temperature mismatch leaks through <u*i>") {
  // Hotter generators behind the high resistors: power flows from the H
  // side, so the sign of <u*i> points at Alice's bit.
  ProtocolConfig c = default_config();
  c.alice.t_high_kelvin = 1.1e9;
  c.bob.t_high_kelvin = 1.1e9;
  const AttackReport rep =
      evaluate_passive_attack(c, PassiveAttack::correlation, 400, 1002);
  CHECK(rep.n_bits > 150);
  CHECK(rep.p_correct > 0.55);
}

TEST_CASE("per-endpoint temperature scaling breaks the null without leaking") {
  // One party running hot biases <u*i> identically in LH and HL: the mean
  // power flow is nonzero but carries no bit information under the sign
  // rule, so p_correct stays at 1/2.
  ProtocolConfig c = default_config();
  c.alice.t_low_kelvin = 2e9;
  c.alice.t_high_kelvin = 2e9;

  double statistic_sum = 0.0;
  std::size_t kept = 0;
  ExchangeOptions opts;
  opts.observer = [&](const PeriodOutcome& out) {
    if (!out.kept) return;
    statistic_sum +=
        attack_correlation(EveObservation::from(out.waveforms, c)).statistic;
    ++kept;
  };
  run_exchange(c, 400, 1003, opts);
  REQUIRE(kept > 150);
  CHECK(statistic_sum / static_cast<double>(kept) > 0.0);

  const AttackReport rep =
      evaluate_passive_attack(c, PassiveAttack::correlation, 400, 1003);
  CHECK(rep.wilson99.contains(0.5));
}

TEST_CASE("wire-resistance attack requires a resistive line") {
  const ProtocolConfig c = default_config();
  CHECK_THROWS_AS(
      evaluate_passive_attack(c, PassiveAttack::wire_resistance, 10, 1),
      domain_error);
}

TEST_CASE("wire-resistance attack reads the bit from a lossy line") {
  ProtocolConfig c = default_config();
  c.line = LineModel{LineModel::Kind::resistive, 100.0, 0.0};  // 0.1 R_L
  const AttackReport rep =
      evaluate_passive_attack(c, PassiveAttack::wire_resistance, 600, 1004);
  CHECK(rep.n_bits > 250);
  CHECK(rep.p_correct > 0.65);
  CHECK(rep.wilson95.low > 0.5);
}

TEST_CASE("wire-resistance attack degrades to chance as r_wire vanishes") {
  ProtocolConfig c = default_config();
  c.line = LineModel{LineModel::Kind::resistive, 1.0, 0.0};  // 0.001 R_L
  const AttackReport rep =
      evaluate_passive_attack(c, PassiveAttack::wire_resistance, 600, 1005);
  CHECK(rep.wilson99.contains(0.5));
}

TEST_CASE("temperature attack is blind when the temperatures match") {
  const AttackReport rep = evaluate_passive_attack(
      default_config(), PassiveAttack::temperature_mismatch, 400, 1006);
  CHECK(rep.wilson99.contains(0.5));
  CHECK(rep.leak_fraction == 0.0);
}

TEST_CASE("temperature attack exploits a 10% mismatch") {
  ProtocolConfig c = default_config();
  c.alice.t_low_kelvin = 1.1e9;  // Alice's R_L generator runs hot
  const AttackReport rep =
      evaluate_passive_attack(c, PassiveAttack::temperature_mismatch, 400, 1007);
  CHECK(rep.n_bits > 150);
  CHECK(rep.p_correct > 0.8);
}

TEST_CASE("a cold generator gives Eve the bit deterministically") {
  ProtocolConfig c = default_config();
  c.alice.t_low_kelvin = 0.0;
  const AttackReport rep =
      evaluate_passive_attack(c, PassiveAttack::temperature_mismatch, 200, 1008);
  CHECK(rep.n_bits > 70);
  CHECK(rep.p_correct == 1.0);
}

TEST_CASE("resistor-mismatch attack is blind at delta = 0") {
  const AttackReport rep = evaluate_passive_attack(
      default_config(), PassiveAttack::resistor_mismatch, 400, 1009);
  CHECK(rep.wilson99.contains(0.5));
}

TEST_CASE("resistor-mismatch attack beats chance at delta = 5%") {
  ProtocolConfig c = default_config();
  c.alice.r_low_ohm = c.r_low_ohm * 1.05;
  const AttackReport rep =
      evaluate_passive_attack(c, PassiveAttack::resistor_mismatch, 4000, 1010);
  CHECK(rep.n_bits > 1800);
  CHECK(rep.p_correct > 0.5);
}

TEST_CASE("large resistor mismatch separates the variance clusters") {
  // Longer periods sharpen the loop-resistance estimate so the 50% offset
  // resolves almost every bit.
  ProtocolConfig c = default_config();
  c.clock_period_s = 0.8;  // B*tau = 8000
  c.alice.r_low_ohm = c.r_low_ohm * 1.5;
  const AttackReport rep =
      evaluate_passive_attack(c, PassiveAttack::resistor_mismatch, 200, 1011);
  CHECK(rep.n_bits > 70);
  CHECK(rep.p_correct > 0.9);
}

TEST_CASE("non-Gaussian noise leaks through the third-order statistic") {
  ProtocolConfig c;
  c.noise_kind = NoiseKind::uniform_white;
  c.sample_rate_hz = 2e4;  // B = fs/2 as the flat-amplitude mode requires
  c.bandwidth_hz = 1e4;
  c.clock_period_s = 0.2;
  const AttackReport rep =
      evaluate_passive_attack(c, PassiveAttack::higher_moment, 300, 1012);
  CHECK(rep.n_bits > 120);
  CHECK(rep.p_correct > 0.95);
}

TEST_CASE("the third-order statistic is silent on Gaussian noise") {
  const AttackReport rep = evaluate_passive_attack(
      default_config(), PassiveAttack::higher_moment, 400, 1013);
  CHECK(rep.wilson99.contains(0.5));
}

TEST_CASE("zero-amplitude injection is a null attack") {
  const ProtocolConfig c = fast_config();
  InjectionSpec spec;
  spec.relative_amplitude = 0.0;
  const AttackReport rep = attack_inject(c, spec, 400, 1014);
  CHECK_FALSE(rep.detected);
  CHECK(rep.compromised_kept_bits == 0);
  CHECK(rep.n_bits > 150);
  CHECK(rep.wilson99.contains(0.5));
}

TEST_CASE("injection at 10% of the channel RMS is caught immediately") {
  const ProtocolConfig c = default_config();
  InjectionSpec spec;
  spec.wave = InjectionSpec::Wave::gaussian;
  spec.relative_amplitude = 0.1;
  const AttackReport rep = attack_inject(c, spec, 10, 1015);
  CHECK(rep.detected);
  CHECK(rep.compromised_kept_bits == 0);
  REQUIRE(rep.detection_sample.has_value());
  CHECK(*rep.detection_sample < c.samples_per_period() / 10);
}

TEST_CASE("man-in-the-middle trips the alarm before any bit is exchanged") {
  const ProtocolConfig c = fast_config();
  const AttackReport rep = attack_mitm(c, 1016);
  CHECK(rep.detected);
  CHECK(rep.n_bits == 0);
  CHECK(rep.compromised_kept_bits == 0);
  REQUIRE(rep.detection_sample.has_value());
  // First compared sample: two independent loops almost surely disagree.
  CHECK(*rep.detection_sample == 0);
}

TEST_CASE("a silent man-in-the-middle is still caught") {
  const ProtocolConfig c = fast_config();
  const AttackReport rep = attack_mitm(c, 1017, 0.0);
  CHECK(rep.detected);
  REQUIRE(rep.detection_sample.has_value());
  CHECK(*rep.detection_sample == 0);
}

TEST_CASE("eve observations expose only channel taps and public knowledge") {
  const ProtocolConfig c = fast_config();
  const PeriodOutcome out = run_period(c, Bit::L, Bit::H, 2020);
  const EveObservation obs = EveObservation::from(out.waveforms, c);
  CHECK(obs.u_alice_end.size() == out.waveforms.size());
  CHECK(obs.i_bob_end.size() == out.waveforms.size());
  CHECK(obs.params.r_low_ohm == c.r_low_ohm);
  CHECK(obs.params.t_eff_kelvin == c.t_eff_kelvin);
  CHECK(obs.u_alice_end.data() == out.waveforms.u_alice_end.samples.data());
}

}  // TEST_SUITE("attacks")
