#include <doctest.h>

#include <cmath>

#include "kljn/attacks.hpp"
#include "kljn/errors.hpp"
#include "kljn/protocol.hpp"
#include "kljn/seed.hpp"
#include "test_util.hpp"

using namespace kljn;
using kljn::test::default_config;
using kljn::test::fast_config;

namespace {

SampleSeries constant_variance_series(double variance, std::size_t n,
                                      double fs) {
  // Alternating +/- sigma: zero mean, variance exactly sigma^2.
  SampleSeries s;
  s.sample_rate_hz = fs;
  s.samples.resize(n);
  const double sigma = std::sqrt(variance);
  for (std::size_t k = 0; k < n; ++k)
    s.samples[k] = (k % 2 == 0) ? sigma : -sigma;
  return s;
}

}  // namespace

TEST_SUITE("protocol") {

TEST_CASE("config validation") {
  ProtocolConfig c = fast_config();
  CHECK_NOTHROW(c.validate());
  // Default thresholds sit between the adjacent loop resistances.
  CHECK(c.effective_threshold_low() > 2.0 * c.r_low_ohm);
  CHECK(c.effective_threshold_low() < c.r_low_ohm + c.r_high_ohm);
  CHECK(c.effective_threshold_high() > c.r_low_ohm + c.r_high_ohm);
  CHECK(c.effective_threshold_high() < 2.0 * c.r_high_ohm);

  ProtocolConfig bad = c;
  bad.r_low_ohm = bad.r_high_ohm;
  CHECK_THROWS_AS(bad.validate(), domain_error);

  bad = c;
  bad.classify_threshold_low_ohm = 1.0;  // below 2 R_L
  bad.classify_threshold_high_ohm = 15000.0;
  CHECK_THROWS_AS(bad.validate(), domain_error);

  bad = c;
  bad.alarm_check_stride = 0;
  CHECK_THROWS_AS(bad.validate(), domain_error);

  bad = c;
  bad.line.kind = LineModel::Kind::rc;
  bad.line.c_line_farad = 1e-10;
  bad.sample_rate_hz = 4.0 * bad.bandwidth_hz;  // too coarse for rc
  CHECK_THROWS_AS(bad.validate(), domain_error);

  bad = c;
  bad.clock_period_s = 1e-5;  // fewer than 16 samples
  CHECK_THROWS_AS(bad.validate(), domain_error);
}

TEST_CASE("classification inverts the analytic current variance") {
  const ProtocolConfig c = fast_config();
  const std::size_t n = c.samples_per_period();
  const double four_ktb =
      4.0 * kBoltzmann * c.t_eff_kelvin * c.bandwidth_hz;

  // Mixed-state loop: R_L + R_H.
  const double var_mixed = four_ktb / (c.r_low_ohm + c.r_high_ohm);
  const auto mixed =
      constant_variance_series(var_mixed, n, c.sample_rate_hz);
  const ClassifyResult from_low =
      classify_far_resistor(mixed, c.r_low_ohm, c);
  CHECK(from_low.far_bit == Bit::H);
  CHECK(from_low.loop_estimate_ohm ==
        doctest::Approx(c.r_low_ohm + c.r_high_ohm).epsilon(1e-9));
  CHECK(from_low.far_estimate_ohm ==
        doctest::Approx(c.r_high_ohm).epsilon(1e-9));
  const ClassifyResult from_high =
      classify_far_resistor(mixed, c.r_high_ohm, c);
  CHECK(from_high.far_bit == Bit::L);

  // LL loop: 2 R_L.
  const double var_ll = four_ktb / (2.0 * c.r_low_ohm);
  const auto ll = constant_variance_series(var_ll, n, c.sample_rate_hz);
  CHECK(classify_far_resistor(ll, c.r_low_ohm, c).far_bit == Bit::L);

  // HH loop: 2 R_H.
  const double var_hh = four_ktb / (2.0 * c.r_high_ohm);
  const auto hh = constant_variance_series(var_hh, n, c.sample_rate_hz);
  CHECK(classify_far_resistor(hh, c.r_high_ohm, c).far_bit == Bit::H);

  const auto silent = constant_variance_series(0.0, n, c.sample_rate_hz);
  CHECK_THROWS_AS(classify_far_resistor(silent, c.r_low_ohm, c),
                  estimation_error);
}

TEST_CASE("classification is reliable at the default B*tau") {
  // At B*tau = 2000 the loop-resistance estimator concentrates far from the
  // decision boundaries; 1000 mixed-state trials must all classify right.
  const ProtocolConfig c = default_config();
  std::size_t errors = 0;
  for (std::size_t p = 0; p < 500; ++p) {
    const PeriodOutcome lh = run_period(c, Bit::L, Bit::H, 50000 + p);
    errors += lh.alice_classified_far != Bit::H;
    errors += lh.bob_classified_far != Bit::L;
  }
  CHECK(errors == 0);
}

TEST_CASE("run_period discards same-state periods") {
  const ProtocolConfig c = fast_config();
  const PeriodOutcome ll = run_period(c, Bit::L, Bit::L, 1);
  CHECK(ll.state == LoopState::LL);
  CHECK_FALSE(ll.kept);
  CHECK_FALSE(ll.key_bit.has_value());
  const PeriodOutcome hh = run_period(c, Bit::H, Bit::H, 2);
  CHECK(hh.state == LoopState::HH);
  CHECK_FALSE(hh.kept);
}

TEST_CASE("run_period keeps mixed states with the HL=1 convention") {
  const ProtocolConfig c = fast_config();
  const PeriodOutcome hl = run_period(c, Bit::H, Bit::L, 3);
  CHECK(hl.state == LoopState::HL);
  CHECK(hl.kept);
  CHECK_FALSE(hl.alarm.has_value());
  REQUIRE(hl.key_bit.has_value());
  CHECK(*hl.key_bit == 1);
  CHECK(hl.alice_recorded_bit() == 1);
  CHECK(hl.bob_recorded_bit() == 1);
  CHECK(hl.alice_believes_kept());
  CHECK(hl.bob_believes_kept());

  const PeriodOutcome lh = run_period(c, Bit::L, Bit::H, 4);
  REQUIRE(lh.key_bit.has_value());
  CHECK(*lh.key_bit == 0);
}

TEST_CASE("run_period is deterministic in the seed") {
  const ProtocolConfig c = fast_config();
  const PeriodOutcome a = run_period(c, Bit::L, Bit::H, 99);
  const PeriodOutcome b = run_period(c, Bit::L, Bit::H, 99);
  CHECK(a.waveforms.u_alice_end.samples == b.waveforms.u_alice_end.samples);
  CHECK(a.alice_loop_estimate_ohm == b.alice_loop_estimate_ohm);
  const PeriodOutcome other = run_period(c, Bit::L, Bit::H, 100);
  CHECK(other.waveforms.u_alice_end.samples != a.waveforms.u_alice_end.samples);
}

TEST_CASE("relabeling the parties flips the key bit and keeps the rest") {
  const ProtocolConfig c = fast_config();
  const std::uint64_t sa = 1111, sb = 2222;
  const PeriodOutcome fwd = run_period_seeded(c, Bit::H, Bit::L, sa, sb);
  const PeriodOutcome rev = run_period_seeded(c, Bit::L, Bit::H, sb, sa);
  CHECK(fwd.kept == rev.kept);
  REQUIRE(fwd.key_bit.has_value());
  REQUIRE(rev.key_bit.has_value());
  CHECK(*rev.key_bit == 1 - *fwd.key_bit);
  CHECK(fwd.state == LoopState::HL);
  CHECK(rev.state == LoopState::LH);
  // The mirrored loop carries the same waveforms with the current reversed.
  for (std::size_t k = 0; k < fwd.waveforms.size(); k += 401) {
    CHECK(rev.waveforms.u_alice_end.samples[k] ==
          doctest::Approx(fwd.waveforms.u_alice_end.samples[k]).epsilon(1e-12));
    CHECK(rev.waveforms.i_alice_end.samples[k] ==
          doctest::Approx(-fwd.waveforms.i_alice_end.samples[k]).epsilon(1e-12));
  }
}

TEST_CASE("exchange statistics at a short clock period") {
  const ProtocolConfig c = fast_config();
  const std::size_t n = 2000;
  const ExchangeResult ex = run_exchange(c, n, 42);
  CHECK(ex.n_periods == n);
  CHECK(ex.alarm_count == 0);
  const double bound = 5.0 / std::sqrt(static_cast<double>(n));
  CHECK(std::abs(ex.kept_fraction() - 0.5) < bound);
  CHECK(ex.alice_key.bits.size() == ex.kept_count);
  CHECK(ex.bob_key.bits.size() == ex.kept_count);
  CHECK(ex.fidelity() == 1.0);
}

TEST_CASE("run_exchange is deterministic") {
  const ProtocolConfig c = fast_config();
  const ExchangeResult a = run_exchange(c, 200, 7);
  const ExchangeResult b = run_exchange(c, 200, 7);
  CHECK(a.kept_count == b.kept_count);
  CHECK(a.alice_key.bits == b.alice_key.bits);
  CHECK(a.bob_key.bits == b.bob_key.bits);
  CHECK(a.fidelity() == b.fidelity());
}

TEST_CASE("single forced mixed period yields the same bit at both ends") {
  const ProtocolConfig c = fast_config();
  const PeriodOutcome out = run_period(c, Bit::H, Bit::L, 5);
  REQUIRE(out.kept);
  CHECK(out.alice_recorded_bit() == 1);
  CHECK(out.bob_recorded_bit() == 1);
}

TEST_CASE("zero-temperature configuration fails as an estimation error") {
  ProtocolConfig c = fast_config();
  c.t_eff_kelvin = 0.0;
  CHECK_THROWS_AS(run_exchange(c, 4, 1), estimation_error);
}

TEST_CASE("honest runs never alarm") {
  // Ideal-line comparisons are exact to rounding; 1e5 short periods with
  // alarm_rel_tol = 1e-9 must produce zero alarms.
  ProtocolConfig c = fast_config();
  c.clock_period_s = 0.002;  // 400 samples per period
  const ExchangeResult ex = run_exchange(c, 100000, 314159);
  CHECK(ex.alarm_count == 0);
  CHECK(ex.n_periods == 100000);
}

TEST_CASE("honest resistive and rc runs never alarm") {
  ProtocolConfig c = fast_config();
  c.line = LineModel{LineModel::Kind::resistive, 100.0, 0.0};
  CHECK(run_exchange(c, 50, 11).alarm_count == 0);
  c.line = LineModel{LineModel::Kind::rc, 100.0, 1e-10};
  CHECK(run_exchange(c, 50, 12).alarm_count == 0);
}

TEST_CASE("alarm flags a deterministic midpoint injection at onset") {
  const ProtocolConfig c = fast_config();
  const std::size_t n = c.samples_per_period();
  InjectionSpec spec;
  spec.wave = InjectionSpec::Wave::dc;
  spec.relative_amplitude = 5.0;
  spec.onset_period = 1;
  spec.onset_sample = 137;
  const AttackReport rep = attack_inject(c, spec, 4, 77);
  CHECK(rep.detected);
  REQUIRE(rep.detection_sample.has_value());
  CHECK(*rep.detection_sample == n + 137);
  CHECK(rep.compromised_kept_bits == 0);
}

TEST_CASE("alarm latency stays within a small fraction of a period") {
  const ProtocolConfig c = fast_config();
  const std::size_t n = c.samples_per_period();
  InjectionSpec spec;
  spec.wave = InjectionSpec::Wave::gaussian;
  spec.relative_amplitude = 0.1;
  spec.onset_period = 0;
  spec.onset_sample = 0;
  const AttackReport rep = attack_inject(c, spec, 4, 88);
  CHECK(rep.detected);
  REQUIRE(rep.detection_sample.has_value());
  CHECK(*rep.detection_sample < n / 10);
  CHECK(rep.compromised_kept_bits == 0);
}

TEST_CASE("alarm respects the comparison stride") {
  ProtocolConfig c = fast_config();
  c.alarm_check_stride = 16;
  InjectionSpec spec;
  spec.wave = InjectionSpec::Wave::dc;
  spec.relative_amplitude = 5.0;
  spec.onset_period = 0;
  spec.onset_sample = 17;
  const AttackReport rep = attack_inject(c, spec, 2, 99);
  CHECK(rep.detected);
  REQUIRE(rep.detection_sample.has_value());
  // First checked sample at or after onset: stride grid point 32.
  CHECK(*rep.detection_sample == 32);
}

TEST_CASE("seed derivation separates streams") {
  CHECK(derive_seed(1, "a", 0) == derive_seed(1, "a", 0));
  CHECK(derive_seed(1, "a", 0) != derive_seed(1, "a", 1));
  CHECK(derive_seed(1, "a", 0) != derive_seed(1, "b", 0));
  CHECK(derive_seed(1, "a", 0) != derive_seed(2, "a", 0));
}

}  // TEST_SUITE("protocol")
