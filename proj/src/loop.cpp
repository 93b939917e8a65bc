#include "kljn/loop.hpp"

#include <cmath>

#include "kljn/errors.hpp"

namespace kljn {

void LineModel::validate() const {
  if (r_wire_ohm < 0.0) throw domain_error("line: r_wire_ohm must be >= 0");
  if (c_line_farad < 0.0) throw domain_error("line: c_line_farad must be >= 0");
  if (kind == Kind::ideal && (r_wire_ohm != 0.0 || c_line_farad != 0.0))
    throw domain_error("line: ideal line requires zero wire R and C");
  if (kind == Kind::resistive && c_line_farad != 0.0)
    throw domain_error("line: resistive line requires zero capacitance");
}

namespace {

void check_inputs(const SampleSeries& ua, const SampleSeries& ub,
                  double r_alice, double r_bob, const LineModel& line) {
  if (ua.size() != ub.size())
    throw domain_error("solve_loop: generator series length mismatch");
  if (ua.sample_rate_hz != ub.sample_rate_hz)
    throw domain_error("solve_loop: generator sample rate mismatch");
  if (!(r_alice > 0.0) || !(r_bob > 0.0))
    throw domain_error("solve_loop: resistances must be > 0");
  line.validate();
}

// Ideal line, no injection: both ends share the node voltage and the loop
// current, so the endpoint taps are equal bit-for-bit.
ChannelWaveforms solve_ideal(const SampleSeries& ua, const SampleSeries& ub,
                             double ra, double rb) {
  const std::size_t n = ua.size();
  const double fs = ua.sample_rate_hz;
  const double rsum = ra + rb;

  SampleSeries u, i;
  u.sample_rate_hz = i.sample_rate_hz = fs;
  u.samples.resize(n);
  i.samples.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double ia = (ua.samples[k] - ub.samples[k]) / rsum;
    i.samples[k] = ia;
    u.samples[k] = ua.samples[k] - ia * ra;
  }
  ChannelWaveforms wf;
  wf.u_alice_end = u;
  wf.u_bob_end = std::move(u);
  wf.i_alice_end = i;
  wf.i_bob_end = std::move(i);
  return wf;
}

// General lumped solve: half the wire resistance on each side of a midpoint
// node carrying the line capacitance and the injected current.
ChannelWaveforms solve_node(const SampleSeries& ua, const SampleSeries& ub,
                            double ra, double rb, const LineModel& line,
                            const SampleSeries* inj) {
  const std::size_t n = ua.size();
  const double fs = ua.sample_rate_hz;
  const double half_rw = line.r_wire_ohm / 2.0;
  const double ga = 1.0 / (ra + half_rw);
  const double gb = 1.0 / (rb + half_rw);
  const double g = ga + gb;
  const double cap = line.kind == LineModel::Kind::rc ? line.c_line_farad : 0.0;

  ChannelWaveforms wf;
  for (SampleSeries* s : {&wf.u_alice_end, &wf.u_bob_end, &wf.i_alice_end,
                          &wf.i_bob_end, &wf.u_mid}) {
    s->sample_rate_hz = fs;
    s->samples.resize(n);
  }

  auto inj_at = [&](std::size_t k) {
    return inj != nullptr ? inj->samples[k] : 0.0;
  };

  if (cap > 0.0) {
    // Trapezoidal integration of C dv/dt = ga(ua - v) + gb(ub - v) + I.
    const double dt = 1.0 / fs;
    const double a = cap / dt + g / 2.0;
    const double b = cap / dt - g / 2.0;
    double v = 0.0;
    double drive_prev = ga * ua.samples[0] + gb * ub.samples[0] + inj_at(0);
    for (std::size_t k = 0; k < n; ++k) {
      if (k > 0) {
        const double drive = ga * ua.samples[k] + gb * ub.samples[k] + inj_at(k);
        v = (b * v + 0.5 * (drive + drive_prev)) / a;
        drive_prev = drive;
      } else {
        // Start from the zero-capacitance stationary point to avoid a
        // startup transient in the first period.
        v = drive_prev / g;
      }
      const double ia = ga * (ua.samples[k] - v);
      const double ib = gb * (v - ub.samples[k]);
      wf.u_mid.samples[k] = v;
      wf.i_alice_end.samples[k] = ia;
      wf.i_bob_end.samples[k] = ib;
      wf.u_alice_end.samples[k] = ua.samples[k] - ia * ra;
      wf.u_bob_end.samples[k] = ub.samples[k] + ib * rb;
    }
  } else {
    for (std::size_t k = 0; k < n; ++k) {
      const double v = (ga * ua.samples[k] + gb * ub.samples[k] + inj_at(k)) / g;
      const double ia = ga * (ua.samples[k] - v);
      const double ib = gb * (v - ub.samples[k]);
      wf.u_mid.samples[k] = v;
      wf.i_alice_end.samples[k] = ia;
      wf.i_bob_end.samples[k] = ib;
      wf.u_alice_end.samples[k] = ua.samples[k] - ia * ra;
      wf.u_bob_end.samples[k] = ub.samples[k] + ib * rb;
    }
  }
  return wf;
}

}  // namespace

ChannelWaveforms solve_loop(const SampleSeries& u_gen_alice,
                            const SampleSeries& u_gen_bob, double r_alice,
                            double r_bob, const LineModel& line) {
  return solve_loop_injected(u_gen_alice, u_gen_bob, r_alice, r_bob, line,
                             nullptr);
}

ChannelWaveforms solve_loop_injected(const SampleSeries& u_gen_alice,
                                     const SampleSeries& u_gen_bob,
                                     double r_alice, double r_bob,
                                     const LineModel& line,
                                     const SampleSeries* injected_current) {
  check_inputs(u_gen_alice, u_gen_bob, r_alice, r_bob, line);
  if (injected_current != nullptr &&
      injected_current->size() != u_gen_alice.size())
    throw domain_error("solve_loop: injection series length mismatch");
  if (line.kind == LineModel::Kind::ideal && injected_current == nullptr)
    return solve_ideal(u_gen_alice, u_gen_bob, r_alice, r_bob);
  return solve_node(u_gen_alice, u_gen_bob, r_alice, r_bob, line,
                    injected_current);
}

ChannelSpectra analytic_channel_spectra(double r_l, double r_h, double t_eff) {
  if (!(r_l > 0.0) || !(r_h > 0.0))
    throw domain_error("analytic_channel_spectra: resistances must be > 0");
  if (t_eff < 0.0)
    throw domain_error("analytic_channel_spectra: temperature must be >= 0");
  const double c = 4.0 * kBoltzmann * t_eff;
  return {c * r_l * r_h / (r_l + r_h), c / (r_l + r_h)};
}

SuperpositionComponents superposition_components(double r_l, double r_h,
                                                 double t_eff) {
  if (!(r_l > 0.0) || !(r_h > 0.0))
    throw domain_error("superposition_components: resistances must be > 0");
  if (t_eff < 0.0)
    throw domain_error("superposition_components: temperature must be >= 0");
  const double c = 4.0 * kBoltzmann * t_eff;
  const double rsum = r_l + r_h;
  const double div_h = r_h / rsum;
  const double div_l = r_l / rsum;
  return {c * r_l * div_h * div_h, c * r_h * div_l * div_l};
}

double two_temperature_voltage_psd(double r_a, double t_a, double r_b,
                                   double t_b) {
  if (!(r_a > 0.0) || !(r_b > 0.0))
    throw domain_error("two_temperature_voltage_psd: resistances must be > 0");
  const double rsum = r_a + r_b;
  return 4.0 * kBoltzmann * (t_a * r_a * r_b * r_b + t_b * r_b * r_a * r_a) /
         (rsum * rsum);
}

double two_temperature_current_psd(double r_a, double t_a, double r_b,
                                   double t_b) {
  if (!(r_a > 0.0) || !(r_b > 0.0))
    throw domain_error("two_temperature_current_psd: resistances must be > 0");
  const double rsum = r_a + r_b;
  return 4.0 * kBoltzmann * (t_a * r_a + t_b * r_b) / (rsum * rsum);
}

PowerFlows power_flows(double r_l, double r_h, double t_eff,
                       double bandwidth_hz) {
  if (!(r_l > 0.0) || !(r_h > 0.0))
    throw domain_error("power_flows: resistances must be > 0");
  if (!(t_eff > 0.0)) throw domain_error("power_flows: temperature must be > 0");
  if (!(bandwidth_hz > 0.0))
    throw domain_error("power_flows: bandwidth must be > 0");
  const double rsum = r_l + r_h;
  const double p =
      4.0 * kBoltzmann * t_eff * bandwidth_hz * r_l * r_h / (rsum * rsum);
  return {p, p};
}

}  // namespace kljn
