#ifndef KLJN_LOOP_HPP_
#define KLJN_LOOP_HPP_

#include "kljn/series.hpp"

namespace kljn {

/// Wire model between the two endpoints. The simulator is lumped and
/// wave-free by construction: no propagation delay, no reflections.
struct LineModel {
  enum class Kind { ideal, resistive, rc };
  Kind kind = Kind::ideal;
  double r_wire_ohm = 0.0;    // total series wire resistance
  double c_line_farad = 0.0;  // lumped capacitance at the wire midpoint

  void validate() const;
  bool has_wire_resistance() const { return r_wire_ohm > 0.0; }
};

/// Endpoint taps of one solved clock period. Current sign convention:
/// positive current flows from Alice into the wire and from the wire into
/// Bob. For an ideal line the two voltage taps (and the two current taps)
/// are equal samplewise.
struct ChannelWaveforms {
  SampleSeries u_alice_end;
  SampleSeries u_bob_end;
  SampleSeries i_alice_end;
  SampleSeries i_bob_end;
  SampleSeries u_mid;  // populated for resistive/rc lines

  std::size_t size() const { return u_alice_end.size(); }
};

/// Solves the two-endpoint Kirchhoff loop for sampled generator waveforms.
/// The generators are in series with r_alice and r_bob respectively.
/// Throws domain_error on length mismatch or non-positive resistance.
ChannelWaveforms solve_loop(const SampleSeries& u_gen_alice,
                            const SampleSeries& u_gen_bob, double r_alice,
                            double r_bob, const LineModel& line);

/// Same loop with an extra current source injected at the wire midpoint
/// (positive injection adds to the current seen by Bob). Pass nullptr for
/// no injection.
ChannelWaveforms solve_loop_injected(const SampleSeries& u_gen_alice,
                                     const SampleSeries& u_gen_bob,
                                     double r_alice, double r_bob,
                                     const LineModel& line,
                                     const SampleSeries* injected_current);

struct ChannelSpectra {
  double s_u_ch = 0.0;  // V^2/Hz
  double s_i_ch = 0.0;  // A^2/Hz
};

/// Channel voltage/current PSD in the mixed (LH or HL) state:
/// 4kT r_l r_h / (r_l + r_h) and 4kT / (r_l + r_h).
ChannelSpectra analytic_channel_spectra(double r_l, double r_h, double t_eff);

struct SuperpositionComponents {
  double s_from_low = 0.0;
  double s_from_high = 0.0;
};

/// Channel-voltage PSD contributions of each generator alone; their sum
/// equals analytic_channel_spectra().s_u_ch exactly.
SuperpositionComponents superposition_components(double r_l, double r_h,
                                                 double t_eff);

/// Channel voltage PSD with independent per-generator temperatures
/// (ideal line): 4k [t_a r_a r_b^2 + t_b r_b r_a^2] / (r_a + r_b)^2.
double two_temperature_voltage_psd(double r_a, double t_a, double r_b,
                                   double t_b);

/// Channel current PSD with per-generator temperatures:
/// 4k (t_a r_a + t_b r_b) / (r_a + r_b)^2.
double two_temperature_current_psd(double r_a, double t_a, double r_b,
                                   double t_b);

struct PowerFlows {
  double p_low_to_high = 0.0;  // W
  double p_high_to_low = 0.0;  // W
};

/// Directional heating powers over a bandwidth; equal by construction:
/// 4kT df r_l r_h / (r_l + r_h)^2 each.
PowerFlows power_flows(double r_l, double r_h, double t_eff,
                       double bandwidth_hz);

}  // namespace kljn

#endif  // KLJN_LOOP_HPP_
