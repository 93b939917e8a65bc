#ifndef KLJN_NOISE_HPP_
#define KLJN_NOISE_HPP_

#include <cstdint>
#include <vector>

#include "kljn/series.hpp"

namespace kljn {

enum class NoiseKind {
  gaussian,       // band-limited Gaussian, flat one-sided PSD on [0, B]
  uniform_white,  // i.i.d. uniform-amplitude samples; requires B == fs/2
};

/// Parameters for one synthesized noise block.
struct NoiseParams {
  double psd_level = 0.0;       // one-sided voltage PSD, V^2/Hz
  double bandwidth_hz = 0.0;    // upper band edge B
  double sample_rate_hz = 0.0;  // f_s
  double duration_s = 0.0;      // block length (one clock period)
  std::uint64_t seed = 0;
  NoiseKind kind = NoiseKind::gaussian;

  std::size_t sample_count() const;
  /// Throws domain_error when any invariant is violated.
  void validate() const;
};

/// Johnson noise voltage PSD of a resistor: 4 k T_eff R.
/// Throws domain_error for negative inputs.
double johnson_psd(double resistance_ohm, double t_eff_kelvin);

/// Synthesizes one noise block. Gaussian blocks are built in the frequency
/// domain (independent Gaussian complex amplitudes on the in-band bins,
/// Hermitian symmetry, inverse FFT) so the one-sided PSD is flat at
/// psd_level on [0, B] and exactly zero above B. Pure function of params:
/// identical params yield bit-identical samples.
SampleSeries synth_noise(const NoiseParams& params);

/// One-sided averaged-periodogram PSD estimate.
struct PsdEstimate {
  std::vector<double> frequency_hz;
  std::vector<double> psd;
  double bin_width_hz = 0.0;

  /// Integral of the estimate over the grid (equals the mean square of the
  /// analyzed samples by Parseval).
  double integral() const;
  /// Mean PSD over bins with f_lo <= f <= f_hi.
  double band_mean(double f_lo, double f_hi) const;
  /// Integrated power over bins with f_lo <= f <= f_hi.
  double band_power(double f_lo, double f_hi) const;
};

/// Splits the series into n_segments non-overlapping segments and averages
/// their periodograms. Throws domain_error when the series is shorter than
/// 2 * n_segments or n_segments == 0.
PsdEstimate estimate_psd(const SampleSeries& series, std::size_t n_segments);

struct CrossStat {
  double mean_product = 0.0;  // <u * i>
  double correlation = 0.0;   // Pearson coefficient in [-1, 1]
};

/// Mean product and normalized correlation of two equally sampled series.
/// Throws domain_error on length or sample-rate mismatch.
CrossStat cross_stat(const SampleSeries& u, const SampleSeries& i);

}  // namespace kljn

#endif  // KLJN_NOISE_HPP_
