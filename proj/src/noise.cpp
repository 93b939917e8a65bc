#include "kljn/noise.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "fft.hpp"
#include "kljn/errors.hpp"
#include "kljn/stats.hpp"

namespace kljn {

std::size_t NoiseParams::sample_count() const {
  return static_cast<std::size_t>(std::llround(sample_rate_hz * duration_s));
}

void NoiseParams::validate() const {
  if (!(psd_level >= 0.0)) throw domain_error("noise: psd_level must be >= 0");
  if (!(bandwidth_hz > 0.0))
    throw domain_error("noise: bandwidth_hz must be > 0");
  if (!(sample_rate_hz > 0.0))
    throw domain_error("noise: sample_rate_hz must be > 0");
  if (bandwidth_hz > sample_rate_hz / 2.0 * (1.0 + 1e-12))
    throw domain_error("noise: bandwidth_hz must be <= sample_rate_hz / 2");
  if (!(duration_s > 0.0)) throw domain_error("noise: duration_s must be > 0");
  if (sample_count() < 16)
    throw domain_error("noise: sample count round(f_s * tau) must be >= 16");
  if (kind == NoiseKind::uniform_white &&
      std::abs(bandwidth_hz - sample_rate_hz / 2.0) > 1e-9 * sample_rate_hz)
    throw domain_error(
        "noise: uniform_white requires bandwidth_hz == sample_rate_hz / 2");
}

double johnson_psd(double resistance_ohm, double t_eff_kelvin) {
  if (resistance_ohm < 0.0)
    throw domain_error("johnson_psd: resistance must be >= 0");
  if (t_eff_kelvin < 0.0)
    throw domain_error("johnson_psd: temperature must be >= 0");
  return 4.0 * kBoltzmann * t_eff_kelvin * resistance_ohm;
}

namespace {

SampleSeries synth_gaussian(const NoiseParams& p) {
  const std::size_t n = p.sample_count();
  const double df = p.sample_rate_hz / static_cast<double>(n);
  // In-band bins j = 1..m carry S*df of variance each; DC is zeroed so every
  // block has exactly zero sample mean.
  std::size_t m = static_cast<std::size_t>(std::floor(p.bandwidth_hz / df + 1e-9));
  m = std::min(m, n / 2);
  if (m < 1)
    throw domain_error("noise: bandwidth below the block frequency resolution");

  std::vector<std::complex<double>> spectrum(n / 2 + 1,
                                             std::complex<double>(0.0, 0.0));
  std::mt19937_64 eng(p.seed);
  // For the unnormalized inverse transform each complex bin contributes
  // 4*sigma^2 of sample variance, so sigma = sqrt(S*df)/2 makes it S*df.
  const double sigma = 0.5 * std::sqrt(p.psd_level * df);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::size_t complex_top = std::min(m, n / 2 - (n % 2 == 0 ? 1 : 0));
  for (std::size_t j = 1; j <= complex_top; ++j) {
    const double re = gauss(eng);
    const double im = gauss(eng);
    spectrum[j] = {sigma * re, sigma * im};
  }
  if (n % 2 == 0 && m == n / 2) {
    // Real Nyquist bin, variance contribution S*df.
    spectrum[n / 2] = {std::sqrt(p.psd_level * df) * gauss(eng), 0.0};
  }

  SampleSeries out;
  out.sample_rate_hz = p.sample_rate_hz;
  fft::irfft(spectrum, n, out.samples);
  return out;
}

SampleSeries synth_uniform_white(const NoiseParams& p) {
  const std::size_t n = p.sample_count();
  // Flat distribution on [-a, a] with a^2/3 = S*B.
  const double a = std::sqrt(3.0 * p.psd_level * p.bandwidth_hz);
  SampleSeries out;
  out.sample_rate_hz = p.sample_rate_hz;
  out.samples.resize(n);
  std::mt19937_64 eng(p.seed);
  std::uniform_real_distribution<double> flat(-a, a);
  for (double& s : out.samples) s = flat(eng);
  return out;
}

}  // namespace

SampleSeries synth_noise(const NoiseParams& params) {
  params.validate();
  if (params.psd_level == 0.0) {
    SampleSeries out;
    out.sample_rate_hz = params.sample_rate_hz;
    out.samples.assign(params.sample_count(), 0.0);
    return out;
  }
  return params.kind == NoiseKind::uniform_white ? synth_uniform_white(params)
                                                 : synth_gaussian(params);
}

double PsdEstimate::integral() const {
  double s = 0.0;
  for (double v : psd) s += v;
  return s * bin_width_hz;
}

double PsdEstimate::band_mean(double f_lo, double f_hi) const {
  double s = 0.0;
  std::size_t count = 0;
  for (std::size_t j = 0; j < frequency_hz.size(); ++j) {
    if (frequency_hz[j] >= f_lo && frequency_hz[j] <= f_hi) {
      s += psd[j];
      ++count;
    }
  }
  return count > 0 ? s / static_cast<double>(count) : 0.0;
}

double PsdEstimate::band_power(double f_lo, double f_hi) const {
  double s = 0.0;
  for (std::size_t j = 0; j < frequency_hz.size(); ++j) {
    if (frequency_hz[j] >= f_lo && frequency_hz[j] <= f_hi) s += psd[j];
  }
  return s * bin_width_hz;
}

PsdEstimate estimate_psd(const SampleSeries& series, std::size_t n_segments) {
  if (n_segments < 1) throw domain_error("estimate_psd: n_segments must be >= 1");
  if (series.size() < 2 * n_segments)
    throw domain_error("estimate_psd: series shorter than 2 * n_segments");
  if (!(series.sample_rate_hz > 0.0))
    throw domain_error("estimate_psd: sample rate must be > 0");

  const std::size_t seg_len = series.size() / n_segments;
  const std::size_t n_bins = seg_len / 2 + 1;
  const double fs = series.sample_rate_hz;

  PsdEstimate est;
  est.bin_width_hz = fs / static_cast<double>(seg_len);
  est.frequency_hz.resize(n_bins);
  for (std::size_t j = 0; j < n_bins; ++j)
    est.frequency_hz[j] = static_cast<double>(j) * est.bin_width_hz;
  est.psd.assign(n_bins, 0.0);

  std::vector<std::complex<double>> spec;
  const double norm = 1.0 / (fs * static_cast<double>(seg_len));
  for (std::size_t s = 0; s < n_segments; ++s) {
    fft::rfft(series.samples.data() + s * seg_len, seg_len, spec);
    for (std::size_t j = 0; j < n_bins; ++j) {
      const double mag2 = std::norm(spec[j]);
      const bool edge = (j == 0) || (seg_len % 2 == 0 && j == seg_len / 2);
      est.psd[j] += (edge ? 1.0 : 2.0) * mag2 * norm;
    }
  }
  for (double& v : est.psd) v /= static_cast<double>(n_segments);
  return est;
}

CrossStat cross_stat(const SampleSeries& u, const SampleSeries& i) {
  if (u.size() != i.size())
    throw domain_error("cross_stat: series length mismatch");
  if (u.sample_rate_hz != i.sample_rate_hz)
    throw domain_error("cross_stat: sample rate mismatch");
  if (u.empty()) throw domain_error("cross_stat: empty series");
  CrossStat cs;
  cs.mean_product = stats::mean_product(u.view(), i.view());
  cs.correlation = stats::pearson(u.view(), i.view());
  return cs;
}

}  // namespace kljn
