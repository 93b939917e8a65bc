#ifndef KLJN_SERIES_HPP_
#define KLJN_SERIES_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace kljn {

/// Physical constants (CODATA 2018).
inline constexpr double kBoltzmann = 1.380649e-23;  // J/K

/// A uniformly sampled real-valued waveform (volts or amperes).
struct SampleSeries {
  std::vector<double> samples;
  double sample_rate_hz = 0.0;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double duration_s() const {
    return sample_rate_hz > 0.0
               ? static_cast<double>(samples.size()) / sample_rate_hz
               : 0.0;
  }
  std::span<const double> view() const { return {samples.data(), samples.size()}; }
};

}  // namespace kljn

#endif  // KLJN_SERIES_HPP_
