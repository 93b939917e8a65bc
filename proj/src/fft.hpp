#ifndef KLJN_SRC_FFT_HPP_
#define KLJN_SRC_FFT_HPP_

#include <complex>
#include <cstddef>
#include <vector>

namespace kljn::fft {

/// Unnormalized inverse real FFT (halfcomplex spectrum of size n/2+1 to n
/// real samples), FFTW backward convention: x[k] = sum_j X[j] e^{+2pi i jk/n}.
/// The input vector is treated as scratch and may be overwritten.
void irfft(std::vector<std::complex<double>>& spectrum, std::size_t n,
           std::vector<double>& out);

/// Forward real FFT, n real samples to n/2+1 complex bins, unnormalized.
void rfft(const double* samples, std::size_t n,
          std::vector<std::complex<double>>& out);

}  // namespace kljn::fft

#endif  // KLJN_SRC_FFT_HPP_
