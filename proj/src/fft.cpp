#include "fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <unordered_map>

namespace kljn::fft {

namespace {

// FFTW planning is not thread-safe; execution on distinct buffers is.
// Plans are cached per transform size (all periods of a run share one size).
std::mutex g_plan_mutex;

fftw_plan c2r_plan(std::size_t n, fftw_complex* in, double* out) {
  static std::unordered_map<std::size_t, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  fftw_plan plan = fftw_plan_dft_c2r_1d(static_cast<int>(n), in, out,
                                        FFTW_ESTIMATE | FFTW_UNALIGNED);
  cache.emplace(n, plan);
  return plan;
}

fftw_plan r2c_plan(std::size_t n, double* in, fftw_complex* out) {
  static std::unordered_map<std::size_t, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out,
                                        FFTW_ESTIMATE | FFTW_UNALIGNED);
  cache.emplace(n, plan);
  return plan;
}

}  // namespace

void irfft(std::vector<std::complex<double>>& spectrum, std::size_t n,
           std::vector<double>& out) {
  out.resize(n);
  auto* in = reinterpret_cast<fftw_complex*>(spectrum.data());
  fftw_plan plan = c2r_plan(n, in, out.data());
  fftw_execute_dft_c2r(plan, in, out.data());
}

void rfft(const double* samples, std::size_t n,
          std::vector<std::complex<double>>& out) {
  out.resize(n / 2 + 1);
  // FFTW r2c does not modify its input for out-of-place transforms.
  auto* in = const_cast<double*>(samples);
  auto* spec = reinterpret_cast<fftw_complex*>(out.data());
  fftw_plan plan = r2c_plan(n, in, spec);
  fftw_execute_dft_r2c(plan, in, spec);
}

}  // namespace kljn::fft
