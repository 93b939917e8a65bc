#ifndef KLJN_STATS_HPP_
#define KLJN_STATS_HPP_

#include <cstddef>
#include <span>

namespace kljn::stats {

double mean(std::span<const double> x);

/// Population variance (normalized by n, about the sample mean).
double variance(std::span<const double> x);

double rms(std::span<const double> x);

/// m4/m2^2 - 3 over the pooled samples.
double excess_kurtosis(std::span<const double> x);

/// Pearson correlation coefficient; returns 0 when either input has zero
/// variance.
double pearson(std::span<const double> x, std::span<const double> y);

/// Mean of the elementwise product (uncentered).
double mean_product(std::span<const double> x, std::span<const double> y);

struct Interval {
  double low = 0.0;
  double high = 0.0;
  bool contains(double v) const { return low <= v && v <= high; }
  bool overlaps(const Interval& o) const {
    return low <= o.high && o.low <= high;
  }
};

/// Wilson score interval for a binomial proportion at normal quantile z.
Interval wilson_interval(std::size_t hits, std::size_t n, double z);

inline constexpr double kZ95 = 1.959963984540054;
inline constexpr double kZ99 = 2.5758293035489004;

}  // namespace kljn::stats

#endif  // KLJN_STATS_HPP_
