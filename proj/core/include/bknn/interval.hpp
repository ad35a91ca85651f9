#ifndef BKNN_INTERVAL_HPP
#define BKNN_INTERVAL_HPP

#include <span>

namespace bknn {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  /// Closed-interval membership.
  bool contains(double v) const { return lo <= v && v <= hi; }

  friend bool operator==(const Interval &, const Interval &) = default;
};

/// Interpolated quantile of sorted data: rank r = q (m - 1), linear between
/// the floor(r)-th and ceil(r)-th order statistics.
double sorted_quantile(std::span<const double> sorted, double q);

/// [q_lower, q_upper] quantiles of values.
Interval percentile_interval(std::span<const double> values, double lower_q,
                             double upper_q);

inline Interval percentile_interval_95(std::span<const double> values) {
  return percentile_interval(values, 0.025, 0.975);
}

} // namespace bknn

#endif
