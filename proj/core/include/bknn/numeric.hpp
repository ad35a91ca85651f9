#ifndef BKNN_NUMERIC_HPP
#define BKNN_NUMERIC_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace bknn {

/// Logistic function exp(t) / (1 + exp(t)), evaluated without overflow.
inline double logistic(double t) {
  if (t >= 0.0)
    return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

/// log(logistic(t)).
inline double log_logistic(double t) {
  if (t >= 0.0)
    return -std::log1p(std::exp(-t));
  return t - std::log1p(std::exp(t));
}

/// log(sum(exp(v))) shifted by the maximum.
inline double log_sum_exp(std::span<const double> v) {
  if (v.empty())
    return -std::numeric_limits<double>::infinity();
  const double m = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(m))
    return m;
  double s = 0.0;
  for (double x : v)
    s += std::exp(x - m);
  return m + std::log(s);
}

} // namespace bknn

#endif
