#include "bknn/interval.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "bknn/types.hpp"

namespace bknn {

double sorted_quantile(std::span<const double> sorted, double q) {
  if (sorted.empty())
    throw ParameterError("sorted_quantile: empty input");
  const double r = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(r));
  const auto hi = static_cast<std::size_t>(std::ceil(r));
  const double frac = r - static_cast<double>(lo);
  if (lo == hi)
    return sorted[lo];
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

Interval percentile_interval(std::span<const double> values, double lower_q,
                             double upper_q) {
  if (values.empty())
    throw ParameterError("percentile_interval: empty input");
  if (!(lower_q >= 0.0 && lower_q < upper_q && upper_q <= 1.0))
    throw ParameterError("percentile_interval: need 0 <= lower < upper <= 1");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return {sorted_quantile(sorted, lower_q), sorted_quantile(sorted, upper_q)};
}

} // namespace bknn
