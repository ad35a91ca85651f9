#include <gtest/gtest.h>

#include <algorithm>
#include <vector>

#include "bknn/interval.hpp"
#include "bknn/rng.hpp"
#include "bknn/types.hpp"

using namespace bknn;

TEST(PercentileInterval, SingleValue) {
  const std::vector<double> v{0.3};
  EXPECT_EQ(percentile_interval_95(v), (Interval{0.3, 0.3}));
}

TEST(PercentileInterval, IntegerSequence) {
  std::vector<double> v;
  for (int i = 100; i >= 0; --i)  // order must not matter
    v.push_back(i);
  const auto iv = percentile_interval(v, 0.025, 0.975);
  EXPECT_DOUBLE_EQ(iv.lo, 2.5);
  EXPECT_DOUBLE_EQ(iv.hi, 97.5);
}

TEST(PercentileInterval, ConstantListHasZeroLength) {
  const std::vector<double> v(17, 0.42);
  const auto iv = percentile_interval_95(v);
  EXPECT_EQ(iv.lo, 0.42);
  EXPECT_EQ(iv.length(), 0.0);
}

TEST(PercentileInterval, RejectsBadInput) {
  const std::vector<double> empty;
  EXPECT_THROW(percentile_interval_95(empty), ParameterError);
  const std::vector<double> v{1, 2, 3};
  EXPECT_THROW(percentile_interval(v, 0.6, 0.4), ParameterError);
  EXPECT_THROW(percentile_interval(v, -0.1, 0.5), ParameterError);
  EXPECT_THROW(percentile_interval(v, 0.1, 1.5), ParameterError);
}

TEST(PercentileInterval, InterpolatesBetweenOrderStatistics) {
  Rng rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(2 + rng.below(50));
    for (auto &x : v)
      x = rng.uniform();
    auto sorted = v;
    std::sort(sorted.begin(), sorted.end());
    const auto iv = percentile_interval_95(v);
    const double r = 0.025 * static_cast<double>(v.size() - 1);
    const auto f = static_cast<std::size_t>(r);
    const double want =
        sorted[f] + (r - static_cast<double>(f)) *
                        (sorted[std::min(f + 1, v.size() - 1)] - sorted[f]);
    EXPECT_NEAR(iv.lo, want, 1e-15);
    EXPECT_GE(iv.lo, sorted.front());
    EXPECT_LE(iv.hi, sorted.back());
    EXPECT_LE(iv.lo, iv.hi);
  }
  const std::vector<double> s{1, 2, 4};
  EXPECT_EQ(sorted_quantile(s, 0.0), 1.0);
  EXPECT_EQ(sorted_quantile(s, 1.0), 4.0);
  EXPECT_EQ(sorted_quantile(s, 0.75), 3.0);
}

TEST(Interval, ClosedMembership) {
  const Interval iv{0.2, 0.6};
  EXPECT_TRUE(iv.contains(0.2));
  EXPECT_TRUE(iv.contains(0.6));
  EXPECT_FALSE(iv.contains(0.61));
  EXPECT_DOUBLE_EQ(iv.length(), 0.4);
}
