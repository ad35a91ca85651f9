#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "bknn/diagnostics.hpp"
#include "bknn/sim_model.hpp"
#include "bknn/validation/oracles.hpp"

using namespace bknn;

TEST(MixtureModel, DefaultsMatchStudyDesign) {
  const MixtureClassModel m;
  EXPECT_EQ(m.class1_means[0], (Point2{-0.3, 0.7}));
  EXPECT_EQ(m.class1_means[1], (Point2{0.4, 0.7}));
  EXPECT_EQ(m.class0_means[0], (Point2{-0.7, 0.3}));
  EXPECT_EQ(m.class0_means[1], (Point2{0.3, 0.3}));
  EXPECT_DOUBLE_EQ(m.shared_variance, 0.03);
  EXPECT_DOUBLE_EQ(m.class_prior, 0.5);
  EXPECT_DOUBLE_EQ(m.component_weight, 0.5);
  EXPECT_NO_THROW(m.validate());
}

TEST(MixtureModel, ValidateRejectsBadParameters) {
  MixtureClassModel m;
  m.shared_variance = 0.0;
  EXPECT_THROW(m.validate(), ParameterError);
  m = {};
  m.class_prior = 1.0;
  EXPECT_THROW(m.validate(), ParameterError);
  m = {};
  m.component_weight = 0.0;
  EXPECT_THROW(m.validate(), ParameterError);
}

TEST(TruePosterior, EqualDensitiesGiveOneHalf) {
  MixtureClassModel m;
  m.class0_means = m.class1_means;
  for (const Point2 x : {Point2{0, 0}, Point2{-0.3, 0.7}, Point2{3, -2}})
    EXPECT_DOUBLE_EQ(true_posterior(m, x), 0.5);
}

TEST(TruePosterior, FarPointSaturates) {
  EXPECT_NEAR(true_posterior(MixtureClassModel{}, {0.0, 10.0}), 1.0, 1e-9);
}

TEST(TruePosterior, AtFirstClassOneMean) {
  // 40-digit evaluation of the mixture densities term by term, rounded.
  EXPECT_NEAR(true_posterior(MixtureClassModel{}, {-0.3, 0.7}),
              0.99502610055724109, 1e-15);
}

TEST(TruePosterior, ComponentSwapInvariance) {
  const MixtureClassModel m;
  MixtureClassModel swapped = m;
  std::swap(swapped.class1_means[0], swapped.class1_means[1]);
  std::swap(swapped.class0_means[0], swapped.class0_means[1]);
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const Point2 x{4 * rng.uniform() - 2, 4 * rng.uniform() - 2};
    EXPECT_NEAR(true_posterior(m, x), true_posterior(swapped, x), 1e-15);
  }
}

TEST(TruePosterior, ClassPosteriorsSumToOne) {
  const MixtureClassModel m;
  MixtureClassModel flipped = m;
  std::swap(flipped.class0_means, flipped.class1_means);
  flipped.class_prior = 1.0 - m.class_prior;
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const Point2 x{4 * rng.uniform() - 2, 4 * rng.uniform() - 2};
    EXPECT_NEAR(true_posterior(m, x) + true_posterior(flipped, x), 1.0, 1e-15);
  }
}

TEST(TruePosterior, AgreesWithDirectArithmetic) {
  const MixtureClassModel m;
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    const Point2 x{4 * rng.uniform() - 2, 4 * rng.uniform() - 2};
    const double want = oracle::direct_posterior(m, x);
    ASSERT_LE(std::abs(true_posterior(m, x) - want), 1e-12 * want);
  }
}

TEST(SampleTraining, RejectsEmpty) {
  Rng rng(1);
  EXPECT_THROW(sample_training(MixtureClassModel{}, 0, rng), ParameterError);
}

TEST(SampleTraining, ClassFrequencyAndMeans) {
  Rng rng(4);
  const auto data = sample_training(MixtureClassModel{}, 100000, rng);
  ASSERT_EQ(data.size(), 100000u);
  double n1 = 0, s1 = 0, s2 = 0;
  for (std::size_t i = 0; i < data.size(); ++i)
    if (data.label(i) == 1) {
      ++n1;
      s1 += data.point(i).x1;
      s2 += data.point(i).x2;
    }
  EXPECT_NEAR(n1 / 100000.0, 0.5, 0.005);
  EXPECT_NEAR(s1 / n1, 0.05, 0.01);
  EXPECT_NEAR(s2 / n1, 0.7, 0.01);
}

TEST(SampleTraining, ComponentVarianceMatches) {
  // Within-component spread of class-0 points near (0.3, 0.3).
  Rng rng(5);
  const auto data = sample_training(MixtureClassModel{}, 50000, rng);
  double n = 0, ss = 0;
  for (std::size_t i = 0; i < data.size(); ++i)
    if (data.label(i) == 0 && data.point(i).x1 > 0.0) {
      ++n;
      ss += (data.point(i).x2 - 0.3) * (data.point(i).x2 - 0.3);
    }
  EXPECT_NEAR(ss / n, 0.03, 0.002);
}

TEST(SampleTraining, Deterministic) {
  Rng a(77), b(77);
  EXPECT_EQ(sample_training(MixtureClassModel{}, 250, a),
            sample_training(MixtureClassModel{}, 250, b));
}

TEST(TestGrid, HasOneHundredSixtyPointsInOrder) {
  const auto grid = build_test_grid(MixtureClassModel{});
  ASSERT_EQ(grid.size(), 160u);
  const auto layout = TestGridLayout::standard();
  for (std::size_t i = 0; i < 20; ++i)
    for (std::size_t l = 0; l < 8; ++l) {
      const auto &p = grid.points[i * 8 + l];
      EXPECT_DOUBLE_EQ(p.x.x1, layout.x1_values[i]);
      EXPECT_DOUBLE_EQ(p.target_level, layout.levels[l]);
    }
  EXPECT_NEAR(layout.x1_values.front(), -1.0, 1e-12);
  EXPECT_NEAR(layout.x1_values.back(), 0.9, 1e-12);
}

TEST(TestGrid, StoredPosteriorIsConsistent) {
  const MixtureClassModel m;
  const auto grid = build_test_grid(m);
  EXPECT_TRUE(grid.warnings.empty());
  for (const auto &p : grid.points) {
    EXPECT_TRUE(p.bisection_ok);
    EXPECT_LE(std::abs(true_posterior(m, p.x) - p.theta_true), 1e-6);
    EXPECT_LE(std::abs(p.theta_true - p.target_level), 1e-6);
    EXPECT_GE(p.x.x2, -0.5);
    EXPECT_LE(p.x.x2, 1.5);
  }
}

TEST(TestGrid, MonotoneInX2AtZero) {
  const MixtureClassModel m;
  const auto grid = build_test_grid(m);
  std::vector<const GridPoint *> column;
  for (const auto &p : grid.points)
    if (std::abs(p.x.x1) < 1e-12)
      column.push_back(&p);
  ASSERT_EQ(column.size(), 8u);
  for (std::size_t i = 1; i < column.size(); ++i) {
    EXPECT_GE(column[i]->theta_true, column[i - 1]->theta_true);
    EXPECT_GE(column[i]->x.x2, column[i - 1]->x.x2);
  }
  // The direct evaluator is monotone along the whole search interval here,
  // so the level sets above are unique.
  double prev = 0.0;
  for (int s = 0; s <= 20000; ++s) {
    const double v = oracle::direct_posterior(m, {0.0, -0.5 + s * 1e-4});
    ASSERT_GE(v, prev);
    prev = v;
  }
}

TEST(TestGrid, FallbackScanWarns) {
  TestGridLayout layout;
  layout.x1_values = {0.0};
  layout.levels = {0.02, 0.5};
  layout.x2_lo = 0.45;  // posterior already above 0.02 here
  layout.x2_hi = 1.5;
  std::vector<std::string> seen;
  ScopedWarningHandler guard(
      [&](std::string_view msg) { seen.emplace_back(msg); });
  const auto grid = build_test_grid(MixtureClassModel{}, layout);
  ASSERT_EQ(grid.size(), 2u);
  EXPECT_FALSE(grid.points[0].bisection_ok);
  EXPECT_TRUE(grid.points[1].bisection_ok);
  EXPECT_DOUBLE_EQ(grid.points[0].x.x2, 0.45);
  ASSERT_EQ(seen.size(), 1u);
  EXPECT_EQ(grid.warnings, seen);
}
