#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "bknn/diagnostics.hpp"
#include "bknn/knn.hpp"
#include "bknn/numeric.hpp"
#include "bknn/sim_model.hpp"
#include "bknn/validation/oracles.hpp"
#include "support.hpp"

using namespace bknn;
using bknn::test::dataset;

namespace {

double slope_log_lik(const std::vector<double> &z, double beta) {
  double s = 0.0;
  for (double v : z)
    s += log_logistic(beta * v);
  return s;
}

// Query at the origin; four class-0 points closer than one class-1 point.
LabeledDataset figure_one() {
  return dataset({{0.1, 0.0}, {0.0, 0.2}, {-0.3, 0.0}, {0.0, -0.4}, {0.5, 0.0},
                  {3.0, 3.0}, {-3.0, 3.0}},
                 {0, 0, 0, 0, 1, 1, 1});
}

} // namespace

TEST(FindNeighbors, AllPointsWhenKEqualsN) {
  Rng rng(1);
  const auto data = test::random_dataset(12, rng);
  const auto nb = find_neighbors(data, {0.1, 0.2}, 12);
  ASSERT_EQ(nb.size(), 12u);
  std::vector<std::size_t> sorted = nb.indices;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> all(12);
  std::iota(all.begin(), all.end(), 0);
  EXPECT_EQ(sorted, all);
}

TEST(FindNeighbors, FigureOneConfiguration) {
  const auto data = figure_one();
  const auto nb = find_neighbors(data, {0.0, 0.0}, 5);
  EXPECT_EQ(nb.indices, (std::vector<std::size_t>{0, 1, 2, 3, 4}));
  EXPECT_DOUBLE_EQ(knn_score(data, {0.0, 0.0}, 5, 0), 0.8);
  EXPECT_DOUBLE_EQ(knn_score(data, {0.0, 0.0}, 5, 1), 0.2);
}

TEST(FindNeighbors, MatchesFullSortOracle) {
  Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    auto data = test::random_dataset(10, rng);
    const Point2 x{2 * rng.uniform() - 1, 2 * rng.uniform() - 1};
    const auto got = find_neighbors(data, x, 3);
    EXPECT_EQ(got.indices, oracle::sorted_neighbors(data, x, 3, std::nullopt));
    const std::size_t skip = rng.below(10);
    EXPECT_EQ(find_neighbors(data, data.point(skip), 3, skip).indices,
              oracle::sorted_neighbors(data, data.point(skip), 3, skip));
  }
}

TEST(FindNeighbors, DistanceTiesGoToSmallerIndex) {
  // Four points at distance 1 from the origin, plus duplicates.
  const auto data = dataset({{0, 1}, {1, 0}, {0, -1}, {-1, 0}, {1, 0}, {0, 1}},
                            {0, 1, 0, 1, 0, 1});
  EXPECT_EQ(find_neighbors(data, {0, 0}, 6).indices,
            (std::vector<std::size_t>{0, 1, 2, 3, 4, 5}));
  // Query exactly at (1, 0): indices 1 and 4 are at distance zero.
  EXPECT_EQ(find_neighbors(data, {1, 0}, 2).indices,
            (std::vector<std::size_t>{1, 4}));
  EXPECT_EQ(find_neighbors(data, {1, 0}, 2, 1).indices,
            (std::vector<std::size_t>{4, 0}));
}

TEST(FindNeighbors, RejectsOutOfRangeK) {
  Rng rng(3);
  const auto data = test::random_dataset(5, rng);
  EXPECT_THROW(find_neighbors(data, {0, 0}, 0), ParameterError);
  EXPECT_THROW(find_neighbors(data, {0, 0}, 6), ParameterError);
  EXPECT_THROW(find_neighbors(data, {0, 0}, 5, 0), ParameterError);
  EXPECT_THROW(find_neighbors(data, {0, 0}, 2, 5), ParameterError);
  EXPECT_NO_THROW(find_neighbors(data, {0, 0}, 4, 0));
}

TEST(KnnScore, AllSameLabel) {
  const auto data = dataset({{0, 0}, {1, 1}, {2, 2}}, {1, 1, 1});
  EXPECT_DOUBLE_EQ(knn_score(data, {0.5, 0.5}, 3, 1), 1.0);
  EXPECT_DOUBLE_EQ(knn_score(data, {0.5, 0.5}, 2, 0), 0.0);
}

TEST(KnnScore, EqualsManualCount) {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const auto data = test::random_dataset(20, rng);
    const Point2 x{2 * rng.uniform() - 1, 2 * rng.uniform() - 1};
    const auto nb = oracle::sorted_neighbors(data, x, 7, std::nullopt);
    for (int q = 0; q < 2; ++q)
      EXPECT_DOUBLE_EQ(knn_score(data, x, 7, q),
                       static_cast<double>(oracle::count_label(data, nb, q)) /
                           7.0);
    EXPECT_DOUBLE_EQ(knn_score(data, x, 7, 0) + knn_score(data, x, 7, 1), 1.0);
  }
}

TEST(KnnScore, ThreeClassScoresSumToOne) {
  Rng rng(5);
  std::vector<Point2> pts;
  std::vector<int> labels;
  for (int i = 0; i < 30; ++i) {
    pts.push_back({rng.uniform(), rng.uniform()});
    labels.push_back(static_cast<int>(rng.below(3)));
  }
  const LabeledDataset data(pts, labels, 3);
  for (std::size_t k = 1; k <= 30; ++k) {
    double total = 0.0;
    for (int q = 0; q < 3; ++q)
      total += knn_score(data, {0.5, 0.5}, k, q);
    EXPECT_NEAR(total, 1.0, 1e-15);
  }
}

TEST(NeighborTable, CountsMatchBruteForce) {
  Rng rng(6);
  const auto data = test::random_dataset(25, rng);
  const auto table = NeighborTable::for_training(data, 24);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto nb = oracle::sorted_neighbors(data, data.point(i), 24, i);
    for (std::size_t r = 0; r < 24; ++r)
      ASSERT_EQ(table.neighbors(i)[r], nb[r]);
    for (std::size_t k = 0; k <= 24; ++k) {
      const std::vector<std::size_t> head(nb.begin(), nb.begin() + k);
      for (int q = 0; q < 2; ++q)
        ASSERT_EQ(static_cast<std::size_t>(table.count(i, k, q)),
                  oracle::count_label(data, head, q));
    }
  }
  EXPECT_THROW(NeighborTable::for_training(data, 25), ParameterError);
  const std::vector<Point2> qs{{0, 0}, {0.5, -0.5}};
  const auto qt = NeighborTable::for_queries(data, qs, 25);
  for (std::size_t j = 0; j < qs.size(); ++j)
    for (std::size_t k = 1; k <= 25; ++k)
      EXPECT_DOUBLE_EQ(qt.count(j, k, 1) / static_cast<double>(k),
                       knn_score(data, qs[j], k, 1));
}

TEST(CvChooseK, SeparatedClustersPickSmallestK) {
  Rng rng(7);
  const auto data = test::separated_clusters(10, rng);
  const std::vector<int> grid{1, 3, 5};
  EXPECT_EQ(loo_errors(data, grid), (std::vector<std::size_t>{0, 0, 0}));
  EXPECT_EQ(cv_choose_k(data, grid), 1);
}

TEST(CvChooseK, MatchesEnumerationOracle) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng rng(seed);
    const auto data = sample_training(MixtureClassModel{}, 30, rng);
    const auto grid = make_k_grid(1, 29);
    const auto errors = loo_errors(data, grid);
    int best = 0;
    std::size_t best_err = SIZE_MAX;
    for (int k : grid) {
      const auto e = oracle::loo_error_count(data, static_cast<std::size_t>(k));
      ASSERT_EQ(errors[static_cast<std::size_t>(k - 1)], e) << "k=" << k;
      if (e < best_err) {
        best_err = e;
        best = k;
      }
    }
    EXPECT_EQ(cv_choose_k(data, grid), best);
  }
}

TEST(CvChooseK, LargerKWinsAgainstLabelNoise) {
  // A class-1 point in the middle of a class-0 lattice: at k=1 it also
  // misleads its four nearest lattice points.
  std::vector<Point2> pts;
  std::vector<int> labels;
  for (int i = -2; i <= 2; ++i)
    for (int j = -2; j <= 2; ++j) {
      pts.push_back({double(i), double(j)});
      labels.push_back(0);
      pts.push_back({20.0 + i, double(j)});
      labels.push_back(1);
    }
  pts.push_back({0.5, 0.5});
  labels.push_back(1);
  const auto data = dataset(pts, labels);
  EXPECT_GT(oracle::loo_error_count(data, 1), oracle::loo_error_count(data, 5));
  const std::vector<int> grid{1, 5};
  EXPECT_EQ(cv_choose_k(data, grid), 5);
}

TEST(CvChooseK, EvenVoteTiesGoToClassZero) {
  // Each point's two neighbors split 1-1, so every vote is class 0.
  const auto data = dataset({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {0, 0, 1, 1});
  const std::vector<int> grid{2};
  EXPECT_EQ(loo_errors(data, grid), (std::vector<std::size_t>{2}));
  EXPECT_EQ(oracle::loo_error_count(data, 2), 2u);
}

TEST(CvChooseK, SingleClassIsDegenerate) {
  const auto data = dataset({{0, 0}, {1, 0}, {2, 0}}, {1, 1, 1});
  const std::vector<int> grid{1};
  EXPECT_THROW(cv_choose_k(data, grid), DegenerateDataError);
}

TEST(LogisticSlope, TwoAgreeOneDisagree) {
  const std::vector<double> z{1, 1, -1};
  const auto fit = fit_logistic_slope(z, 15.0);
  EXPECT_NEAR(fit.beta, oracle::grid_search_slope(z, 15.0, 1e-4), 1e-4);
  // Score 2(1 - s) - s = 0 gives s = 2/3, beta = log 2.
  EXPECT_NEAR(fit.beta, std::log(2.0), 1e-9);
  EXPECT_FALSE(fit.flat);
  EXPECT_FALSE(fit.capped);
}

TEST(LogisticSlope, FlatAndSeparatedCases) {
  const std::vector<double> zeros(5, 0.0);
  const auto flat = fit_logistic_slope(zeros, 15.0);
  EXPECT_EQ(flat.beta, 0.0);
  EXPECT_TRUE(flat.flat);
  const std::vector<double> ones(5, 1.0);
  const auto sep = fit_logistic_slope(ones, 15.0);
  EXPECT_EQ(sep.beta, 15.0);
  EXPECT_TRUE(sep.capped);
  // More disagreement than agreement: maximizer at the boundary zero.
  const std::vector<double> neg{-1, -0.5, 0.2};
  EXPECT_EQ(fit_logistic_slope(neg, 15.0).beta, 0.0);
}

TEST(LogisticSlope, BeatsFineGrid) {
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + rng.below(40);
    std::vector<double> z(n);
    const double bias = rng.uniform() * 0.6;
    for (auto &v : z)
      v = std::clamp(2 * rng.uniform() - 1 + bias, -1.0, 1.0);
    const double beta = fit_logistic_slope(z, 15.0).beta;
    ASSERT_GE(beta, 0.0);
    ASSERT_LE(beta, 15.0);
    const double at_fit = slope_log_lik(z, beta);
    for (int s = 0; s <= 1500; ++s)
      ASSERT_GE(at_fit, slope_log_lik(z, s * 0.01) - 1e-8);
  }
}

TEST(FitBetaLogistic, AllNeighborhoodsSplitWarnsAndReturnsZero) {
  const auto data = dataset({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {0, 0, 1, 1});
  int warnings = 0;
  ScopedWarningHandler guard([&](std::string_view) { ++warnings; });
  EXPECT_EQ(fit_beta_logistic(data, 2), 0.0);
  EXPECT_EQ(warnings, 1);
}

TEST(FitBetaLogistic, UsesSelfExcludedAgreement) {
  Rng rng(9);
  const auto data = sample_training(MixtureClassModel{}, 40, rng);
  for (std::size_t k : {1u, 5u, 12u}) {
    std::vector<double> z;
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto nb = oracle::sorted_neighbors(data, data.point(i), k, i);
      z.push_back(2.0 * oracle::count_label(data, nb, data.label(i)) / k - 1.0);
    }
    EXPECT_NEAR(fit_beta_logistic(data, k),
                oracle::grid_search_slope(z, 15.0, 1e-4), 1e-4);
  }
}

TEST(PointEstimate, ClosedFormCases) {
  const auto all_one = dataset({{0, 0}, {0, 1}, {5, 5}}, {1, 1, 0});
  CalibratedKnnModel m{2, 2.0, &all_one};
  EXPECT_NEAR(knn_point_estimate(m, {0, 0.5}), 0.8807970779778823, 1e-15);
  m.beta_hat = 0.0;
  EXPECT_EQ(knn_point_estimate(m, {0, 0.5}), 0.5);
  const auto split = dataset({{0, 0}, {0, 1}}, {0, 1});
  CalibratedKnnModel half{2, 9.0, &split};
  EXPECT_EQ(knn_point_estimate(half, {0.3, 0.5}), 0.5);
}

TEST(PointEstimate, NondecreasingInScore) {
  // Five neighbors of the origin; flipping labels to class 1 one at a time.
  std::vector<Point2> pts{{0.1, 0}, {0.2, 0}, {0.3, 0}, {0.4, 0}, {0.5, 0}};
  double prev = 0.0;
  for (int ones = 0; ones <= 5; ++ones) {
    std::vector<int> labels(5, 0);
    for (int i = 0; i < ones; ++i)
      labels[static_cast<std::size_t>(i)] = 1;
    const auto data = dataset(pts, labels);
    const double v = knn_point_estimate({5, 1.7, &data}, {0, 0});
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(PointEstimate, BatchMatchesSingle) {
  Rng rng(10);
  const auto data = sample_training(MixtureClassModel{}, 80, rng);
  const auto model = fit_calibrated_knn(data, make_k_grid(1, 30));
  const std::vector<int> grid = make_k_grid(1, 30);
  EXPECT_EQ(model.k, cv_choose_k(data, grid));
  EXPECT_DOUBLE_EQ(model.beta_hat,
                   fit_beta_logistic(data, static_cast<std::size_t>(model.k)));
  const auto locs = build_test_grid(MixtureClassModel{}).locations();
  const auto batch = knn_point_estimates(model, locs);
  for (std::size_t i = 0; i < locs.size(); ++i)
    EXPECT_EQ(batch[i], knn_point_estimate(model, locs[i]));
}
