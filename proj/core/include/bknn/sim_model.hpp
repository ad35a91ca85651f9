#ifndef BKNN_SIM_MODEL_HPP
#define BKNN_SIM_MODEL_HPP

#include <array>
#include <string>
#include <vector>

#include "bknn/rng.hpp"
#include "bknn/types.hpp"

namespace bknn {

/// Two classes, each an equal-weight mixture of two bivariate normals with a
/// shared isotropic covariance. The default instance is the study's
/// generating model.
struct MixtureClassModel {
  std::array<Point2, 2> class1_means{Point2{-0.3, 0.7}, Point2{0.4, 0.7}};
  std::array<Point2, 2> class0_means{Point2{-0.7, 0.3}, Point2{0.3, 0.3}};
  double shared_variance = 0.03;
  double class_prior = 0.5;      ///< Pr(y = 1)
  double component_weight = 0.5; ///< weight of the first component per class

  /// Throws ParameterError if the invariants do not hold.
  void validate() const;

  /// log f_1(x) and log f_0(x).
  double log_density_class1(const Point2 &x) const;
  double log_density_class0(const Point2 &x) const;
};

/// Pr(y = 1 | x) by Bayes' rule, evaluated in log space.
double true_posterior(const MixtureClassModel &model, const Point2 &x);

/// Draws n labeled points from the model (Q = 2).
LabeledDataset sample_training(const MixtureClassModel &model, std::size_t n,
                               Rng &rng);

struct GridPoint {
  Point2 x;
  double theta_true = 0.0;
  double target_level = 0.0;
  bool bisection_ok = true;
};

struct TestGrid {
  std::vector<GridPoint> points;
  std::vector<std::string> warnings;

  std::size_t size() const { return points.size(); }
  std::vector<Point2> locations() const;
};

struct TestGridLayout {
  std::vector<double> x1_values;   ///< -1.0, -0.9, ..., 0.9
  std::vector<double> levels{0.02, 0.1, 0.25, 0.4, 0.6, 0.75, 0.9, 0.98};
  double x2_lo = -0.5;
  double x2_hi = 1.5;
  double tolerance = 1e-6;  ///< on the posterior value
  double fallback_step = 1e-3;

  static TestGridLayout standard();
};

/// Places, for each X1 value, one test point on each posterior level set
/// along X2. Points are ordered by (X1 index, level index).
TestGrid build_test_grid(const MixtureClassModel &model,
                         const TestGridLayout &layout = TestGridLayout::standard());

} // namespace bknn

#endif
