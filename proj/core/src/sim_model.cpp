#include "bknn/sim_model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "bknn/diagnostics.hpp"
#include "bknn/numeric.hpp"

namespace bknn {

namespace {

double log_bvn_isotropic(const Point2 &x, const Point2 &mean, double var) {
  return -std::log(2.0 * std::numbers::pi * var) -
         squared_distance(x, mean) / (2.0 * var);
}

double log_mix2(double w, double la, double lb) {
  const double a = std::log(w) + la;
  const double b = std::log1p(-w) + lb;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

} // namespace

void MixtureClassModel::validate() const {
  if (!(shared_variance > 0.0) || !std::isfinite(shared_variance))
    throw ParameterError("MixtureClassModel: shared_variance must be > 0");
  if (!(class_prior > 0.0 && class_prior < 1.0))
    throw ParameterError("MixtureClassModel: class_prior must lie in (0,1)");
  if (!(component_weight > 0.0 && component_weight < 1.0))
    throw ParameterError(
        "MixtureClassModel: component_weight must lie in (0,1)");
}

double MixtureClassModel::log_density_class1(const Point2 &x) const {
  return log_mix2(component_weight,
                  log_bvn_isotropic(x, class1_means[0], shared_variance),
                  log_bvn_isotropic(x, class1_means[1], shared_variance));
}

double MixtureClassModel::log_density_class0(const Point2 &x) const {
  return log_mix2(component_weight,
                  log_bvn_isotropic(x, class0_means[0], shared_variance),
                  log_bvn_isotropic(x, class0_means[1], shared_variance));
}

double true_posterior(const MixtureClassModel &model, const Point2 &x) {
  const double a = std::log(model.class_prior) + model.log_density_class1(x);
  const double b = std::log1p(-model.class_prior) + model.log_density_class0(x);
  // a/(a+b) in log space.
  return logistic(a - b);
}

LabeledDataset sample_training(const MixtureClassModel &model, std::size_t n,
                               Rng &rng) {
  if (n == 0)
    throw ParameterError("sample_training: n must be >= 1");
  model.validate();
  const double sd = std::sqrt(model.shared_variance);
  std::vector<Point2> points;
  std::vector<int> labels;
  points.reserve(n);
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int y = rng.uniform() < model.class_prior ? 1 : 0;
    const int c = rng.uniform() < model.component_weight ? 0 : 1;
    const Point2 &mu = y == 1 ? model.class1_means[c] : model.class0_means[c];
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    points.push_back({mu.x1 + sd * z1, mu.x2 + sd * z2});
    labels.push_back(y);
  }
  return LabeledDataset(std::move(points), std::move(labels), 2);
}

std::vector<Point2> TestGrid::locations() const {
  std::vector<Point2> out;
  out.reserve(points.size());
  for (const auto &p : points)
    out.push_back(p.x);
  return out;
}

TestGridLayout TestGridLayout::standard() {
  TestGridLayout s;
  for (int i = 0; i < 20; ++i)
    s.x1_values.push_back(-1.0 + 0.1 * i);
  return s;
}

TestGrid build_test_grid(const MixtureClassModel &model,
                         const TestGridLayout &layout) {
  model.validate();
  TestGrid grid;
  grid.points.reserve(layout.x1_values.size() * layout.levels.size());
  for (double x1 : layout.x1_values) {
    auto post = [&](double x2) { return true_posterior(model, {x1, x2}); };
    const double f_lo = post(layout.x2_lo);
    const double f_hi = post(layout.x2_hi);
    for (double level : layout.levels) {
      GridPoint gp;
      gp.target_level = level;
      if (f_lo < level && level < f_hi) {
        double lo = layout.x2_lo, hi = layout.x2_hi;
        double mid = 0.5 * (lo + hi);
        for (int it = 0; it < 200; ++it) {
          mid = 0.5 * (lo + hi);
          const double f = post(mid);
          if (std::abs(f - level) <= layout.tolerance)
            break;
          (f < level ? lo : hi) = mid;
        }
        gp.x = {x1, mid};
        gp.bisection_ok = std::abs(post(mid) - level) <= layout.tolerance;
      } else {
        gp.bisection_ok = false;
      }
      if (!gp.bisection_ok) {
        double best_x2 = layout.x2_lo;
        double best_err = std::abs(post(best_x2) - level);
        const auto steps = static_cast<int>(
            std::llround((layout.x2_hi - layout.x2_lo) / layout.fallback_step));
        for (int s = 1; s <= steps; ++s) {
          const double x2 = layout.x2_lo + s * layout.fallback_step;
          const double err = std::abs(post(x2) - level);
          if (err < best_err) {
            best_err = err;
            best_x2 = x2;
          }
        }
        gp.x = {x1, best_x2};
        std::ostringstream msg;
        msg << "test grid: no bisection bracket at x1=" << x1 << " level="
            << level << "; scan fallback x2=" << best_x2;
        grid.warnings.push_back(msg.str());
        warn(msg.str());
      }
      gp.theta_true = post(gp.x.x2);
      grid.points.push_back(gp);
    }
  }
  return grid;
}

} // namespace bknn
