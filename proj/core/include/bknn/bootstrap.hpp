#ifndef BKNN_BOOTSTRAP_HPP
#define BKNN_BOOTSTRAP_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "bknn/interval.hpp"
#include "bknn/knn.hpp"
#include "bknn/rng.hpp"
#include "bknn/types.hpp"

namespace bknn {

struct BootstrapSettings {
  int n_resamples = 500;
  std::vector<int> k_grid = default_k_grid();
  int max_redraws = 100;
  double beta_cap = kDefaultBetaCap;

  void validate() const;

  friend bool operator==(const BootstrapSettings &,
                         const BootstrapSettings &) = default;
};

/// n draws with replacement. Resamples missing a class are redrawn, up to
/// max_redraws times, then DegenerateDataError.
LabeledDataset bootstrap_resample(const LabeledDataset &training, Rng &rng,
                                  int max_redraws = 100);

struct BootstrapResult {
  std::vector<Interval> intervals;     ///< one per test point
  std::vector<double> estimates;       ///< resample-major, B x points
  std::vector<int> chosen_k;           ///< CV choice per resample
  std::vector<double> beta_hat;        ///< slope per resample

  std::span<const double> estimates_of_resample(std::size_t b,
                                                std::size_t points) const {
    return {estimates.data() + b * points, points};
  }
};

/// Supplies the random stream of resample b.
using ResampleStreams = std::function<Rng(std::size_t b)>;

/// Percentile bootstrap of the calibrated-KNN point estimate. Each resample
/// re-runs the whole pipeline: CV choice of k, logistic slope fit, then
/// estimates at every test point. Resample b uses rng.substream(b).
BootstrapResult bootstrap_intervals(const LabeledDataset &training,
                                    std::span<const Point2> test_points,
                                    const BootstrapSettings &settings,
                                    const Rng &rng);
BootstrapResult bootstrap_intervals(const LabeledDataset &training,
                                    std::span<const Point2> test_points,
                                    const BootstrapSettings &settings,
                                    const ResampleStreams &streams);

} // namespace bknn

#endif
