#include "bknn/bootstrap.hpp"

#include <algorithm>
#include <string>

namespace bknn {

void BootstrapSettings::validate() const {
  if (n_resamples < 2)
    throw ParameterError("BootstrapSettings: n_resamples must be >= 2");
  if (k_grid.empty())
    throw ParameterError("BootstrapSettings: k_grid must be nonempty");
  if (*std::min_element(k_grid.begin(), k_grid.end()) < 1)
    throw ParameterError("BootstrapSettings: k_grid entries must be >= 1");
  if (max_redraws < 1)
    throw ParameterError("BootstrapSettings: max_redraws must be >= 1");
  if (!(beta_cap > 0.0))
    throw ParameterError("BootstrapSettings: beta_cap must be > 0");
}

LabeledDataset bootstrap_resample(const LabeledDataset &training, Rng &rng,
                                  int max_redraws) {
  const std::size_t n = training.size();
  if (n < 2)
    throw ParameterError("bootstrap_resample: need n >= 2");
  for (int attempt = 0; attempt <= max_redraws; ++attempt) {
    std::vector<Point2> points(n);
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto j = rng.below(n);
      points[i] = training.point(j);
      labels[i] = training.label(j);
    }
    LabeledDataset resample(std::move(points), std::move(labels),
                            training.num_classes());
    if (resample.classes_present() >= 2)
      return resample;
  }
  throw DegenerateDataError("bootstrap_resample: " +
                            std::to_string(max_redraws) +
                            " redraws all produced a single class");
}

BootstrapResult bootstrap_intervals(const LabeledDataset &training,
                                    std::span<const Point2> test_points,
                                    const BootstrapSettings &settings,
                                    const Rng &rng) {
  return bootstrap_intervals(training, test_points, settings,
                             [&rng](std::size_t b) { return rng.substream(b); });
}

BootstrapResult bootstrap_intervals(const LabeledDataset &training,
                                    std::span<const Point2> test_points,
                                    const BootstrapSettings &settings,
                                    const ResampleStreams &streams) {
  settings.validate();
  const auto resamples = static_cast<std::size_t>(settings.n_resamples);
  const std::size_t points = test_points.size();

  BootstrapResult result;
  result.estimates.resize(resamples * points);
  result.chosen_k.reserve(resamples);
  result.beta_hat.reserve(resamples);

  for (std::size_t b = 0; b < resamples; ++b) {
    Rng stream = streams(b);
    const auto resample =
        bootstrap_resample(training, stream, settings.max_redraws);
    const auto model =
        fit_calibrated_knn(resample, settings.k_grid, settings.beta_cap);
    const auto est = knn_point_estimates(model, test_points);
    std::copy(est.begin(), est.end(), result.estimates.begin() +
                                          static_cast<std::ptrdiff_t>(b * points));
    result.chosen_k.push_back(model.k);
    result.beta_hat.push_back(model.beta_hat);
  }

  result.intervals.reserve(points);
  std::vector<double> column(resamples);
  for (std::size_t p = 0; p < points; ++p) {
    for (std::size_t b = 0; b < resamples; ++b)
      column[b] = result.estimates[b * points + p];
    result.intervals.push_back(percentile_interval_95(column));
  }
  return result;
}

} // namespace bknn
