#include "bknn/types.hpp"

#include <algorithm>
#include <cmath>

namespace bknn {

LabeledDataset::LabeledDataset(std::vector<Point2> points,
                               std::vector<int> labels, int num_classes)
    : points_(std::move(points)), labels_(std::move(labels)),
      num_classes_(num_classes) {
  if (num_classes_ < 2)
    throw ParameterError("LabeledDataset: num_classes must be >= 2");
  if (points_.size() != labels_.size())
    throw ParameterError("LabeledDataset: points and labels differ in length");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i].x1) || !std::isfinite(points_[i].x2))
      throw ParameterError("LabeledDataset: non-finite coordinate at index " +
                           std::to_string(i));
    if (labels_[i] < 0 || labels_[i] >= num_classes_)
      throw ParameterError("LabeledDataset: label out of range at index " +
                           std::to_string(i));
  }
}

std::vector<std::size_t> LabeledDataset::class_counts() const {
  std::vector<std::size_t> counts(static_cast<std::size_t>(num_classes_), 0);
  for (int y : labels_)
    ++counts[static_cast<std::size_t>(y)];
  return counts;
}

int LabeledDataset::classes_present() const {
  const auto counts = class_counts();
  return static_cast<int>(
      std::count_if(counts.begin(), counts.end(),
                    [](std::size_t c) { return c > 0; }));
}

} // namespace bknn
