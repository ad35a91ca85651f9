#ifndef BKNN_TYPES_HPP
#define BKNN_TYPES_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace bknn {

/// A point in the two-dimensional feature plane.
struct Point2 {
  double x1 = 0.0;
  double x2 = 0.0;

  friend bool operator==(const Point2 &, const Point2 &) = default;
};

inline double squared_distance(const Point2 &a, const Point2 &b) {
  const double d1 = a.x1 - b.x1;
  const double d2 = a.x2 - b.x2;
  return d1 * d1 + d2 * d2;
}

/// Raised when an argument falls outside an operation's domain.
class ParameterError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when the data cannot support the requested fit (e.g. one class).
class DegenerateDataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Labeled training data (X, Y) with labels in {0, ..., num_classes - 1}.
class LabeledDataset {
public:
  LabeledDataset() = default;
  LabeledDataset(std::vector<Point2> points, std::vector<int> labels,
                 int num_classes = 2);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  int num_classes() const { return num_classes_; }

  const std::vector<Point2> &points() const { return points_; }
  const std::vector<int> &labels() const { return labels_; }
  const Point2 &point(std::size_t i) const { return points_[i]; }
  int label(std::size_t i) const { return labels_[i]; }

  /// Number of points carrying each label.
  std::vector<std::size_t> class_counts() const;
  /// Number of labels that occur at least once.
  int classes_present() const;

  friend bool operator==(const LabeledDataset &,
                         const LabeledDataset &) = default;

private:
  std::vector<Point2> points_;
  std::vector<int> labels_;
  int num_classes_ = 2;
};

} // namespace bknn

#endif
