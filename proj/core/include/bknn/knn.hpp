#ifndef BKNN_KNN_HPP
#define BKNN_KNN_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bknn/types.hpp"

namespace bknn {

inline constexpr double kDefaultBetaCap = 15.0;

/// {1, 2, ..., max_k}.
std::vector<int> make_k_grid(int min_k, int max_k);
inline std::vector<int> default_k_grid() { return make_k_grid(1, 50); }

/// Indices of the k nearest training points, ordered by (Euclidean distance,
/// index). Distinct, length exactly k.
struct NeighborSet {
  std::vector<std::size_t> indices;

  std::size_t size() const { return indices.size(); }
};

/// Brute-force k nearest neighbors of x; ties broken by smaller index.
/// exclude_index removes one training point (leave-one-out neighborhoods).
NeighborSet find_neighbors(const LabeledDataset &training, const Point2 &x,
                           std::size_t k,
                           std::optional<std::size_t> exclude_index = {});

/// Fraction of the k-neighborhood of x labeled q.
double knn_score(const LabeledDataset &training, const Point2 &x,
                 std::size_t k, int q,
                 std::optional<std::size_t> exclude_index = {});

/// Precomputed neighbor orderings with cumulative per-class counts, so that
/// the class composition of any neighborhood size up to depth() is O(1).
class NeighborTable {
public:
  /// Self-excluded neighborhoods of every training point; depth <= n - 1.
  static NeighborTable for_training(const LabeledDataset &training,
                                    std::size_t depth);
  /// Neighborhoods of external query points; depth <= n.
  static NeighborTable for_queries(const LabeledDataset &training,
                                   std::span<const Point2> queries,
                                   std::size_t depth);

  std::size_t num_queries() const { return num_queries_; }
  std::size_t depth() const { return depth_; }
  int num_classes() const { return static_cast<int>(num_classes_); }

  /// The first depth() neighbors of query i in order.
  std::span<const std::uint32_t> neighbors(std::size_t i) const {
    return {order_.data() + i * depth_, depth_};
  }

  /// Number of the k nearest neighbors of query i labeled q (k <= depth()).
  int count(std::size_t i, std::size_t k, int q) const {
    return cumulative_[(i * (depth_ + 1) + k) * num_classes_ +
                       static_cast<std::size_t>(q)];
  }

private:
  NeighborTable() = default;
  void build(const LabeledDataset &training, std::span<const Point2> queries,
             bool exclude_self, std::size_t depth);

  std::size_t num_queries_ = 0;
  std::size_t depth_ = 0;
  std::size_t num_classes_ = 2;
  std::vector<std::uint32_t> order_;
  std::vector<std::int32_t> cumulative_;
};

/// Leave-one-out misclassification count for each k in k_grid (majority
/// vote, vote ties toward the smaller class index).
std::vector<std::size_t> loo_errors(const LabeledDataset &training,
                                    std::span<const int> k_grid);
std::vector<std::size_t> loo_errors(const NeighborTable &table,
                                    const LabeledDataset &training,
                                    std::span<const int> k_grid);

/// k in k_grid minimizing the LOO error; ties toward the smallest k.
/// Throws DegenerateDataError if fewer than two classes are present.
int cv_choose_k(const LabeledDataset &training, std::span<const int> k_grid);
int cv_choose_k(const NeighborTable &table, const LabeledDataset &training,
                std::span<const int> k_grid);

struct LogisticSlopeFit {
  double beta = 0.0;
  bool flat = false;   ///< every covariate zero; likelihood constant
  bool capped = false; ///< maximizer at or beyond the cap
  int iterations = 0;
};

/// Maximizes sum_i log logistic(beta * z_i) over beta in [0, cap]
/// (no-intercept logistic regression of y = 1 on z). Safeguarded Newton
/// iteration on the score with a bisection fallback.
LogisticSlopeFit fit_logistic_slope(std::span<const double> z,
                                    double cap = kDefaultBetaCap);

/// Covariates z_i = 2 g(y_i) - 1, g the self-excluded fraction of the k
/// neighbors of x_i sharing its label. Binary data only.
std::vector<double> agreement_covariates(const NeighborTable &table,
                                         const LabeledDataset &training,
                                         std::size_t k);

/// beta_hat of the calibration model at neighborhood size k. Returns 0 with
/// a warning when every z_i is zero.
double fit_beta_logistic(const LabeledDataset &training, std::size_t k,
                         double cap = kDefaultBetaCap);
double fit_beta_logistic(const NeighborTable &table,
                         const LabeledDataset &training, std::size_t k,
                         double cap = kDefaultBetaCap);

/// Regular KNN with a CV-chosen k and a logistic recalibration slope.
struct CalibratedKnnModel {
  int k = 1;
  double beta_hat = 0.0;
  const LabeledDataset *training = nullptr;
};

CalibratedKnnModel fit_calibrated_knn(const LabeledDataset &training,
                                      std::span<const int> k_grid,
                                      double cap = kDefaultBetaCap);

/// logistic(beta_hat * (2 g - 1)), g the class-1 score at x over the full
/// training set.
double knn_point_estimate(const CalibratedKnnModel &model, const Point2 &x);
std::vector<double> knn_point_estimates(const CalibratedKnnModel &model,
                                        std::span<const Point2> xs);

} // namespace bknn

#endif
