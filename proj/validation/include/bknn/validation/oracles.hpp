#ifndef BKNN_VALIDATION_ORACLES_HPP
#define BKNN_VALIDATION_ORACLES_HPP

// Reference evaluators written directly from the model definitions. They
// share no code path with the library beyond the data containers, favor
// literal arithmetic over speed, and exist only to check the library.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "bknn/sim_model.hpp"
#include "bknn/types.hpp"

namespace bknn::oracle {

/// Bayes rule with the mixture densities evaluated term by term in direct
/// (not log) space.
double direct_posterior(const MixtureClassModel &model, const Point2 &x);

/// Sort every candidate by (Euclidean distance, index) and take the first k.
std::vector<std::size_t> sorted_neighbors(const LabeledDataset &training,
                                          const Point2 &x, std::size_t k,
                                          std::optional<std::size_t> exclude);

/// Count of neighbors labeled q.
std::size_t count_label(const LabeledDataset &training,
                        std::span<const std::size_t> neighbors, int q);

/// Product form of the pseudo-likelihood, each factor a ratio of
/// exponentials; returns the log of the product.
double product_form_log_pl(const LabeledDataset &training, std::size_t k,
                           double beta);

/// Binary logistic form: sum_i log(e^t / (1 + e^t)), t = beta (2 g_i - 1).
double logistic_form_log_pl(const LabeledDataset &training, std::size_t k,
                            double beta);

/// LOO misclassification count by majority vote of self-excluded neighbors,
/// vote ties toward the smaller class index.
std::size_t loo_error_count(const LabeledDataset &training, std::size_t k);

/// argmax of sum_i log logistic(beta z_i) over {0, step, 2 step, ..., cap}.
double grid_search_slope(std::span<const double> z, double cap, double step);

/// Normalized pseudo-posterior of K on {1, ..., n-1} under flat priors, with
/// beta integrated by the trapezoid rule on [0, beta_hi].
std::vector<double> k_posterior_by_quadrature(const LabeledDataset &training,
                                              double beta_hi, double step);

/// Share of the joint pseudo-posterior mass (all K, beta in [0, beta_far])
/// lying above beta_hi. Measures how much the [0, beta_hi] window truncates.
double beta_tail_mass(const LabeledDataset &training, double beta_hi,
                      double beta_far, double step);

double total_variation(std::span<const double> p, std::span<const double> q);

/// Empirical distribution of K on {1, ..., k_max} from a list of K values.
std::vector<double> k_histogram(std::span<const int> ks, int k_max);

} // namespace bknn::oracle

#endif
