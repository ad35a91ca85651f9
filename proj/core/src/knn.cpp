#include "bknn/knn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "bknn/diagnostics.hpp"
#include "bknn/numeric.hpp"

namespace bknn {

namespace {

using Key = std::pair<double, std::uint32_t>;

// Keys of all candidate neighbors of x, with the first `depth` of them being
// the nearest in (distance, index) order. Only the prefix is sorted if
// sort_prefix is set.
std::vector<Key> nearest_keys(const LabeledDataset &training, const Point2 &x,
                              std::optional<std::size_t> exclude,
                              std::size_t depth, bool sort_prefix) {
  std::vector<Key> keys;
  keys.reserve(training.size());
  const auto &pts = training.points();
  for (std::size_t j = 0; j < pts.size(); ++j) {
    if (exclude && *exclude == j)
      continue;
    keys.emplace_back(squared_distance(x, pts[j]),
                      static_cast<std::uint32_t>(j));
  }
  if (depth < keys.size()) {
    auto mid = keys.begin() + static_cast<std::ptrdiff_t>(depth);
    if (sort_prefix)
      std::partial_sort(keys.begin(), mid, keys.end());
    else
      std::nth_element(keys.begin(), mid, keys.end());
  } else if (sort_prefix) {
    std::sort(keys.begin(), keys.end());
  }
  return keys;
}

void check_k(const LabeledDataset &training, std::size_t k, bool excluding,
             const char *who) {
  const std::size_t n = training.size();
  const std::size_t available = excluding ? (n > 0 ? n - 1 : 0) : n;
  if (k < 1 || k > available)
    throw ParameterError(std::string(who) + ": k=" + std::to_string(k) +
                         " outside [1, " + std::to_string(available) + "]");
}

void check_k_grid(const LabeledDataset &training, std::span<const int> k_grid,
                  const char *who) {
  if (k_grid.empty())
    throw ParameterError(std::string(who) + ": empty k grid");
  for (int k : k_grid)
    if (k < 1 || static_cast<std::size_t>(k) + 1 > training.size())
      throw ParameterError(std::string(who) + ": k=" + std::to_string(k) +
                           " needs k <= n-1 (n=" +
                           std::to_string(training.size()) + ")");
}

int max_of(std::span<const int> k_grid) {
  return *std::max_element(k_grid.begin(), k_grid.end());
}

} // namespace

std::vector<int> make_k_grid(int min_k, int max_k) {
  if (min_k < 1 || max_k < min_k)
    throw ParameterError("make_k_grid: need 1 <= min_k <= max_k");
  std::vector<int> grid;
  for (int k = min_k; k <= max_k; ++k)
    grid.push_back(k);
  return grid;
}

NeighborSet find_neighbors(const LabeledDataset &training, const Point2 &x,
                           std::size_t k,
                           std::optional<std::size_t> exclude_index) {
  if (exclude_index && *exclude_index >= training.size())
    throw ParameterError("find_neighbors: exclude_index out of range");
  check_k(training, k, exclude_index.has_value(), "find_neighbors");
  const auto keys = nearest_keys(training, x, exclude_index, k, true);
  NeighborSet out;
  out.indices.reserve(k);
  for (std::size_t i = 0; i < k; ++i)
    out.indices.push_back(keys[i].second);
  return out;
}

double knn_score(const LabeledDataset &training, const Point2 &x,
                 std::size_t k, int q,
                 std::optional<std::size_t> exclude_index) {
  if (q < 0 || q >= training.num_classes())
    throw ParameterError("knn_score: class index out of range");
  const auto nb = find_neighbors(training, x, k, exclude_index);
  std::size_t hits = 0;
  for (std::size_t j : nb.indices)
    hits += training.label(j) == q ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(k);
}

NeighborTable NeighborTable::for_training(const LabeledDataset &training,
                                          std::size_t depth) {
  if (training.size() < 2 || depth < 1 || depth + 1 > training.size())
    throw ParameterError("NeighborTable: training depth must be in [1, n-1]");
  NeighborTable t;
  t.build(training, training.points(), true, depth);
  return t;
}

NeighborTable NeighborTable::for_queries(const LabeledDataset &training,
                                         std::span<const Point2> queries,
                                         std::size_t depth) {
  if (depth < 1 || depth > training.size())
    throw ParameterError("NeighborTable: query depth must be in [1, n]");
  NeighborTable t;
  t.build(training, queries, false, depth);
  return t;
}

void NeighborTable::build(const LabeledDataset &training,
                          std::span<const Point2> queries, bool exclude_self,
                          std::size_t depth) {
  num_queries_ = queries.size();
  depth_ = depth;
  num_classes_ = static_cast<std::size_t>(training.num_classes());
  order_.resize(num_queries_ * depth_);
  cumulative_.assign(num_queries_ * (depth_ + 1) * num_classes_, 0);
  for (std::size_t i = 0; i < num_queries_; ++i) {
    const auto keys = nearest_keys(
        training, queries[i],
        exclude_self ? std::optional<std::size_t>(i) : std::nullopt, depth_,
        true);
    std::int32_t *cum = cumulative_.data() + i * (depth_ + 1) * num_classes_;
    for (std::size_t r = 0; r < depth_; ++r) {
      const std::uint32_t j = keys[r].second;
      order_[i * depth_ + r] = j;
      std::int32_t *next = cum + (r + 1) * num_classes_;
      std::copy(cum + r * num_classes_, cum + (r + 1) * num_classes_, next);
      ++next[training.label(j)];
    }
  }
}

std::vector<std::size_t> loo_errors(const NeighborTable &table,
                                    const LabeledDataset &training,
                                    std::span<const int> k_grid) {
  check_k_grid(training, k_grid, "loo_errors");
  if (static_cast<std::size_t>(max_of(k_grid)) > table.depth() ||
      table.num_queries() != training.size())
    throw ParameterError("loo_errors: neighbor table does not cover k grid");
  const int q_count = training.num_classes();
  std::vector<std::size_t> errors;
  errors.reserve(k_grid.size());
  for (int k : k_grid) {
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < training.size(); ++i) {
      int best_q = 0;
      int best = table.count(i, static_cast<std::size_t>(k), 0);
      for (int q = 1; q < q_count; ++q) {
        const int c = table.count(i, static_cast<std::size_t>(k), q);
        if (c > best) {
          best = c;
          best_q = q;
        }
      }
      wrong += best_q != training.label(i) ? 1 : 0;
    }
    errors.push_back(wrong);
  }
  return errors;
}

std::vector<std::size_t> loo_errors(const LabeledDataset &training,
                                    std::span<const int> k_grid) {
  check_k_grid(training, k_grid, "loo_errors");
  const auto table = NeighborTable::for_training(
      training, static_cast<std::size_t>(max_of(k_grid)));
  return loo_errors(table, training, k_grid);
}

int cv_choose_k(const NeighborTable &table, const LabeledDataset &training,
                std::span<const int> k_grid) {
  if (training.classes_present() < 2)
    throw DegenerateDataError("cv_choose_k: training data has one class");
  const auto errors = loo_errors(table, training, k_grid);
  std::size_t best = 0;
  for (std::size_t g = 1; g < errors.size(); ++g) {
    if (errors[g] < errors[best] ||
        (errors[g] == errors[best] && k_grid[g] < k_grid[best]))
      best = g;
  }
  return k_grid[best];
}

int cv_choose_k(const LabeledDataset &training, std::span<const int> k_grid) {
  if (training.classes_present() < 2)
    throw DegenerateDataError("cv_choose_k: training data has one class");
  check_k_grid(training, k_grid, "cv_choose_k");
  const auto table = NeighborTable::for_training(
      training, static_cast<std::size_t>(max_of(k_grid)));
  return cv_choose_k(table, training, k_grid);
}

LogisticSlopeFit fit_logistic_slope(std::span<const double> z, double cap) {
  if (!(cap > 0.0) || !std::isfinite(cap))
    throw ParameterError("fit_logistic_slope: cap must be positive");
  LogisticSlopeFit fit;
  double scale = 0.0;
  for (double v : z)
    scale += std::abs(v);
  if (scale == 0.0) {
    fit.flat = true;
    return fit;
  }
  auto score = [&](double b) {
    double s = 0.0;
    for (double v : z)
      s += v * logistic(-b * v);
    return s;
  };
  auto curvature = [&](double b) {
    double h = 0.0;
    for (double v : z) {
      const double p = logistic(b * v);
      h -= v * v * p * (1.0 - p);
    }
    return h;
  };
  // The objective is concave, so the score sign at the ends decides
  // boundary solutions.
  if (score(0.0) <= 0.0)
    return fit;
  if (score(cap) >= 0.0) {
    fit.beta = cap;
    fit.capped = true;
    return fit;
  }
  double lo = 0.0, hi = cap;
  double b = std::min(1.0, 0.5 * cap);
  const double tol = 1e-14 * scale;
  for (fit.iterations = 1; fit.iterations <= 200; ++fit.iterations) {
    const double s = score(b);
    if (std::abs(s) <= tol)
      break;
    (s > 0.0 ? lo : hi) = b;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi)
      break;
    const double h = curvature(b);
    double next = h < 0.0 ? b - s / h : lo - 1.0;
    if (!(next > lo && next < hi))
      next = 0.5 * (lo + hi);
    b = next;
  }
  fit.beta = b;
  return fit;
}

std::vector<double> agreement_covariates(const NeighborTable &table,
                                         const LabeledDataset &training,
                                         std::size_t k) {
  if (training.num_classes() != 2)
    throw ParameterError("agreement_covariates: binary labels required");
  if (k < 1 || k > table.depth() || table.num_queries() != training.size())
    throw ParameterError("agreement_covariates: k exceeds neighbor table");
  std::vector<double> z(training.size());
  const double kd = static_cast<double>(k);
  for (std::size_t i = 0; i < training.size(); ++i) {
    const int agree = table.count(i, k, training.label(i));
    z[i] = 2.0 * static_cast<double>(agree) / kd - 1.0;
  }
  return z;
}

double fit_beta_logistic(const NeighborTable &table,
                         const LabeledDataset &training, std::size_t k,
                         double cap) {
  const auto z = agreement_covariates(table, training, k);
  const auto fit = fit_logistic_slope(z, cap);
  if (fit.flat)
    warn("fit_beta_logistic: all agreement covariates are zero at k=" +
         std::to_string(k) + "; beta_hat set to 0");
  return fit.beta;
}

double fit_beta_logistic(const LabeledDataset &training, std::size_t k,
                         double cap) {
  if (training.num_classes() != 2)
    throw ParameterError("fit_beta_logistic: binary labels required");
  check_k(training, k, true, "fit_beta_logistic");
  const auto table = NeighborTable::for_training(training, k);
  return fit_beta_logistic(table, training, k, cap);
}

CalibratedKnnModel fit_calibrated_knn(const LabeledDataset &training,
                                      std::span<const int> k_grid,
                                      double cap) {
  if (training.classes_present() < 2)
    throw DegenerateDataError("fit_calibrated_knn: training data has one class");
  check_k_grid(training, k_grid, "fit_calibrated_knn");
  const auto table = NeighborTable::for_training(
      training, static_cast<std::size_t>(max_of(k_grid)));
  CalibratedKnnModel model;
  model.k = cv_choose_k(table, training, k_grid);
  model.beta_hat = fit_beta_logistic(table, training,
                                     static_cast<std::size_t>(model.k), cap);
  model.training = &training;
  return model;
}

double knn_point_estimate(const CalibratedKnnModel &model, const Point2 &x) {
  const Point2 one[1] = {x};
  return knn_point_estimates(model, one).front();
}

std::vector<double> knn_point_estimates(const CalibratedKnnModel &model,
                                        std::span<const Point2> xs) {
  if (model.training == nullptr)
    throw ParameterError("knn_point_estimate: model has no training data");
  const auto &training = *model.training;
  const auto k = static_cast<std::size_t>(model.k);
  check_k(training, k, false, "knn_point_estimate");
  std::vector<double> out;
  out.reserve(xs.size());
  for (const auto &x : xs) {
    const auto keys = nearest_keys(training, x, std::nullopt, k, false);
    std::size_t ones = 0;
    for (std::size_t r = 0; r < k; ++r)
      ones += training.label(keys[r].second) == 1 ? 1 : 0;
    const double g = static_cast<double>(ones) / static_cast<double>(k);
    out.push_back(logistic(model.beta_hat * (2.0 * g - 1.0)));
  }
  return out;
}

} // namespace bknn
