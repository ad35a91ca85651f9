#include "bknn/validation/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

namespace bknn::oracle {

namespace {

double bvn_density(const Point2 &x, const Point2 &mu, double var) {
  const double d1 = x.x1 - mu.x1;
  const double d2 = x.x2 - mu.x2;
  return std::exp(-(d1 * d1 + d2 * d2) / (2.0 * var)) /
         (2.0 * std::numbers::pi * var);
}

} // namespace

double direct_posterior(const MixtureClassModel &m, const Point2 &x) {
  const double w = m.component_weight;
  const double f1 = w * bvn_density(x, m.class1_means[0], m.shared_variance) +
                    (1.0 - w) *
                        bvn_density(x, m.class1_means[1], m.shared_variance);
  const double f0 = w * bvn_density(x, m.class0_means[0], m.shared_variance) +
                    (1.0 - w) *
                        bvn_density(x, m.class0_means[1], m.shared_variance);
  const double p = m.class_prior;
  return p * f1 / (p * f1 + (1.0 - p) * f0);
}

std::vector<std::size_t> sorted_neighbors(const LabeledDataset &training,
                                          const Point2 &x, std::size_t k,
                                          std::optional<std::size_t> exclude) {
  std::vector<std::pair<double, std::size_t>> all;
  for (std::size_t j = 0; j < training.size(); ++j) {
    if (exclude && *exclude == j)
      continue;
    const double d = std::hypot(x.x1 - training.point(j).x1,
                                x.x2 - training.point(j).x2);
    all.emplace_back(d, j);
  }
  std::sort(all.begin(), all.end());
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < k && r < all.size(); ++r)
    out.push_back(all[r].second);
  return out;
}

std::size_t count_label(const LabeledDataset &training,
                        std::span<const std::size_t> neighbors, int q) {
  std::size_t c = 0;
  for (std::size_t j : neighbors)
    if (training.label(j) == q)
      ++c;
  return c;
}

double product_form_log_pl(const LabeledDataset &training, std::size_t k,
                           double beta) {
  double log_product = 0.0;
  const double kd = static_cast<double>(k);
  for (std::size_t i = 0; i < training.size(); ++i) {
    const auto nb = sorted_neighbors(training, training.point(i), k, i);
    const double own =
        std::exp(beta / kd *
                 static_cast<double>(count_label(training, nb, training.label(i))));
    double denom = 0.0;
    for (int q = 0; q < training.num_classes(); ++q)
      denom += std::exp(beta / kd *
                        static_cast<double>(count_label(training, nb, q)));
    log_product += std::log(own / denom);
  }
  return log_product;
}

double logistic_form_log_pl(const LabeledDataset &training, std::size_t k,
                            double beta) {
  double total = 0.0;
  for (std::size_t i = 0; i < training.size(); ++i) {
    const auto nb = sorted_neighbors(training, training.point(i), k, i);
    const double g =
        static_cast<double>(count_label(training, nb, training.label(i))) /
        static_cast<double>(k);
    const double t = beta * (2.0 * g - 1.0);
    total += t - std::log(1.0 + std::exp(t));
  }
  return total;
}

std::size_t loo_error_count(const LabeledDataset &training, std::size_t k) {
  std::size_t errors = 0;
  for (std::size_t i = 0; i < training.size(); ++i) {
    const auto nb = sorted_neighbors(training, training.point(i), k, i);
    int vote = 0;
    std::size_t best = 0;
    for (int q = 0; q < training.num_classes(); ++q) {
      const auto c = count_label(training, nb, q);
      if (c > best) {
        best = c;
        vote = q;
      }
    }
    if (vote != training.label(i))
      ++errors;
  }
  return errors;
}

double grid_search_slope(std::span<const double> z, double cap, double step) {
  double best_beta = 0.0;
  double best = -INFINITY;
  const auto steps = static_cast<long>(std::floor(cap / step + 1e-9));
  for (long s = 0; s <= steps; ++s) {
    const double b = static_cast<double>(s) * step;
    double ll = 0.0;
    for (double v : z)
      ll += -std::log1p(std::exp(-b * v));
    if (ll > best) {
      best = ll;
      best_beta = b;
    }
  }
  return best_beta;
}

namespace {

// Trapezoid integrals over beta in [0, beta_hi] for each K, scaled by a
// common factor exp(-peak) where peak is the lattice maximum.
std::vector<double> k_integrals(const LabeledDataset &training, double beta_hi,
                                double step, double &peak) {
  const std::size_t k_max = training.size() - 1;
  const auto nodes = static_cast<std::size_t>(std::llround(beta_hi / step)) + 1;
  // log pseudo-likelihood on the (K, beta) lattice.
  std::vector<std::vector<double>> ll(k_max, std::vector<double>(nodes));
  peak = -INFINITY;
  for (std::size_t k = 1; k <= k_max; ++k) {
    // Per-point agreement fractions do not depend on beta.
    std::vector<double> g(training.size());
    for (std::size_t i = 0; i < training.size(); ++i) {
      const auto nb = sorted_neighbors(training, training.point(i), k, i);
      g[i] = static_cast<double>(count_label(training, nb, training.label(i))) /
             static_cast<double>(k);
    }
    for (std::size_t b = 0; b < nodes; ++b) {
      const double beta = static_cast<double>(b) * step;
      double total = 0.0;
      for (double gi : g) {
        const double t = beta * (2.0 * gi - 1.0);
        total += t - std::log(1.0 + std::exp(t));
      }
      ll[k - 1][b] = total;
      peak = std::max(peak, total);
    }
  }
  std::vector<double> mass(k_max);
  for (std::size_t k = 0; k < k_max; ++k) {
    double integral = 0.0;
    for (std::size_t b = 0; b + 1 < nodes; ++b)
      integral += 0.5 * step *
                  (std::exp(ll[k][b] - peak) + std::exp(ll[k][b + 1] - peak));
    mass[k] = integral;
  }
  return mass;
}

} // namespace

std::vector<double> k_posterior_by_quadrature(const LabeledDataset &training,
                                              double beta_hi, double step) {
  double peak = 0.0;
  auto mass = k_integrals(training, beta_hi, step, peak);
  double norm = 0.0;
  for (double m : mass)
    norm += m;
  for (double &m : mass)
    m /= norm;
  return mass;
}

double beta_tail_mass(const LabeledDataset &training, double beta_hi,
                      double beta_far, double step) {
  double peak_near = 0.0, peak_far = 0.0;
  const auto near = k_integrals(training, beta_hi, step, peak_near);
  const auto far = k_integrals(training, beta_far, step, peak_far);
  double m_near = 0.0, m_far = 0.0;
  for (double m : near)
    m_near += m;
  for (double m : far)
    m_far += m;
  // Bring both to the same scale.
  m_near *= std::exp(peak_near - peak_far);
  return 1.0 - m_near / m_far;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  double d = 0.0;
  const std::size_t n = std::max(p.size(), q.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double a = i < p.size() ? p[i] : 0.0;
    const double b = i < q.size() ? q[i] : 0.0;
    d += std::abs(a - b);
  }
  return 0.5 * d;
}

std::vector<double> k_histogram(std::span<const int> ks, int k_max) {
  std::vector<double> h(static_cast<std::size_t>(k_max), 0.0);
  for (int k : ks)
    if (k >= 1 && k <= k_max)
      h[static_cast<std::size_t>(k - 1)] += 1.0;
  for (double &v : h)
    v /= static_cast<double>(ks.size());
  return h;
}

} // namespace bknn::oracle
