#ifndef BKNN_BKNN_HPP
#define BKNN_BKNN_HPP

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "bknn/interval.hpp"
#include "bknn/knn.hpp"
#include "bknn/rng.hpp"
#include "bknn/types.hpp"

namespace bknn {

/// One (K, beta) state of the sampler.
struct HyperState {
  int k = 10;
  double beta = 1.0;

  friend bool operator==(const HyperState &, const HyperState &) = default;
};

struct McmcSettings {
  int burn_in = 2000;
  int n_retained = 5000;
  int thin = 1;
  int k_step = 3;
  /// Standard deviation of the Gaussian beta proposal. Zero disables the
  /// beta update and holds beta at its initial value.
  double beta_step_sd = 0.5;
  /// Upper end of the K prior support; 0 means n - 1. The effective bound is
  /// always min(k_max, n - 1) because neighborhoods exclude the point itself.
  int k_max = 0;
  HyperState initial{};

  /// Throws ParameterError if the settings are invalid for n training points.
  void validate(std::size_t n) const;
  int effective_k_max(std::size_t n) const;

  friend bool operator==(const McmcSettings &, const McmcSettings &) = default;
};

struct PosteriorChain {
  std::vector<HyperState> draws;
  double k_acceptance = 0.0;
  double beta_acceptance = 0.0;
  McmcSettings settings;

  std::size_t size() const { return draws.size(); }
  /// Sweep number (1-based, counting burn-in) at which draw j was recorded.
  long long iteration_of(std::size_t j) const;
};

/// Pseudo-likelihood evaluator with cached self-excluded neighborhoods for
/// every K up to depth.
class PseudoLikelihood {
public:
  PseudoLikelihood(const LabeledDataset &training, std::size_t depth);
  explicit PseudoLikelihood(const LabeledDataset &training);

  /// sum_i [(beta/K) c_i(y_i) - log sum_q exp((beta/K) c_i(q))].
  double log_value(const HyperState &state) const;

  std::size_t depth() const { return table_.depth(); }
  const LabeledDataset &training() const { return *training_; }

private:
  const LabeledDataset *training_;
  NeighborTable table_;
};

/// Log pseudo-likelihood of the labels given (K, beta), general Q.
double log_pseudo_likelihood(const LabeledDataset &training,
                             const HyperState &state);

/// Random-walk Metropolis-Hastings over (K, beta) under flat priors
/// (uniform K on its support, improper flat beta on the positive reals).
PosteriorChain mh_run(const LabeledDataset &training,
                      const McmcSettings &settings, Rng &rng);
PosteriorChain mh_run(const PseudoLikelihood &likelihood,
                      const McmcSettings &settings, Rng &rng);

struct Predictive {
  double point = 0.5;
  std::vector<double> per_draw;
};

/// Per-draw Pr(y = 1 | x, K_j, beta_j) and their mean. Binary data only.
Predictive bknn_predictive(const LabeledDataset &training,
                           const PosteriorChain &chain, const Point2 &x);
std::vector<Predictive> bknn_predictive(const LabeledDataset &training,
                                        const PosteriorChain &chain,
                                        std::span<const Point2> xs);

/// Writes `iter,k,beta` rows.
void write_chain_csv(std::ostream &out, const PosteriorChain &chain);

} // namespace bknn

#endif
