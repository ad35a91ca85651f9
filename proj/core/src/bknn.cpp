#include "bknn/bknn.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "bknn/csv.hpp"
#include "bknn/numeric.hpp"

namespace bknn {

int McmcSettings::effective_k_max(std::size_t n) const {
  const int support = n > 1 ? static_cast<int>(n - 1) : 0;
  return k_max > 0 ? std::min(k_max, support) : support;
}

void McmcSettings::validate(std::size_t n) const {
  if (n < 2)
    throw ParameterError("McmcSettings: need at least two training points");
  if (burn_in < 0)
    throw ParameterError("McmcSettings: burn_in must be >= 0");
  if (n_retained < 1)
    throw ParameterError("McmcSettings: n_retained must be >= 1");
  if (thin < 1)
    throw ParameterError("McmcSettings: thin must be >= 1");
  if (k_step < 1)
    throw ParameterError("McmcSettings: k_step must be >= 1");
  if (!(beta_step_sd >= 0.0) || !std::isfinite(beta_step_sd))
    throw ParameterError("McmcSettings: beta_step_sd must be >= 0");
  if (k_max < 0 || static_cast<std::size_t>(k_max) > n)
    throw ParameterError("McmcSettings: k_max must be in [0, n]");
  const int kmax = effective_k_max(n);
  if (initial.k < 1 || initial.k > kmax)
    throw ParameterError("McmcSettings: initial K=" +
                         std::to_string(initial.k) + " outside [1, " +
                         std::to_string(kmax) + "]");
  if (!(initial.beta > 0.0) || !std::isfinite(initial.beta))
    throw ParameterError("McmcSettings: initial beta must be > 0");
}

long long PosteriorChain::iteration_of(std::size_t j) const {
  return static_cast<long long>(settings.burn_in) +
         static_cast<long long>(j + 1) * settings.thin;
}

PseudoLikelihood::PseudoLikelihood(const LabeledDataset &training,
                                   std::size_t depth)
    : training_(&training),
      table_(NeighborTable::for_training(training, depth)) {}

PseudoLikelihood::PseudoLikelihood(const LabeledDataset &training)
    : PseudoLikelihood(training, training.size() > 1 ? training.size() - 1
                                                     : 0) {}

double PseudoLikelihood::log_value(const HyperState &state) const {
  if (state.k < 1 || static_cast<std::size_t>(state.k) > table_.depth())
    throw ParameterError("log_pseudo_likelihood: K=" + std::to_string(state.k) +
                         " outside [1, " + std::to_string(table_.depth()) +
                         "]");
  const auto k = static_cast<std::size_t>(state.k);
  const double scale = state.beta / static_cast<double>(state.k);
  const int q_count = training_->num_classes();
  std::vector<double> a(static_cast<std::size_t>(q_count));
  double total = 0.0;
  for (std::size_t i = 0; i < training_->size(); ++i) {
    for (int q = 0; q < q_count; ++q)
      a[static_cast<std::size_t>(q)] = scale * table_.count(i, k, q);
    total += a[static_cast<std::size_t>(training_->label(i))] - log_sum_exp(a);
  }
  return total;
}

double log_pseudo_likelihood(const LabeledDataset &training,
                             const HyperState &state) {
  if (state.k < 1 || static_cast<std::size_t>(state.k) + 1 > training.size())
    throw ParameterError("log_pseudo_likelihood: K=" + std::to_string(state.k) +
                         " needs 1 <= K <= n-1");
  return PseudoLikelihood(training, static_cast<std::size_t>(state.k))
      .log_value(state);
}

PosteriorChain mh_run(const LabeledDataset &training,
                      const McmcSettings &settings, Rng &rng) {
  settings.validate(training.size());
  const PseudoLikelihood likelihood(
      training, static_cast<std::size_t>(settings.effective_k_max(training.size())));
  return mh_run(likelihood, settings, rng);
}

PosteriorChain mh_run(const PseudoLikelihood &likelihood,
                      const McmcSettings &settings, Rng &rng) {
  const std::size_t n = likelihood.training().size();
  settings.validate(n);
  const int kmax = settings.effective_k_max(n);
  if (static_cast<std::size_t>(kmax) > likelihood.depth())
    throw ParameterError("mh_run: likelihood depth below K support");

  PosteriorChain chain;
  chain.settings = settings;
  chain.draws.reserve(static_cast<std::size_t>(settings.n_retained));

  HyperState current = settings.initial;
  double current_ll = likelihood.log_value(current);
  long long k_accepted = 0, beta_accepted = 0, beta_proposed = 0;
  const long long sweeps = static_cast<long long>(settings.burn_in) +
                           static_cast<long long>(settings.n_retained) *
                               settings.thin;
  const auto two_steps = static_cast<std::uint64_t>(2 * settings.k_step);

  for (long long sweep = 1; sweep <= sweeps; ++sweep) {
    // K update: symmetric step, out-of-support proposals rejected.
    {
      const auto u = static_cast<int>(rng.below(two_steps));
      const int delta = u < settings.k_step ? -(u + 1) : u - settings.k_step + 1;
      const int proposal = current.k + delta;
      // The acceptance uniform is always drawn so that the stream position
      // does not depend on the support boundary.
      const double log_u = std::log(rng.uniform_pos());
      if (proposal >= 1 && proposal <= kmax) {
        const HyperState next{proposal, current.beta};
        const double ll = likelihood.log_value(next);
        if (log_u < ll - current_ll) {
          current = next;
          current_ll = ll;
          ++k_accepted;
        }
      }
    }
    // beta update: Gaussian step, non-positive proposals rejected.
    if (settings.beta_step_sd > 0.0) {
      ++beta_proposed;
      const double proposal = current.beta + settings.beta_step_sd * rng.normal();
      const double log_u = std::log(rng.uniform_pos());
      if (proposal > 0.0) {
        const HyperState next{current.k, proposal};
        const double ll = likelihood.log_value(next);
        if (log_u < ll - current_ll) {
          current = next;
          current_ll = ll;
          ++beta_accepted;
        }
      }
    }
    if (sweep > settings.burn_in && (sweep - settings.burn_in) % settings.thin == 0)
      chain.draws.push_back(current);
  }
  chain.k_acceptance =
      static_cast<double>(k_accepted) / static_cast<double>(sweeps);
  chain.beta_acceptance =
      beta_proposed > 0
          ? static_cast<double>(beta_accepted) / static_cast<double>(beta_proposed)
          : 0.0;
  return chain;
}

std::vector<Predictive> bknn_predictive(const LabeledDataset &training,
                                        const PosteriorChain &chain,
                                        std::span<const Point2> xs) {
  if (chain.draws.empty())
    throw ParameterError("bknn_predictive: empty chain");
  if (training.num_classes() != 2)
    throw ParameterError("bknn_predictive: binary labels required");
  int depth = 0;
  for (const auto &d : chain.draws)
    depth = std::max(depth, d.k);
  if (static_cast<std::size_t>(depth) > training.size())
    throw ParameterError("bknn_predictive: chain K exceeds training size");
  const auto table = NeighborTable::for_queries(
      training, xs, static_cast<std::size_t>(depth));

  std::vector<Predictive> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    auto &pred = out[i];
    pred.per_draw.reserve(chain.draws.size());
    double sum = 0.0;
    for (const auto &d : chain.draws) {
      const auto k = static_cast<std::size_t>(d.k);
      const double g = static_cast<double>(table.count(i, k, 1)) /
                       static_cast<double>(d.k);
      const double p = logistic(d.beta * (2.0 * g - 1.0));
      pred.per_draw.push_back(p);
      sum += p;
    }
    pred.point = sum / static_cast<double>(chain.draws.size());
  }
  return out;
}

Predictive bknn_predictive(const LabeledDataset &training,
                           const PosteriorChain &chain, const Point2 &x) {
  const Point2 one[1] = {x};
  return std::move(bknn_predictive(training, chain, one).front());
}

void write_chain_csv(std::ostream &out, const PosteriorChain &chain) {
  out << "iter,k,beta\n";
  for (std::size_t j = 0; j < chain.draws.size(); ++j)
    out << chain.iteration_of(j) << ',' << chain.draws[j].k << ','
        << format_double(chain.draws[j].beta) << '\n';
}

} // namespace bknn
