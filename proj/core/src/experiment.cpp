#include "bknn/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

namespace bknn {

namespace {

[[noreturn]] void config_error(const std::string &field,
                               const std::string &what) {
  throw ConfigError(field, what);
}

double sample_std(std::span<const double> v, double mean) {
  if (v.size() < 2)
    return 0.0;
  double ss = 0.0;
  for (double x : v)
    ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v)
    s += x;
  return s / static_cast<double>(v.size());
}

} // namespace

void ExperimentConfig::validate() const {
  if (n_train < 2)
    config_error("n_train", "must be >= 2");
  if (n_replicates < 1)
    config_error("n_replicates", "must be >= 1");
  if (bootstrap.n_resamples < 2)
    config_error("n_bootstrap", "must be >= 2");
  if (threads < 0)
    config_error("threads", "must be >= 0");
  if (bootstrap.k_grid.empty())
    config_error("k_grid", "must be nonempty");
  if (*std::min_element(bootstrap.k_grid.begin(), bootstrap.k_grid.end()) < 1)
    config_error("k_grid.min", "must be >= 1");
  if (bootstrap.max_redraws < 1)
    config_error("bootstrap.max_redraws", "must be >= 1");
  if (!(bootstrap.beta_cap > 0.0) || !std::isfinite(bootstrap.beta_cap))
    config_error("beta_cap", "must be positive and finite");
  try {
    bootstrap.validate();
  } catch (const ParameterError &e) {
    config_error("k_grid", e.what());
  }
  const int k_hi = *std::max_element(bootstrap.k_grid.begin(),
                                     bootstrap.k_grid.end());
  if (static_cast<std::size_t>(k_hi) + 1 > n_train)
    config_error("k_grid.max", "must be <= n_train - 1");
  if (mcmc.burn_in < 0)
    config_error("mcmc.burn_in", "must be >= 0");
  if (mcmc.n_retained < 1)
    config_error("mcmc.m", "must be >= 1");
  if (mcmc.thin < 1)
    config_error("mcmc.thin", "must be >= 1");
  if (mcmc.k_step < 1)
    config_error("mcmc.k_step", "must be >= 1");
  if (!(mcmc.beta_step_sd > 0.0) || !std::isfinite(mcmc.beta_step_sd))
    config_error("mcmc.beta_step_sd", "must be > 0");
  if (mcmc.k_max < 0 || static_cast<std::size_t>(mcmc.k_max) > n_train)
    config_error("mcmc.k_max", "must be in [0, n_train]");
  if (mcmc.initial.k < 1 || mcmc.initial.k > mcmc.effective_k_max(n_train))
    config_error("mcmc.initial_k", "outside the K support [1, " +
                                       std::to_string(mcmc.effective_k_max(
                                           n_train)) +
                                       "]");
  if (!(mcmc.initial.beta > 0.0) || !std::isfinite(mcmc.initial.beta))
    config_error("mcmc.initial_beta", "must be positive and finite");
  try {
    mcmc.validate(n_train);
  } catch (const ParameterError &e) {
    config_error("mcmc", e.what());
  }
}

ExperimentConfig ExperimentConfig::study() { return ExperimentConfig{}; }

ExperimentConfig ExperimentConfig::reduced() {
  ExperimentConfig c;
  c.n_replicates = 30;
  c.bootstrap.n_resamples = 100;
  c.mcmc.n_retained = 2000;
  return c;
}

Rng replicate_stream(std::uint64_t seed, int replicate_id, StreamTag tag) {
  return Rng::keyed(seed, {static_cast<std::uint64_t>(replicate_id),
                           static_cast<std::uint64_t>(tag)});
}

ReplicateResult run_replicate(const ExperimentConfig &config,
                              const TestGrid &grid, int replicate_id,
                              const MixtureClassModel &model) {
  config.validate();
  Rng data_rng = replicate_stream(config.seed, replicate_id, StreamTag::Training);
  Rng mcmc_rng = replicate_stream(config.seed, replicate_id, StreamTag::Mcmc);
  const Rng boot_rng =
      replicate_stream(config.seed, replicate_id, StreamTag::Bootstrap);

  const auto training = sample_training(model, config.n_train, data_rng);
  const auto locations = grid.locations();

  ReplicateResult result;
  result.replicate_id = replicate_id;
  result.points.resize(locations.size());

  const auto chain = mh_run(training, config.mcmc, mcmc_rng);
  result.k_acceptance = chain.k_acceptance;
  result.beta_acceptance = chain.beta_acceptance;
  const auto predictive = bknn_predictive(training, chain, locations);
  for (std::size_t p = 0; p < locations.size(); ++p) {
    result.points[p].theta_hat_bknn = predictive[p].point;
    result.points[p].interval_bknn =
        percentile_interval_95(predictive[p].per_draw);
  }

  const auto knn = fit_calibrated_knn(training, config.bootstrap.k_grid,
                                      config.bootstrap.beta_cap);
  result.knn_k = knn.k;
  result.knn_beta = knn.beta_hat;
  const auto estimates = knn_point_estimates(knn, locations);
  const auto boot =
      bootstrap_intervals(training, locations, config.bootstrap, boot_rng);
  for (std::size_t p = 0; p < locations.size(); ++p) {
    result.points[p].theta_hat_knn = estimates[p];
    result.points[p].interval_knn = boot.intervals[p];
  }
  return result;
}

std::vector<ReplicateResult> run_experiment(const ExperimentConfig &config,
                                            const TestGrid &grid,
                                            const ProgressCallback &progress,
                                            const MixtureClassModel &model) {
  config.validate();
  const int total = config.n_replicates;
  std::vector<ReplicateResult> results(static_cast<std::size_t>(total));
  int workers = config.threads > 0
                    ? config.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, total);

  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::mutex mutex;
  int done = 0;
  std::exception_ptr error;

  auto work = [&] {
    while (!failed.load()) {
      const int id = next.fetch_add(1);
      if (id >= total)
        return;
      try {
        auto r = run_replicate(config, grid, id, model);
        std::lock_guard lock(mutex);
        results[static_cast<std::size_t>(id)] = std::move(r);
        ++done;
        if (progress)
          progress(done, total);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!error)
          error = std::current_exception();
        failed = true;
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
      pool.emplace_back(work);
  }
  if (error)
    std::rethrow_exception(error);
  return results;
}

CoverageSummary summarize(const std::vector<ReplicateResult> &results,
                          const TestGrid &grid) {
  if (results.size() < 2)
    throw ParameterError("summarize: need at least two replicates");
  std::vector<const ReplicateResult *> ordered;
  ordered.reserve(results.size());
  for (const auto &r : results) {
    if (r.points.size() != grid.size())
      throw ParameterError("summarize: replicate " +
                           std::to_string(r.replicate_id) +
                           " does not match the grid size");
    ordered.push_back(&r);
  }
  std::sort(ordered.begin(), ordered.end(),
            [](const auto *a, const auto *b) {
              return a->replicate_id < b->replicate_id;
            });
  for (std::size_t i = 1; i < ordered.size(); ++i)
    if (ordered[i]->replicate_id == ordered[i - 1]->replicate_id)
      throw ParameterError("summarize: duplicate replicate id");

  const auto reps = ordered.size();
  const double r_count = static_cast<double>(reps);
  CoverageSummary summary;
  summary.n_replicates = static_cast<int>(reps);
  summary.points.resize(grid.size());
  std::vector<double> theta_b(reps), theta_k(reps), len_b(reps), len_k(reps);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const double truth = grid.points[p].theta_true;
    std::size_t cover_b = 0, cover_k = 0;
    for (std::size_t r = 0; r < reps; ++r) {
      const auto &pr = ordered[r]->points[p];
      theta_b[r] = pr.theta_hat_bknn;
      theta_k[r] = pr.theta_hat_knn;
      len_b[r] = std::abs(pr.interval_bknn.hi - pr.interval_bknn.lo);
      len_k[r] = std::abs(pr.interval_knn.hi - pr.interval_knn.lo);
      cover_b += pr.interval_bknn.contains(truth) ? 1 : 0;
      cover_k += pr.interval_knn.contains(truth) ? 1 : 0;
    }
    auto &s = summary.points[p];
    s.theta_true = truth;
    s.coverage_bknn = static_cast<double>(cover_b) / r_count;
    s.coverage_knn = static_cast<double>(cover_k) / r_count;
    s.mean_length_bknn = mean_of(len_b);
    s.mean_length_knn = mean_of(len_k);
    s.mean_theta_bknn = mean_of(theta_b);
    s.mean_theta_knn = mean_of(theta_k);
    s.std_theta_bknn = sample_std(theta_b, s.mean_theta_bknn);
    s.std_theta_knn = sample_std(theta_k, s.mean_theta_knn);
  }
  return summary;
}

OriginSlope origin_slope(std::span<const double> x,
                         std::span<const double> y) {
  if (x.size() != y.size())
    throw ParameterError("origin_slope: length mismatch");
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += x[i] * y[i];
    sxx += x[i] * x[i];
  }
  OriginSlope s;
  s.points_used = static_cast<int>(x.size());
  s.slope = sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
  return s;
}

GoldStandardReport gold_standard_report(const CoverageSummary &summary) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  GoldStandardReport report;
  report.rows.reserve(summary.points.size());
  std::vector<double> xb, yb, xk, yk;
  for (const auto &s : summary.points) {
    GoldStandardRow row;
    row.mean_length_bknn = s.mean_length_bknn;
    row.four_std_bknn = 4.0 * s.std_theta_bknn;
    row.mean_length_knn = s.mean_length_knn;
    row.four_std_knn = 4.0 * s.std_theta_knn;
    row.excluded_bknn = s.std_theta_bknn < kDegenerateStd;
    row.excluded_knn = s.std_theta_knn < kDegenerateStd;
    if (row.excluded_bknn) {
      row.ratio_bknn = row.half_ratio_bknn = nan;
    } else {
      row.ratio_bknn = row.mean_length_bknn / row.four_std_bknn;
      row.half_ratio_bknn = row.mean_length_bknn / (2.0 * s.std_theta_bknn);
      xb.push_back(row.four_std_bknn);
      yb.push_back(row.mean_length_bknn);
    }
    if (row.excluded_knn) {
      row.ratio_knn = nan;
    } else {
      row.ratio_knn = row.mean_length_knn / row.four_std_knn;
      xk.push_back(row.four_std_knn);
      yk.push_back(row.mean_length_knn);
    }
    report.rows.push_back(row);
  }
  report.bknn = origin_slope(xb, yb);
  report.knn = origin_slope(xk, yk);
  return report;
}

} // namespace bknn
