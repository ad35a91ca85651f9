#ifndef BKNN_EXPERIMENT_HPP
#define BKNN_EXPERIMENT_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bknn/bknn.hpp"
#include "bknn/bootstrap.hpp"
#include "bknn/sim_model.hpp"

namespace bknn {

/// Invalid configuration value; key() names the offending field.
class ConfigError : public ParameterError {
public:
  ConfigError(std::string key, const std::string &what)
      : ParameterError("config key '" + key + "': " + what),
        key_(std::move(key)) {}
  const std::string &key() const { return key_; }

private:
  std::string key_;
};

struct ExperimentConfig {
  std::size_t n_train = 250;
  int n_replicates = 100;
  BootstrapSettings bootstrap{};
  McmcSettings mcmc{};
  std::uint64_t seed = 20090717;
  std::string output_dir = "bknn_out";
  /// Worker threads for replicates; 0 picks the hardware concurrency.
  /// Results do not depend on this value.
  int threads = 0;

  /// Throws ConfigError naming the offending field.
  void validate() const;

  /// Full study scale: n = 250, R = 100, B = 500, M = 5000.
  static ExperimentConfig study();
  /// R = 30, B = 100, M = 2000.
  static ExperimentConfig reduced();

  friend bool operator==(const ExperimentConfig &,
                         const ExperimentConfig &) = default;
};

struct PointResult {
  double theta_hat_bknn = 0.0;
  Interval interval_bknn;
  double theta_hat_knn = 0.0;
  Interval interval_knn;

  friend bool operator==(const PointResult &, const PointResult &) = default;
};

struct ReplicateResult {
  int replicate_id = 0;
  std::vector<PointResult> points;
  // Diagnostics.
  double k_acceptance = 0.0;
  double beta_acceptance = 0.0;
  int knn_k = 0;
  double knn_beta = 0.0;

  friend bool operator==(const ReplicateResult &,
                         const ReplicateResult &) = default;
};

/// Streams of one replicate are keyed by (seed, replicate, consumer).
Rng replicate_stream(std::uint64_t seed, int replicate_id, StreamTag tag);

/// Draws a training set, fits BKNN and calibrated KNN, and evaluates both at
/// every grid point.
ReplicateResult run_replicate(const ExperimentConfig &config,
                              const TestGrid &grid, int replicate_id,
                              const MixtureClassModel &model = {});

using ProgressCallback = std::function<void(int done, int total)>;

/// All replicates, ordered by replicate id.
std::vector<ReplicateResult>
run_experiment(const ExperimentConfig &config, const TestGrid &grid,
               const ProgressCallback &progress = {},
               const MixtureClassModel &model = {});

struct PointSummary {
  double theta_true = 0.0;
  double coverage_bknn = 0.0;
  double coverage_knn = 0.0;
  double mean_length_bknn = 0.0;
  double mean_length_knn = 0.0;
  double std_theta_bknn = 0.0;
  double std_theta_knn = 0.0;
  double mean_theta_bknn = 0.0;
  double mean_theta_knn = 0.0;

  friend bool operator==(const PointSummary &, const PointSummary &) = default;
};

struct CoverageSummary {
  int n_replicates = 0;
  std::vector<PointSummary> points;

  friend bool operator==(const CoverageSummary &,
                         const CoverageSummary &) = default;
};

/// Per-point coverage (closed intervals), mean length, and mean and sample
/// standard deviation (R - 1 denominator) of the point estimates. The result
/// does not depend on the order of `results`.
CoverageSummary summarize(const std::vector<ReplicateResult> &results,
                          const TestGrid &grid);

inline constexpr double kDegenerateStd = 1e-10;

struct GoldStandardRow {
  double mean_length_bknn = 0.0;
  double four_std_bknn = 0.0;
  double ratio_bknn = 0.0;      ///< NaN when excluded
  double half_ratio_bknn = 0.0; ///< mean_length / (2 std); NaN when excluded
  double mean_length_knn = 0.0;
  double four_std_knn = 0.0;
  double ratio_knn = 0.0;
  bool excluded_bknn = false;
  bool excluded_knn = false;
};

struct OriginSlope {
  double slope = 0.0;
  int points_used = 0;
};

/// Interval length measured against 4 x the replicate-to-replicate standard
/// deviation of the point estimate.
struct GoldStandardReport {
  std::vector<GoldStandardRow> rows;
  OriginSlope bknn;
  OriginSlope knn;
};

/// Least-squares slope of a line through the origin: sum(x y) / sum(x^2).
OriginSlope origin_slope(std::span<const double> x, std::span<const double> y);

GoldStandardReport gold_standard_report(const CoverageSummary &summary);

} // namespace bknn

#endif
