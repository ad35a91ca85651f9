#ifndef BKNN_VALIDATION_CRITERIA_HPP
#define BKNN_VALIDATION_CRITERIA_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bknn/experiment.hpp"

namespace bknn::validation {

struct CriterionResult {
  std::string id;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// "[PASS] A1 title (detail) 0.12s"
void print_result(std::ostream &out, const CriterionResult &r);

// Exact checks against independent oracles.
CriterionResult check_zero_beta_identity(std::uint64_t seed);      // A1
CriterionResult check_logistic_equivalence(std::uint64_t seed);    // A2
CriterionResult check_sampler_vs_enumeration(std::uint64_t seed,
                                             int retained = 200000); // A3
CriterionResult check_bayes_rule_oracle(std::uint64_t seed);       // A7

/// The oracle checks above, in order.
std::vector<CriterionResult> run_oracle_suite(std::uint64_t seed);

/// Statistics of a finished study used by the study-level criteria.
struct StudyStatistics {
  double corr_bknn = 0.0;
  double corr_knn = 0.0;
  double mean_abs_method_gap = 0.0;
  double median_coverage_bknn = 0.0;
  double median_coverage_knn = 0.0;
  double slope_bknn = 0.0;
  double slope_knn = 0.0;
};

StudyStatistics study_statistics(const CoverageSummary &summary,
                                 const GoldStandardReport &report);

double pearson(std::span<const double> x, std::span<const double> y);
double median(std::vector<double> v);

// Study-level criteria on one completed run.
CriterionResult check_point_calibration(const StudyStatistics &s);  // A4
CriterionResult check_coverage_direction(const StudyStatistics &s); // A5
CriterionResult check_length_ratio(const StudyStatistics &s);       // A6

// Pinned thresholds.
inline constexpr double kMinCorrelation = 0.95;
inline constexpr double kMaxMethodGap = 0.10;
inline constexpr double kMaxMedianCoverageBknn = 0.85;
inline constexpr double kMinCoverageGain = 0.05;
inline constexpr double kBknnSlopeLo = 0.35, kBknnSlopeHi = 0.70;
inline constexpr double kKnnSlopeLo = 0.75, kKnnSlopeHi = 1.30;
inline constexpr double kSamplerMaxTv = 0.05;

} // namespace bknn::validation

#endif
