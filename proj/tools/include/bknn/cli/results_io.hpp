#ifndef BKNN_CLI_RESULTS_IO_HPP
#define BKNN_CLI_RESULTS_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "bknn/experiment.hpp"
#include "bknn/sim_model.hpp"

namespace bknn::cli {

// All numeric fields use 17 significant digits, so reading a file back
// recovers every double exactly.

/// point_id,x1,x2,theta_true
void write_grid_csv(std::ostream &out, const TestGrid &grid);
TestGrid read_grid_csv(std::istream &in);

/// replicate_id,point_id,theta_hat_bknn,bknn_lo,bknn_hi,theta_hat_knn,knn_lo,knn_hi
void write_replicates_csv(std::ostream &out,
                          const std::vector<ReplicateResult> &results);
/// Rows are grouped by replicate_id; diagnostics fields are left at zero.
std::vector<ReplicateResult> read_replicates_csv(std::istream &in);

/// replicate_id,k_acceptance,beta_acceptance,knn_k,knn_beta
void write_diagnostics_csv(std::ostream &out,
                           const std::vector<ReplicateResult> &results);

/// point_id,theta_true,coverage_bknn,coverage_knn,mean_len_bknn,mean_len_knn,
/// std_bknn,std_knn,mean_theta_bknn,mean_theta_knn
void write_summary_csv(std::ostream &out, const CoverageSummary &summary);
/// n_replicates is not stored and reads back as 0.
CoverageSummary read_summary_csv(std::istream &in);

/// One row per point, then a "# slopes" marker and a method,slope,points_used
/// table with rows "bknn" and "knn". Excluded ratios are written as nan.
void write_gold_standard_csv(std::ostream &out,
                             const GoldStandardReport &report);
GoldStandardReport read_gold_standard_csv(std::istream &in);

/// Opens, writes with `fn`, and checks the stream; throws on I/O failure.
template <class Fn>
void write_file(const std::filesystem::path &path, Fn &&fn);

void check_written(std::ostream &out, const std::filesystem::path &path);
std::ofstream open_output(const std::filesystem::path &path);
std::ifstream open_input(const std::filesystem::path &path);

} // namespace bknn::cli

#include <fstream>

template <class Fn>
void bknn::cli::write_file(const std::filesystem::path &path, Fn &&fn) {
  auto out = open_output(path);
  fn(out);
  out.flush();
  check_written(out, path);
}

#endif
