#include "bknn/cli/results_io.hpp"

#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>

#include "bknn/csv.hpp"

namespace bknn::cli {

namespace {

std::string fd(double v) { return format_double(v); }

int as_int(const CsvTable &t, std::size_t row, std::string_view col) {
  const double v = t.number(row, col);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw std::runtime_error("csv: column '" + std::string(col) +
                             "' is not an integer");
  return i;
}

void expect_point_ids(const CsvTable &t) {
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    if (as_int(t, r, "point_id") != static_cast<int>(r))
      throw std::runtime_error("csv: point_id out of sequence at row " +
                               std::to_string(r + 1));
}

} // namespace

void write_grid_csv(std::ostream &out, const TestGrid &grid) {
  out << "point_id,x1,x2,theta_true\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto &p = grid.points[i];
    out << i << ',' << fd(p.x.x1) << ',' << fd(p.x.x2) << ','
        << fd(p.theta_true) << '\n';
  }
}

TestGrid read_grid_csv(std::istream &in) {
  const auto t = read_csv(in);
  expect_point_ids(t);
  TestGrid grid;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    GridPoint p;
    p.x = {t.number(r, "x1"), t.number(r, "x2")};
    p.theta_true = t.number(r, "theta_true");
    grid.points.push_back(p);
  }
  return grid;
}

void write_replicates_csv(std::ostream &out,
                          const std::vector<ReplicateResult> &results) {
  out << "replicate_id,point_id,theta_hat_bknn,bknn_lo,bknn_hi,"
         "theta_hat_knn,knn_lo,knn_hi\n";
  for (const auto &r : results)
    for (std::size_t i = 0; i < r.points.size(); ++i) {
      const auto &p = r.points[i];
      out << r.replicate_id << ',' << i << ',' << fd(p.theta_hat_bknn) << ','
          << fd(p.interval_bknn.lo) << ',' << fd(p.interval_bknn.hi) << ','
          << fd(p.theta_hat_knn) << ',' << fd(p.interval_knn.lo) << ','
          << fd(p.interval_knn.hi) << '\n';
    }
}

std::vector<ReplicateResult> read_replicates_csv(std::istream &in) {
  const auto t = read_csv(in);
  std::map<int, ReplicateResult> by_id;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const int id = as_int(t, r, "replicate_id");
    auto &rep = by_id[id];
    rep.replicate_id = id;
    if (as_int(t, r, "point_id") != static_cast<int>(rep.points.size()))
      throw std::runtime_error("replicates.csv: point_id out of sequence");
    PointResult p;
    p.theta_hat_bknn = t.number(r, "theta_hat_bknn");
    p.interval_bknn = {t.number(r, "bknn_lo"), t.number(r, "bknn_hi")};
    p.theta_hat_knn = t.number(r, "theta_hat_knn");
    p.interval_knn = {t.number(r, "knn_lo"), t.number(r, "knn_hi")};
    rep.points.push_back(p);
  }
  std::vector<ReplicateResult> out;
  for (auto &[id, rep] : by_id)
    out.push_back(std::move(rep));
  return out;
}

void write_diagnostics_csv(std::ostream &out,
                           const std::vector<ReplicateResult> &results) {
  out << "replicate_id,k_acceptance,beta_acceptance,knn_k,knn_beta\n";
  for (const auto &r : results)
    out << r.replicate_id << ',' << fd(r.k_acceptance) << ','
        << fd(r.beta_acceptance) << ',' << r.knn_k << ',' << fd(r.knn_beta)
        << '\n';
}

void write_summary_csv(std::ostream &out, const CoverageSummary &s) {
  out << "point_id,theta_true,coverage_bknn,coverage_knn,mean_len_bknn,"
         "mean_len_knn,std_bknn,std_knn,mean_theta_bknn,mean_theta_knn\n";
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    const auto &p = s.points[i];
    out << i << ',' << fd(p.theta_true) << ',' << fd(p.coverage_bknn) << ','
        << fd(p.coverage_knn) << ',' << fd(p.mean_length_bknn) << ','
        << fd(p.mean_length_knn) << ',' << fd(p.std_theta_bknn) << ','
        << fd(p.std_theta_knn) << ',' << fd(p.mean_theta_bknn) << ','
        << fd(p.mean_theta_knn) << '\n';
  }
}

CoverageSummary read_summary_csv(std::istream &in) {
  const auto t = read_csv(in);
  expect_point_ids(t);
  CoverageSummary s;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    PointSummary p;
    p.theta_true = t.number(r, "theta_true");
    p.coverage_bknn = t.number(r, "coverage_bknn");
    p.coverage_knn = t.number(r, "coverage_knn");
    p.mean_length_bknn = t.number(r, "mean_len_bknn");
    p.mean_length_knn = t.number(r, "mean_len_knn");
    p.std_theta_bknn = t.number(r, "std_bknn");
    p.std_theta_knn = t.number(r, "std_knn");
    p.mean_theta_bknn = t.number(r, "mean_theta_bknn");
    p.mean_theta_knn = t.number(r, "mean_theta_knn");
    s.points.push_back(p);
  }
  return s;
}

void write_gold_standard_csv(std::ostream &out,
                             const GoldStandardReport &report) {
  out << "point_id,mean_len_bknn,four_std_bknn,ratio_bknn,half_ratio_bknn,"
         "excluded_bknn,mean_len_knn,four_std_knn,ratio_knn,excluded_knn\n";
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto &r = report.rows[i];
    out << i << ',' << fd(r.mean_length_bknn) << ',' << fd(r.four_std_bknn)
        << ',' << fd(r.ratio_bknn) << ',' << fd(r.half_ratio_bknn) << ','
        << (r.excluded_bknn ? 1 : 0) << ',' << fd(r.mean_length_knn) << ','
        << fd(r.four_std_knn) << ',' << fd(r.ratio_knn) << ','
        << (r.excluded_knn ? 1 : 0) << '\n';
  }
  out << "# slopes\n";
  out << "method,slope,points_used\n";
  out << "bknn," << fd(report.bknn.slope) << ',' << report.bknn.points_used
      << '\n';
  out << "knn," << fd(report.knn.slope) << ',' << report.knn.points_used
      << '\n';
}

GoldStandardReport read_gold_standard_csv(std::istream &in) {
  const auto sections = read_csv_sections(in);
  if (sections.size() != 2)
    throw std::runtime_error("gold_standard.csv: expected a point table and a "
                             "slope table");
  const auto &t = sections[0];
  expect_point_ids(t);
  GoldStandardReport report;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    GoldStandardRow row;
    row.mean_length_bknn = t.number(r, "mean_len_bknn");
    row.four_std_bknn = t.number(r, "four_std_bknn");
    row.ratio_bknn = t.number(r, "ratio_bknn");
    row.half_ratio_bknn = t.number(r, "half_ratio_bknn");
    row.excluded_bknn = as_int(t, r, "excluded_bknn") != 0;
    row.mean_length_knn = t.number(r, "mean_len_knn");
    row.four_std_knn = t.number(r, "four_std_knn");
    row.ratio_knn = t.number(r, "ratio_knn");
    row.excluded_knn = as_int(t, r, "excluded_knn") != 0;
    report.rows.push_back(row);
  }
  const auto &s = sections[1];
  bool have_bknn = false, have_knn = false;
  const auto method_col = s.column("method");
  for (std::size_t r = 0; r < s.rows.size(); ++r) {
    const OriginSlope slope{s.number(r, "slope"), as_int(s, r, "points_used")};
    const auto &method = s.rows[r].at(method_col);
    if (method == "bknn") {
      report.bknn = slope;
      have_bknn = true;
    } else if (method == "knn") {
      report.knn = slope;
      have_knn = true;
    }
  }
  if (!have_bknn || !have_knn)
    throw std::runtime_error("gold_standard.csv: missing slope rows");
  return report;
}

void check_written(std::ostream &out, const std::filesystem::path &path) {
  if (!out)
    throw std::runtime_error("write failed: " + path.string());
}

std::ofstream open_output(const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_input(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + path.string());
  return in;
}

} // namespace bknn::cli
