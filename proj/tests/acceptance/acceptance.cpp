// Runs every acceptance criterion and prints one [PASS]/[FAIL] line each.
// Exit status is 0 only when all criteria pass.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bknn/cli/results_io.hpp"
#include "bknn/experiment.hpp"
#include "bknn/validation/criteria.hpp"

namespace fs = std::filesystem;
using bknn::validation::CriterionResult;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct StudyRun {
  std::vector<bknn::ReplicateResult> results;
  bknn::CoverageSummary summary;
  bknn::GoldStandardReport report;
  double seconds = 0.0;
};

StudyRun run_study(const bknn::ExperimentConfig &config,
                   const bknn::TestGrid &grid) {
  const auto t0 = Clock::now();
  StudyRun run;
  run.results = bknn::run_experiment(config, grid);
  run.summary = bknn::summarize(run.results, grid);
  run.report = bknn::gold_standard_report(run.summary);
  run.seconds = seconds_since(t0);
  return run;
}

void write_outputs(const fs::path &dir, const StudyRun &run) {
  using namespace bknn::cli;
  fs::create_directories(dir);
  write_file(dir / "replicates.csv",
             [&](std::ostream &o) { write_replicates_csv(o, run.results); });
  write_file(dir / "summary.csv",
             [&](std::ostream &o) { write_summary_csv(o, run.summary); });
  write_file(dir / "gold_standard.csv",
             [&](std::ostream &o) { write_gold_standard_csv(o, run.report); });
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

CriterionResult check_reproducible(const bknn::ExperimentConfig &config,
                                   const bknn::TestGrid &grid,
                                   const StudyRun &first,
                                   const fs::path &scratch) {
  CriterionResult r;
  r.id = "A8";
  r.title = "same seed gives byte-identical output files";
  const auto t0 = Clock::now();
  // The second run uses a different worker count as well.
  auto again_config = config;
  again_config.threads = config.threads == 1 ? 2 : 1;
  const auto second = run_study(again_config, grid);
  write_outputs(scratch / "run_a", first);
  write_outputs(scratch / "run_b", second);
  std::vector<std::string> differing;
  for (const char *name : {"replicates.csv", "summary.csv", "gold_standard.csv"})
    if (slurp(scratch / "run_a" / name) != slurp(scratch / "run_b" / name))
      differing.push_back(name);
  r.passed = differing.empty();
  r.detail = r.passed ? "3 files identical" : "differs:";
  for (const auto &d : differing)
    r.detail += " " + d;
  r.seconds = seconds_since(t0) + first.seconds;
  return r;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Acceptance suite for the BKNN coverage study"};
  std::string preset = "reduced";
  std::uint64_t seed = bknn::ExperimentConfig{}.seed;
  int threads = 0;
  int retained = 200000;
  std::string scratch_arg;
  app.add_option("--preset", preset, "Study scale for A4-A6 and A8")
      ->check(CLI::IsMember({"reduced", "study"}));
  app.add_option("--seed", seed, "Master seed");
  app.add_option("-j,--threads", threads, "Worker threads (0 = all cores)");
  app.add_option("--retained", retained, "Sampler draws for A3");
  app.add_option("--scratch", scratch_arg, "Directory for A8 output files");
  CLI11_PARSE(app, argc, argv);

  auto config = preset == "study" ? bknn::ExperimentConfig::study()
                                  : bknn::ExperimentConfig::reduced();
  config.seed = seed;
  config.threads = threads;
  const fs::path scratch =
      scratch_arg.empty() ? fs::temp_directory_path() / "bknn_acceptance"
                          : fs::path(scratch_arg);
  fs::remove_all(scratch);

  std::cout << "preset " << preset << ", seed " << seed << "\n";
  std::vector<CriterionResult> all;
  auto report = [&](CriterionResult r) {
    bknn::validation::print_result(std::cout, r);
    std::cout.flush();
    all.push_back(std::move(r));
  };

  report(bknn::validation::check_zero_beta_identity(seed));
  report(bknn::validation::check_logistic_equivalence(seed));
  report(bknn::validation::check_sampler_vs_enumeration(seed, retained));

  const auto grid = bknn::build_test_grid(bknn::MixtureClassModel{});
  const auto study = run_study(config, grid);
  const auto stats =
      bknn::validation::study_statistics(study.summary, study.report);
  auto calibration = bknn::validation::check_point_calibration(stats);
  calibration.seconds += study.seconds;
  report(std::move(calibration));
  report(bknn::validation::check_coverage_direction(stats));
  report(bknn::validation::check_length_ratio(stats));

  report(bknn::validation::check_bayes_rule_oracle(seed));
  report(check_reproducible(config, grid, study, scratch));
  fs::remove_all(scratch);

  int failed = 0;
  for (const auto &r : all)
    failed += !r.passed;
  std::cout << (all.size() - static_cast<std::size_t>(failed)) << "/"
            << all.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
