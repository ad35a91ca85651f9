#include "bknn/cli/app.hpp"

#include <algorithm>
#include <filesystem>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bknn/cli/config_io.hpp"
#include "bknn/cli/manifest.hpp"
#include "bknn/cli/results_io.hpp"
#include "bknn/cli/svg_plots.hpp"
#include "bknn/diagnostics.hpp"
#include "bknn/validation/criteria.hpp"
#include "bknn/version.hpp"

namespace bknn::cli {

namespace fs = std::filesystem;

namespace {

struct ConfigOptions {
  std::string preset = "study";
  std::string config_path;
  std::vector<std::string> sets;
};

void add_config_options(CLI::App *cmd, ConfigOptions &o) {
  cmd->add_option("--preset", o.preset,
                  "Base settings before the config file is applied")
      ->check(CLI::IsMember({"study", "reduced"}))
      ->capture_default_str();
  cmd->add_option("-c,--config", o.config_path, "key = value config file");
  cmd->add_option("--set", o.sets, "Override one key, e.g. --set mcmc.m=500")
      ->take_all();
}

ExperimentConfig resolve(const ConfigOptions &o,
                         const std::vector<Setting> &flags = {}) {
  ExperimentConfig c = o.preset == "reduced" ? ExperimentConfig::reduced()
                                             : ExperimentConfig::study();
  if (!o.config_path.empty())
    c = load_config(o.config_path, c);
  std::vector<Setting> overrides;
  for (const auto &s : o.sets)
    overrides.push_back(parse_setting(s));
  c = apply_settings(c, overrides);
  return apply_settings(c, flags);
}

// Collects warnings for the manifest while still echoing them.
class WarningLog {
public:
  explicit WarningLog(std::ostream &err)
      : guard_([this, &err](std::string_view msg) {
          err << "warning: " << msg << '\n';
          std::string s(msg);
          if (std::find(messages_.begin(), messages_.end(), s) ==
              messages_.end())
            messages_.push_back(std::move(s));
        }) {}

  const std::vector<std::string> &messages() const { return messages_; }

private:
  std::vector<std::string> messages_;
  ScopedWarningHandler guard_;
};

void write_svg(const fs::path &path, const std::string &svg) {
  write_file(path, [&](std::ostream &out) { out << svg; });
}

int cmd_grid(const fs::path &dir, std::ostream &out, std::ostream &err) {
  RunManifest manifest;
  manifest.command = "grid";
  manifest.started_at = utc_timestamp();
  manifest.config.output_dir = dir.string();
  WarningLog log(err);
  const auto grid = build_test_grid(MixtureClassModel{});
  fs::create_directories(dir);
  write_file(dir / "grid.csv",
             [&](std::ostream &o) { write_grid_csv(o, grid); });
  write_svg(dir / "grid.svg", grid_svg(grid));
  manifest.files = {"grid.csv", "grid.svg"};
  manifest.warnings = log.messages();
  manifest.finished_at = utc_timestamp();
  write_manifest(dir, manifest);
  out << "wrote " << grid.size() << " test points to "
      << (dir / "grid.csv").string() << '\n';
  return kOk;
}

int cmd_replicate(const ExperimentConfig &config, int id,
                  const std::string &out_path, std::ostream &out,
                  std::ostream &err) {
  if (id < 0)
    throw ConfigError("id", "must be >= 0");
  WarningLog log(err);
  const auto grid = build_test_grid(MixtureClassModel{});
  const auto result = run_replicate(config, grid, id);
  if (out_path.empty())
    write_replicates_csv(out, {result});
  else
    write_file(out_path,
               [&](std::ostream &o) { write_replicates_csv(o, {result}); });
  err << "replicate " << id << ": K acceptance " << result.k_acceptance
      << ", beta acceptance " << result.beta_acceptance << ", KNN k "
      << result.knn_k << ", beta_hat " << result.knn_beta << '\n';
  return kOk;
}

int cmd_run(const ExperimentConfig &config, bool quiet, std::ostream &out,
            std::ostream &err) {
  RunManifest manifest;
  manifest.command = "run";
  manifest.config = config;
  manifest.started_at = utc_timestamp();
  WarningLog log(err);

  const fs::path dir = config.output_dir;
  fs::create_directories(dir);
  const auto grid = build_test_grid(MixtureClassModel{});

  std::mutex progress_mutex;
  const int step = std::max(1, config.n_replicates / 10);
  ProgressCallback progress;
  if (!quiet)
    progress = [&](int done, int total) {
      if (done % step == 0 || done == total) {
        std::lock_guard lock(progress_mutex);
        err << "replicates " << done << "/" << total << '\n';
      }
    };
  const auto results = run_experiment(config, grid, progress);
  const auto summary = summarize(results, grid);
  const auto report = gold_standard_report(summary);

  write_file(dir / "grid.csv",
             [&](std::ostream &o) { write_grid_csv(o, grid); });
  write_file(dir / "replicates.csv",
             [&](std::ostream &o) { write_replicates_csv(o, results); });
  write_file(dir / "summary.csv",
             [&](std::ostream &o) { write_summary_csv(o, summary); });
  write_file(dir / "gold_standard.csv",
             [&](std::ostream &o) { write_gold_standard_csv(o, report); });
  write_file(dir / "diagnostics.csv",
             [&](std::ostream &o) { write_diagnostics_csv(o, results); });
  write_file(dir / "config.txt",
             [&](std::ostream &o) { save_config(o, config); });
  manifest.files = {"grid.csv",         "replicates.csv",  "summary.csv",
                    "gold_standard.csv", "diagnostics.csv", "config.txt"};
  manifest.warnings = log.messages();
  manifest.finished_at = utc_timestamp();
  write_manifest(dir, manifest);

  const auto stats = validation::study_statistics(summary, report);
  out << "R=" << config.n_replicates << " n=" << config.n_train
      << " B=" << config.bootstrap.n_resamples
      << " M=" << config.mcmc.n_retained << '\n'
      << "median coverage: bknn " << stats.median_coverage_bknn << ", knn "
      << stats.median_coverage_knn << '\n'
      << "length vs 4 std slope: bknn " << stats.slope_bknn << ", knn "
      << stats.slope_knn << '\n'
      << "outputs in " << dir.string() << '\n';
  return kOk;
}

int cmd_report(const fs::path &dir, const fs::path &out_dir,
               std::ostream &out) {
  CoverageSummary summary;
  {
    auto in = open_input(dir / "summary.csv");
    summary = read_summary_csv(in);
  }
  GoldStandardReport report;
  {
    auto in = open_input(dir / "gold_standard.csv");
    report = read_gold_standard_csv(in);
  }
  if (report.rows.size() != summary.points.size())
    throw std::runtime_error(
        "summary.csv and gold_standard.csv disagree on the number of points");
  fs::create_directories(out_dir);
  write_svg(out_dir / "fig3.svg", calibration_svg(summary));
  write_svg(out_dir / "fig4_bknn.svg",
            coverage_histogram_svg(summary, Method::Bknn));
  write_svg(out_dir / "fig4_knn.svg",
            coverage_histogram_svg(summary, Method::Knn));
  write_svg(out_dir / "fig5.svg", length_vs_std_svg(report));
  out << "wrote fig3.svg, fig4_bknn.svg, fig4_knn.svg, fig5.svg to "
      << out_dir.string() << '\n';
  return kOk;
}

int cmd_validate(std::uint64_t seed, int retained, std::ostream &out) {
  using namespace validation;
  bool all = true;
  const std::vector<CriterionResult> results{
      check_zero_beta_identity(seed), check_logistic_equivalence(seed),
      check_sampler_vs_enumeration(seed, retained),
      check_bayes_rule_oracle(seed)};
  for (const auto &r : results) {
    print_result(out, r);
    all = all && r.passed;
  }
  return all ? kOk : kDataError;
}

} // namespace

int cli_main(int argc, const char *const *argv, std::ostream &out,
             std::ostream &err) {
  CLI::App app{"Bayesian and bootstrap-calibrated KNN coverage study", "bknn"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string grid_dir = "bknn_out";
  auto *grid = app.add_subcommand("grid", "Write the test grid and its plot");
  grid->add_option("-o,--out", grid_dir, "Output directory")
      ->capture_default_str();

  ConfigOptions rep_opts;
  int rep_id = 0;
  std::string rep_out;
  auto *rep = app.add_subcommand("replicate", "Run one replicate");
  add_config_options(rep, rep_opts);
  rep->add_option("--id", rep_id, "Replicate id")->required();
  rep->add_option("-o,--out", rep_out, "CSV file (default: stdout)");

  ConfigOptions run_opts;
  std::string run_dir;
  std::optional<int> run_threads;
  bool quiet = false;
  auto *run = app.add_subcommand("run", "Run the full experiment");
  add_config_options(run, run_opts);
  run->add_option("-o,--out", run_dir, "Output directory (overrides config)");
  run->add_option("-j,--threads", run_threads, "Worker threads, 0 = all");
  run->add_flag("-q,--quiet", quiet, "No progress output");

  std::string report_dir = "bknn_out";
  std::string report_out;
  auto *report = app.add_subcommand("report", "Plot the CSVs of a run");
  report->add_option("-d,--dir", report_dir, "Directory holding the CSVs")
      ->capture_default_str();
  report->add_option("-o,--out", report_out, "Directory for SVGs (default: --dir)");

  std::uint64_t val_seed = ExperimentConfig{}.seed;
  int val_retained = 200000;
  auto *validate = app.add_subcommand("validate", "Run the oracle checks");
  validate->add_option("--seed", val_seed)->capture_default_str();
  validate->add_option("--retained", val_retained, "Retained MCMC draws")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success &e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError &e) {
    app.exit(e, out, err);
    err << app.help();
    return kUsageError;
  }

  try {
    if (*grid)
      return cmd_grid(grid_dir, out, err);
    if (*rep)
      return cmd_replicate(resolve(rep_opts), rep_id, rep_out, out, err);
    if (*run) {
      std::vector<Setting> flags;
      if (!run_dir.empty())
        flags.emplace_back("output_dir", run_dir);
      if (run_threads)
        flags.emplace_back("threads", std::to_string(*run_threads));
      return cmd_run(resolve(run_opts, flags), quiet, out, err);
    }
    if (*report)
      return cmd_report(report_dir,
                        report_out.empty() ? report_dir : report_out, out);
    if (*validate)
      return cmd_validate(val_seed, val_retained, out);
  } catch (const ConfigError &e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsageError;
}

} // namespace bknn::cli
