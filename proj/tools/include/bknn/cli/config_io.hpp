#ifndef BKNN_CLI_CONFIG_IO_HPP
#define BKNN_CLI_CONFIG_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "bknn/experiment.hpp"

namespace bknn::cli {

// Configuration files are flat `key = value` lines. '#' starts a comment,
// blank lines are ignored, and keys not given keep the base value.
//
//   n_train              training points per replicate
//   n_replicates         R
//   n_bootstrap          B
//   seed                 unsigned 64-bit master seed
//   output_dir           directory for run outputs
//   threads              worker threads, 0 = hardware concurrency
//   k_grid.min           smallest candidate k for cross-validation
//   k_grid.max           largest candidate k
//   beta_cap             upper bound of the KNN logistic slope
//   bootstrap.max_redraws  redraws allowed for single-class resamples
//   mcmc.burn_in, mcmc.m, mcmc.thin, mcmc.k_step, mcmc.beta_step_sd,
//   mcmc.k_max (0 = n - 1), mcmc.initial_k, mcmc.initial_beta

using Setting = std::pair<std::string, std::string>;

/// Every recognized key, in file order.
const std::vector<std::string> &config_keys();

/// Applies settings in order on top of `base`, then validates. Throws
/// ConfigError naming the key for unknown keys and malformed or invalid
/// values.
ExperimentConfig apply_settings(ExperimentConfig base,
                                const std::vector<Setting> &settings);

/// Parses a "key=value" command-line override.
Setting parse_setting(const std::string &text);

std::vector<Setting> parse_config_text(std::istream &in);
ExperimentConfig parse_config(std::istream &in,
                              const ExperimentConfig &base = {});
ExperimentConfig load_config(const std::filesystem::path &path,
                             const ExperimentConfig &base = {});

/// key/value pairs of every field, values formatted exactly.
std::vector<Setting> config_entries(const ExperimentConfig &config);
void save_config(std::ostream &out, const ExperimentConfig &config);
void save_config(const std::filesystem::path &path,
                 const ExperimentConfig &config);

} // namespace bknn::cli

#endif
