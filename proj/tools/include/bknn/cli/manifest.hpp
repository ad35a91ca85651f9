#ifndef BKNN_CLI_MANIFEST_HPP
#define BKNN_CLI_MANIFEST_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "bknn/experiment.hpp"

namespace bknn::cli {

/// Provenance record written as manifest.json into every output directory.
/// The config echo (with the seed) is enough to reproduce the run.
struct RunManifest {
  std::string command;
  ExperimentConfig config;
  std::string started_at;  ///< ISO 8601, UTC
  std::string finished_at;
  std::vector<std::string> warnings;
  std::vector<std::string> files;  ///< outputs written, relative names
};

std::string utc_timestamp();

std::string manifest_json(const RunManifest &manifest);
/// Replaces any existing manifest.json in `dir`.
void write_manifest(const std::filesystem::path &dir,
                    const RunManifest &manifest);

} // namespace bknn::cli

#endif
