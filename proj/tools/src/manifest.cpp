#include "bknn/cli/manifest.hpp"

#include <chrono>
#include <ctime>

#include "bknn/cli/config_io.hpp"
#include "bknn/cli/results_io.hpp"
#include "bknn/version.hpp"
#include "json.hpp"

namespace bknn::cli {

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string manifest_json(const RunManifest &m) {
  nlohmann::ordered_json j;
  j["software"] = "bknn";
  j["version"] = kVersion;
  j["command"] = m.command;
  // The seed also appears as a string in the config echo; here it is a JSON
  // number for convenience.
  j["seed"] = m.config.seed;
  auto &config = j["config"] = nlohmann::ordered_json::object();
  for (const auto &[key, value] : config_entries(m.config))
    config[key] = value;
  j["started_at"] = m.started_at;
  j["finished_at"] = m.finished_at;
  j["warnings"] = m.warnings;
  j["files"] = m.files;
  return j.dump(2) + "\n";
}

void write_manifest(const std::filesystem::path &dir, const RunManifest &m) {
  const auto text = manifest_json(m);
  write_file(dir / "manifest.json", [&](std::ostream &out) { out << text; });
}

} // namespace bknn::cli
