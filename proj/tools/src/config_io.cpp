#include "bknn/cli/config_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <set>

#include "bknn/csv.hpp"

namespace bknn::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <class Int> Int parse_integer(const std::string &key,
                                       const std::string &value) {
  Int v{};
  const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size())
    throw ConfigError(key, "expected an integer, got '" + value + "'");
  return v;
}

double parse_real(const std::string &key, const std::string &value) {
  double v = 0.0;
  try {
    v = parse_double(value);
  } catch (const std::runtime_error &) {
    throw ConfigError(key, "expected a number, got '" + value + "'");
  }
  if (!std::isfinite(v))
    throw ConfigError(key, "must be finite");
  return v;
}

bool is_contiguous(const std::vector<int> &grid) {
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (grid[i] != grid[i - 1] + 1)
      return false;
  return !grid.empty();
}

} // namespace

const std::vector<std::string> &config_keys() {
  static const std::vector<std::string> keys{
      "n_train",          "n_replicates",  "n_bootstrap",
      "seed",             "output_dir",    "threads",
      "k_grid.min",       "k_grid.max",    "beta_cap",
      "bootstrap.max_redraws",             "mcmc.burn_in",
      "mcmc.m",           "mcmc.thin",     "mcmc.k_step",
      "mcmc.beta_step_sd", "mcmc.k_max",   "mcmc.initial_k",
      "mcmc.initial_beta"};
  return keys;
}

ExperimentConfig apply_settings(ExperimentConfig c,
                                const std::vector<Setting> &settings) {
  // k_grid bounds are combined after all lines are read so their order in
  // the file does not matter.
  std::optional<int> k_min, k_max;
  std::set<std::string> seen;
  for (const auto &[key, value] : settings) {
    if (!seen.insert(key).second)
      throw ConfigError(key, "given more than once");
    if (key == "n_train")
      c.n_train = parse_integer<std::size_t>(key, value);
    else if (key == "n_replicates")
      c.n_replicates = parse_integer<int>(key, value);
    else if (key == "n_bootstrap")
      c.bootstrap.n_resamples = parse_integer<int>(key, value);
    else if (key == "seed")
      c.seed = parse_integer<std::uint64_t>(key, value);
    else if (key == "output_dir") {
      if (value.empty())
        throw ConfigError(key, "must not be empty");
      c.output_dir = value;
    } else if (key == "threads")
      c.threads = parse_integer<int>(key, value);
    else if (key == "k_grid.min")
      k_min = parse_integer<int>(key, value);
    else if (key == "k_grid.max")
      k_max = parse_integer<int>(key, value);
    else if (key == "beta_cap")
      c.bootstrap.beta_cap = parse_real(key, value);
    else if (key == "bootstrap.max_redraws")
      c.bootstrap.max_redraws = parse_integer<int>(key, value);
    else if (key == "mcmc.burn_in")
      c.mcmc.burn_in = parse_integer<int>(key, value);
    else if (key == "mcmc.m")
      c.mcmc.n_retained = parse_integer<int>(key, value);
    else if (key == "mcmc.thin")
      c.mcmc.thin = parse_integer<int>(key, value);
    else if (key == "mcmc.k_step")
      c.mcmc.k_step = parse_integer<int>(key, value);
    else if (key == "mcmc.beta_step_sd")
      c.mcmc.beta_step_sd = parse_real(key, value);
    else if (key == "mcmc.k_max")
      c.mcmc.k_max = parse_integer<int>(key, value);
    else if (key == "mcmc.initial_k")
      c.mcmc.initial.k = parse_integer<int>(key, value);
    else if (key == "mcmc.initial_beta")
      c.mcmc.initial.beta = parse_real(key, value);
    else
      throw ConfigError(key, "unknown key");
  }
  if (k_min || k_max) {
    const auto &grid = c.bootstrap.k_grid;
    const int lo = k_min.value_or(grid.empty() ? 1 : grid.front());
    const int hi = k_max.value_or(grid.empty() ? lo : grid.back());
    if (lo < 1)
      throw ConfigError("k_grid.min", "must be >= 1");
    if (hi < lo)
      throw ConfigError("k_grid.max", "must be >= k_grid.min");
    c.bootstrap.k_grid = make_k_grid(lo, hi);
  }
  c.validate();
  return c;
}

Setting parse_setting(const std::string &text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos)
    throw ConfigError(trim(text), "expected key=value");
  auto key = trim(std::string_view(text).substr(0, eq));
  if (key.empty())
    throw ConfigError("", "empty key in '" + text + "'");
  return {key, trim(std::string_view(text).substr(eq + 1))};
}

std::vector<Setting> parse_config_text(std::istream &in) {
  std::vector<Setting> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos)
      line.erase(hash);
    if (trim(line).empty())
      continue;
    out.push_back(parse_setting(line));
  }
  return out;
}

ExperimentConfig parse_config(std::istream &in, const ExperimentConfig &base) {
  return apply_settings(base, parse_config_text(in));
}

ExperimentConfig load_config(const std::filesystem::path &path,
                             const ExperimentConfig &base) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open config file " + path.string());
  return parse_config(in, base);
}

std::vector<Setting> config_entries(const ExperimentConfig &c) {
  if (!is_contiguous(c.bootstrap.k_grid))
    throw ConfigError("k_grid", "only contiguous ranges can be saved");
  if (c.output_dir.find('#') != std::string::npos ||
      trim(c.output_dir) != c.output_dir)
    throw ConfigError("output_dir", "cannot be written to a config file");
  return {
      {"n_train", std::to_string(c.n_train)},
      {"n_replicates", std::to_string(c.n_replicates)},
      {"n_bootstrap", std::to_string(c.bootstrap.n_resamples)},
      {"seed", std::to_string(c.seed)},
      {"output_dir", c.output_dir},
      {"threads", std::to_string(c.threads)},
      {"k_grid.min", std::to_string(c.bootstrap.k_grid.front())},
      {"k_grid.max", std::to_string(c.bootstrap.k_grid.back())},
      {"beta_cap", format_double(c.bootstrap.beta_cap)},
      {"bootstrap.max_redraws", std::to_string(c.bootstrap.max_redraws)},
      {"mcmc.burn_in", std::to_string(c.mcmc.burn_in)},
      {"mcmc.m", std::to_string(c.mcmc.n_retained)},
      {"mcmc.thin", std::to_string(c.mcmc.thin)},
      {"mcmc.k_step", std::to_string(c.mcmc.k_step)},
      {"mcmc.beta_step_sd", format_double(c.mcmc.beta_step_sd)},
      {"mcmc.k_max", std::to_string(c.mcmc.k_max)},
      {"mcmc.initial_k", std::to_string(c.mcmc.initial.k)},
      {"mcmc.initial_beta", format_double(c.mcmc.initial.beta)},
  };
}

void save_config(std::ostream &out, const ExperimentConfig &config) {
  for (const auto &[key, value] : config_entries(config))
    out << key << " = " << value << '\n';
}

void save_config(const std::filesystem::path &path,
                 const ExperimentConfig &config) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write " + path.string());
  save_config(out, config);
}

} // namespace bknn::cli
