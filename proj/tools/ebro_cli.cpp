// Command-line front end: ebro_cli --config run.json [--mode curve] ...

#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "ebro/cli/commands.hpp"
#include "ebro/cli/config.hpp"

extern char** environ;

namespace {

std::vector<std::pair<std::string, std::string>> environment() {
  std::vector<std::pair<std::string, std::string>> env;
  for (char** e = environ; e && *e; ++e) {
    const std::string entry(*e);
    const auto eq = entry.find('=');
    if (eq != std::string::npos) env.emplace_back(entry.substr(0, eq), entry.substr(eq + 1));
  }
  return env;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ebro::ConfigError("--thresholds: '" + item + "' is not a number");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace ebro::cli;
  CLI::App app{"Evidence-based bounds on system budgets: min/max, Bel/Pl curves, decomposition, margins"};
  std::string config_path, mode, thresholds, out_dir;
  std::uint64_t seed = 0;
  double tau_c = 0.0, filter_accuracy = 0.0;
  app.add_option("--config", config_path, "run configuration (JSON)")->required();
  auto* seed_opt = app.add_option("--seed", seed, "run seed");
  auto* mode_opt = app.add_option("--mode", mode, "minmax|exact|curve|decompose|margin|benchmark");
  auto* tau_opt = app.add_option("--tau-c", tau_c, "trust factor");
  auto* filter_opt = app.add_option("--filter-accuracy", filter_accuracy, "cap on discarded bpa");
  auto* th_opt = app.add_option("--thresholds", thresholds, "comma-separated thresholds");
  auto* out_opt = app.add_option("--out", out_dir, "output directory");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  RunConfig config;
  try {
    Json j = load_json(config_path);
    apply_env_overrides(j, environment());
    if (*seed_opt) j["seed"] = seed;
    if (*mode_opt) j["mode"] = mode;
    if (*tau_opt) j["ebt"]["tau_c"] = tau_c;
    if (*filter_opt) j["ebt"]["filter_accuracy"] = filter_accuracy;
    if (*th_opt) j["thresholds"] = parse_list(thresholds);
    if (*out_opt) j["output_dir"] = out_dir;
    config = from_json(j);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }
  return run(config, std::cout, std::cerr);
}
