#include <cstdint>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "allocsim/io.hpp"
#include "allocsim/version.hpp"

namespace {

// "2:1,1:2" -> {{2,1},{1,2}}. Throws ConfigError on anything else.
std::vector<std::pair<int, int>> parse_ratio_list(const std::string& text) {
  std::vector<std::pair<int, int>> ratios;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(pos, comma - pos);
    const size_t colon = item.find(':');
    if (colon == std::string::npos) {
      throw allocsim::ConfigError("ratio \"" + item + "\" must look like r0:r1");
    }
    try {
      size_t used0 = 0, used1 = 0;
      const int r0 = std::stoi(item.substr(0, colon), &used0);
      const int r1 = std::stoi(item.substr(colon + 1), &used1);
      if (used0 != colon || used1 != item.size() - colon - 1 || r0 < 1 || r1 < 1) {
        throw std::invalid_argument("bad ratio");
      }
      ratios.emplace_back(r0, r1);
    } catch (const std::exception&) {
      throw allocsim::ConfigError("ratio \"" + item + "\" must be two positive integers");
    }
    pos = comma + 1;
  }
  return ratios;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Operating characteristics of two-arm allocation designs"};
  app.set_version_flag("--version", allocsim::version);
  app.require_subcommand(1);

  allocsim::SimulateOptions sim;
  std::uint64_t seed_value = 0;
  long long replications_value = 0;

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Run the configured scenario and write summary.csv + manifest.json");
  simulate->add_option("--config", sim.config_path, "Scenario JSON file")->required();
  CLI::Option* sim_seed =
      simulate->add_option("--seed", seed_value, "Override the master seed");
  CLI::Option* sim_reps = simulate->add_option("--replications", replications_value,
                                               "Override the replication count");
  simulate->add_option("--out-dir", sim.out_dir, "Output directory (default .)");
  simulate->add_option("--threads", sim.threads,
                       "Worker threads; 0 means hardware concurrency");

  allocsim::NeymanCurveOptions curve;
  CLI::App* neyman = app.add_subcommand(
      "neyman-curve", "Write the optimal-allocation curve data (neyman_curve.csv)");
  neyman->add_option("--p0", curve.p0, "Control success rate")->required();
  neyman->add_option("--grid-min", curve.grid_min, "Smallest p1 (default 0.01)");
  neyman->add_option("--grid-max", curve.grid_max, "Largest p1 (default 0.99)");
  neyman->add_option("--grid-step", curve.grid_step, "p1 increment (default 0.01)");
  neyman->add_option("--out-dir", curve.out_dir, "Output directory (default .)");

  allocsim::PowerScanOptions scan;
  std::string ratio_text;
  std::uint64_t scan_seed_value = 0;
  long long scan_reps_value = 0;
  CLI::App* power = app.add_subcommand(
      "power-scan", "Power across fixed ratios under the alternative (power_scan.csv)");
  power->add_option("--config", scan.config_path, "Scenario JSON file")->required();
  power->add_option("--ratios", ratio_text, "Comma-separated r0:r1 list, e.g. 2:1,1:4")
      ->required();
  CLI::Option* scan_seed =
      power->add_option("--seed", scan_seed_value, "Override the master seed");
  CLI::Option* scan_reps = power->add_option("--replications", scan_reps_value,
                                             "Override the replication count");
  power->add_option("--out-dir", scan.out_dir, "Output directory (default .)");
  power->add_option("--threads", scan.threads,
                    "Worker threads; 0 means hardware concurrency");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (simulate->parsed()) {
      if (*sim_seed) sim.seed = seed_value;
      if (*sim_reps) sim.replications = replications_value;
      return allocsim::cmd_simulate(sim, std::cout, std::cerr);
    }
    if (neyman->parsed()) {
      return allocsim::cmd_neyman_curve(curve, std::cout, std::cerr);
    }
    if (*scan_seed) scan.seed = scan_seed_value;
    if (*scan_reps) scan.replications = scan_reps_value;
    scan.ratios = parse_ratio_list(ratio_text);
    return allocsim::cmd_power_scan(scan, std::cout, std::cerr);
  } catch (const allocsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
