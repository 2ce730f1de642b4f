#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "allocsim/engine.hpp"
#include "allocsim/errors.hpp"
#include "allocsim/neyman.hpp"

namespace allocsim {

// JSON config document -> scenario. Diagnostics name the offending key.
// Schema (see README): endpoint, arms{control,treatment}, null_arms, n_total,
// alpha, designs[{kind, ratio | burn_in, gamma, estimator, procedure,
// block_size}], replications, seed. alpha, replications and seed are optional
// with defaults 0.05, 100000 and 0.
ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config(const std::string& path);

// Scenario -> schema JSON text (round-trips through parse_config). Used for
// the manifest echo, so a manifest plus the tool version reproduces a run.
std::string config_to_json(const ScenarioConfig& config);

// CSV serializers. Column order is part of the file contract; doubles carry
// 6 significant digits.
std::string summary_csv(const std::vector<MetricsSummary>& rows);
std::string neyman_curve_csv(const std::vector<NeymanPoint>& rows);
std::string power_scan_csv(const std::vector<PowerScanRow>& rows);

// Full-precision run record: config echo, tool version, seed, duration,
// per-cell metrics including the type-I inflation flag.
std::string manifest_json(const ScenarioConfig& config,
                          const std::vector<MetricsSummary>& rows,
                          double duration_seconds);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

struct SimulateOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<long long> replications;
  std::string out_dir = ".";
  int threads = 0;  // <= 0: hardware concurrency
};

struct NeymanCurveOptions {
  double p0 = 0.5;
  double grid_min = 0.01;
  double grid_max = 0.99;
  double grid_step = 0.01;
  std::string out_dir = ".";
};

struct PowerScanOptions {
  std::string config_path;
  std::vector<std::pair<int, int>> ratios;
  std::optional<std::uint64_t> seed;
  std::optional<long long> replications;
  std::string out_dir = ".";
  int threads = 0;
};

// Subcommand bodies. Each returns the process exit code: 0 ok, 2 config
// error, 1 anything else; errors are printed to err. cmd_simulate writes
// summary.csv and manifest.json, cmd_neyman_curve writes neyman_curve.csv,
// cmd_power_scan writes power_scan.csv, all into out_dir.
int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err);
int cmd_neyman_curve(const NeymanCurveOptions& options, std::ostream& out,
                     std::ostream& err);
int cmd_power_scan(const PowerScanOptions& options, std::ostream& out,
                   std::ostream& err);

}
