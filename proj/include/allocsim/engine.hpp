#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "allocsim/analysis.hpp"
#include "allocsim/design.hpp"
#include "allocsim/endpoint.hpp"

namespace allocsim {

// Complete experiment description. arms_alt is the generating truth under the
// alternative; arms_null under the null (typically both arms set to the
// control model, which is why it is configured and not derived).
struct ScenarioConfig {
  EndpointKind endpoint = EndpointKind::Binary;
  ArmPair arms_alt;
  ArmPair arms_null;
  std::vector<DesignSpec> designs;
  int n_total = 0;
  double alpha = 0.05;
  long long replications = 100000;
  std::uint64_t master_seed = 0;

  void validate() const;  // throws ConfigError
};

struct TrialRecord {
  int design_index;
  long long n0;
  long long n1;
  TestOutcome test;
  double outcome_total;  // sum of all patient outcomes
};

struct MetricsSummary {
  std::string design;
  bool alternative;       // false: null hypothesis row
  double rejection_rate;
  double rejection_mcse;  // sqrt(r(1-r)/replications)
  double mean_prop_arm1;  // mean final n1/n
  double mean_outcome;    // ENS for binary, EMR for continuous
  long long replications;
  // Null rows only: rejection rate exceeds alpha by more than
  // max(0.006, 4*mcse). Reported, never suppressed.
  bool type1_inflated;
};

// One simulated trial. Fixed designs draw the whole assignment sequence, then
// outcomes; adaptive designs interleave assignment and response per patient.
TrialRecord run_trial(const DesignSpec& design, const ArmPair& arms, int n_total,
                      double alpha, Xoshiro256pp& rng, int design_index = 0);

// All design x hypothesis cells, null row first per design, design order as
// configured. Bit-identical output for a given (config, seed) at any thread
// count: replication k of cell (d, h) always runs on the stream
// derive_seed(master_seed, d, h, k) and partial sums are reduced in a fixed
// block order. threads <= 0 picks the hardware concurrency.
std::vector<MetricsSummary> run_monte_carlo(const ScenarioConfig& config,
                                            int threads = 1);

struct PowerScanRow {
  int ratio0;
  int ratio1;
  double power;
  double mcse;
  double mean_outcome;
};

// Power under the alternative for a list of fixed ratios, sharing everything
// else (n, alpha, replications, seed) with the config. Row i uses design
// index i, so a lone 1:1 entry replays the ER cell of a config whose first
// design is ER.
std::vector<PowerScanRow> power_scan(const ScenarioConfig& config,
                                     const std::vector<std::pair<int, int>>& ratios,
                                     int threads = 1);

// Closed-form expected outcome total per patient mix: expected success count
// for binary arms, expected mean response for continuous arms.
double analytic_expected_outcome(const ArmPair& arms, long long n0, long long n1);

}
