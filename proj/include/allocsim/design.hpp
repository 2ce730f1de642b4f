#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "allocsim/endpoint.hpp"
#include "allocsim/neyman.hpp"
#include "allocsim/rng.hpp"

namespace allocsim {

enum class DesignKind { Er, Fur, Rar };

// How fixed designs realise their target counts as a patient sequence.
enum class SequenceProcedure { RandomAllocation, PermutedBlock };

// Target estimator used by adaptive designs. Shrunk smooths binary success
// counts by +0.5/+1 so the estimated share never degenerates; Mle plugs in
// raw frequencies and relies on the probability clamp instead.
enum class Estimator { Shrunk, Mle };

struct DesignSpec {
  DesignKind kind = DesignKind::Er;
  int ratio0 = 1;  // control weight  (ER and FUR)
  int ratio1 = 1;  // treatment weight
  SequenceProcedure procedure = SequenceProcedure::RandomAllocation;
  int block_size = 0;  // PermutedBlock only; positive multiple of ratio0+ratio1
  int burn_in = 0;     // RAR only; even, at least 4, below n_total
  double gamma = 0.5;  // RAR only; in [0,1)
  Estimator estimator = Estimator::Shrunk;

  static DesignSpec er();
  static DesignSpec fur(int r0, int r1);
  static DesignSpec rar(int burn_in, double gamma = 0.5,
                        Estimator estimator = Estimator::Shrunk);

  bool adaptive() const { return kind == DesignKind::Rar; }

  // "ER", "FUR(1:2)", "RAR(b=12;g=0.5)", "RAR(b=12;g=0.5;mle)". Comma-free so
  // CSV rows never need quoting.
  std::string label() const;

  // Throws ConfigError when the design cannot run the given scenario, e.g.
  // a continuous endpoint with fewer than 2 patients on an arm.
  void validate(int n_total, EndpointKind endpoint) const;
};

struct ArmCounts {
  int n0;
  int n1;
};

// Per-arm sizes for a fixed r0:r1 split: control count rounded half away from
// zero, then both arms clamped to at least one patient. n_total >= 2.
ArmCounts target_counts(int n_total, int ratio0, int ratio1);

// One uniformly random permutation of n0 zeros and n1 ones (random allocation
// rule). Every arrangement with those exact counts is equiprobable.
std::vector<std::uint8_t> random_allocation_sequence(ArmCounts counts, Xoshiro256pp& rng);

// Permuted blocks in ratio r0:r1. block_size must be a positive multiple of
// r0+r1; a final partial block carries exactly the counts still owed so the
// totals always match target_counts.
std::vector<std::uint8_t> permuted_block_sequence(int n_total, int ratio0, int ratio1,
                                                  int block_size, Xoshiro256pp& rng);

// Full assignment sequence for a fixed (ER/FUR) design.
std::vector<std::uint8_t> fixed_sequence(int n_total, const DesignSpec& design,
                                         Xoshiro256pp& rng);

// Accrued per-arm data for one running trial. Arm 0 is control, 1 treatment.
// sum doubles as the success count for binary outcomes; mean/ssd hold the
// running mean and sum of squared deviations (Welford) for the Wald test and
// SD estimates.
struct AssignmentState {
  EndpointKind kind = EndpointKind::Binary;
  std::array<long long, 2> n{{0, 0}};
  std::array<double, 2> sum{{0.0, 0.0}};
  std::array<double, 2> mean{{0.0, 0.0}};
  std::array<double, 2> ssd{{0.0, 0.0}};

  explicit AssignmentState(EndpointKind k) : kind(k) {}

  void add(int arm, double outcome);

  long long total() const { return n[0] + n[1]; }
  double outcome_total() const { return sum[0] + sum[1]; }

  // Sample SD with divisor n-1; requires n[arm] >= 2.
  double sample_sd(int arm) const;
};

// The three-branch adaptive assignment rule: nudge the allocation probability
// from the estimated target rho toward balance when ahead of it and past it
// when behind. f is the current treatment share, gamma in [0,1].
double erade_probability(double rho, double f, double gamma);

// Estimated optimal treatment share from accrued data; both arms need at
// least 2 outcomes. Binary uses shrunk or raw frequencies per the estimator;
// a raw estimate can sit at 0 or 1 (handled downstream by the probability
// clamp, equal-SD ties resolve to 0.5). Continuous uses sample SDs, with an
// exact zero replaced by 1e-12 * max(1, |mean|) so constant data cannot
// divide by zero.
double estimate_target_rho(const AssignmentState& state, Estimator estimator);

// Default-estimator form.
AllocationTarget estimate_target(const AssignmentState& state);

// Probability of assigning the next patient to the treatment arm under an
// adaptive design. During burn-in this follows 1:1 permuted blocks of two;
// afterwards the ERADE rule on the estimated target, except that a rule
// output of exactly 0 or 1 (possible with raw estimates) is pulled back to
// 1/n_total resp. 1 - 1/n_total so no arm is ever frozen out.
double rar_next_probability(const AssignmentState& state, const DesignSpec& design,
                            int n_total);

}
