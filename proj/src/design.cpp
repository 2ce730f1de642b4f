#include "allocsim/design.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "allocsim/errors.hpp"
#include "allocsim/neyman.hpp"

namespace allocsim {

DesignSpec DesignSpec::er() {
  DesignSpec d;
  d.kind = DesignKind::Er;
  d.ratio0 = 1;
  d.ratio1 = 1;
  return d;
}

DesignSpec DesignSpec::fur(int r0, int r1) {
  DesignSpec d;
  d.kind = DesignKind::Fur;
  d.ratio0 = r0;
  d.ratio1 = r1;
  return d;
}

DesignSpec DesignSpec::rar(int burn_in, double gamma, Estimator estimator) {
  DesignSpec d;
  d.kind = DesignKind::Rar;
  d.burn_in = burn_in;
  d.gamma = gamma;
  d.estimator = estimator;
  return d;
}

std::string DesignSpec::label() const {
  char buf[64];
  switch (kind) {
    case DesignKind::Er:
      return "ER";
    case DesignKind::Fur:
      std::snprintf(buf, sizeof buf, "FUR(%d:%d)", ratio0, ratio1);
      return buf;
    case DesignKind::Rar:
      std::snprintf(buf, sizeof buf, "RAR(b=%d;g=%g%s)", burn_in, gamma,
                    estimator == Estimator::Mle ? ";mle" : "");
      return buf;
  }
  return "?";
}

void DesignSpec::validate(int n_total, EndpointKind endpoint) const {
  if (n_total < 2) throw ConfigError("n_total must be >= 2");
  switch (kind) {
    case DesignKind::Er:
      if (ratio0 != 1 || ratio1 != 1) throw ConfigError("er design is fixed at ratio 1:1");
      [[fallthrough]];
    case DesignKind::Fur: {
      if (ratio0 < 1 || ratio1 < 1) throw ConfigError("ratio components must be >= 1");
      if (procedure == SequenceProcedure::PermutedBlock &&
          (block_size < 1 || block_size % (ratio0 + ratio1) != 0)) {
        throw ConfigError("block_size must be a positive multiple of ratio0+ratio1");
      }
      if (endpoint == EndpointKind::Continuous) {
        const ArmCounts c = target_counts(n_total, ratio0, ratio1);
        if (c.n0 < 2 || c.n1 < 2) {
          throw ConfigError(
              "continuous analysis needs at least 2 patients per arm; ratio " +
              std::to_string(ratio0) + ":" + std::to_string(ratio1) +
              " leaves an arm short at n_total " + std::to_string(n_total));
        }
      }
      break;
    }
    case DesignKind::Rar:
      if (burn_in < 4) throw ConfigError("burn_in must be >= 4 (2 outcomes per arm)");
      if (burn_in % 2 != 0) throw ConfigError("burn_in must be even");
      if (burn_in >= n_total) throw ConfigError("burn_in must be below n_total");
      if (!(gamma >= 0.0 && gamma < 1.0)) throw ConfigError("gamma must be in [0,1)");
      break;
  }
}

ArmCounts target_counts(int n_total, int ratio0, int ratio1) {
  if (n_total < 2) throw std::invalid_argument("target_counts: n_total must be >= 2");
  if (ratio0 < 1 || ratio1 < 1) {
    throw std::invalid_argument("target_counts: ratio components must be >= 1");
  }
  const double share0 = static_cast<double>(ratio0) / (ratio0 + ratio1);
  int n0 = static_cast<int>(std::llround(n_total * share0));
  n0 = std::clamp(n0, 1, n_total - 1);
  return {n0, n_total - n0};
}

std::vector<std::uint8_t> random_allocation_sequence(ArmCounts counts, Xoshiro256pp& rng) {
  std::vector<std::uint8_t> seq(static_cast<size_t>(counts.n0) + counts.n1, 0);
  std::fill(seq.begin() + counts.n0, seq.end(), std::uint8_t{1});
  for (size_t i = seq.size() - 1; i > 0; --i) {
    std::swap(seq[i], seq[rng.below(i + 1)]);
  }
  return seq;
}

std::vector<std::uint8_t> permuted_block_sequence(int n_total, int ratio0, int ratio1,
                                                  int block_size, Xoshiro256pp& rng) {
  if (block_size < 1 || block_size % (ratio0 + ratio1) != 0) {
    throw ConfigError("block_size must be a positive multiple of ratio0+ratio1");
  }
  const ArmCounts total = target_counts(n_total, ratio0, ratio1);
  const int per_block1 = block_size / (ratio0 + ratio1) * ratio1;

  std::vector<std::uint8_t> seq;
  seq.reserve(n_total);
  int left1 = total.n1;
  while (static_cast<int>(seq.size()) < n_total) {
    const int remaining = n_total - static_cast<int>(seq.size());
    // Final partial block gets exactly the treatment count still owed.
    const int b1 = remaining < block_size ? left1 : per_block1;
    const int b0 = std::min(remaining, block_size) - b1;
    std::vector<std::uint8_t> block(static_cast<size_t>(b0) + b1, 0);
    std::fill(block.begin() + b0, block.end(), std::uint8_t{1});
    for (size_t i = block.size() - 1; i > 0; --i) {
      std::swap(block[i], block[rng.below(i + 1)]);
    }
    seq.insert(seq.end(), block.begin(), block.end());
    left1 -= b1;
  }
  return seq;
}

std::vector<std::uint8_t> fixed_sequence(int n_total, const DesignSpec& design,
                                         Xoshiro256pp& rng) {
  if (design.adaptive()) {
    throw std::invalid_argument("fixed_sequence: adaptive designs have no fixed sequence");
  }
  if (design.procedure == SequenceProcedure::PermutedBlock) {
    return permuted_block_sequence(n_total, design.ratio0, design.ratio1,
                                   design.block_size, rng);
  }
  return random_allocation_sequence(target_counts(n_total, design.ratio0, design.ratio1),
                                    rng);
}

void AssignmentState::add(int arm, double outcome) {
  n[arm] += 1;
  sum[arm] += outcome;
  const double delta = outcome - mean[arm];
  mean[arm] += delta / static_cast<double>(n[arm]);
  ssd[arm] += delta * (outcome - mean[arm]);
}

double AssignmentState::sample_sd(int arm) const {
  if (n[arm] < 2) throw std::invalid_argument("sample_sd: arm needs at least 2 outcomes");
  return std::sqrt(ssd[arm] / static_cast<double>(n[arm] - 1));
}

double erade_probability(double rho, double f, double gamma) {
  if (f > rho) return gamma * rho;
  if (f < rho) return 1.0 - gamma * (1.0 - rho);
  return rho;
}

double estimate_target_rho(const AssignmentState& state, Estimator estimator) {
  if (state.n[0] < 2 || state.n[1] < 2) {
    throw std::invalid_argument("estimate_target: both arms need at least 2 outcomes");
  }
  double sd0, sd1;
  if (state.kind == EndpointKind::Binary) {
    double p0, p1;
    if (estimator == Estimator::Shrunk) {
      p0 = (state.sum[0] + 0.5) / (static_cast<double>(state.n[0]) + 1.0);
      p1 = (state.sum[1] + 0.5) / (static_cast<double>(state.n[1]) + 1.0);
    } else {
      p0 = state.sum[0] / static_cast<double>(state.n[0]);
      p1 = state.sum[1] / static_cast<double>(state.n[1]);
    }
    sd0 = std::sqrt(p0 * (1.0 - p0));
    sd1 = std::sqrt(p1 * (1.0 - p1));
  } else {
    sd0 = state.sample_sd(0);
    sd1 = state.sample_sd(1);
    if (sd0 == 0.0) sd0 = 1e-12 * std::max(1.0, std::fabs(state.mean[0]));
    if (sd1 == 0.0) sd1 = 1e-12 * std::max(1.0, std::fabs(state.mean[1]));
  }
  if (sd0 + sd1 == 0.0) return 0.5;
  return sd1 / (sd0 + sd1);
}

AllocationTarget estimate_target(const AssignmentState& state) {
  return {estimate_target_rho(state, Estimator::Shrunk)};
}

double rar_next_probability(const AssignmentState& state, const DesignSpec& design,
                            int n_total) {
  const long long t = state.total();
  if (t < design.burn_in) {
    // 1:1 permuted blocks of two: a fresh pair is a coin flip, an open pair
    // forces the complement of its first assignment.
    if (t % 2 == 0) return 0.5;
    const long long first_of_pair = state.n[1] - (t - 1) / 2;
    return first_of_pair == 1 ? 0.0 : 1.0;
  }
  if (t == 0) throw std::invalid_argument("rar_next_probability: adaptation requires data");
  const double rho = estimate_target_rho(state, design.estimator);
  const double f = static_cast<double>(state.n[1]) / static_cast<double>(t);
  double prob = erade_probability(rho, f, design.gamma);
  // A raw estimate can collapse the rule to 0 or 1; pull back one patient's
  // worth so neither arm is ever frozen out. Shrunk estimates never hit this.
  const double floor = 1.0 / static_cast<double>(n_total);
  if (prob <= 0.0) prob = floor;
  if (prob >= 1.0) prob = 1.0 - floor;
  return prob;
}

}
