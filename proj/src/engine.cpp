#include "allocsim/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "allocsim/errors.hpp"

namespace allocsim {

void ScenarioConfig::validate() const {
  if (replications < 1) throw ConfigError("replications must be ≥ 1");
  if (n_total < 2) throw ConfigError("n_total must be >= 2");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must be in (0,1)");
  if (designs.empty()) throw ConfigError("designs must not be empty");
  if (arms_alt.kind() != endpoint || arms_null.kind() != endpoint) {
    throw ConfigError("arms must match the configured endpoint kind");
  }
  for (const DesignSpec& d : designs) d.validate(n_total, endpoint);
}

TrialRecord run_trial(const DesignSpec& design, const ArmPair& arms, int n_total,
                      double alpha, Xoshiro256pp& rng, int design_index) {
  const EndpointKind kind = arms.kind();
  AssignmentState state(kind);

  if (design.adaptive()) {
    for (int t = 0; t < n_total; ++t) {
      const double prob = rar_next_probability(state, design, n_total);
      const int arm = rng.bernoulli(prob) ? 1 : 0;
      state.add(arm, arms.arm(arm).sample(rng));
    }
  } else {
    const std::vector<std::uint8_t> seq = fixed_sequence(n_total, design, rng);
    for (int t = 0; t < n_total; ++t) {
      const int arm = seq[t];
      state.add(arm, arms.arm(arm).sample(rng));
    }
  }

  TestOutcome test =
      kind == EndpointKind::Binary
          ? wald_binary(state.n[0], std::llround(state.sum[0]), state.n[1],
                        std::llround(state.sum[1]), alpha)
          : wald_continuous(state.n[0], state.mean[0], state.ssd[0], state.n[1],
                            state.mean[1], state.ssd[1], alpha);

  return {design_index, state.n[0], state.n[1], test, state.outcome_total()};
}

namespace {

struct BlockTotals {
  long long rejections = 0;
  double sum_prop = 0.0;
  double sum_outcome = 0.0;
};

// One design x hypothesis cell. Replications are split into fixed-size blocks
// handed out through an atomic counter; each block accumulates locally and
// the partials are reduced in block order afterwards, so the floating-point
// sums cannot depend on how many workers ran.
BlockTotals simulate_cell(const ScenarioConfig& cfg, int design_index, bool alternative,
                          int threads) {
  constexpr long long kBlock = 4096;
  const long long r = cfg.replications;
  const long long nblocks = (r + kBlock - 1) / kBlock;
  const ArmPair& arms = alternative ? cfg.arms_alt : cfg.arms_null;
  const DesignSpec& design = cfg.designs[design_index];
  const std::uint64_t hyp = alternative ? 1 : 0;

  std::vector<BlockTotals> blocks(nblocks);
  std::atomic<long long> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    try {
      for (;;) {
        const long long b = next.fetch_add(1, std::memory_order_relaxed);
        if (b >= nblocks || failed.load(std::memory_order_relaxed)) return;
        BlockTotals acc;
        const long long lo = b * kBlock;
        const long long hi = std::min(r, lo + kBlock);
        for (long long k = lo; k < hi; ++k) {
          Xoshiro256pp rng(derive_seed(cfg.master_seed, design_index, hyp,
                                       static_cast<std::uint64_t>(k)));
          const TrialRecord rec =
              run_trial(design, arms, cfg.n_total, cfg.alpha, rng, design_index);
          acc.rejections += rec.test.reject ? 1 : 0;
          acc.sum_prop += static_cast<double>(rec.n1) / cfg.n_total;
          acc.sum_outcome += rec.outcome_total;
        }
        blocks[b] = acc;
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
      failed.store(true, std::memory_order_relaxed);
    }
  };

  int width = threads;
  if (width <= 0) width = static_cast<int>(std::thread::hardware_concurrency());
  if (width < 1) width = 1;
  if (static_cast<long long>(width) > nblocks) width = static_cast<int>(nblocks);

  std::vector<std::thread> pool;
  pool.reserve(width - 1);
  for (int i = 1; i < width; ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& th : pool) th.join();
  if (error) std::rethrow_exception(error);

  BlockTotals total;
  for (const BlockTotals& b : blocks) {
    total.rejections += b.rejections;
    total.sum_prop += b.sum_prop;
    total.sum_outcome += b.sum_outcome;
  }
  return total;
}

MetricsSummary summarize_cell(const ScenarioConfig& cfg, int design_index,
                              bool alternative, int threads) {
  const BlockTotals t = simulate_cell(cfg, design_index, alternative, threads);
  const double n = static_cast<double>(cfg.replications);
  const double rate = static_cast<double>(t.rejections) / n;
  const double mcse = std::sqrt(rate * (1.0 - rate) / n);
  const double mean_outcome = cfg.endpoint == EndpointKind::Binary
                                  ? t.sum_outcome / n
                                  : t.sum_outcome / n / cfg.n_total;
  const bool inflated =
      !alternative && rate > cfg.alpha + std::max(0.006, 4.0 * mcse);
  return {cfg.designs[design_index].label(),
          alternative,
          rate,
          mcse,
          t.sum_prop / n,
          mean_outcome,
          cfg.replications,
          inflated};
}

}  // namespace

std::vector<MetricsSummary> run_monte_carlo(const ScenarioConfig& config, int threads) {
  config.validate();
  std::vector<MetricsSummary> out;
  out.reserve(config.designs.size() * 2);
  for (size_t d = 0; d < config.designs.size(); ++d) {
    out.push_back(summarize_cell(config, static_cast<int>(d), false, threads));
    out.push_back(summarize_cell(config, static_cast<int>(d), true, threads));
  }
  return out;
}

std::vector<PowerScanRow> power_scan(const ScenarioConfig& config,
                                     const std::vector<std::pair<int, int>>& ratios,
                                     int threads) {
  if (ratios.empty()) throw ConfigError("ratio list must not be empty");
  ScenarioConfig scan = config;
  scan.designs.clear();
  for (const auto& [r0, r1] : ratios) scan.designs.push_back(DesignSpec::fur(r0, r1));
  scan.validate();

  std::vector<PowerScanRow> out;
  out.reserve(ratios.size());
  for (size_t i = 0; i < ratios.size(); ++i) {
    const MetricsSummary m = summarize_cell(scan, static_cast<int>(i), true, threads);
    out.push_back({ratios[i].first, ratios[i].second, m.rejection_rate,
                   m.rejection_mcse, m.mean_outcome});
  }
  return out;
}

double analytic_expected_outcome(const ArmPair& arms, long long n0, long long n1) {
  const double total = static_cast<double>(n0) * arms.control.true_mean() +
                       static_cast<double>(n1) * arms.treatment.true_mean();
  if (arms.kind() == EndpointKind::Binary) return total;
  return total / static_cast<double>(n0 + n1);
}

}
