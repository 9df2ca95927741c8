#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bandit/policies.hpp"

namespace bandit {

struct EpisodeTrace {
  std::vector<int> pulled;  // arm index per step, length = horizon
  std::map<long long, Allocation> lambda_tilde;  // step -> T_i/step (exact)
  std::map<long long, Allocation> lambda_hat;    // step -> tracking target
  EmpiricalStats final_stats{1};
  uint64_t seed = 0;
  long long fallback_count = 0;
};

struct CheckpointSpec {
  enum class Kind { Geometric, All, Explicit };
  Kind kind = Kind::Geometric;
  int count = 50;
  std::vector<long long> steps;  // for Explicit
};

// Sorted unique checkpoint steps in [1, horizon]; always includes horizon.
// The geometric grid starts at max(2K, 10) so every arm has been touched.
std::vector<long long> checkpoint_grid(const CheckpointSpec& spec, long long horizon,
                                       int num_arms);

// Streams: one per (seed, arm) for rewards plus stream id K for policy
// randomness, so policies sharing a seed see common random numbers.
EpisodeTrace run_episode(PolicyKind kind, const BanditInstance& inst,
                         const TradeoffParams& p, const PolicyOptions& opts,
                         long long horizon, uint64_t seed,
                         const std::vector<long long>& checkpoints);

// Pseudo-regret f* - f_w(lambda; true parameters).
double regret(const Allocation& lam, const BanditInstance& inst,
              const TradeoffParams& p);
double regret(const Allocation& lam, const BanditInstance& inst,
              const TradeoffParams& p, double f_star);

struct RankMetrics {
  double rel_dcg = 0.0;
  double rank_err = 0.0;
};

// pi* ranks true means descending, pi_hat ranks estimates descending, ties to
// the lowest index; natural log, 1-based positions.
RankMetrics rank_metrics(const std::vector<double>& mu_hat,
                         const std::vector<double>& mu);

struct MetricCurve {
  std::vector<long long> steps;
  std::vector<double> mean;
  std::vector<double> q95;
  int runs = 0;
};

// Nearest-rank quantile: ceil(q*N)-th smallest.
double nearest_rank_quantile(std::vector<double> values, double q);

struct AggregateResult {
  std::vector<long long> steps;
  MetricCurve rescaled_regret;
  MetricCurve alloc_err_linf;      // ||lambda_tilde - lambda*||_inf
  MetricCurve alloc_hat_err_linf;  // ||lambda_hat - lambda*||_inf
  MetricCurve rho;
  MetricCurve epsilon;
  // [checkpoint][arm] run-means of lambda_tilde / lambda_hat
  std::vector<std::vector<double>> lambda_tilde_mean;
  std::vector<std::vector<double>> lambda_hat_mean;
  SolveReport optimum;
};

AggregateResult aggregate(const std::vector<EpisodeTrace>& traces,
                          const BanditInstance& inst, const TradeoffParams& p);

// Informational record; never asserted against.
struct PhaseDiagnostics {
  double n0 = 0.0;  // K (K eta^2 + eta sqrt(K) + 1)
  long long n0_ceil = 0;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> n2;  // loose Theorem constant, at n = horizon
  std::optional<double> lambda_star_min;
};

PhaseDiagnostics phase_diagnostics(const BanditInstance& inst, const TradeoffParams& p,
                                   long long horizon);

// Runs fn(0..n_tasks-1) on `jobs` threads (serial when jobs <= 1). Results
// must be written to preallocated slots; scheduling never affects output.
void parallel_for(int n_tasks, int jobs, const std::function<void(int)>& fn);

}  // namespace bandit
