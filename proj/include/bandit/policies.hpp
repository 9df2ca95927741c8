#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bandit/estimation.hpp"
#include "bandit/rng.hpp"
#include "bandit/solver.hpp"

namespace bandit {

enum class PolicyKind {
  ForcingBalance,
  ForcingBalanceNoTrack,
  NaiveUcb,
  Ucb1,
  GafsError,
  Uniform,
};

std::string policy_name(PolicyKind k);
PolicyKind policy_from_name(const std::string& name);

struct PolicyOptions {
  int recompute_every = 1;       // re-solve lambda_hat every m tracking steps
  bool forcing_plus_one = false; // use the T < eta*sqrt(t) + 1 forcing test
  DeltaSchedule schedule = DeltaSchedule::PerStep;
  double sigma_floor = 1e-12;    // empirical-sigma clamp when lambda_min = 0
};

struct PolicyState {
  PolicyKind kind;
  TradeoffParams params;
  PolicyOptions opts;
  EmpiricalStats stats;
  std::optional<Allocation> last_lambda_hat;  // cached tracking target
  long long last_solve_step = -1;
  long long fallback_count = 0;  // degenerate-solver fallbacks to forcing

  PolicyState(PolicyKind kind_, int num_arms, TradeoffParams params_,
              PolicyOptions opts_ = {});
};

// argmax_i lambda_hat_i - T_i / t, ties to the lowest index.
int tracking_argmax(const Allocation& lambda_hat,
                    const std::vector<long long>& counts, long long t);

// Least-pulled arm if its count is below eta*sqrt(t) (+1 with the flag
// variant), else -1. Ties to the lowest index.
int forced_arm(const EmpiricalStats& stats, long long t, double eta,
               bool plus_one);

// Fig. 2: forcing branch, else solve f_w on the empirical instance and track.
int forcing_balance_step(PolicyState& state, long long t);

// Same forcing branch; otherwise samples I_t ~ Categorical(lambda_hat).
int forcing_balance_no_track_step(PolicyState& state, long long t, RngStream& rng);

// Optimistic means, pessimistic deviations floored at 0.01, no forcing.
// Initializes with two round-robin passes.
int naive_ucb_step(PolicyState& state, long long t);

// Ucb1 / GafsError / Uniform.
int baseline_step(PolicyState& state, long long t);

// Dispatch on state.kind; rng may be null except for ForcingBalanceNoTrack.
int policy_step(PolicyState& state, long long t, RngStream* rng);

void policy_observe(PolicyState& state, int arm, double x);

// Current tracking target (lambda_hat if one was computed, uniform before).
Allocation policy_target_allocation(const PolicyState& state);

}  // namespace bandit
