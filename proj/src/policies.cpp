#include "bandit/policies.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bandit {

namespace {

// Empirical instance for the solver: sigma_hat in place of sigma, mu_hat in
// place of mu. Arms with fewer than two samples contribute sigma_hat = 0
// (startup transient); when lambda_min = 0 every sigma_hat is clamped below
// so the empirical objective stays non-degenerate.
BanditInstance empirical_instance(const PolicyState& st,
                                  const std::vector<double>& sigma_override = {}) {
  const int k = st.stats.num_arms();
  BanditInstance inst;
  inst.arms.resize(k);
  for (int i = 0; i < k; ++i) {
    double s = sigma_override.empty()
                   ? (st.stats.count(i) >= 2 ? st.stats.sigma(i) : 0.0)
                   : sigma_override[i];
    if (st.params.lambda_min == 0.0) s = std::max(s, st.opts.sigma_floor);
    inst.arms[i].mean = st.stats.mean(i);
    inst.arms[i].variance = s * s;
  }
  return inst;
}

// Re-solves lambda_hat if the cache is stale; returns false when the solver
// cannot produce an allocation (caller falls back to forcing).
bool refresh_lambda_hat(PolicyState& st, long long t, const BanditInstance& inst) {
  if (st.last_lambda_hat && st.last_solve_step >= 0 &&
      t - st.last_solve_step < st.opts.recompute_every)
    return true;
  try {
    SolveReport rep = solve_allocation(inst, st.params);
    st.last_lambda_hat = std::move(rep.allocation);
    st.last_solve_step = t;
    return true;
  } catch (const std::exception&) {
    ++st.fallback_count;
    return false;
  }
}

int round_robin(long long t, int k) { return static_cast<int>((t - 1) % k); }

void check_step(const PolicyState& st, long long t) {
  if (t < 1) throw std::invalid_argument("policy: t must be >= 1");
  if (st.stats.step() != t - 1)
    throw std::logic_error("policy: stats out of sync with step index");
}

}  // namespace

PolicyState::PolicyState(PolicyKind kind_, int num_arms, TradeoffParams params_,
                         PolicyOptions opts_)
    : kind(kind_), params(params_), opts(opts_), stats(num_arms) {
  validate_params(params);
  if (num_arms < 2) throw std::invalid_argument("policy: K must be >= 2");
}

std::string policy_name(PolicyKind k) {
  switch (k) {
    case PolicyKind::ForcingBalance: return "forcing_balance";
    case PolicyKind::ForcingBalanceNoTrack: return "forcing_balance_no_track";
    case PolicyKind::NaiveUcb: return "naive_ucb";
    case PolicyKind::Ucb1: return "ucb1";
    case PolicyKind::GafsError: return "gafs_error";
    case PolicyKind::Uniform: return "uniform";
  }
  return "?";
}

PolicyKind policy_from_name(const std::string& name) {
  if (name == "forcing_balance") return PolicyKind::ForcingBalance;
  if (name == "forcing_balance_no_track") return PolicyKind::ForcingBalanceNoTrack;
  if (name == "naive_ucb") return PolicyKind::NaiveUcb;
  if (name == "ucb1") return PolicyKind::Ucb1;
  if (name == "gafs_error") return PolicyKind::GafsError;
  if (name == "uniform") return PolicyKind::Uniform;
  throw std::invalid_argument("unknown policy: " + name);
}

int tracking_argmax(const Allocation& lambda_hat,
                    const std::vector<long long>& counts, long long t) {
  int best = 0;
  double best_deficit = lambda_hat[0] - static_cast<double>(counts[0]) / t;
  for (size_t i = 1; i < lambda_hat.size(); ++i) {
    const double d = lambda_hat[i] - static_cast<double>(counts[i]) / t;
    if (d > best_deficit) {
      best_deficit = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

namespace {
int argmin_count(const EmpiricalStats& stats) {
  int u = 0;
  for (int i = 1; i < stats.num_arms(); ++i)
    if (stats.count(i) < stats.count(u)) u = i;
  return u;
}
}  // namespace

int forced_arm(const EmpiricalStats& stats, long long t, double eta, bool plus_one) {
  const int u = argmin_count(stats);
  const double threshold = eta * std::sqrt(static_cast<double>(t)) + (plus_one ? 1.0 : 0.0);
  return static_cast<double>(stats.count(u)) < threshold ? u : -1;
}

int forcing_balance_step(PolicyState& st, long long t) {
  check_step(st, t);
  const int u = forced_arm(st.stats, t, st.params.eta, st.opts.forcing_plus_one);
  if (u >= 0) return u;
  if (!refresh_lambda_hat(st, t, empirical_instance(st)))
    return argmin_count(st.stats);  // degenerate solve: keep forcing
  return tracking_argmax(*st.last_lambda_hat, st.stats.counts(), t);
}

int forcing_balance_no_track_step(PolicyState& st, long long t, RngStream& rng) {
  check_step(st, t);
  const int u = forced_arm(st.stats, t, st.params.eta, st.opts.forcing_plus_one);
  if (u >= 0) return u;
  if (!refresh_lambda_hat(st, t, empirical_instance(st)))
    return argmin_count(st.stats);
  const Allocation& lam = *st.last_lambda_hat;
  const double x = rng.next_uniform();
  double cum = 0.0;
  for (size_t i = 0; i < lam.size(); ++i) {
    cum += lam[i];
    if (x < cum) return static_cast<int>(i);
  }
  return st.stats.num_arms() - 1;
}

int naive_ucb_step(PolicyState& st, long long t) {
  check_step(st, t);
  const int k = st.stats.num_arms();
  if (t <= 2LL * k) return round_robin(t, k);  // two passes so sigma_hat exists

  if (st.last_lambda_hat && st.last_solve_step >= 0 &&
      t - st.last_solve_step < st.opts.recompute_every)
    return tracking_argmax(*st.last_lambda_hat, st.stats.counts(), t);

  // Optimistic means, pessimistic deviations floored at 0.01.
  BanditInstance inst;
  inst.arms.resize(k);
  for (int i = 0; i < k; ++i) {
    const ConfidenceRadii r = confidence_radii(st.stats, i, st.params, t, st.opts.schedule);
    const double sig = st.stats.count(i) >= 2 ? st.stats.sigma(i) : 0.0;
    inst.arms[i].mean = st.stats.mean(i) + r.eps_mu;
    const double lb = std::max(sig - r.eps_sigma, 0.01);
    inst.arms[i].variance = lb * lb;
  }
  try {
    SolveReport rep = solve_allocation(inst, st.params);
    st.last_lambda_hat = std::move(rep.allocation);
    st.last_solve_step = t;
  } catch (const std::exception&) {
    ++st.fallback_count;
    return argmin_count(st.stats);
  }
  return tracking_argmax(*st.last_lambda_hat, st.stats.counts(), t);
}

int baseline_step(PolicyState& st, long long t) {
  check_step(st, t);
  const int k = st.stats.num_arms();
  switch (st.kind) {
    case PolicyKind::Uniform:
      return round_robin(t, k);

    case PolicyKind::Ucb1: {
      if (t <= k) return round_robin(t, k);
      int best = 0;
      double best_idx = -std::numeric_limits<double>::infinity();
      for (int i = 0; i < k; ++i) {
        const double idx =
            st.stats.mean(i) +
            std::sqrt(2.0 * std::log(static_cast<double>(t)) / st.stats.count(i));
        if (idx > best_idx) {
          best_idx = idx;
          best = i;
        }
      }
      return best;
    }

    case PolicyKind::GafsError: {
      const int u = forced_arm(st.stats, t, st.params.eta, st.opts.forcing_plus_one);
      if (u >= 0) return u;
      // Track the w = 0 optimum: allocations proportional to sigma_hat^{2/3}.
      Allocation target(k, 1.0 / k);
      double total = 0.0;
      std::vector<double> v(k);
      for (int i = 0; i < k; ++i) {
        const double sig = st.stats.count(i) >= 2 ? st.stats.sigma(i) : 0.0;
        v[i] = std::cbrt(sig * sig);
        total += v[i];
      }
      if (total > 0.0)
        for (int i = 0; i < k; ++i) target[i] = v[i] / total;
      st.last_lambda_hat = target;
      st.last_solve_step = t;
      return tracking_argmax(target, st.stats.counts(), t);
    }

    default:
      throw std::invalid_argument("baseline_step: not a baseline policy");
  }
}

int policy_step(PolicyState& st, long long t, RngStream* rng) {
  switch (st.kind) {
    case PolicyKind::ForcingBalance:
      return forcing_balance_step(st, t);
    case PolicyKind::ForcingBalanceNoTrack:
      if (rng == nullptr)
        throw std::invalid_argument("policy: no-track variant needs an rng stream");
      return forcing_balance_no_track_step(st, t, *rng);
    case PolicyKind::NaiveUcb:
      return naive_ucb_step(st, t);
    default:
      return baseline_step(st, t);
  }
}

void policy_observe(PolicyState& st, int arm, double x) { st.stats.update(arm, x); }

Allocation policy_target_allocation(const PolicyState& st) {
  if (st.last_lambda_hat) return *st.last_lambda_hat;
  return Allocation(st.stats.num_arms(), 1.0 / st.stats.num_arms());
}

}  // namespace bandit
