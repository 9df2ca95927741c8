#include "bandit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace bandit {

std::vector<long long> checkpoint_grid(const CheckpointSpec& spec, long long horizon,
                                       int num_arms) {
  if (horizon < 1) throw std::invalid_argument("checkpoints: horizon must be >= 1");
  std::vector<long long> steps;
  switch (spec.kind) {
    case CheckpointSpec::Kind::All:
      steps.resize(horizon);
      std::iota(steps.begin(), steps.end(), 1);
      return steps;
    case CheckpointSpec::Kind::Explicit:
      steps = spec.steps;
      break;
    case CheckpointSpec::Kind::Geometric: {
      const long long lo = std::min<long long>(horizon, std::max(2LL * num_arms, 10LL));
      const int count = std::max(spec.count, 2);
      for (int i = 0; i < count; ++i) {
        const double frac = static_cast<double>(i) / (count - 1);
        steps.push_back(static_cast<long long>(
            std::llround(lo * std::pow(static_cast<double>(horizon) / lo, frac))));
      }
      break;
    }
  }
  steps.push_back(horizon);
  std::sort(steps.begin(), steps.end());
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
  if (steps.front() < 1 || steps.back() > horizon)
    throw std::invalid_argument("checkpoints: steps must lie in [1, horizon]");
  return steps;
}

EpisodeTrace run_episode(PolicyKind kind, const BanditInstance& inst,
                         const TradeoffParams& p, const PolicyOptions& opts,
                         long long horizon, uint64_t seed,
                         const std::vector<long long>& checkpoints) {
  if (horizon < 1) throw std::invalid_argument("episode: horizon must be >= 1");
  const int k = inst.size();
  PolicyState state(kind, k, p, opts);

  std::vector<RngStream> arm_rng;
  arm_rng.reserve(k);
  for (int i = 0; i < k; ++i) arm_rng.emplace_back(seed, static_cast<uint64_t>(i));
  RngStream policy_rng(seed, static_cast<uint64_t>(k));

  EpisodeTrace trace;
  trace.seed = seed;
  trace.pulled.reserve(horizon);

  size_t next_cp = 0;
  for (long long t = 1; t <= horizon; ++t) {
    const int arm = policy_step(state, t, &policy_rng);
    const double x = sample(inst.arms[arm], arm_rng[arm]);
    policy_observe(state, arm, x);
    trace.pulled.push_back(arm);
    if (next_cp < checkpoints.size() && checkpoints[next_cp] == t) {
      Allocation tilde(k);
      for (int i = 0; i < k; ++i)
        tilde[i] = static_cast<double>(state.stats.count(i)) / t;
      trace.lambda_tilde.emplace(t, std::move(tilde));
      trace.lambda_hat.emplace(t, policy_target_allocation(state));
      ++next_cp;
    }
  }
  trace.final_stats = state.stats;
  trace.fallback_count = state.fallback_count;
  return trace;
}

double regret(const Allocation& lam, const BanditInstance& inst,
              const TradeoffParams& p, double f_star) {
  return f_star - eval_f(lam, inst, p);
}

double regret(const Allocation& lam, const BanditInstance& inst,
              const TradeoffParams& p) {
  return regret(lam, inst, p, solve_allocation(inst, p).objective_value);
}

namespace {

// Ranking permutation: pi[k] = arm sitting at position k when sorting the
// given values descending, ties to the lowest index.
std::vector<int> ranking(const std::vector<double>& values) {
  std::vector<int> pi(values.size());
  std::iota(pi.begin(), pi.end(), 0);
  std::stable_sort(pi.begin(), pi.end(),
                   [&](int a, int b) { return values[a] > values[b]; });
  return pi;
}

}  // namespace

RankMetrics rank_metrics(const std::vector<double>& mu_hat,
                         const std::vector<double>& mu) {
  if (mu_hat.size() != mu.size())
    throw std::invalid_argument("rank_metrics: length mismatch");
  const int k = static_cast<int>(mu.size());
  const std::vector<int> pi_star = ranking(mu);
  const std::vector<int> pi_hat = ranking(mu_hat);

  double dcg_star = 0.0, dcg_hat = 0.0, err = 0.0;
  for (int pos = 0; pos < k; ++pos) {
    const double discount = std::log(static_cast<double>(pos) + 2.0);  // log(k+1), 1-based
    dcg_star += mu[pi_star[pos]] / discount;
    dcg_hat += mu[pi_hat[pos]] / discount;
    err += std::fabs(static_cast<double>(pi_star[pos] - pi_hat[pos]));
  }
  RankMetrics r;
  r.rel_dcg = (dcg_star - dcg_hat) / dcg_star;
  r.rank_err = err / k;
  return r;
}

double nearest_rank_quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile: empty sample");
  std::sort(values.begin(), values.end());
  const size_t n = values.size();
  size_t rank = static_cast<size_t>(std::ceil(q * n));
  if (rank < 1) rank = 1;
  if (rank > n) rank = n;
  return values[rank - 1];
}

AggregateResult aggregate(const std::vector<EpisodeTrace>& traces,
                          const BanditInstance& inst, const TradeoffParams& p) {
  if (traces.empty()) throw std::invalid_argument("aggregate: no traces");
  const int k = inst.size();
  AggregateResult out;
  out.optimum = solve_allocation(inst, p);
  const double f_star = out.optimum.objective_value;
  const Allocation& star = out.optimum.allocation;

  for (const auto& [step, lam] : traces.front().lambda_tilde)
    out.steps.push_back(step);
  const size_t n_cp = out.steps.size();
  const int runs = static_cast<int>(traces.size());

  const auto linf = [&](const Allocation& a) {
    double v = 0.0;
    for (int i = 0; i < k; ++i) v = std::max(v, std::fabs(a[i] - star[i]));
    return v;
  };

  // [checkpoint][run] sample tables for the quantile curves.
  std::vector<std::vector<double>> sr(n_cp, std::vector<double>(runs)), el = sr,
                                   eh = sr, rh = sr, ep = sr;
  out.lambda_tilde_mean.assign(n_cp, std::vector<double>(k, 0.0));
  out.lambda_hat_mean.assign(n_cp, std::vector<double>(k, 0.0));

  for (int r = 0; r < runs; ++r) {
    const EpisodeTrace& tr = traces[r];
    if (tr.lambda_tilde.size() != n_cp)
      throw std::invalid_argument("aggregate: traces have mismatched checkpoints");
    size_t c = 0;
    auto it_hat = tr.lambda_hat.begin();
    for (const auto& [step, tilde] : tr.lambda_tilde) {
      const Allocation& hat = it_hat->second;
      const double rn = regret(tilde, inst, p, f_star);
      sr[c][r] = std::sqrt(static_cast<double>(step)) * rn;
      el[c][r] = linf(tilde);
      eh[c][r] = linf(hat);
      rh[c][r] = eval_rho(tilde, inst);
      ep[c][r] = eval_epsilon(tilde, inst);
      for (int i = 0; i < k; ++i) {
        out.lambda_tilde_mean[c][i] += tilde[i] / runs;
        out.lambda_hat_mean[c][i] += hat[i] / runs;
      }
      ++c;
      ++it_hat;
    }
  }

  const auto curve = [&](const std::vector<std::vector<double>>& table) {
    MetricCurve m;
    m.steps = out.steps;
    m.runs = runs;
    m.mean.resize(n_cp);
    m.q95.resize(n_cp);
    for (size_t c = 0; c < n_cp; ++c) {
      double s = 0.0;
      for (double v : table[c]) s += v;
      m.mean[c] = s / runs;
      m.q95[c] = nearest_rank_quantile(table[c], 0.95);
    }
    return m;
  };
  out.rescaled_regret = curve(sr);
  out.alloc_err_linf = curve(el);
  out.alloc_hat_err_linf = curve(eh);
  out.rho = curve(rh);
  out.epsilon = curve(ep);
  return out;
}

PhaseDiagnostics phase_diagnostics(const BanditInstance& inst, const TradeoffParams& p,
                                   long long horizon) {
  const int k = inst.size();
  PhaseDiagnostics d;
  d.n0 = k * (k * p.eta * p.eta + p.eta * std::sqrt(static_cast<double>(k)) + 1.0);
  d.n0_ceil = static_cast<long long>(std::ceil(d.n0));

  const auto sig = sigmas(inst);
  const double sigma_min = *std::min_element(sig.begin(), sig.end());
  if (sigma_min > 0.0 && p.w < 1.0) {
    try {
      const SolveReport rep = solve_allocation(inst, p);
      d.lambda_star_min =
          *std::min_element(rep.allocation.begin(), rep.allocation.end());
    } catch (const std::exception&) {
    }
    if (p.lambda_min > 0.0) {
      const ConcavityConstants c = concavity_constants(inst, p);
      d.alpha = c.alpha;
      d.beta = c.beta;
      if (d.lambda_star_min && *d.lambda_star_min > 0.0) {
        // Loose Theorem constant (C = 4^8), evaluated at n = horizon.
        const double dn = delta_n(p.delta, k, std::max<long long>(horizon, 1));
        const double log_term = std::log(1.0 / dn);
        d.n2 = 65536.0 / std::pow(*d.lambda_star_min, 8.0) *
               std::pow(static_cast<double>(k), 10.0) / std::pow(c.alpha, 4.0) *
               log_term * log_term / (p.lambda_min * p.lambda_min);
      }
    }
  }
  return d;
}

void parallel_for(int n_tasks, int jobs, const std::function<void(int)>& fn) {
  if (jobs <= 1 || n_tasks <= 1) {
    for (int i = 0; i < n_tasks; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  const int workers = std::min(jobs, n_tasks);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n_tasks) return;
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace bandit
