#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "bandit/harness.hpp"
#include "doctest.h"

using namespace bandit;

namespace {

BanditInstance fivearm() {
  return make_instance({{1.0, 0.05}, {1.5, 0.1}, {2.0, 0.2}, {4.0, 4.0}, {5.0, 0.5}});
}

TradeoffParams params(double w, double eta = 1.0, double lambda_min = 0.0) {
  TradeoffParams p;
  p.w = w;
  p.eta = eta;
  p.lambda_min = lambda_min;
  return p;
}

}  // namespace

TEST_CASE("uniform policy realizes the uniform allocation") {
  const BanditInstance inst = make_instance({{1.0, 1.0}, {2.0, 1.0}});
  std::vector<long long> cps = {10};
  const EpisodeTrace tr =
      run_episode(PolicyKind::Uniform, inst, params(0.5), {}, 10, 1, cps);
  CHECK(tr.lambda_tilde.at(10) == Allocation{0.5, 0.5});
}

TEST_CASE("trace invariants: counts match stats, checkpoints are exact ratios") {
  const BanditInstance inst = fivearm();
  const auto cps = checkpoint_grid({}, 500, inst.size());
  const EpisodeTrace tr =
      run_episode(PolicyKind::ForcingBalance, inst, params(0.9), {}, 500, 7, cps);
  REQUIRE(tr.pulled.size() == 500);
  std::vector<long long> counts(inst.size(), 0);
  long long next = 0;
  auto it = tr.lambda_tilde.begin();
  for (long long t = 1; t <= 500; ++t) {
    ++counts[tr.pulled[t - 1]];
    if (it != tr.lambda_tilde.end() && it->first == t) {
      for (int i = 0; i < inst.size(); ++i)
        REQUIRE(it->second[i] == static_cast<double>(counts[i]) / t);  // exact
      ++it;
      ++next;
    }
  }
  CHECK(next == static_cast<long long>(cps.size()));
  for (int i = 0; i < inst.size(); ++i) CHECK(counts[i] == tr.final_stats.count(i));
}

TEST_CASE("same (policy, instance, horizon, seed) gives identical traces") {
  const BanditInstance inst = fivearm();
  const auto cps = checkpoint_grid({}, 1000, inst.size());
  for (PolicyKind kind : {PolicyKind::ForcingBalance, PolicyKind::ForcingBalanceNoTrack,
                          PolicyKind::NaiveUcb, PolicyKind::Ucb1}) {
    const EpisodeTrace a = run_episode(kind, inst, params(0.9), {}, 1000, 3, cps);
    const EpisodeTrace b = run_episode(kind, inst, params(0.9), {}, 1000, 3, cps);
    REQUIRE(a.pulled == b.pulled);
    REQUIRE(a.lambda_tilde == b.lambda_tilde);
    REQUIRE(a.lambda_hat == b.lambda_hat);
  }
}

TEST_CASE("forcing-phase uniformity up to n0 (Lemma-7 forcing variant)") {
  const BanditInstance inst = fivearm();
  PolicyOptions opts;
  opts.forcing_plus_one = true;
  const int k = inst.size();
  const double n0 = k * (k + std::sqrt(static_cast<double>(k)) + 1.0);
  const long long n0c = static_cast<long long>(std::ceil(n0));
  CheckpointSpec all;
  all.kind = CheckpointSpec::Kind::All;
  const auto cps = checkpoint_grid(all, n0c, k);
  const EpisodeTrace tr =
      run_episode(PolicyKind::ForcingBalance, inst, params(0.9), opts, n0c, 11, cps);
  for (const auto& [t, lam] : tr.lambda_tilde) {
    const double slack = 1.0 / t + (k - 1.0) / (k * static_cast<double>(t));
    for (int i = 0; i < k; ++i)
      REQUIRE(std::fabs(lam[i] - 1.0 / k) <= slack + 1e-12);
  }
}

TEST_CASE("forcing-phase uniformity under the default rule (pure-forcing prefix)") {
  // Under the Fig.-2 test the pure-forcing phase can end before the worst-case
  // n0; the allocation is uniform (with round-robin slack) throughout it.
  const BanditInstance inst = fivearm();
  const int k = inst.size();
  const long long n = 64;
  CheckpointSpec all;
  all.kind = CheckpointSpec::Kind::All;
  const auto cps = checkpoint_grid(all, n, k);
  const EpisodeTrace tr =
      run_episode(PolicyKind::ForcingBalance, inst, params(0.9), {}, n, 13, cps);
  std::vector<long long> counts(k, 0);
  long long prefix_end = n;
  for (long long t = 1; t <= n; ++t) {
    long long mn = counts[0];
    for (long long c : counts) mn = std::min(mn, c);
    if (static_cast<double>(mn) >= std::sqrt(static_cast<double>(t))) {
      prefix_end = t - 1;  // first tracking decision happens at t
      break;
    }
    ++counts[tr.pulled[t - 1]];
  }
  CHECK(prefix_end >= 2LL * k);  // the prefix is not trivial
  // Round-robin keeps every component within 1/n of uniform.
  for (const auto& [t, lam] : tr.lambda_tilde) {
    if (t > prefix_end) break;
    for (int i = 0; i < k; ++i)
      REQUIRE(std::fabs(lam[i] - 1.0 / k) <= 1.0 / t + 1e-12);
  }
}

TEST_CASE("regret: zero at the optimum, oracle cross-check, smoothness cap") {
  const BanditInstance inst = fivearm();
  const TradeoffParams p = params(0.9);
  const SolveReport sol = solve_allocation(inst, p);
  CHECK(std::fabs(regret(sol.allocation, inst, p)) <= 1e-10);

  const Allocation unif(5, 0.2);
  const double r_unif = regret(unif, inst, p);
  CHECK(r_unif > 0.0);
  // Independent f* from a grid scan over a K=3 slice is impossible at K=5;
  // instead cross-check the uniform-regret value against direct evaluation.
  CHECK(r_unif ==
        doctest::Approx(sol.objective_value - eval_f(unif, inst, p)).epsilon(1e-12));

  // K=3 instance: f* from the grid oracle within 1e-4 of the solver's.
  const BanditInstance small = make_instance({{1.0, 0.3}, {2.0, 1.0}, {0.5, 2.0}});
  const TradeoffParams q = params(0.6);
  const Allocation grid = brute_force_allocation(small, q, 500);
  const SolveReport ssol = solve_allocation(small, q);
  CHECK(std::fabs(ssol.objective_value - eval_f(grid, small, q)) <= 1e-4);

  // Lemma 4: regret <= (3 beta / 2) ||lam - lam*||^2 when lambda_min > 0.
  const TradeoffParams pr = params(0.6, 1.0, 0.05);
  const SolveReport rsol = solve_allocation(small, pr);
  const ConcavityConstants c = concavity_constants(small, pr);
  RngStream rng(17, 3);
  for (int rep = 0; rep < 500; ++rep) {
    Allocation lam(3);
    double tot = 0.0;
    for (auto& v : lam) {
      v = -std::log(rng.next_uniform_pos());
      tot += v;
    }
    const double free_mass = 1.0 - 3 * pr.lambda_min;
    double l2 = 0.0;
    for (int i = 0; i < 3; ++i) {
      lam[i] = pr.lambda_min + free_mass * lam[i] / tot;
      const double d = lam[i] - rsol.allocation[i];
      l2 += d * d;
    }
    REQUIRE(regret(lam, small, pr, rsol.objective_value) <=
            1.5 * c.beta * l2 + 1e-9);
    REQUIRE(regret(lam, small, pr, rsol.objective_value) >= -1e-9);
  }
}

TEST_CASE("rank metrics: pinned examples") {
  // Monotone transform preserves the ranking exactly.
  const RankMetrics same = rank_metrics({2.0, 4.0, 6.0}, {1.0, 2.0, 3.0});
  CHECK(same.rel_dcg == doctest::Approx(0.0));
  CHECK(same.rank_err == doctest::Approx(0.0));

  const RankMetrics swap = rank_metrics({1.0, 2.0}, {2.0, 1.0});
  CHECK(swap.rank_err == doctest::Approx(1.0));
  const double dcg_star = 2.0 / std::log(2.0) + 1.0 / std::log(3.0);
  const double dcg_hat = 1.0 / std::log(2.0) + 2.0 / std::log(3.0);
  CHECK(swap.rel_dcg == doctest::Approx((dcg_star - dcg_hat) / dcg_star).epsilon(1e-12));

  // Full reversal on K=3 equally spaced means: (2+0+2)/3.
  const RankMetrics rev = rank_metrics({1.0, 2.0, 3.0}, {3.0, 2.0, 1.0});
  CHECK(rev.rank_err == doctest::Approx(4.0 / 3.0).epsilon(1e-12));

  CHECK_THROWS_AS(rank_metrics({1.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("aggregate: single trace, constant dispersion, quantile convention") {
  const BanditInstance inst = make_instance({{1.0, 0.5}, {2.0, 1.0}});
  const TradeoffParams p = params(0.6);
  const auto cps = checkpoint_grid({}, 200, inst.size());
  std::vector<EpisodeTrace> one = {
      run_episode(PolicyKind::ForcingBalance, inst, p, {}, 200, 5, cps)};
  const AggregateResult agg = aggregate(one, inst, p);
  CHECK(agg.rescaled_regret.runs == 1);
  for (size_t c = 0; c < agg.steps.size(); ++c) {
    CHECK(agg.rescaled_regret.mean[c] ==
          doctest::Approx(agg.rescaled_regret.q95[c]));  // q95 of one value
    const Allocation& tilde = one[0].lambda_tilde.at(agg.steps[c]);
    const double expect =
        std::sqrt(static_cast<double>(agg.steps[c])) *
        regret(tilde, inst, p, agg.optimum.objective_value);
    CHECK(agg.rescaled_regret.mean[c] == doctest::Approx(expect).epsilon(1e-12));
  }

  // 50 identical seeds -> zero dispersion.
  std::vector<EpisodeTrace> many(50, one[0]);
  const AggregateResult flat = aggregate(many, inst, p);
  for (size_t c = 0; c < flat.steps.size(); ++c)
    CHECK(flat.rescaled_regret.q95[c] ==
          doctest::Approx(flat.rescaled_regret.mean[c]).epsilon(1e-12));

  // Nearest-rank: values 1..100 -> q95 = 95.
  std::vector<double> v(100);
  std::iota(v.begin(), v.end(), 1.0);
  CHECK(nearest_rank_quantile(v, 0.95) == doctest::Approx(95.0));
  CHECK(nearest_rank_quantile({3.0}, 0.95) == doctest::Approx(3.0));
  CHECK_THROWS_AS(aggregate({}, inst, p), std::invalid_argument);
}

TEST_CASE("common random numbers: the s-th draw of an arm depends only on (seed, arm)") {
  // Replaying the pulled sequence against fresh per-(seed, arm) streams must
  // reproduce the episode's statistics exactly, whatever the policy did.
  const BanditInstance inst = fivearm();
  const TradeoffParams p = params(0.9);
  const std::vector<long long> cps = {600};
  for (PolicyKind kind : {PolicyKind::ForcingBalance, PolicyKind::Ucb1}) {
    const EpisodeTrace tr = run_episode(kind, inst, p, {}, 600, 21, cps);
    std::vector<RngStream> streams;
    for (int i = 0; i < inst.size(); ++i) streams.emplace_back(21, i);
    EmpiricalStats replay(inst.size());
    for (int arm : tr.pulled) replay.update(arm, sample(inst.arms[arm], streams[arm]));
    for (int i = 0; i < inst.size(); ++i) {
      REQUIRE(replay.count(i) == tr.final_stats.count(i));
      REQUIRE(replay.mean(i) == tr.final_stats.mean(i));  // bit-exact
    }
  }
}

TEST_CASE("regret is nonnegative across policies and seeds") {
  const BanditInstance inst = fivearm();
  const TradeoffParams p = params(0.9);
  const auto cps = checkpoint_grid({}, 400, inst.size());
  for (PolicyKind kind :
       {PolicyKind::ForcingBalance, PolicyKind::ForcingBalanceNoTrack,
        PolicyKind::NaiveUcb, PolicyKind::Ucb1, PolicyKind::GafsError,
        PolicyKind::Uniform}) {
    for (uint64_t seed : {1ULL, 2ULL}) {
      const EpisodeTrace tr = run_episode(kind, inst, p, {}, 400, seed, cps);
      for (const auto& [t, lam] : tr.lambda_tilde)
        REQUIRE(regret(lam, inst, p) >= -1e-9);
    }
  }
}

TEST_CASE("phase diagnostics formulas") {
  const BanditInstance inst = fivearm();
  const PhaseDiagnostics d = phase_diagnostics(inst, params(0.9), 10000);
  CHECK(d.n0 == doctest::Approx(5.0 * (5.0 + std::sqrt(5.0) + 1.0)).epsilon(1e-12));
  CHECK(d.n0_ceil == 42);
  CHECK(d.lambda_star_min.has_value());
  CHECK_FALSE(d.alpha.has_value());  // lambda_min = 0 leaves beta/alpha undefined

  const PhaseDiagnostics d2 =
      phase_diagnostics(make_instance({{1.0, 1.0}, {2.0, 1.0}}), params(0.5, 0.5), 100);
  CHECK(d2.n0 == doctest::Approx(2.0 * (2.0 * 0.25 + 0.5 * std::sqrt(2.0) + 1.0)));

  TradeoffParams w1 = params(1.0);
  const PhaseDiagnostics d3 = phase_diagnostics(inst, w1, 100);
  CHECK_FALSE(d3.alpha.has_value());
  CHECK_FALSE(d3.beta.has_value());
  CHECK_FALSE(d3.n2.has_value());

  TradeoffParams full = params(0.9, 1.0, 0.001);
  const PhaseDiagnostics d4 = phase_diagnostics(inst, full, 10000);
  CHECK(d4.alpha.has_value());
  CHECK(d4.beta.has_value());
  CHECK(d4.n2.has_value());
  CHECK(*d4.n2 > 0.0);
}

TEST_CASE("checkpoint grids") {
  const auto geo = checkpoint_grid({}, 10000, 5);
  CHECK(geo.front() >= 10);
  CHECK(geo.back() == 10000);
  CHECK(geo.size() >= 45);
  CHECK(geo.size() <= 55);
  for (size_t i = 1; i < geo.size(); ++i) REQUIRE(geo[i] > geo[i - 1]);

  CheckpointSpec all;
  all.kind = CheckpointSpec::Kind::All;
  const auto dense = checkpoint_grid(all, 100, 2);
  CHECK(dense.size() == 100);
  CHECK(dense.front() == 1);

  CheckpointSpec ex;
  ex.kind = CheckpointSpec::Kind::Explicit;
  ex.steps = {50, 10, 100};
  const auto cps = checkpoint_grid(ex, 100, 2);
  CHECK(cps == std::vector<long long>{10, 50, 100});

  ex.steps = {0};
  CHECK_THROWS_AS(checkpoint_grid(ex, 100, 2), std::invalid_argument);
  ex.steps = {200};
  CHECK_THROWS_AS(checkpoint_grid(ex, 100, 2), std::invalid_argument);
}

TEST_CASE("parallel_for covers every task exactly once") {
  std::vector<int> hits(1000, 0);
  parallel_for(1000, 4, [&](int i) { hits[i]++; });
  for (int h : hits) REQUIRE(h == 1);
  std::vector<int> serial(10, 0);
  parallel_for(10, 1, [&](int i) { serial[i]++; });
  for (int h : serial) REQUIRE(h == 1);
}

TEST_CASE("convergence smoke: allocation error shrinks with n (3 seeds)") {
  const BanditInstance inst = fivearm();
  const TradeoffParams p = params(0.9);
  const SolveReport sol = solve_allocation(inst, p);
  CheckpointSpec ex;
  ex.kind = CheckpointSpec::Kind::Explicit;
  ex.steps = {100, 1000, 5000};
  const auto cps = checkpoint_grid(ex, 5000, inst.size());
  double err100 = 0, err1000 = 0, err5000 = 0;
  const int runs = 3;
  for (int r = 0; r < runs; ++r) {
    const EpisodeTrace tr =
        run_episode(PolicyKind::ForcingBalance, inst, p, {}, 5000, 100 + r, cps);
    const auto linf = [&](const Allocation& lam) {
      double v = 0;
      for (int i = 0; i < 5; ++i) v = std::max(v, std::fabs(lam[i] - sol.allocation[i]));
      return v;
    };
    err100 += linf(tr.lambda_tilde.at(100)) / runs;
    err1000 += linf(tr.lambda_tilde.at(1000)) / runs;
    err5000 += linf(tr.lambda_tilde.at(5000)) / runs;
  }
  CHECK(err5000 < err1000);
  CHECK(err1000 < err100);
}
