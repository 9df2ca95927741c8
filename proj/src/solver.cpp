#include "bandit/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bandit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double floor_violation(const Allocation& lam, double lambda_min) {
  double v = 0.0;
  for (double x : lam) v = std::max(v, lambda_min - x);
  return std::max(v, 0.0);
}

double simplex_residual(const Allocation& lam, double lambda_min) {
  double sum = 0.0;
  for (double x : lam) sum += x;
  return std::fabs(sum - 1.0) + floor_violation(lam, lambda_min);
}

// lambda_i(nu) for an interior sigma_i > 0 arm.
inline double lambda_of(double c, double m, double nu) {
  const double r = c / (nu - m);
  const double t = std::cbrt(r);
  return t * t;
}

// Puts everything on `best`, the rest at the floor.
SolveReport corner_solution(const BanditInstance& inst, const TradeoffParams& p,
                            int best, bool unique) {
  const int k = inst.size();
  SolveReport rep;
  rep.allocation.assign(k, p.lambda_min);
  rep.allocation[best] = 1.0 - (k - 1) * p.lambda_min;
  rep.unique = unique;
  for (int i = 0; i < k; ++i)
    if (i != best) rep.active_floor_set.push_back(i);
  rep.objective_value = eval_f(rep.allocation, inst, p);
  rep.residual = simplex_residual(rep.allocation, p.lambda_min);
  return rep;
}

}  // namespace

SolveReport solve_allocation(const BanditInstance& inst, const TradeoffParams& p,
                             double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("solve: tol must be > 0");
  validate_params(p);
  const int k = inst.size();
  if (k < 2) throw std::invalid_argument("solve: K must be >= 2");
  if (p.lambda_min * k > 1.0 + 1e-12)
    throw std::invalid_argument("solve: lambda_min * K must be <= 1");

  const auto mu = means(inst);
  const auto sigma = sigmas(inst);
  const double lmin = p.lambda_min;

  // Pure reward maximization: corner on the largest mean.
  if (p.w == 1.0) {
    int best = 0;
    bool tie = false;
    for (int i = 1; i < k; ++i) {
      if (mu[i] > mu[best]) {
        best = i;
        tie = false;
      } else if (mu[i] == mu[best]) {
        tie = true;
      }
    }
    SolveReport rep = corner_solution(inst, p, best, !tie);
    rep.kkt_multiplier = mu[best];
    return rep;
  }

  std::vector<int> pos, zero;  // sigma > 0 / sigma = 0 arms
  for (int i = 0; i < k; ++i) (sigma[i] > 0.0 ? pos : zero).push_back(i);

  if (pos.empty()) {
    // All-deterministic instance: f is linear (w > 0) or constant (w = 0).
    if (p.w == 0.0) {
      SolveReport rep;
      rep.allocation.assign(k, 1.0 / k);
      rep.unique = false;
      rep.objective_value = 0.0;
      rep.residual = simplex_residual(rep.allocation, lmin);
      return rep;
    }
    int best = 0;
    bool tie = false;
    for (int i = 1; i < k; ++i) {
      if (mu[i] > mu[best]) {
        best = i;
        tie = false;
      } else if (mu[i] == mu[best]) {
        tie = true;
      }
    }
    SolveReport rep = corner_solution(inst, p, best, !tie);
    rep.kkt_multiplier = p.w * mu[best];
    return rep;
  }

  // Stationarity data for sigma > 0 arms.
  std::vector<double> c(k, 0.0), m(k, 0.0);
  double pole = -kInf;  // lambda_i(nu) diverges as nu -> pole from above
  for (int i : pos) {
    c[i] = (1.0 - p.w) * sigma[i] / (2.0 * k);
    m[i] = p.w * mu[i];
    pole = std::max(pole, m[i]);
  }
  double zmax = -kInf;
  int reservoir = -1;  // lowest-index sigma = 0 arm carrying w*mu = zmax
  int zmax_ties = 0;
  for (int i : zero) {
    const double v = p.w * mu[i];
    if (v > zmax) {
      zmax = v;
      reservoir = i;
      zmax_ties = 1;
    } else if (v == zmax) {
      ++zmax_ties;
    }
  }

  SolveReport rep;
  rep.allocation.assign(k, lmin);

  const auto mass_pos = [&](double nu) {
    double s = 0.0;
    for (int i : pos) s += std::max(lambda_of(c[i], m[i], nu), lmin);
    return s;
  };

  // A zero-variance arm strictly above every pole can absorb leftover mass at
  // nu = zmax; otherwise every zero-variance arm is floored.
  if (!zero.empty() && zmax > pole) {
    const double mp = mass_pos(zmax);
    const double leftover = 1.0 - mp - (static_cast<int>(zero.size()) - 1) * lmin;
    if (leftover >= lmin) {
      rep.kkt_multiplier = zmax;
      for (int i : pos) rep.allocation[i] = std::max(lambda_of(c[i], m[i], zmax), lmin);
      rep.allocation[reservoir] = leftover;
      rep.unique = (zmax_ties == 1);
      for (int i = 0; i < k; ++i) {
        const bool floored =
            (sigma[i] == 0.0 && i != reservoir) ||
            (sigma[i] > 0.0 && lambda_of(c[i], m[i], zmax) <= lmin);
        if (floored) rep.active_floor_set.push_back(i);
      }
      rep.objective_value = eval_f(rep.allocation, inst, p);
      rep.residual = simplex_residual(rep.allocation, lmin);
      return rep;
    }
  }

  // Bisection bracket: mass is +inf at the pole (or > 1 at zmax) and decays
  // to K*lambda_min <= 1 as nu grows.
  const double zero_floor_mass = static_cast<double>(zero.size()) * lmin;
  const double lo0 = (zmax > pole) ? zmax : pole;
  double cmax = 0.0;
  for (int i : pos) cmax = std::max(cmax, c[i]);
  double offset = cmax * std::sqrt(static_cast<double>(k)) * k;  // ~ unit-mass scale
  if (!(offset > 0.0)) offset = 1e-300;
  int iters = 0;
  while (mass_pos(lo0 + offset) + zero_floor_mass > 1.0 && iters < 2000) {
    offset *= 2.0;
    ++iters;
  }
  double lo = lo0, hi = lo0 + offset;
  const double width_eps =
      1e-16 * std::max({std::fabs(lo0), offset, 1e-300});
  double nu = hi;
  for (int it = 0; it < 400; ++it) {
    if (hi - lo <= width_eps) break;
    const double mid = 0.5 * (lo + hi);
    ++iters;
    const double s = mass_pos(mid) + zero_floor_mass;
    if (s >= 1.0) {
      lo = mid;
      if (s - 1.0 <= tol * 1e-3) {
        nu = mid;
        break;
      }
    } else {
      hi = mid;
    }
    nu = hi;
  }
  rep.kkt_multiplier = nu;
  rep.iterations = iters;

  // Clamp, then spread the residual mass over the free arms; a component that
  // slips below the floor is moved into the active set and the rest rescaled
  // (at most K passes, the active set only grows).
  std::vector<bool> floored(k, false);
  for (int i : zero) floored[i] = true;
  for (int i : pos) {
    const double v = lambda_of(c[i], m[i], nu);
    if (v <= lmin) {
      floored[i] = true;
    } else {
      rep.allocation[i] = v;
    }
  }
  for (int pass = 0; pass < k; ++pass) {
    int n_floored = 0;
    double free_sum = 0.0;
    for (int i = 0; i < k; ++i) {
      if (floored[i]) {
        ++n_floored;
      } else {
        free_sum += rep.allocation[i];
      }
    }
    if (free_sum <= 0.0) break;
    const double target = 1.0 - n_floored * lmin;
    const double scale = target / free_sum;
    bool changed = false;
    for (int i = 0; i < k; ++i) {
      if (floored[i]) {
        rep.allocation[i] = lmin;
        continue;
      }
      rep.allocation[i] *= scale;
      if (rep.allocation[i] < lmin) {
        floored[i] = true;
        rep.allocation[i] = lmin;
        changed = true;
      }
    }
    if (!changed) break;
  }
  for (int i = 0; i < k; ++i)
    if (floored[i]) rep.active_floor_set.push_back(i);

  rep.objective_value = eval_f(rep.allocation, inst, p);
  rep.residual = simplex_residual(rep.allocation, lmin);
  return rep;
}

Allocation brute_force_allocation(const BanditInstance& inst, const TradeoffParams& p,
                                  int grid_resolution) {
  validate_params(p);
  const int k = inst.size();
  if (k > 4) throw std::invalid_argument("brute force: K must be <= 4");
  if (grid_resolution < 10)
    throw std::invalid_argument("brute force: grid_resolution must be >= 10");
  const int n = grid_resolution;
  const int jmin = static_cast<int>(std::ceil(p.lambda_min * n - 1e-9));
  if (jmin * k > n)
    throw std::invalid_argument("brute force: grid too coarse for lambda_min");

  Allocation point(k), best_point;
  double best_f = -kInf;
  // Enumerate compositions j_1 + ... + j_K = n with j_i >= jmin.
  std::vector<int> j(k, jmin);
  const auto scan = [&](auto&& self, int idx, int remaining) -> void {
    if (idx == k - 1) {
      if (remaining < jmin) return;
      j[idx] = remaining;
      for (int i = 0; i < k; ++i) point[i] = static_cast<double>(j[i]) / n;
      const double f = eval_f(point, inst, p);
      if (f > best_f) {
        best_f = f;
        best_point = point;
      }
      return;
    }
    for (int v = jmin; v <= remaining - jmin * (k - 1 - idx); ++v) {
      j[idx] = v;
      self(self, idx + 1, remaining - v);
    }
  };
  scan(scan, 0, n);
  if (best_point.empty())
    throw std::logic_error("brute force: empty feasible grid");
  return best_point;
}

std::pair<double, double> pareto_point(const BanditInstance& inst, double w,
                                       double lambda_min) {
  TradeoffParams p;
  p.w = w;
  p.lambda_min = lambda_min;
  const SolveReport rep = solve_allocation(inst, p);
  return {eval_rho(rep.allocation, inst), eval_epsilon(rep.allocation, inst)};
}

}  // namespace bandit
