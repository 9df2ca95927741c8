#pragma once

#include <utility>
#include <vector>

#include "bandit/objective.hpp"

namespace bandit {

struct SolveReport {
  Allocation allocation;
  double objective_value = 0.0;
  double kkt_multiplier = 0.0;          // shared stationarity multiplier nu
  std::vector<int> active_floor_set;    // arms clamped at lambda_min
  int iterations = 0;
  double residual = 0.0;                // |sum-1| + max floor violation
  bool unique = true;
};

// argmax of f_w over the restricted simplex. Interior arms satisfy
//   w mu_i + (1-w) sigma_i / (2K lambda_i^{3/2}) = nu,
// i.e. lambda_i(nu) = ((1-w) sigma_i / (2K (nu - w mu_i)))^{2/3}; nu is found
// by bisection on |sum_i max(lambda_i(nu), lambda_min) - 1| <= tol. Arms with
// sigma_i = 0 sit at the floor unless they carry the top w-weighted mean, in
// which case nu = w mu_max and the arm absorbs the leftover mass.
SolveReport solve_allocation(const BanditInstance& inst, const TradeoffParams& p,
                             double tol = 1e-10);

// Exhaustive scan of the fractional grid {j/resolution} intersected with the
// restricted simplex. Independent optimum oracle; K <= 4 only.
Allocation brute_force_allocation(const BanditInstance& inst, const TradeoffParams& p,
                                  int grid_resolution);

// (rho(lambda*(w)), epsilon(lambda*(w))) for one weight.
std::pair<double, double> pareto_point(const BanditInstance& inst, double w,
                                       double lambda_min);

}  // namespace bandit
