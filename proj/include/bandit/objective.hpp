#pragma once

#include <vector>

#include "bandit/arms.hpp"

namespace bandit {

// A point on the K-simplex: lambda_i >= 0, sum = 1. The restricted simplex
// additionally enforces lambda_i >= lambda_min.
using Allocation = std::vector<double>;

void validate_allocation(const Allocation& lam, double lambda_min = 0.0,
                         double tol = 1e-12);

struct TradeoffParams {
  double w = 0.9;          // reward weight in [0, 1]
  double lambda_min = 0.0; // simplex floor, lambda_min * K <= 1
  double eta = 1.0;        // forcing strength
  double delta = 0.05;     // confidence level
};

void validate_params(const TradeoffParams& p);

// Strong-concavity / smoothness constants of the tradeoff objective on the
// restricted simplex:
//   alpha = 3(1-w) sigma_min / (4K)
//   beta  = 3(1-w) sigma_max / (4K lambda_min^{5/2})
struct ConcavityConstants {
  double alpha = 0.0;
  double beta = 0.0;
};

// rho(lambda) = sum_i lambda_i mu_i
double eval_rho(const Allocation& lam, const BanditInstance& inst);

// epsilon(lambda) = (1/K) sum_i sigma_i / sqrt(lambda_i).
// +inf when some lambda_i = 0 with sigma_i > 0; sigma_i = 0 terms vanish.
double eval_epsilon(const Allocation& lam, const BanditInstance& inst);

// f_w(lambda) = w rho - (1-w) epsilon; -inf when epsilon = +inf and w < 1.
// At w = 1 the error term is absent entirely.
double eval_f(const Allocation& lam, const BanditInstance& inst,
              const TradeoffParams& p);

// d f / d lambda_i = w mu_i + (1-w) sigma_i / (2K lambda_i^{3/2}).
// Requires lambda_i > 0 wherever sigma_i > 0.
std::vector<double> grad_f(const Allocation& lam, const BanditInstance& inst,
                           const TradeoffParams& p);

// Requires sigma_min > 0, lambda_min > 0, w < 1.
ConcavityConstants concavity_constants(const BanditInstance& inst,
                                       const TradeoffParams& p);

}  // namespace bandit
