#include "bandit/objective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bandit {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_size(const Allocation& lam, const BanditInstance& inst) {
  if (lam.size() != inst.arms.size())
    throw std::invalid_argument("allocation/instance length mismatch");
}
}  // namespace

void validate_allocation(const Allocation& lam, double lambda_min, double tol) {
  if (lam.empty()) throw std::invalid_argument("allocation: empty");
  double sum = 0.0;
  for (double x : lam) {
    if (!std::isfinite(x)) throw std::invalid_argument("allocation: non-finite component");
    if (x < lambda_min - tol)
      throw std::invalid_argument("allocation: component below floor");
    sum += x;
  }
  if (std::fabs(sum - 1.0) > tol)
    throw std::invalid_argument("allocation: components must sum to 1");
}

void validate_params(const TradeoffParams& p) {
  if (!(p.w >= 0.0 && p.w <= 1.0)) throw std::invalid_argument("params: w must be in [0,1]");
  if (!(p.lambda_min >= 0.0 && p.lambda_min <= 1.0))
    throw std::invalid_argument("params: lambda_min must be in [0,1]");
  if (!(p.eta > 0.0)) throw std::invalid_argument("params: eta must be > 0");
  if (!(p.delta > 0.0 && p.delta < 1.0))
    throw std::invalid_argument("params: delta must be in (0,1)");
}

double eval_rho(const Allocation& lam, const BanditInstance& inst) {
  check_size(lam, inst);
  double s = 0.0;
  for (size_t i = 0; i < lam.size(); ++i) s += lam[i] * inst.arms[i].mean;
  return s;
}

double eval_epsilon(const Allocation& lam, const BanditInstance& inst) {
  check_size(lam, inst);
  const int k = inst.size();
  double s = 0.0;
  for (int i = 0; i < k; ++i) {
    const double sigma = arm_sigma(inst.arms[i]);
    if (sigma == 0.0) continue;  // no estimation needed for a deterministic arm
    if (lam[i] <= 0.0) return kInf;
    s += sigma / std::sqrt(lam[i]);
  }
  return s / k;
}

double eval_f(const Allocation& lam, const BanditInstance& inst,
              const TradeoffParams& p) {
  const double rho = eval_rho(lam, inst);
  if (p.w == 1.0) return rho;
  const double eps = eval_epsilon(lam, inst);
  if (eps == kInf) return -kInf;
  return p.w * rho - (1.0 - p.w) * eps;
}

std::vector<double> grad_f(const Allocation& lam, const BanditInstance& inst,
                           const TradeoffParams& p) {
  check_size(lam, inst);
  const int k = inst.size();
  std::vector<double> g(k);
  for (int i = 0; i < k; ++i) {
    const double sigma = arm_sigma(inst.arms[i]);
    double err_term = 0.0;
    if (sigma > 0.0) {
      if (lam[i] <= 0.0)
        throw std::invalid_argument("grad_f: zero component with positive variance");
      err_term = (1.0 - p.w) * sigma / (2.0 * k * lam[i] * std::sqrt(lam[i]));
    }
    g[i] = p.w * inst.arms[i].mean + err_term;
  }
  return g;
}

ConcavityConstants concavity_constants(const BanditInstance& inst,
                                       const TradeoffParams& p) {
  const auto sig = sigmas(inst);
  const double sigma_min = *std::min_element(sig.begin(), sig.end());
  const double sigma_max = *std::max_element(sig.begin(), sig.end());
  if (sigma_min <= 0.0)
    throw std::invalid_argument("concavity_constants: sigma_min must be > 0");
  if (p.lambda_min <= 0.0)
    throw std::invalid_argument("concavity_constants: lambda_min must be > 0");
  if (p.w >= 1.0) throw std::invalid_argument("concavity_constants: w must be < 1");
  const int k = inst.size();
  ConcavityConstants c;
  c.alpha = 3.0 * (1.0 - p.w) * sigma_min / (4.0 * k);
  c.beta = 3.0 * (1.0 - p.w) * sigma_max /
           (4.0 * k * std::pow(p.lambda_min, 2.5));
  return c;
}

}  // namespace bandit
