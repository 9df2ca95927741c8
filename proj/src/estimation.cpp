#include "bandit/estimation.hpp"

#include <cmath>
#include <stdexcept>

namespace bandit {

EmpiricalStats::EmpiricalStats(int num_arms)
    : counts_(num_arms, 0), mean_(num_arms, 0.0), m2_(num_arms, 0.0) {
  if (num_arms < 1) throw std::invalid_argument("stats: need at least one arm");
}

int EmpiricalStats::check(int arm) const {
  if (arm < 0 || arm >= num_arms())
    throw std::invalid_argument("stats: arm index out of range");
  return arm;
}

void EmpiricalStats::update(int arm, double x) {
  check(arm);
  if (!std::isfinite(x)) throw std::invalid_argument("stats: non-finite sample");
  ++counts_[arm];
  ++step_;
  const double delta = x - mean_[arm];
  mean_[arm] += delta / static_cast<double>(counts_[arm]);
  m2_[arm] += delta * (x - mean_[arm]);
}

double EmpiricalStats::variance(int arm) const {
  check(arm);
  if (counts_[arm] < 2)
    throw std::invalid_argument("stats: variance needs at least two samples");
  return m2_[arm] / static_cast<double>(counts_[arm] - 1);
}

double EmpiricalStats::sigma(int arm) const {
  const double v = variance(arm);
  return v > 0.0 ? std::sqrt(v) : 0.0;
}

double delta_n(double delta, int num_arms, long long n, DeltaSchedule schedule) {
  const double base = 4.0 * num_arms * static_cast<double>(n) * static_cast<double>(n + 1);
  if (schedule == DeltaSchedule::PerStep) return delta / base;
  return delta / (base * static_cast<double>(n));
}

ConfidenceRadii confidence_radii(const EmpiricalStats& stats, int arm,
                                 const TradeoffParams& p, long long n,
                                 DeltaSchedule schedule) {
  const long long t = stats.count(arm);
  if (t < 1) throw std::invalid_argument("radii: arm has no samples");
  if (n < 1) throw std::invalid_argument("radii: n must be >= 1");
  ConfidenceRadii r;
  r.delta_n = delta_n(p.delta, stats.num_arms(), n, schedule);
  r.eps_mu = std::sqrt(std::log(1.0 / r.delta_n) / (2.0 * static_cast<double>(t)));
  r.eps_sigma = std::sqrt(2.0 * std::log(2.0 / r.delta_n) / static_cast<double>(t));
  return r;
}

double function_error_bound(const EmpiricalStats& stats, const TradeoffParams& p,
                            double lambda_min, long long n, DeltaSchedule schedule) {
  if (!(lambda_min > 0.0))
    throw std::invalid_argument("function_error_bound: undefined at lambda_min = 0");
  const int k = stats.num_arms();
  const double dn = delta_n(p.delta, k, n, schedule);
  double worst = 0.0;
  for (int i = 0; i < k; ++i) {
    const long long t = stats.count(i);
    if (t < 1) throw std::invalid_argument("function_error_bound: unpulled arm");
    const double b =
        std::sqrt(2.0 * k * std::log(2.0 / dn) / (lambda_min * static_cast<double>(t)));
    worst = std::max(worst, b);
  }
  return worst;
}

}  // namespace bandit
