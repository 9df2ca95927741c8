#pragma once

#include <cstdint>
#include <vector>

#include "bandit/objective.hpp"

namespace bandit {

// Per-arm pull counts and running first/second moments, one-pass recurrence.
// The pairwise double-sum estimator (1/(2T(T-1)) sum over ordered pairs of
// (X_s - X_s')^2) equals the unbiased one-pass value; the pairwise form is
// kept in the tests as an oracle only.
class EmpiricalStats {
 public:
  explicit EmpiricalStats(int num_arms);

  void update(int arm, double x);

  long long count(int arm) const { return counts_[check(arm)]; }
  double mean(int arm) const { return mean_[check(arm)]; }
  // Unbiased variance, divisor T-1; requires count >= 2.
  double variance(int arm) const;
  // sqrt(variance), clamped at 0 from below.
  double sigma(int arm) const;

  long long step() const { return step_; }
  int num_arms() const { return static_cast<int>(counts_.size()); }
  const std::vector<long long>& counts() const { return counts_; }

 private:
  int check(int arm) const;

  std::vector<long long> counts_;
  std::vector<double> mean_;
  std::vector<double> m2_;  // sum of squared deviations
  long long step_ = 0;
};

// Prop. 1 uses delta_n = delta / (4 K n (n+1)); the covering argument behind
// the uniform function-error bound uses delta / (4 K n^2 (n+1)). Both are
// available; PerStep is the default throughout.
enum class DeltaSchedule { PerStep, Covering };

double delta_n(double delta, int num_arms, long long n,
               DeltaSchedule schedule = DeltaSchedule::PerStep);

struct ConfidenceRadii {
  double eps_mu = 0.0;     // sqrt(log(1/delta_n) / (2 T))
  double eps_sigma = 0.0;  // sqrt(2 log(2/delta_n) / T)
  double delta_n = 0.0;
};

ConfidenceRadii confidence_radii(const EmpiricalStats& stats, int arm,
                                 const TradeoffParams& p, long long n,
                                 DeltaSchedule schedule = DeltaSchedule::PerStep);

// Uniform-over-the-restricted-simplex bound on |f(.; nu) - f(.; nu_hat)|:
// max_i sqrt(2 K log(2/delta_n) / (lambda_min T_i)). Diagnostic only;
// undefined at lambda_min = 0.
double function_error_bound(const EmpiricalStats& stats, const TradeoffParams& p,
                            double lambda_min, long long n,
                            DeltaSchedule schedule = DeltaSchedule::PerStep);

}  // namespace bandit
