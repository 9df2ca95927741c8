#include "bandit/arms.hpp"

#include <cmath>
#include <stdexcept>

namespace bandit {

namespace {

// Marsaglia-Tsang for shape >= 1; the a < 1 case is boosted through
// gamma(a+1) * U^(1/a). Rejection loops are deterministic given the stream.
double sample_gamma(double shape, RngStream& rng) {
  if (shape < 1.0) {
    const double g = sample_gamma(shape + 1.0, rng);
    const double u = rng.next_uniform_pos();
    return g * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double z = rng.next_gaussian();
    double v = 1.0 + c * z;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = rng.next_uniform_pos();
    if (std::log(u) < 0.5 * z * z + d - d * v + d * std::log(v)) return d * v;
  }
}

double sample_beta(double a, double b, RngStream& rng) {
  const double x = sample_gamma(a, rng);
  const double y = sample_gamma(b, rng);
  return x / (x + y);
}

// Solves for Beta(a, b) matching (mean, var) on [0, range].
void beta_shape(const ArmModel& arm, double& a, double& b) {
  const double m = arm.mean / arm.range;
  const double v = arm.variance / (arm.range * arm.range);
  const double s = m * (1.0 - m) / v - 1.0;
  a = m * s;
  b = (1.0 - m) * s;
}

}  // namespace

void validate_arm(const ArmModel& arm) {
  if (!std::isfinite(arm.mean) || !std::isfinite(arm.variance))
    throw std::invalid_argument("arm: mean/variance must be finite");
  if (arm.variance < 0.0) throw std::invalid_argument("arm: variance must be >= 0");
  if (arm.family == Family::Gaussian) return;

  if (!(arm.range > 0.0)) throw std::invalid_argument("arm: range must be > 0");
  const double m = arm.mean / arm.range;
  const double v = arm.variance / (arm.range * arm.range);
  if (m < 0.0 || m > 1.0)
    throw std::invalid_argument("arm: mean outside [0, range] for bounded family");

  if (arm.family == Family::ScaledBernoulli) {
    // Bernoulli on {0, range} has a single free moment: var = mean*(range-mean).
    const double want = arm.mean * (arm.range - arm.mean);
    const double tol = 1e-9 * std::max({1.0, want, arm.variance});
    if (std::fabs(arm.variance - want) > tol)
      throw std::invalid_argument(
          "arm: infeasible ScaledBernoulli moments (variance must equal mean*(range-mean))");
    return;
  }

  // ScaledBeta: 0 <= v < m(1-m), v = 0 meaning a point mass.
  if (v == 0.0) return;
  if (v >= m * (1.0 - m))
    throw std::invalid_argument(
        "arm: infeasible ScaledBeta moments (variance must be < mean*(range-mean))");
}

BanditInstance make_instance(std::vector<ArmModel> specs) {
  if (specs.size() < 2) throw std::invalid_argument("instance: K must be >= 2");
  for (const auto& a : specs) validate_arm(a);
  return BanditInstance{std::move(specs)};
}

double sample(const ArmModel& arm, RngStream& rng) {
  switch (arm.family) {
    case Family::Gaussian:
      return arm.mean + std::sqrt(arm.variance) * rng.next_gaussian();
    case Family::ScaledBernoulli: {
      const double p = arm.mean / arm.range;
      return rng.next_uniform() < p ? arm.range : 0.0;
    }
    case Family::ScaledBeta: {
      if (arm.variance == 0.0) return arm.mean;
      double a, b;
      beta_shape(arm, a, b);
      return arm.range * sample_beta(a, b, rng);
    }
  }
  throw std::logic_error("unreachable family");
}

double arm_sigma(const ArmModel& arm) { return std::sqrt(arm.variance); }

std::vector<double> means(const BanditInstance& inst) {
  std::vector<double> m(inst.arms.size());
  for (size_t i = 0; i < inst.arms.size(); ++i) m[i] = inst.arms[i].mean;
  return m;
}

std::vector<double> sigmas(const BanditInstance& inst) {
  std::vector<double> s(inst.arms.size());
  for (size_t i = 0; i < inst.arms.size(); ++i) s[i] = arm_sigma(inst.arms[i]);
  return s;
}

std::string family_name(Family f) {
  switch (f) {
    case Family::Gaussian: return "gaussian";
    case Family::ScaledBernoulli: return "scaled_bernoulli";
    case Family::ScaledBeta: return "scaled_beta";
  }
  return "?";
}

}  // namespace bandit
