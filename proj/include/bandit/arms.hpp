#pragma once

#include <string>
#include <vector>

#include "bandit/rng.hpp"

namespace bandit {

enum class Family { Gaussian, ScaledBernoulli, ScaledBeta };

// One reward distribution, known to the simulator through its first two
// moments. Bounded families live on [0, range].
struct ArmModel {
  double mean = 0.0;
  double variance = 0.0;
  Family family = Family::Gaussian;
  double range = 1.0;
};

struct BanditInstance {
  std::vector<ArmModel> arms;
  int size() const { return static_cast<int>(arms.size()); }
};

// Throws std::invalid_argument for an infeasible (mean, variance) pair, e.g.
// a ScaledBernoulli whose variance does not match mean*(range-mean).
void validate_arm(const ArmModel& arm);

// Validated construction; requires K >= 2.
BanditInstance make_instance(std::vector<ArmModel> specs);

// One i.i.d. draw; advances the stream deterministically.
double sample(const ArmModel& arm, RngStream& rng);

double arm_sigma(const ArmModel& arm);
std::vector<double> means(const BanditInstance& inst);
std::vector<double> sigmas(const BanditInstance& inst);

std::string family_name(Family f);

}  // namespace bandit
