#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bandit/harness.hpp"

namespace bandit {

// One experiment, fully parameterized by a single strict JSON file.
struct ExperimentConfig {
  std::string name = "experiment";
  std::vector<ArmModel> arms;
  std::vector<double> w_values = {0.9};  // scalar or sweep
  double eta = 1.0;
  double lambda_min = 0.0;
  double delta = 0.05;
  long long horizon = 10000;
  int runs = 200;
  uint64_t seed = 1;
  std::vector<PolicyKind> policies = {PolicyKind::ForcingBalance};
  CheckpointSpec checkpoints;
  std::string output_dir = "out";
  int recompute_every = 1;
  DeltaSchedule delta_schedule = DeltaSchedule::PerStep;
  bool forcing_plus_one = false;

  double w() const { return w_values.front(); }
  TradeoffParams params() const;
  PolicyOptions policy_options() const;
  BanditInstance instance() const;
};

// Mirrors the synthetic 5-arm setting.
ExperimentConfig default_config();

// Strict parse: unknown keys and malformed values are rejected with the
// offending key named. parse(serialize(parse(x))) is the identity.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& cfg);

extern const char* kVersion;

// Subcommand drivers; return the list of files written.
std::vector<std::string> cmd_solve(const ExperimentConfig& cfg, std::ostream& out);
std::vector<std::string> cmd_pareto(const ExperimentConfig& cfg, std::ostream& out);
std::vector<std::string> cmd_simulate(const ExperimentConfig& cfg, int jobs,
                                      std::ostream& out);
std::vector<std::string> cmd_rank(const ExperimentConfig& cfg, int jobs,
                                  std::ostream& out);

}  // namespace bandit
