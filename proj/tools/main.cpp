#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "bandit/config.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  int jobs = 1;
  bool has_seed = false;
  uint64_t seed = 0;
  std::string output_override;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool config_required) {
  auto* opt = cmd->add_option("--config", flags.config_path, "experiment config file (JSON)");
  if (config_required) opt->required();
  cmd->add_option("--jobs", flags.jobs, "worker threads for episode execution")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", flags.seed, "override the config seed")
      ->each([&flags](const std::string&) { flags.has_seed = true; });
  cmd->add_option("--output", flags.output_override, "override the config output_dir");
}

bandit::ExperimentConfig resolve(const CommonFlags& flags) {
  bandit::ExperimentConfig cfg = bandit::load_config(flags.config_path);
  if (flags.has_seed) cfg.seed = flags.seed;
  if (!flags.output_override.empty()) cfg.output_dir = flags.output_override;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reward/estimation-error tradeoff bandit toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("bandits ") + bandit::kVersion);

  CommonFlags solve_flags, pareto_flags, sim_flags, rank_flags;
  bool print_defaults = false;

  auto* solve = app.add_subcommand("solve", "optimal allocation for one weight");
  add_common(solve, solve_flags, false);
  solve->add_flag("--print-defaults", print_defaults,
                  "print the default config with all keys and exit");

  auto* pareto = app.add_subcommand("pareto", "(rho, epsilon) sweep over w");
  add_common(pareto, pareto_flags, true);

  auto* simulate = app.add_subcommand("simulate", "seeded Monte-Carlo episodes");
  add_common(simulate, sim_flags, true);

  auto* rank = app.add_subcommand("rank", "ranking metrics at the horizon");
  add_common(rank, rank_flags, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) {
      if (print_defaults) {
        std::cout << bandit::serialize_config(bandit::default_config());
        return 0;
      }
      if (solve_flags.config_path.empty())
        throw std::invalid_argument("solve: --config is required");
      bandit::cmd_solve(resolve(solve_flags), std::cout);
    } else if (pareto->parsed()) {
      bandit::cmd_pareto(resolve(pareto_flags), std::cout);
    } else if (simulate->parsed()) {
      bandit::cmd_simulate(resolve(sim_flags), sim_flags.jobs, std::cout);
    } else if (rank->parsed()) {
      bandit::cmd_rank(resolve(rank_flags), rank_flags.jobs, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
