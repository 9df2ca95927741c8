#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "bandit/config.hpp"
#include "bandit/csv.hpp"
#include "json.hpp"

namespace bandit {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

void write_file(const std::string& path, const std::string& content,
                std::vector<std::string>& written) {
  fs::create_directories(fs::path(path).parent_path());
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("failed to write " + path);
  out.close();
  written.push_back(path);
}

ordered_json diagnostics_json(const PhaseDiagnostics& d) {
  ordered_json j;
  j["n0"] = d.n0;
  j["n0_ceil"] = d.n0_ceil;
  j["alpha"] = d.alpha ? ordered_json(*d.alpha) : ordered_json("undefined");
  j["beta"] = d.beta ? ordered_json(*d.beta) : ordered_json("undefined");
  j["n2"] = d.n2 ? ordered_json(*d.n2) : ordered_json("undefined");
  j["lambda_star_min"] =
      d.lambda_star_min ? ordered_json(*d.lambda_star_min) : ordered_json("undefined");
  return j;
}

void write_manifest(const ExperimentConfig& cfg, const std::string& dir,
                    bool with_diagnostics, std::vector<std::string>& written) {
  ordered_json j;
  j["version"] = kVersion;
  j["config"] = ordered_json::parse(serialize_config(cfg));
  if (with_diagnostics)
    j["diagnostics"] =
        diagnostics_json(phase_diagnostics(cfg.instance(), cfg.params(), cfg.horizon));
  write_file(dir + "/manifest", j.dump(2) + "\n", written);
}

std::string metric_csv(const MetricCurve& m) {
  std::string s = "step,mean,q95,runs\n";
  for (size_t i = 0; i < m.steps.size(); ++i) {
    s += format_int(m.steps[i]);
    s += ',';
    s += format_real(m.mean[i]);
    s += ',';
    s += format_real(m.q95[i]);
    s += ',';
    s += format_int(m.runs);
    s += '\n';
  }
  return s;
}

std::string allocations_csv(const AggregateResult& agg, int k) {
  std::string s = "step,arm,lambda_tilde_mean,lambda_hat_mean\n";
  for (size_t c = 0; c < agg.steps.size(); ++c) {
    for (int i = 0; i < k; ++i) {
      s += format_int(agg.steps[c]);
      s += ',';
      s += format_int(i + 1);  // 1-based, matching the usual arm tables
      s += ',';
      s += format_real(agg.lambda_tilde_mean[c][i]);
      s += ',';
      s += format_real(agg.lambda_hat_mean[c][i]);
      s += '\n';
    }
  }
  return s;
}

std::string pareto_csv(const ExperimentConfig& cfg) {
  const BanditInstance inst = cfg.instance();
  const int k = inst.size();
  std::string s = "w,rho,epsilon";
  for (int i = 1; i <= k; ++i) s += ",lambda_star_" + std::to_string(i);
  s += '\n';
  for (double w : cfg.w_values) {
    TradeoffParams p = cfg.params();
    p.w = w;
    const SolveReport rep = solve_allocation(inst, p);
    s += format_real(w);
    s += ',';
    s += format_real(eval_rho(rep.allocation, inst));
    s += ',';
    s += format_real(eval_epsilon(rep.allocation, inst));
    for (int i = 0; i < k; ++i) {
      s += ',';
      s += format_real(rep.allocation[i]);
    }
    s += '\n';
  }
  return s;
}

// Seeded episodes for every (policy, run), common random numbers across
// policies; returns one trace vector per policy.
std::vector<std::vector<EpisodeTrace>> run_all(const ExperimentConfig& cfg, int jobs,
                                               const std::vector<long long>& cps) {
  const BanditInstance inst = cfg.instance();
  const TradeoffParams p = cfg.params();
  const PolicyOptions opts = cfg.policy_options();
  const int n_pol = static_cast<int>(cfg.policies.size());
  std::vector<std::vector<EpisodeTrace>> traces(n_pol);
  for (auto& v : traces) v.resize(cfg.runs);
  parallel_for(n_pol * cfg.runs, jobs, [&](int task) {
    const int pi = task / cfg.runs;
    const int run = task % cfg.runs;
    traces[pi][run] = run_episode(cfg.policies[pi], inst, p, opts, cfg.horizon,
                                  cfg.seed + static_cast<uint64_t>(run), cps);
  });
  return traces;
}

}  // namespace

std::vector<std::string> cmd_solve(const ExperimentConfig& cfg, std::ostream& out) {
  std::vector<std::string> written;
  const std::string dir = cfg.output_dir + "/" + cfg.name;
  if (cfg.w_values.size() > 1) {
    // A sweep request from `solve` is just a Pareto table.
    return cmd_pareto(cfg, out);
  }
  const BanditInstance inst = cfg.instance();
  const TradeoffParams p = cfg.params();
  const SolveReport rep = solve_allocation(inst, p);

  std::string csv = "arm,mean,variance,lambda_star\n";
  for (int i = 0; i < inst.size(); ++i) {
    csv += format_int(i + 1);
    csv += ',';
    csv += format_real(inst.arms[i].mean);
    csv += ',';
    csv += format_real(inst.arms[i].variance);
    csv += ',';
    csv += format_real(rep.allocation[i]);
    csv += '\n';
  }
  write_file(dir + "/allocation.csv", csv, written);
  write_manifest(cfg, dir, true, written);

  const PhaseDiagnostics d = phase_diagnostics(inst, p, cfg.horizon);
  out << "lambda_star:";
  for (double v : rep.allocation) out << ' ' << format_real(v);
  out << "\nf_star: " << format_real(rep.objective_value);
  out << "\nkkt_multiplier: " << format_real(rep.kkt_multiplier);
  out << "\nalpha: " << (d.alpha ? format_real(*d.alpha) : "undefined");
  out << "\nbeta: " << (d.beta ? format_real(*d.beta) : "undefined");
  out << "\nlambda_star_min: "
      << (d.lambda_star_min ? format_real(*d.lambda_star_min) : "undefined");
  if (!rep.unique) out << "\nnote: optimal allocation is not unique";
  out << "\n";
  return written;
}

std::vector<std::string> cmd_pareto(const ExperimentConfig& cfg, std::ostream& out) {
  std::vector<std::string> written;
  const std::string dir = cfg.output_dir + "/" + cfg.name;
  write_file(dir + "/pareto.csv", pareto_csv(cfg), written);
  write_manifest(cfg, dir, false, written);
  out << "pareto: " << cfg.w_values.size() << " weights -> " << written.front() << "\n";
  return written;
}

std::vector<std::string> cmd_simulate(const ExperimentConfig& cfg, int jobs,
                                      std::ostream& out) {
  if (cfg.w_values.size() != 1)
    throw std::invalid_argument("simulate: 'w' must be a scalar");
  std::vector<std::string> written;
  const std::string dir = cfg.output_dir + "/" + cfg.name;
  const BanditInstance inst = cfg.instance();
  const TradeoffParams p = cfg.params();
  const auto cps = checkpoint_grid(cfg.checkpoints, cfg.horizon, inst.size());
  const auto traces = run_all(cfg, jobs, cps);

  for (size_t pi = 0; pi < cfg.policies.size(); ++pi) {
    const AggregateResult agg = aggregate(traces[pi], inst, p);
    const std::string pdir = dir + "/" + policy_name(cfg.policies[pi]);
    write_file(pdir + "/rescaled_regret.csv", metric_csv(agg.rescaled_regret), written);
    write_file(pdir + "/alloc_err_linf.csv", metric_csv(agg.alloc_err_linf), written);
    write_file(pdir + "/alloc_hat_err_linf.csv", metric_csv(agg.alloc_hat_err_linf),
               written);
    write_file(pdir + "/rho.csv", metric_csv(agg.rho), written);
    write_file(pdir + "/epsilon.csv", metric_csv(agg.epsilon), written);
    write_file(pdir + "/allocations.csv", allocations_csv(agg, inst.size()), written);
  }
  write_manifest(cfg, dir, true, written);
  out << "simulate: " << cfg.policies.size() << " policies x " << cfg.runs
      << " runs, horizon " << cfg.horizon << " -> " << dir << "\n";
  return written;
}

std::vector<std::string> cmd_rank(const ExperimentConfig& cfg, int jobs,
                                  std::ostream& out) {
  if (cfg.w_values.size() != 1)
    throw std::invalid_argument("rank: 'w' must be a scalar");
  std::vector<std::string> written;
  const std::string dir = cfg.output_dir + "/" + cfg.name;
  const BanditInstance inst = cfg.instance();
  const auto mu = means(inst);
  bool positive = true;
  for (double m : mu) positive = positive && m > 0.0;

  const std::vector<long long> cps = {cfg.horizon};
  const auto traces = run_all(cfg, jobs, cps);

  std::string csv = "policy,rel_dcg_mean,rank_err_mean,runs\n";
  for (size_t pi = 0; pi < cfg.policies.size(); ++pi) {
    double dcg = 0.0, err = 0.0;
    for (const auto& tr : traces[pi]) {
      std::vector<double> mu_hat(inst.size());
      for (int i = 0; i < inst.size(); ++i) mu_hat[i] = tr.final_stats.mean(i);
      const RankMetrics m = rank_metrics(mu_hat, mu);
      dcg += m.rel_dcg;
      err += m.rank_err;
    }
    csv += policy_name(cfg.policies[pi]);
    csv += ',';
    // RelDCG's sign semantics need all-positive means.
    csv += positive ? format_real(dcg / cfg.runs) : "undefined";
    csv += ',';
    csv += format_real(err / cfg.runs);
    csv += ',';
    csv += format_int(cfg.runs);
    csv += '\n';
  }
  write_file(dir + "/rank.csv", csv, written);
  write_manifest(cfg, dir, true, written);
  out << "rank: " << cfg.policies.size() << " policies -> " << written.front() << "\n";
  return written;
}

}  // namespace bandit
