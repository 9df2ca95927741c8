#include "bandit/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace bandit {

using nlohmann::ordered_json;

const char* kVersion = "0.1.0";

TradeoffParams ExperimentConfig::params() const {
  TradeoffParams p;
  p.w = w();
  p.lambda_min = lambda_min;
  p.eta = eta;
  p.delta = delta;
  return p;
}

PolicyOptions ExperimentConfig::policy_options() const {
  PolicyOptions o;
  o.recompute_every = recompute_every;
  o.forcing_plus_one = forcing_plus_one;
  o.schedule = delta_schedule;
  return o;
}

BanditInstance ExperimentConfig::instance() const { return make_instance(arms); }

ExperimentConfig default_config() {
  ExperimentConfig cfg;
  cfg.name = "fivearm-w09";
  cfg.arms = {
      {1.0, 0.05, Family::Gaussian, 1.0}, {1.5, 0.1, Family::Gaussian, 1.0},
      {2.0, 0.2, Family::Gaussian, 1.0},  {4.0, 4.0, Family::Gaussian, 1.0},
      {5.0, 0.5, Family::Gaussian, 1.0},
  };
  return cfg;
}

namespace {

void reject_unknown(const ordered_json& j, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (const auto& item : j.items())
    if (!allowed.count(item.key()))
      throw std::invalid_argument("config: unknown key '" + item.key() + "' in " + where);
}

template <typename T>
T get_field(const ordered_json& j, const std::string& key, const T& fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw std::invalid_argument("config: bad value for key '" + key + "'");
  }
}

Family family_from_name(const std::string& s) {
  if (s == "gaussian") return Family::Gaussian;
  if (s == "scaled_bernoulli") return Family::ScaledBernoulli;
  if (s == "scaled_beta") return Family::ScaledBeta;
  throw std::invalid_argument("config: unknown family '" + s + "'");
}

const char* schedule_name(DeltaSchedule s) {
  return s == DeltaSchedule::PerStep ? "per_step" : "covering";
}

DeltaSchedule schedule_from_name(const std::string& s) {
  if (s == "per_step") return DeltaSchedule::PerStep;
  if (s == "covering") return DeltaSchedule::Covering;
  throw std::invalid_argument("config: unknown delta_schedule '" + s + "'");
}

const char* checkpoint_kind_name(CheckpointSpec::Kind k) {
  switch (k) {
    case CheckpointSpec::Kind::Geometric: return "geometric";
    case CheckpointSpec::Kind::All: return "all";
    case CheckpointSpec::Kind::Explicit: return "explicit";
  }
  return "?";
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
  reject_unknown(j, {"name", "arms", "w", "eta", "lambda_min", "delta", "horizon",
                     "runs", "seed", "policies", "checkpoints", "output_dir",
                     "recompute_every", "delta_schedule", "forcing_plus_one"},
                 "config");

  ExperimentConfig cfg = default_config();
  cfg.name = get_field<std::string>(j, "name", cfg.name);
  cfg.eta = get_field<double>(j, "eta", cfg.eta);
  cfg.lambda_min = get_field<double>(j, "lambda_min", cfg.lambda_min);
  cfg.delta = get_field<double>(j, "delta", cfg.delta);
  cfg.horizon = get_field<long long>(j, "horizon", cfg.horizon);
  cfg.runs = get_field<int>(j, "runs", cfg.runs);
  cfg.seed = get_field<uint64_t>(j, "seed", cfg.seed);
  cfg.output_dir = get_field<std::string>(j, "output_dir", cfg.output_dir);
  cfg.recompute_every = get_field<int>(j, "recompute_every", cfg.recompute_every);
  cfg.forcing_plus_one = get_field<bool>(j, "forcing_plus_one", cfg.forcing_plus_one);
  if (j.contains("delta_schedule"))
    cfg.delta_schedule = schedule_from_name(j.at("delta_schedule").get<std::string>());

  if (j.contains("w")) {
    const auto& w = j.at("w");
    cfg.w_values.clear();
    if (w.is_array()) {
      for (const auto& v : w) cfg.w_values.push_back(v.get<double>());
    } else if (w.is_number()) {
      cfg.w_values.push_back(w.get<double>());
    } else {
      throw std::invalid_argument("config: bad value for key 'w'");
    }
    if (cfg.w_values.empty())
      throw std::invalid_argument("config: 'w' sweep must be non-empty");
  }

  if (j.contains("arms")) {
    if (!j.at("arms").is_array())
      throw std::invalid_argument("config: 'arms' must be an array");
    cfg.arms.clear();
    for (const auto& a : j.at("arms")) {
      if (!a.is_object()) throw std::invalid_argument("config: arm entries must be objects");
      reject_unknown(a, {"mean", "variance", "family", "range"}, "arms");
      if (!a.contains("mean") || !a.contains("variance"))
        throw std::invalid_argument("config: arm needs 'mean' and 'variance'");
      ArmModel arm;
      arm.mean = a.at("mean").get<double>();
      arm.variance = a.at("variance").get<double>();
      if (a.contains("family")) arm.family = family_from_name(a.at("family").get<std::string>());
      arm.range = get_field<double>(a, "range", 1.0);
      cfg.arms.push_back(arm);
    }
  }

  if (j.contains("policies")) {
    if (!j.at("policies").is_array())
      throw std::invalid_argument("config: 'policies' must be an array");
    cfg.policies.clear();
    for (const auto& p : j.at("policies"))
      cfg.policies.push_back(policy_from_name(p.get<std::string>()));
    if (cfg.policies.empty())
      throw std::invalid_argument("config: 'policies' must be non-empty");
  }

  if (j.contains("checkpoints")) {
    const auto& c = j.at("checkpoints");
    if (!c.is_object()) throw std::invalid_argument("config: 'checkpoints' must be an object");
    const std::string kind = get_field<std::string>(c, "kind", "geometric");
    if (kind == "geometric") {
      reject_unknown(c, {"kind", "count"}, "checkpoints");
      cfg.checkpoints.kind = CheckpointSpec::Kind::Geometric;
      cfg.checkpoints.count = get_field<int>(c, "count", 50);
    } else if (kind == "all") {
      reject_unknown(c, {"kind"}, "checkpoints");
      cfg.checkpoints.kind = CheckpointSpec::Kind::All;
    } else if (kind == "explicit") {
      reject_unknown(c, {"kind", "steps"}, "checkpoints");
      cfg.checkpoints.kind = CheckpointSpec::Kind::Explicit;
      cfg.checkpoints.steps = get_field<std::vector<long long>>(c, "steps", {});
      if (cfg.checkpoints.steps.empty())
        throw std::invalid_argument("config: explicit checkpoints need 'steps'");
    } else {
      throw std::invalid_argument("config: unknown checkpoints kind '" + kind + "'");
    }
  }

  // Cross-field validation, naming the offending key.
  make_instance(cfg.arms);  // K >= 2 + moment feasibility
  for (double w : cfg.w_values)
    if (!(w >= 0.0 && w <= 1.0))
      throw std::invalid_argument("config: 'w' values must be in [0,1]");
  if (!(cfg.eta > 0.0)) throw std::invalid_argument("config: 'eta' must be > 0");
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0))
    throw std::invalid_argument("config: 'delta' must be in (0,1)");
  if (cfg.lambda_min < 0.0 || cfg.lambda_min * cfg.arms.size() > 1.0 + 1e-12)
    throw std::invalid_argument("config: 'lambda_min' must satisfy 0 <= lambda_min*K <= 1");
  if (cfg.horizon < 1) throw std::invalid_argument("config: 'horizon' must be >= 1");
  if (cfg.runs < 1) throw std::invalid_argument("config: 'runs' must be >= 1");
  if (cfg.recompute_every < 1)
    throw std::invalid_argument("config: 'recompute_every' must be >= 1");
  if (cfg.name.empty() || cfg.name.find('/') != std::string::npos)
    throw std::invalid_argument("config: 'name' must be a non-empty path component");
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  ordered_json j;
  j["name"] = cfg.name;
  ordered_json arms = ordered_json::array();
  for (const auto& a : cfg.arms) {
    ordered_json e;
    e["mean"] = a.mean;
    e["variance"] = a.variance;
    e["family"] = family_name(a.family);
    e["range"] = a.range;
    arms.push_back(e);
  }
  j["arms"] = arms;
  if (cfg.w_values.size() == 1) {
    j["w"] = cfg.w_values.front();
  } else {
    j["w"] = cfg.w_values;
  }
  j["eta"] = cfg.eta;
  j["lambda_min"] = cfg.lambda_min;
  j["delta"] = cfg.delta;
  j["horizon"] = cfg.horizon;
  j["runs"] = cfg.runs;
  j["seed"] = cfg.seed;
  ordered_json pols = ordered_json::array();
  for (const auto& p : cfg.policies) pols.push_back(policy_name(p));
  j["policies"] = pols;
  ordered_json cp;
  cp["kind"] = checkpoint_kind_name(cfg.checkpoints.kind);
  if (cfg.checkpoints.kind == CheckpointSpec::Kind::Geometric)
    cp["count"] = cfg.checkpoints.count;
  if (cfg.checkpoints.kind == CheckpointSpec::Kind::Explicit)
    cp["steps"] = cfg.checkpoints.steps;
  j["checkpoints"] = cp;
  j["output_dir"] = cfg.output_dir;
  j["recompute_every"] = cfg.recompute_every;
  j["delta_schedule"] = schedule_name(cfg.delta_schedule);
  j["forcing_plus_one"] = cfg.forcing_plus_one;
  return j.dump(2) + "\n";
}

}  // namespace bandit
