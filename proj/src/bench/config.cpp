#include "acgd/bench/config.hpp"

#include <fstream>

#include <json.hpp>

namespace acgd {

using nlohmann::json;

void ExperimentConfig::validate() const {
  if (schema_version != 1) {
    throw ConfigError("unsupported config schema_version " + std::to_string(schema_version));
  }
  if (seeds.empty()) throw ConfigError("config needs at least one seed");
  ppo.validate();
  if (!(curriculum.alpha >= 0.0 && curriculum.alpha < curriculum.beta && curriculum.beta <= 1.0)) {
    throw ConfigError("curriculum interval requires 0 <= alpha < beta <= 1");
  }
  if (curriculum.increment < 0.0) throw ConfigError("curriculum increment must be >= 0");
  if (!(curriculum.smoothing > 0.0 && curriculum.smoothing <= 1.0)) {
    throw ConfigError("curriculum smoothing must be in (0, 1]");
  }
  if (checkpoint_every <= 0) throw ConfigError("checkpoint_every must be > 0");
  for (const auto& p : params) acgd::validate(p);
  const MethodTraits traits = method_traits(method);
  if (traits.demo_resets && demo_file.empty()) {
    throw ConfigError("method '" + method_name(method) + "' requires demo_file");
  }
  if ((traits.bc_pretrain || traits.offline_only) && bc_demo_file.empty()) {
    throw ConfigError("method '" + method_name(method) + "' requires bc_demo_file");
  }
}

namespace {

json params_to_json(const std::vector<TaskParam>& params) {
  json arr = json::array();
  for (const auto& p : params) {
    arr.push_back({{"name", p.name},
                   {"mu_init", p.mu_init},
                   {"sigma_init", p.sigma_init},
                   {"mu_end", p.mu_end},
                   {"sigma_end", p.sigma_end},
                   {"lo", p.lo},
                   {"hi", p.hi},
                   {"reset_class", p.reset_class == ResetClass::kDemoCompatible
                                       ? "demo_compatible"
                                       : "regular_only"}});
  }
  return arr;
}

std::vector<TaskParam> params_from_json(const json& arr) {
  std::vector<TaskParam> out;
  for (const auto& j : arr) {
    TaskParam p;
    p.name = j.at("name").get<std::string>();
    p.mu_init = j.at("mu_init").get<double>();
    p.sigma_init = j.at("sigma_init").get<double>();
    p.mu_end = j.at("mu_end").get<double>();
    p.sigma_end = j.at("sigma_end").get<double>();
    p.lo = j.at("lo").get<double>();
    p.hi = j.at("hi").get<double>();
    const std::string rc = j.at("reset_class").get<std::string>();
    if (rc == "demo_compatible") {
      p.reset_class = ResetClass::kDemoCompatible;
    } else if (rc == "regular_only") {
      p.reset_class = ResetClass::kRegularOnly;
    } else {
      throw ConfigError("unknown reset_class '" + rc + "' for parameter '" + p.name + "'");
    }
    out.push_back(std::move(p));
  }
  return out;
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["schema_version"] = c.schema_version;
  j["env"] = c.env_id;
  j["method"] = method_name(c.method);
  j["seeds"] = c.seeds;
  j["demo_file"] = c.demo_file;
  j["bc_demo_file"] = c.bc_demo_file;
  j["out_dir"] = c.out_dir;
  j["ppo"] = {{"lr", c.ppo.lr},
              {"adam_eps", c.ppo.adam_eps},
              {"gamma", c.ppo.gamma},
              {"gae_tau", c.ppo.gae_tau},
              {"entropy_coef", c.ppo.entropy_coef},
              {"value_coef", c.ppo.value_coef},
              {"max_grad_norm", c.ppo.max_grad_norm},
              {"actors", c.ppo.actors},
              {"steps_per_actor", c.ppo.steps_per_actor},
              {"minibatch", c.ppo.minibatch},
              {"epochs", c.ppo.epochs},
              {"clip", c.ppo.clip},
              {"total_steps", c.ppo.total_steps},
              {"advantage_norm", c.ppo.advantage_norm},
              {"value_clip", c.ppo.value_clip},
              {"value_clip_eps", c.ppo.value_clip_eps},
              {"lr_decay", c.ppo.lr_decay},
              {"hidden", c.ppo.hidden},
              {"log_std_init", c.ppo.log_std_init}};
  j["curriculum"] = {{"alpha", c.curriculum.alpha},
                     {"beta", c.curriculum.beta},
                     {"increment", c.curriculum.increment},
                     {"smoothing", c.curriculum.smoothing},
                     {"mode_granularity",
                      c.curriculum.granularity == ModeGranularity::kPerEpisode ? "per_episode"
                                                                               : "per_iteration"}};
  j["eval"] = {{"every_iters", c.eval.every_iters},
               {"episodes", c.eval.episodes},
               {"delta", c.eval.delta}};
  j["shaped"] = {{"w_reach", c.shaped.w_reach},
                 {"w_place", c.shaped.w_place},
                 {"bonus_grasp", c.shaped.bonus_grasp},
                 {"bonus_place", c.shaped.bonus_place}};
  j["bc"] = {{"epochs", c.bc.epochs},
             {"minibatch", c.bc.minibatch},
             {"lr", c.bc.lr},
             {"holdout_fraction", c.bc.holdout_fraction}};
  j["checkpoint_every"] = c.checkpoint_every;
  j["params"] = params_to_json(c.params);
  return j;
}

ExperimentConfig from_json(const json& j) {
  ExperimentConfig c;
  c.schema_version = j.value("schema_version", 1);
  c.env_id = j.at("env").get<std::string>();
  c.method = parse_method(j.value("method", "ACGD"));
  if (j.contains("seeds")) c.seeds = j.at("seeds").get<std::vector<uint64_t>>();
  c.demo_file = j.value("demo_file", "");
  c.bc_demo_file = j.value("bc_demo_file", "");
  c.out_dir = j.value("out_dir", "runs/experiment");
  if (j.contains("ppo")) {
    const json& p = j.at("ppo");
    c.ppo.lr = p.value("lr", c.ppo.lr);
    c.ppo.adam_eps = p.value("adam_eps", c.ppo.adam_eps);
    c.ppo.gamma = p.value("gamma", c.ppo.gamma);
    c.ppo.gae_tau = p.value("gae_tau", c.ppo.gae_tau);
    c.ppo.entropy_coef = p.value("entropy_coef", c.ppo.entropy_coef);
    c.ppo.value_coef = p.value("value_coef", c.ppo.value_coef);
    c.ppo.max_grad_norm = p.value("max_grad_norm", c.ppo.max_grad_norm);
    c.ppo.actors = p.value("actors", c.ppo.actors);
    c.ppo.steps_per_actor = p.value("steps_per_actor", c.ppo.steps_per_actor);
    c.ppo.minibatch = p.value("minibatch", c.ppo.minibatch);
    c.ppo.epochs = p.value("epochs", c.ppo.epochs);
    c.ppo.clip = p.value("clip", c.ppo.clip);
    c.ppo.total_steps = p.value("total_steps", c.ppo.total_steps);
    c.ppo.advantage_norm = p.value("advantage_norm", c.ppo.advantage_norm);
    c.ppo.value_clip = p.value("value_clip", c.ppo.value_clip);
    c.ppo.value_clip_eps = p.value("value_clip_eps", c.ppo.value_clip_eps);
    c.ppo.lr_decay = p.value("lr_decay", c.ppo.lr_decay);
    if (p.contains("hidden")) c.ppo.hidden = p.at("hidden").get<std::vector<int>>();
    c.ppo.log_std_init = p.value("log_std_init", c.ppo.log_std_init);
  }
  if (j.contains("curriculum")) {
    const json& q = j.at("curriculum");
    c.curriculum.alpha = q.value("alpha", c.curriculum.alpha);
    c.curriculum.beta = q.value("beta", c.curriculum.beta);
    c.curriculum.increment = q.value("increment", c.curriculum.increment);
    c.curriculum.smoothing = q.value("smoothing", c.curriculum.smoothing);
    const std::string g = q.value("mode_granularity", "per_episode");
    if (g == "per_episode") {
      c.curriculum.granularity = ModeGranularity::kPerEpisode;
    } else if (g == "per_iteration") {
      c.curriculum.granularity = ModeGranularity::kPerIteration;
    } else {
      throw ConfigError("unknown mode_granularity '" + g + "'");
    }
  }
  if (j.contains("eval")) {
    const json& q = j.at("eval");
    c.eval.every_iters = q.value("every_iters", c.eval.every_iters);
    c.eval.episodes = q.value("episodes", c.eval.episodes);
    c.eval.delta = q.value("delta", c.eval.delta);
  }
  if (j.contains("shaped")) {
    const json& q = j.at("shaped");
    c.shaped.w_reach = q.value("w_reach", c.shaped.w_reach);
    c.shaped.w_place = q.value("w_place", c.shaped.w_place);
    c.shaped.bonus_grasp = q.value("bonus_grasp", c.shaped.bonus_grasp);
    c.shaped.bonus_place = q.value("bonus_place", c.shaped.bonus_place);
  }
  if (j.contains("bc")) {
    const json& q = j.at("bc");
    c.bc.epochs = q.value("epochs", c.bc.epochs);
    c.bc.minibatch = q.value("minibatch", c.bc.minibatch);
    c.bc.lr = q.value("lr", c.bc.lr);
    c.bc.holdout_fraction = q.value("holdout_fraction", c.bc.holdout_fraction);
  }
  c.checkpoint_every = j.value("checkpoint_every", 1);
  if (j.contains("params")) c.params = params_from_json(j.at("params"));
  return c;
}

}  // namespace

std::string to_json_string(const ExperimentConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

ExperimentConfig config_from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig cfg = from_json(j);
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return config_from_json_string(text);
}

void save_config(const ExperimentConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write config '" + path.string() + "'");
  out << to_json_string(cfg);
}

uint64_t config_hash(const ExperimentConfig& cfg) {
  json j = json::parse(to_json_string(cfg));
  j.erase("out_dir");  // the hash identifies the experiment, not its location
  return fnv1a64(j.dump());
}

}  // namespace acgd
