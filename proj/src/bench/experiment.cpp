#include "acgd/bench/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "acgd/binio.hpp"

namespace acgd {

using nlohmann::json;

namespace {

constexpr char kCheckpointMagic[9] = "ACGDCKP1";
constexpr uint32_t kCheckpointVersion = 1;
constexpr uint32_t kKindTrainer = 0;
constexpr uint32_t kKindPolicyOnly = 1;

void log_line(const RunOptions& opts, const std::string& msg) {
  if (opts.log) opts.log(msg);
}

struct CheckpointHeader {
  uint64_t config_hash = 0;
  uint64_t seed = 0;
  std::string method;
  std::string env_id;
  PolicyConfig policy_config;
  int64_t csv_rows = 0;
  uint32_t kind = kKindTrainer;
};

void write_header(BinWriter& w, const CheckpointHeader& h) {
  w.u32(kCheckpointVersion);
  w.u64(h.config_hash);
  w.u64(h.seed);
  w.str(h.method);
  w.str(h.env_id);
  w.u32(static_cast<uint32_t>(h.policy_config.obs_dim));
  w.u32(static_cast<uint32_t>(h.policy_config.action_dim));
  w.u64(h.policy_config.hidden.size());
  for (int hsize : h.policy_config.hidden) w.u32(static_cast<uint32_t>(hsize));
  w.f64(h.policy_config.log_std_init);
  w.f64(h.policy_config.log_std_min);
  w.f64(h.policy_config.log_std_max);
  w.i64(h.csv_rows);
  w.u32(h.kind);
}

CheckpointHeader read_header(BinReader& r) {
  CheckpointHeader h;
  const uint32_t version = r.u32();
  if (version != kCheckpointVersion) {
    throw ParseError("checkpoint version " + std::to_string(version) + " is not supported");
  }
  h.config_hash = r.u64();
  h.seed = r.u64();
  h.method = r.str();
  h.env_id = r.str();
  h.policy_config.obs_dim = static_cast<int>(r.u32());
  h.policy_config.action_dim = static_cast<int>(r.u32());
  const uint64_t n_hidden = r.u64();
  h.policy_config.hidden.clear();
  for (uint64_t i = 0; i < n_hidden; ++i) {
    h.policy_config.hidden.push_back(static_cast<int>(r.u32()));
  }
  h.policy_config.log_std_init = r.f64();
  h.policy_config.log_std_min = r.f64();
  h.policy_config.log_std_max = r.f64();
  h.csv_rows = r.i64();
  h.kind = r.u32();
  return h;
}

void save_checkpoint_file(const std::filesystem::path& path, const CheckpointHeader& header,
                          const std::function<void(BinWriter&)>& payload) {
  BinWriter w;
  write_header(w, header);
  payload(w);
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write checkpoint '" + tmp.string() + "'");
    out.write(kCheckpointMagic, 8);
    out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
    if (!out) throw IoError("failed writing checkpoint '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

std::pair<CheckpointHeader, BinReader> open_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint '" + path.string() + "'");
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < 8 || bytes.compare(0, 8, kCheckpointMagic, 8) != 0) {
    throw ParseError("'" + path.string() + "' is not a checkpoint file");
  }
  BinReader r(bytes.substr(8));
  CheckpointHeader h = read_header(r);
  return {std::move(h), std::move(r)};
}

std::vector<std::pair<int64_t, double>> eval_points(const MetricsFile& file) {
  std::vector<std::pair<int64_t, double>> pts;
  for (const auto& row : file.rows) {
    if (row.eval) pts.push_back({row.env_steps, row.eval->success_rate});
  }
  return pts;
}

SeedResult seed_result_from_metrics(const std::filesystem::path& metrics_path, uint64_t seed) {
  const MetricsFile file = read_metrics(metrics_path);
  SeedResult sr;
  sr.seed = seed;
  if (!file.rows.empty()) sr.env_steps = file.rows.back().env_steps;
  const auto pts = eval_points(file);
  if (!pts.empty()) {
    sr.final_eval_success = pts.back().second;
    sr.aulc = area_under_curve(pts);
  }
  for (auto it = file.rows.rbegin(); it != file.rows.rend(); ++it) {
    if (it->eval) {
      sr.final_eval_mean_success_length = it->eval->mean_success_length;
      break;
    }
  }
  return sr;
}

ExperimentResult aggregate(const std::filesystem::path& run_dir, std::vector<SeedResult> seeds) {
  ExperimentResult result;
  result.run_dir = run_dir;
  result.seeds = std::move(seeds);
  const size_t n = result.seeds.size();
  if (n == 0) return result;
  double sum = 0.0, sum_aulc = 0.0;
  for (const auto& s : result.seeds) {
    sum += s.final_eval_success;
    sum_aulc += s.aulc;
  }
  result.mean_final_success = sum / static_cast<double>(n);
  result.mean_aulc = sum_aulc / static_cast<double>(n);
  double var = 0.0;
  for (const auto& s : result.seeds) {
    const double d = s.final_eval_success - result.mean_final_success;
    var += d * d;
  }
  result.std_final_success = std::sqrt(var / static_cast<double>(n));
  double len_sum = 0.0;
  int len_n = 0;
  for (const auto& s : result.seeds) {
    if (s.final_eval_mean_success_length > 0.0) {
      len_sum += s.final_eval_mean_success_length;
      ++len_n;
    }
  }
  result.mean_final_success_length = len_n > 0 ? len_sum / len_n : 0.0;
  return result;
}

void write_summary(const ExperimentConfig& cfg, const ExperimentResult& result) {
  json j;
  j["schema_version"] = 1;
  j["config_hash"] = format_u64_hex(config_hash(cfg));
  j["env"] = cfg.env_id;
  j["method"] = method_name(cfg.method);
  json seeds = json::array();
  for (const auto& s : result.seeds) {
    seeds.push_back({{"seed", s.seed},
                     {"final_eval_success", s.final_eval_success},
                     {"final_eval_mean_success_length", s.final_eval_mean_success_length},
                     {"aulc", s.aulc},
                     {"env_steps", s.env_steps}});
  }
  j["seeds"] = seeds;
  j["aggregate"] = {{"final_eval_success_mean", result.mean_final_success},
                    {"final_eval_success_std", result.std_final_success},
                    {"aulc_mean", result.mean_aulc},
                    {"final_success_length_mean", result.mean_final_success_length}};
  std::ofstream out(result.run_dir / "summary.json", std::ios::trunc);
  if (!out) throw IoError("cannot write summary in '" + result.run_dir.string() + "'");
  out << j.dump(2) << "\n";
}

DemoStore load_store_checked(const std::string& file, const std::string& env_id,
                             bool need_actions) {
  DemoStore store = load_store(file);
  if (store.env_id != env_id) {
    throw ConfigError("demo store '" + file + "' was recorded on '" + store.env_id +
                      "', config uses '" + env_id + "'");
  }
  if (need_actions && !store.with_actions) {
    throw ConfigError("demo store '" + file + "' lacks actions (record with --with-actions)");
  }
  return store;
}

// Offline behavior cloning "run": trains the policy once, then fills the
// metrics grid so its flat curve aligns with the RL methods on env_steps.
void run_bc_seed(const ExperimentConfig& cfg, const DemoStore& bc_store, uint64_t seed,
                 const std::filesystem::path& seed_dir, uint64_t hash) {
  auto env = make_env(cfg.env_id);
  Rng init_rng(seed, 0x1a17);
  PolicyConfig pc;
  pc.obs_dim = env->obs_dim();
  pc.action_dim = Action::kDim;
  pc.hidden = cfg.ppo.hidden;
  pc.log_std_init = cfg.ppo.log_std_init;
  PolicyNetwork policy(pc, init_rng);

  BcConfig bc = cfg.bc;
  bc.seed = seed;
  auto scratch = make_env(cfg.env_id);
  behavior_cloning_train(bc_store, policy, *scratch, bc);

  const auto registry = cfg.params.empty() ? default_registry(cfg.env_id) : cfg.params;
  const int64_t total_iters =
      (cfg.ppo.total_steps + cfg.ppo.batch_size() - 1) / cfg.ppo.batch_size();

  const std::filesystem::path metrics_path = seed_dir / "metrics.csv";
  std::filesystem::remove(metrics_path);
  MetricsWriter writer(metrics_path, hash, seed);
  int64_t rows = 0;
  for (int64_t iter = 1; iter <= total_iters; ++iter) {
    IterationMetrics m;
    m.iter = iter;
    m.env_steps = iter * cfg.ppo.batch_size();
    const bool final_iter = iter == total_iters;
    if (cfg.eval.episodes > 0 &&
        (final_iter || (cfg.eval.every_iters > 0 && iter % cfg.eval.every_iters == 0))) {
      m.eval = evaluate(policy, *env, registry, cfg.eval.episodes,
                        seed ^ (0xeea1ull + static_cast<uint64_t>(iter)), cfg.eval.delta);
    }
    writer.append(m);
    ++rows;
  }

  CheckpointHeader header;
  header.config_hash = hash;
  header.seed = seed;
  header.method = method_name(cfg.method);
  header.env_id = cfg.env_id;
  header.policy_config = pc;
  header.csv_rows = rows;
  header.kind = kKindPolicyOnly;
  save_checkpoint_file(seed_dir / "checkpoint.bin", header, [&](BinWriter& w) {
    auto tensors = policy.tensors();
    w.u64(tensors.size());
    for (const TensorRef& t : tensors) {
      w.str(t.name);
      w.f64_span(t.data, t.size);
    }
  });
}

void run_rl_seed(const ExperimentConfig& cfg, const DemoStore* demos, const DemoStore* bc_store,
                 uint64_t seed, const std::filesystem::path& seed_dir, uint64_t hash,
                 const RunOptions& opts) {
  Trainer::Setup setup;
  setup.env_id = cfg.env_id;
  setup.method = cfg.method;
  setup.seed = seed;
  setup.ppo = cfg.ppo;
  setup.curriculum = cfg.curriculum;
  setup.eval = cfg.eval;
  setup.shaped = cfg.shaped;
  setup.registry = cfg.params;
  setup.demos = demos;
  Trainer trainer(std::move(setup));

  const std::filesystem::path metrics_path = seed_dir / "metrics.csv";
  const std::filesystem::path ckpt_path = seed_dir / "checkpoint.bin";

  int64_t rows = 0;
  if (opts.resume && std::filesystem::exists(ckpt_path)) {
    auto [header, reader] = open_checkpoint(ckpt_path);
    if (header.config_hash != hash) {
      throw ConfigError("checkpoint '" + ckpt_path.string() +
                        "' belongs to a different experiment (config hash mismatch)");
    }
    if (header.seed != seed || header.kind != kKindTrainer) {
      throw ConfigError("checkpoint '" + ckpt_path.string() + "' does not match seed " +
                        std::to_string(seed));
    }
    trainer.deserialize(reader);
    rows = header.csv_rows;
    truncate_metrics(metrics_path, rows);
  } else {
    std::filesystem::remove(metrics_path);
    if (method_traits(cfg.method).bc_pretrain) {
      // BC warm start, then a fresh critic and optimizer for the RL phase
      BcConfig bc = cfg.bc;
      bc.seed = seed;
      auto scratch = make_env(cfg.env_id);
      behavior_cloning_train(*bc_store, trainer.policy(), *scratch, bc);
      Rng head_rng(seed, 0xbc2);
      trainer.policy().reset_value_head(head_rng);
    }
  }

  MetricsWriter writer(metrics_path, hash, seed);
  auto checkpoint_now = [&]() {
    CheckpointHeader header;
    header.config_hash = hash;
    header.seed = seed;
    header.method = method_name(cfg.method);
    header.env_id = cfg.env_id;
    header.policy_config = trainer.policy().config();
    header.csv_rows = rows;
    header.kind = kKindTrainer;
    save_checkpoint_file(ckpt_path, header, [&](BinWriter& w) { trainer.serialize(w); });
  };

  while (!trainer.finished()) {
    if (opts.stop_after_iterations > 0 && trainer.iteration() >= opts.stop_after_iterations) {
      return;  // simulated interruption; checkpoint is already on disk
    }
    IterationMetrics m = trainer.train_iteration();
    writer.append(m);
    ++rows;
    if (trainer.iteration() % cfg.checkpoint_every == 0 || trainer.finished()) {
      checkpoint_now();
    }
    if (m.eval) {
      log_line(opts, "  iter " + std::to_string(m.iter) + " steps " +
                         std::to_string(m.env_steps) + " eval " +
                         format_double(m.eval->success_rate));
    }
  }
}

}  // namespace

double area_under_curve(const std::vector<std::pair<int64_t, double>>& points) {
  if (points.empty()) return 0.0;
  if (points.size() == 1) return points.front().second;
  double area = 0.0;
  for (size_t i = 1; i < points.size(); ++i) {
    const double dx = static_cast<double>(points[i].first - points[i - 1].first);
    area += 0.5 * (points[i].second + points[i - 1].second) * dx;
  }
  const double span = static_cast<double>(points.back().first - points.front().first);
  return span > 0.0 ? area / span : points.back().second;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  const uint64_t hash = config_hash(cfg);
  const std::filesystem::path run_dir = cfg.out_dir;
  const bool had_previous = std::filesystem::exists(run_dir / "config.json");
  if (had_previous && !opts.force && !opts.resume) {
    throw ConfigError("output directory '" + run_dir.string() +
                      "' already holds a run; pass --force to overwrite or --resume to continue");
  }
  if (opts.resume && had_previous) {
    const ExperimentConfig prev = load_config(run_dir / "config.json");
    if (config_hash(prev) != hash) {
      throw ConfigError("cannot resume: config differs from the one stored in '" +
                        run_dir.string() + "'");
    }
  }
  std::filesystem::create_directories(run_dir);
  save_config(cfg, run_dir / "config.json");

  const MethodTraits traits = method_traits(cfg.method);
  std::optional<DemoStore> demos;
  std::optional<DemoStore> bc_store;
  if (traits.demo_resets) {
    demos = load_store_checked(cfg.demo_file, cfg.env_id, /*need_actions=*/false);
  }
  if (traits.bc_pretrain || traits.offline_only) {
    bc_store = load_store_checked(cfg.bc_demo_file, cfg.env_id, /*need_actions=*/true);
  }

  for (uint64_t seed : cfg.seeds) {
    if (opts.only_seed && *opts.only_seed != seed) continue;
    const std::filesystem::path seed_dir = run_dir / ("seed_" + std::to_string(seed));
    std::filesystem::create_directories(seed_dir);
    log_line(opts, method_name(cfg.method) + " on " + cfg.env_id + ", seed " +
                       std::to_string(seed));
    if (traits.offline_only) {
      run_bc_seed(cfg, *bc_store, seed, seed_dir, hash);
    } else {
      run_rl_seed(cfg, demos ? &*demos : nullptr, bc_store ? &*bc_store : nullptr, seed, seed_dir,
                  hash, opts);
    }
  }

  ExperimentResult result = summarize_run(run_dir);
  write_summary(cfg, result);
  return result;
}

ExperimentResult summarize_run(const std::filesystem::path& run_dir) {
  const ExperimentConfig cfg = load_config(run_dir / "config.json");
  std::vector<SeedResult> seeds;
  for (uint64_t seed : cfg.seeds) {
    const std::filesystem::path metrics_path =
        run_dir / ("seed_" + std::to_string(seed)) / "metrics.csv";
    if (!std::filesystem::exists(metrics_path)) continue;
    seeds.push_back(seed_result_from_metrics(metrics_path, seed));
  }
  return aggregate(run_dir, std::move(seeds));
}

SweepAxis parse_sweep_axis(const std::string& name) {
  if (name == "interval") return SweepAxis::kInterval;
  if (name == "increment") return SweepAxis::kIncrement;
  if (name == "mixing-mode" || name == "mixing_mode") return SweepAxis::kMixingMode;
  throw ConfigError("unknown sweep axis '" + name + "' (interval, increment, mixing-mode)");
}

SweepResult run_sweep(const ExperimentConfig& base, SweepAxis axis,
                      const std::vector<std::string>& values, const RunOptions& opts) {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  const char* axis_name = axis == SweepAxis::kInterval    ? "interval"
                          : axis == SweepAxis::kIncrement ? "increment"
                                                          : "mixing-mode";
  SweepResult result;
  result.sweep_dir = std::filesystem::path(base.out_dir) / ("sweep_" + std::string(axis_name));
  std::filesystem::create_directories(result.sweep_dir);

  for (const std::string& value : values) {
    ExperimentConfig cell = base;
    std::string cell_name;
    switch (axis) {
      case SweepAxis::kInterval: {
        const auto colon = value.find(':');
        if (colon == std::string::npos) {
          throw ConfigError("interval value '" + value + "' must look like alpha:beta");
        }
        cell.curriculum.alpha = parse_double(value.substr(0, colon), "interval alpha");
        cell.curriculum.beta = parse_double(value.substr(colon + 1), "interval beta");
        cell_name = "interval_" + value.substr(0, colon) + "_" + value.substr(colon + 1);
        break;
      }
      case SweepAxis::kIncrement:
        cell.curriculum.increment = parse_double(value, "increment");
        cell_name = "increment_" + value;
        break;
      case SweepAxis::kMixingMode:
        if (value == "per_episode") {
          cell.curriculum.granularity = ModeGranularity::kPerEpisode;
        } else if (value == "per_iteration") {
          cell.curriculum.granularity = ModeGranularity::kPerIteration;
        } else {
          throw ConfigError("mixing-mode value must be per_episode or per_iteration");
        }
        cell_name = "mixing_" + value;
        break;
    }
    cell.out_dir = (result.sweep_dir / cell_name).string();
    log_line(opts, "sweep cell " + cell_name);
    result.cells.push_back({value, run_experiment(cell, opts)});
  }

  // long-format CSV over all evaluation rows
  std::ofstream out(result.sweep_dir / "sweep.csv", std::ios::trunc);
  if (!out) throw IoError("cannot write sweep.csv in '" + result.sweep_dir.string() + "'");
  out << "axis,value,seed,iter,env_steps,eval_success_rate\n";
  for (const auto& [value, cell_result] : result.cells) {
    const ExperimentConfig cell_cfg = load_config(cell_result.run_dir / "config.json");
    for (uint64_t seed : cell_cfg.seeds) {
      const auto metrics_path =
          cell_result.run_dir / ("seed_" + std::to_string(seed)) / "metrics.csv";
      if (!std::filesystem::exists(metrics_path)) continue;
      const MetricsFile file = read_metrics(metrics_path);
      for (const auto& row : file.rows) {
        if (!row.eval) continue;
        out << axis_name << ',' << value << ',' << seed << ',' << row.iter << ',' << row.env_steps
            << ',' << format_double(row.eval->success_rate) << '\n';
      }
    }
  }
  return result;
}

CompareResult compare_runs(const std::vector<std::filesystem::path>& run_dirs) {
  if (run_dirs.empty()) throw ConfigError("compare needs at least one run directory");
  struct RunData {
    std::string dir;
    std::string method;
    std::string env;
    std::vector<SeedResult> seeds;
    // env_steps -> per-seed success values
    std::map<int64_t, std::vector<double>> curve;
  };
  std::vector<RunData> runs;
  for (const auto& dir : run_dirs) {
    RunData rd;
    rd.dir = dir.string();
    const ExperimentConfig cfg = load_config(dir / "config.json");
    rd.method = method_name(cfg.method);
    rd.env = cfg.env_id;
    for (uint64_t seed : cfg.seeds) {
      const auto metrics_path = dir / ("seed_" + std::to_string(seed)) / "metrics.csv";
      if (!std::filesystem::exists(metrics_path)) continue;
      rd.seeds.push_back(seed_result_from_metrics(metrics_path, seed));
      for (const auto& [steps, success] : eval_points(read_metrics(metrics_path))) {
        rd.curve[steps].push_back(success);
      }
    }
    if (rd.seeds.empty()) {
      throw ConfigError("run '" + rd.dir + "' has no completed seeds to compare");
    }
    runs.push_back(std::move(rd));
  }
  for (const auto& rd : runs) {
    if (rd.env != runs.front().env) {
      throw ConfigError("cannot compare runs on different environments: '" + runs.front().env +
                        "' (" + runs.front().dir + ") vs '" + rd.env + "' (" + rd.dir + ")");
    }
  }

  std::ostringstream curves;
  curves << "run,method,env_steps,eval_mean,eval_std,n_seeds\n";
  for (const auto& rd : runs) {
    for (const auto& [steps, values] : rd.curve) {
      double mean = 0.0;
      for (double v : values) mean += v;
      mean /= static_cast<double>(values.size());
      double var = 0.0;
      for (double v : values) var += (v - mean) * (v - mean);
      const double stddev = std::sqrt(var / static_cast<double>(values.size()));
      curves << rd.dir << ',' << rd.method << ',' << steps << ',' << format_double(mean) << ','
             << format_double(stddev) << ',' << values.size() << '\n';
    }
  }

  std::vector<std::pair<std::string, double>> ranking;
  std::map<std::string, std::pair<double, std::string>> detail;
  for (const auto& rd : runs) {
    double mean = 0.0;
    std::string per_seed;
    for (const auto& s : rd.seeds) {
      mean += s.final_eval_success;
      per_seed += (per_seed.empty() ? "" : " ") + format_double(s.final_eval_success);
    }
    mean /= static_cast<double>(rd.seeds.size());
    ranking.push_back({rd.dir, mean});
    detail[rd.dir] = {mean, per_seed};
  }
  std::stable_sort(ranking.begin(), ranking.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  std::ostringstream table;
  table << "rank  final_success  run  per_seed\n";
  int rank = 1;
  for (const auto& [dir, mean] : ranking) {
    table << rank++ << "  " << format_double(mean) << "  " << dir << "  [" << detail[dir].second
          << "]\n";
  }

  CompareResult result;
  result.table = table.str();
  result.curves_csv = curves.str();
  result.ranking = std::move(ranking);
  return result;
}

LoadedPolicy load_policy_checkpoint(const std::filesystem::path& path) {
  auto [header, reader] = open_checkpoint(path);
  LoadedPolicy lp;
  lp.config = header.policy_config;
  lp.env_id = header.env_id;
  lp.method = header.method;
  lp.seed = header.seed;
  lp.config_hash = header.config_hash;
  Rng dummy(0);
  lp.policy = std::make_unique<PolicyNetwork>(lp.config, dummy);
  const uint64_t n_tensors = reader.u64();
  auto tensors = lp.policy->tensors();
  if (n_tensors != tensors.size()) throw ParseError("checkpoint tensor count mismatch");
  for (TensorRef& t : tensors) {
    const std::string name = reader.str();
    if (name != t.name) throw ParseError("checkpoint tensor order mismatch at '" + name + "'");
    reader.f64_into(t.data, t.size);
  }
  return lp;
}

}  // namespace acgd
