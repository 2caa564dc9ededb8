#include <CLI11.hpp>
#include <iostream>

#include "acgd/bench/experiment.hpp"
#include "acgd/demos.hpp"
#include "acgd/envs/registry.hpp"

using namespace acgd;

int main(int argc, char** argv) {
  CLI::App app{"adaptive-curriculum manipulation benchmark"};
  app.require_subcommand(1);

  // train
  auto* train = app.add_subcommand("train", "run a configured experiment");
  std::string train_config;
  std::string train_method;
  int64_t train_seed = -1;
  bool train_force = false;
  std::string resume_ckpt;
  train->add_option("--config", train_config, "experiment config (JSON)")->required();
  train->add_option("--method", train_method, "override the config's method");
  train->add_option("--seed", train_seed, "run only this seed");
  train->add_flag("--force", train_force, "overwrite an existing run directory");
  train->add_option("--resume", resume_ckpt, "resume from this checkpoint (or pass 'auto')");

  // record-demos
  auto* record = app.add_subcommand("record-demos", "record scripted-expert demonstrations");
  std::string rec_env = "block_stack_2d";
  int rec_count = 10;
  uint64_t rec_seed = 1;
  std::string rec_out;
  bool rec_actions = false;
  record->add_option("--env", rec_env, "environment id")->required();
  record->add_option("--count", rec_count, "number of demonstrations");
  record->add_option("--seed", rec_seed, "recording seed");
  record->add_option("--out", rec_out, "output file")->required();
  record->add_flag("--with-actions", rec_actions, "store expert actions (BC format)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "sweep one curriculum axis");
  std::string sweep_config, sweep_axis;
  std::vector<std::string> sweep_values;
  bool sweep_force = false;
  sweep->add_option("--config", sweep_config, "experiment config (JSON)")->required();
  sweep->add_option("--axis", sweep_axis, "interval | increment | mixing-mode")->required();
  sweep->add_option("--values", sweep_values, "axis values (interval as alpha:beta)")
      ->required()
      ->delimiter(',');
  sweep->add_flag("--force", sweep_force, "overwrite existing cell directories");

  // compare
  auto* compare = app.add_subcommand("compare", "rank finished runs and emit aligned curves");
  std::vector<std::string> compare_dirs;
  std::string compare_out;
  compare->add_option("dirs", compare_dirs, "run directories")->required();
  compare->add_option("--curves-out", compare_out, "write the aligned-curve CSV here");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint at a given difficulty");
  std::string eval_ckpt;
  int eval_episodes = 100;
  uint64_t eval_seed = 0;
  double eval_delta = 1.0;
  eval_cmd->add_option("--ckpt", eval_ckpt, "checkpoint file")->required();
  eval_cmd->add_option("--episodes", eval_episodes, "episode count");
  eval_cmd->add_option("--seed", eval_seed, "evaluation seed");
  eval_cmd->add_option("--delta", eval_delta, "difficulty in [0,1], default maximum");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) {
      ExperimentConfig cfg = load_config(train_config);
      if (!train_method.empty()) cfg.method = parse_method(train_method);
      cfg.validate();
      RunOptions opts;
      opts.force = train_force;
      opts.resume = !resume_ckpt.empty();
      if (train_seed >= 0) opts.only_seed = static_cast<uint64_t>(train_seed);
      opts.log = [](const std::string& s) { std::cout << s << "\n"; };
      ExperimentResult result = run_experiment(cfg, opts);
      std::cout << "final eval success: mean " << result.mean_final_success << " +- "
                << result.std_final_success << " over " << result.seeds.size() << " seed(s)\n"
                << "outputs in " << result.run_dir.string() << "\n";
    } else if (*record) {
      auto env = make_env(rec_env);
      const auto registry = default_registry(rec_env);
      RecordOptions opts;
      opts.with_actions = rec_actions;
      DemoStore store = record_demo_store(*env, registry, rec_count, rec_seed, opts);
      save_store(store, rec_out);
      double mean_len = 0.0;
      for (const auto& t : store.trajectories) mean_len += static_cast<double>(t.length() - 1);
      mean_len /= static_cast<double>(store.trajectories.size());
      std::cout << "recorded " << store.trajectories.size() << " demonstrations on " << rec_env
                << " (mean length " << mean_len << " steps) -> " << rec_out << "\n";
    } else if (*sweep) {
      ExperimentConfig cfg = load_config(sweep_config);
      RunOptions opts;
      opts.force = sweep_force;
      opts.log = [](const std::string& s) { std::cout << s << "\n"; };
      SweepResult result = run_sweep(cfg, parse_sweep_axis(sweep_axis), sweep_values, opts);
      std::cout << "sweep outputs in " << result.sweep_dir.string() << "\n";
      for (const auto& [value, cell] : result.cells) {
        std::cout << "  " << sweep_axis << "=" << value << ": mean final "
                  << cell.mean_final_success << " +- " << cell.std_final_success << "\n";
      }
    } else if (*compare) {
      std::vector<std::filesystem::path> dirs(compare_dirs.begin(), compare_dirs.end());
      CompareResult result = compare_runs(dirs);
      std::cout << result.table;
      if (!compare_out.empty()) {
        std::ofstream out(compare_out, std::ios::trunc);
        out << result.curves_csv;
        std::cout << "curves written to " << compare_out << "\n";
      }
    } else if (*eval_cmd) {
      LoadedPolicy lp = load_policy_checkpoint(eval_ckpt);
      auto env = make_env(lp.env_id);
      const auto registry = default_registry(lp.env_id);
      EvalResult result =
          evaluate(*lp.policy, *env, registry, eval_episodes, eval_seed, eval_delta);
      std::cout << lp.method << " checkpoint on " << lp.env_id << ": success "
                << result.success_rate << " over " << eval_episodes
                << " episodes (mean successful length " << result.mean_success_length << ")\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
