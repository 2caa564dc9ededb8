#include "acgd/rl/trainer.hpp"

#include <algorithm>
#include <cmath>

namespace acgd {

void PpoConfig::validate() const {
  if (lr <= 0 || adam_eps <= 0 || gamma <= 0 || gamma > 1 || gae_tau <= 0 || gae_tau > 1 ||
      entropy_coef < 0 || value_coef <= 0 || max_grad_norm <= 0 || actors <= 0 ||
      steps_per_actor <= 0 || minibatch <= 0 || epochs <= 0 || total_steps <= 0) {
    throw ConfigError("ppo config: all sizes and coefficients must be positive");
  }
  if (!(clip > 0.0 && clip < 1.0)) throw ConfigError("ppo config: clip must be in (0,1)");
}

EvalResult evaluate(PolicyNetwork& policy, Env& env, std::span<const TaskParam> registry,
                    int episodes, uint64_t seed, double delta) {
  env.set_reward_mode(RewardMode::kSparse);
  Eigen::MatrixXd x(1, policy.config().obs_dim);
  Eigen::MatrixXd mu;
  Eigen::VectorXd v;
  int successes = 0;
  int64_t success_len_total = 0;
  for (int ep = 0; ep < episodes; ++ep) {
    Rng rng(seed, 0xe7a1000ull + static_cast<uint64_t>(ep));
    auto assignment = sample_assignment(registry, delta, ResetMode::kRegular, rng);
    env.reset_regular(assignment, rng);
    Obs obs = env.observe();
    while (!env.done()) {
      for (int i = 0; i < policy.config().obs_dim; ++i) x(0, i) = obs[i];
      policy.forward(x, mu, v);
      StepResult sr = env.step({mu(0, 0), mu(0, 1), mu(0, 2)});
      obs = sr.obs;
    }
    if (env.success()) {
      ++successes;
      success_len_total += env.step_count();
    }
  }
  EvalResult result;
  result.success_rate = episodes > 0 ? static_cast<double>(successes) / episodes : 0.0;
  result.mean_success_length =
      successes > 0 ? static_cast<double>(success_len_total) / successes : 0.0;
  return result;
}

Trainer::Trainer(Setup setup) : setup_(std::move(setup)), traits_(method_traits(setup_.method)) {
  setup_.ppo.validate();
  if (traits_.offline_only) {
    throw ConfigError("method '" + method_name(setup_.method) +
                      "' is offline-only and has no training loop");
  }
  if (setup_.registry.empty()) setup_.registry = default_registry(setup_.env_id);
  for (const auto& p : setup_.registry) validate(p);
  if (traits_.demo_resets) {
    if (setup_.demos == nullptr || setup_.demos->trajectories.empty()) {
      throw ConfigError("method '" + method_name(setup_.method) +
                        "' needs a non-empty demonstration store");
    }
    if (setup_.demos->env_id != setup_.env_id) {
      throw ConfigError("demo store was recorded on '" + setup_.demos->env_id +
                        "', not on '" + setup_.env_id + "'");
    }
  }

  Rng init_rng(setup_.seed, 0x1a17);
  auto probe = make_env(setup_.env_id);
  PolicyConfig pc;
  pc.obs_dim = probe->obs_dim();
  pc.action_dim = Action::kDim;
  pc.hidden = setup_.ppo.hidden;
  pc.log_std_init = setup_.ppo.log_std_init;
  policy_ = std::make_unique<PolicyNetwork>(pc, init_rng);
  adam_ = AdamOptimizer(0.9, 0.999, setup_.ppo.adam_eps);
  adam_.attach(policy_->tensors(), policy_->grad_tensors());

  state_.alpha = setup_.curriculum.alpha;
  state_.beta = setup_.curriculum.beta;
  state_.increment = setup_.curriculum.increment;
  state_.demo.tracker.smoothing = setup_.curriculum.smoothing;
  state_.regular.tracker.smoothing = setup_.curriculum.smoothing;
  state_.total_iterations =
      (setup_.ppo.total_steps + setup_.ppo.batch_size() - 1) / setup_.ppo.batch_size();
  // Methods that train on the plain task keep every knob at full difficulty;
  // the frozen-delta curricula start from their fixed window.
  if (traits_.params_pinned_max && !traits_.demo_resets) {
    state_.regular.delta = 1.0;
  }
  if (setup_.method == MethodSpec::kUniformDemoCurriculum) {
    state_.demo.delta = 1.0;
  }
  validate(state_);

  workers_.resize(setup_.ppo.actors);
  for (int w = 0; w < setup_.ppo.actors; ++w) {
    workers_[w].env = make_env(setup_.env_id);
    workers_[w].env->set_reward_mode(traits_.shaped_reward ? RewardMode::kShaped
                                                           : RewardMode::kSparse);
    workers_[w].env->set_shaped_config(setup_.shaped);
    workers_[w].rng = Rng(setup_.seed, 0x3000 + static_cast<uint64_t>(w));
  }
  eval_env_ = make_env(setup_.env_id);
  trainer_rng_ = Rng(setup_.seed, 0x7331);
  coordinator_rng_ = Rng(setup_.seed, 0xc001);
}

ResetMode Trainer::pick_mode(const CurriculumState& snap, Rng& rng) const {
  if (!traits_.regular_resets) return ResetMode::kDemonstration;
  if (!traits_.demo_resets) return ResetMode::kRegular;
  if (setup_.curriculum.granularity == ModeGranularity::kPerIteration) return iter_mode_;
  return choose_reset_mode(snap, rng);
}

double Trainer::window_delta(const CurriculumState& snap) const {
  if (traits_.linear_delta) {
    return static_cast<double>(snap.iteration) / static_cast<double>(snap.total_iterations);
  }
  return snap.demo.delta;  // UniformDemoCurriculum holds this at 1
}

double Trainer::param_delta(ResetMode mode, const CurriculumState& snap) const {
  if (traits_.params_pinned_max) return 1.0;
  if (traits_.linear_delta) {
    return static_cast<double>(snap.iteration) / static_cast<double>(snap.total_iterations);
  }
  return mode == ResetMode::kDemonstration ? snap.demo.delta : snap.regular.delta;
}

void Trainer::reset_worker(Worker& worker, const CurriculumState& snap, ResetMode mode) {
  worker.mode = mode;
  if (mode == ResetMode::kDemonstration) {
    const double wdelta = window_delta(snap);
    DemoRestart restart = sample_demo_restart(*setup_.demos, wdelta, worker.rng);
    auto overrides = sample_assignment(setup_.registry, param_delta(mode, snap),
                                       ResetMode::kDemonstration, worker.rng);
    worker.env->reset_from_state(restart.trajectory->states[restart.state_index], overrides);
  } else {
    auto assignment = sample_assignment(setup_.registry, param_delta(mode, snap),
                                        ResetMode::kRegular, worker.rng);
    worker.env->reset_regular(assignment, worker.rng);
  }
  worker.pending_obs = worker.env->observe();
}

void Trainer::ensure_workers_initialized(const CurriculumState& snap) {
  if (workers_initialized_) return;
  for (auto& worker : workers_) {
    reset_worker(worker, snap, pick_mode(snap, worker.rng));
  }
  workers_initialized_ = true;
}

double Trainer::value_of(const Obs& obs) {
  Eigen::MatrixXd x(1, policy_->config().obs_dim);
  for (int i = 0; i < policy_->config().obs_dim; ++i) x(0, i) = obs[i];
  Eigen::MatrixXd mu;
  Eigen::VectorXd v;
  policy_->forward(x, mu, v);
  return v(0);
}

void Trainer::apply_curriculum_update(std::span<const EpisodeOutcome> outcomes) {
  if (traits_.shared_delta) {
    // One pooled tracker drives a single delta; both coefficients mirror it.
    int64_t n = 0;
    for (const auto& ep : outcomes) {
      state_.demo.tracker.record(ep.success ? 1.0 : 0.0);
      ++n;
    }
    if (n > 0 && state_.demo.tracker.episodes_seen > 0) {
      state_.demo = update_difficulty(state_.demo, state_);
    }
    state_.regular = state_.demo;
    ++state_.iteration;
    return;
  }
  if (traits_.adaptive) {
    curriculum_step(state_, outcomes);
    if (setup_.method == MethodSpec::kUniformDemoCurriculum) state_.demo.delta = 1.0;
    return;
  }
  // Non-adaptive methods: trackers still follow outcomes (they feed the
  // mixing probability and the metrics), deltas follow their fixed rule.
  for (const auto& ep : outcomes) {
    if (ep.mode == ResetMode::kDemonstration) {
      state_.demo.tracker.record(ep.success ? 1.0 : 0.0);
    } else {
      state_.regular.tracker.record(ep.success ? 1.0 : 0.0);
    }
  }
  ++state_.iteration;
  if (traits_.linear_delta) {
    const double d =
        static_cast<double>(state_.iteration) / static_cast<double>(state_.total_iterations);
    state_.demo.delta = d;
    if (traits_.regular_resets) state_.regular.delta = d;
  }
}

IterationMetrics Trainer::train_iteration() {
  const PpoConfig& cfg = setup_.ppo;
  const int obs_dim = policy_->config().obs_dim;
  const int act_dim = policy_->config().action_dim;
  const int64_t steps = cfg.steps_per_actor;
  const int64_t n = cfg.batch_size();

  if (setup_.curriculum.granularity == ModeGranularity::kPerIteration && traits_.demo_resets &&
      traits_.regular_resets) {
    iter_mode_ = choose_reset_mode(state_, coordinator_rng_);
  }
  const CurriculumState snap = state_;  // frozen for the whole iteration
  ensure_workers_initialized(snap);

  Eigen::MatrixXd obs_buf(n, obs_dim);
  Eigen::MatrixXd act_buf(n, act_dim);
  Eigen::VectorXd logp_buf(n), rew_buf(n), val_buf(n), timeout_boot(n);
  timeout_boot.setZero();
  std::vector<uint8_t> done_buf(n, 0);
  std::vector<EpisodeOutcome> outcomes;

  Eigen::MatrixXd x(cfg.actors, obs_dim);
  Eigen::MatrixXd mu;
  Eigen::VectorXd v;
  const Eigen::VectorXd sigma_snapshot = policy_->sigma();

  for (int64_t t = 0; t < steps; ++t) {
    for (int w = 0; w < cfg.actors; ++w) {
      for (int i = 0; i < obs_dim; ++i) x(w, i) = workers_[w].pending_obs[i];
    }
    policy_->forward(x, mu, v);
    for (int w = 0; w < cfg.actors; ++w) {
      Worker& worker = workers_[w];
      const int64_t row = static_cast<int64_t>(w) * steps + t;
      Eigen::RowVectorXd a(act_dim);
      for (int k = 0; k < act_dim; ++k) {
        a(k) = mu(w, k) + sigma_snapshot(k) * worker.rng.normal();
      }
      obs_buf.row(row) = x.row(w);
      act_buf.row(row) = a;
      logp_buf(row) = policy_->log_prob(mu.row(w), a);
      val_buf(row) = v(w);

      StepResult sr = worker.env->step({a(0), a(1), a(2)});
      rew_buf(row) = sr.reward;
      done_buf[row] = sr.done ? 1 : 0;
      if (sr.done) {
        outcomes.push_back({worker.mode, sr.success, worker.env->step_count()});
        if (!sr.success) {
          // time-limit boundary: bootstrap with V of the terminal state
          timeout_boot(row) = value_of(sr.obs);
        }
        reset_worker(worker, snap, pick_mode(snap, worker.rng));
      } else {
        worker.pending_obs = sr.obs;
      }
    }
  }

  // per-worker tail bootstrap
  for (int w = 0; w < cfg.actors; ++w) {
    for (int i = 0; i < obs_dim; ++i) x(w, i) = workers_[w].pending_obs[i];
  }
  policy_->forward(x, mu, v);
  Eigen::VectorXd tail_value = v;

  Eigen::VectorXd adv_buf(n), ret_buf(n);
  {
    std::vector<double> rewards(steps), values(steps), adv, ret;
    std::vector<uint8_t> dones(steps);
    for (int w = 0; w < cfg.actors; ++w) {
      const int64_t off = static_cast<int64_t>(w) * steps;
      for (int64_t t = 0; t < steps; ++t) {
        rewards[t] = rew_buf(off + t) + cfg.gamma * timeout_boot(off + t);
        values[t] = val_buf(off + t);
        dones[t] = done_buf[off + t];
      }
      const bool tail_done = done_buf[off + steps - 1] != 0;
      compute_gae(rewards, values, dones, tail_done ? 0.0 : tail_value(w), cfg.gamma, cfg.gae_tau,
                  adv, ret);
      for (int64_t t = 0; t < steps; ++t) {
        adv_buf(off + t) = adv[t];
        ret_buf(off + t) = ret[t];
      }
    }
  }

  env_steps_ += n;

  if (cfg.advantage_norm) {
    const double mean = adv_buf.mean();
    const double std = std::sqrt((adv_buf.array() - mean).square().sum() / n);
    adv_buf = (adv_buf.array() - mean) / (std + 1e-8);
  }

  const double lr = cfg.lr_decay ? linear_lr(cfg.lr, env_steps_, cfg.total_steps) : cfg.lr;
  std::vector<int64_t> order(n);
  for (int64_t i = 0; i < n; ++i) order[i] = i;

  double pl_acc = 0.0, vl_acc = 0.0, ent_acc = 0.0;
  int64_t update_count = 0;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (int64_t i = n - 1; i > 0; --i) {
      std::swap(order[i], order[trainer_rng_.uniform_int(static_cast<uint64_t>(i + 1))]);
    }
    for (int64_t start = 0; start < n; start += cfg.minibatch) {
      const int64_t m = std::min<int64_t>(cfg.minibatch, n - start);
      Eigen::MatrixXd xb(m, obs_dim), ab(m, act_dim);
      Eigen::VectorXd advb(m), retb(m), lpo(m), vold(m);
      for (int64_t i = 0; i < m; ++i) {
        const int64_t src = order[start + i];
        xb.row(i) = obs_buf.row(src);
        ab.row(i) = act_buf.row(src);
        advb(i) = adv_buf(src);
        retb(i) = ret_buf(src);
        lpo(i) = logp_buf(src);
        vold(i) = val_buf(src);
      }

      Eigen::MatrixXd mub;
      Eigen::VectorXd vb;
      policy_->forward(xb, mub, vb);

      const Eigen::VectorXd sigma = policy_->sigma();
      Eigen::MatrixXd z = (ab - mub).array().rowwise() / sigma.transpose().array();
      Eigen::VectorXd lp_new =
          (-0.5 * z.array().square()).rowwise().sum().matrix() -
          Eigen::VectorXd::Constant(m, policy_->log_std().sum() +
                                           0.5 * act_dim * 1.8378770664093454836);
      Eigen::VectorXd ratio = (lp_new - lpo).array().exp();

      double policy_loss = 0.0;
      Eigen::VectorXd d_lp = Eigen::VectorXd::Zero(m);
      for (int64_t i = 0; i < m; ++i) {
        const double u1 = ratio(i) * advb(i);
        const double u2 = std::clamp(ratio(i), 1.0 - cfg.clip, 1.0 + cfg.clip) * advb(i);
        policy_loss += -std::min(u1, u2);
        if (u1 <= u2) d_lp(i) = -advb(i) * ratio(i) / static_cast<double>(m);
      }
      policy_loss /= static_cast<double>(m);

      double value_loss = 0.0;
      Eigen::VectorXd d_v(m);
      for (int64_t i = 0; i < m; ++i) {
        double verr = vb(i) - retb(i);
        if (cfg.value_clip) {
          const double vclip =
              vold(i) + std::clamp(vb(i) - vold(i), -cfg.value_clip_eps, cfg.value_clip_eps);
          const double errc = vclip - retb(i);
          if (errc * errc > verr * verr) {
            // clipped branch dominates; v sits outside the clip range there,
            // so no gradient flows
            value_loss += errc * errc;
            d_v(i) = 0.0;
            continue;
          }
        }
        value_loss += verr * verr;
        d_v(i) = cfg.value_coef * 2.0 * verr / static_cast<double>(m);
      }
      value_loss /= static_cast<double>(m);

      const double ent = policy_->entropy();

      // dL/dmu and dL/dlog_std through the log-prob; entropy adds -coef per dim
      Eigen::MatrixXd d_mu(m, act_dim);
      Eigen::VectorXd d_log_std = Eigen::VectorXd::Constant(act_dim, -cfg.entropy_coef);
      for (int64_t i = 0; i < m; ++i) {
        for (int k = 0; k < act_dim; ++k) {
          d_mu(i, k) = d_lp(i) * z(i, k) / sigma(k);
          d_log_std(k) += d_lp(i) * (z(i, k) * z(i, k) - 1.0);
        }
      }

      policy_->zero_grads();
      policy_->backward(d_mu, d_v, d_log_std);
      adam_.clip_gradients(cfg.max_grad_norm);
      adam_.step(lr);
      policy_->clamp_log_std();

      pl_acc += policy_loss;
      vl_acc += value_loss;
      ent_acc += ent;
      ++update_count;
    }
  }

  apply_curriculum_update(outcomes);

  IterationMetrics metrics;
  metrics.iter = state_.iteration;
  metrics.env_steps = env_steps_;
  metrics.delta_d = state_.demo.delta;
  metrics.delta_r = state_.regular.delta;
  metrics.sr_d = state_.demo.tracker.sr;
  metrics.sr_r = state_.regular.tracker.sr;
  metrics.loss_policy = pl_acc / update_count;
  metrics.loss_value = vl_acc / update_count;
  metrics.entropy = ent_acc / update_count;
  if (!outcomes.empty()) {
    double len = 0.0;
    for (const auto& ep : outcomes) len += static_cast<double>(ep.length);
    metrics.mean_episode_length = len / static_cast<double>(outcomes.size());
  }
  const bool final_iter = state_.iteration >= state_.total_iterations;
  if (setup_.eval.episodes > 0 &&
      (final_iter || (setup_.eval.every_iters > 0 &&
                      state_.iteration % setup_.eval.every_iters == 0))) {
    metrics.eval = evaluate(*policy_, *eval_env_, setup_.registry, setup_.eval.episodes,
                            setup_.seed ^ (0xeea1ull + static_cast<uint64_t>(state_.iteration)),
                            setup_.eval.delta);
  }
  return metrics;
}

// --- checkpoint payload ---

namespace {
void write_rng(BinWriter& w, const Rng& rng) {
  const auto s = rng.state();
  for (uint64_t word : s) w.u64(word);
}

Rng read_rng(BinReader& r) {
  std::array<uint64_t, 4> s;
  for (auto& word : s) word = r.u64();
  Rng rng;
  rng.set_state(s);
  return rng;
}

void write_snapshot(BinWriter& w, const EnvSnapshot& s) {
  w.str(s.env_id);
  w.u32(s.version);
  w.f64_vec(s.reals);
  w.u64_vec(s.words);
  w.f64(s.params.delta_used);
  w.u32(s.params.reset_mode == ResetMode::kRegular ? 0 : 1);
  w.u64(s.params.values.size());
  for (const auto& [name, value] : s.params.values) {
    w.str(name);
    w.f64(value);
  }
}

EnvSnapshot read_snapshot(BinReader& r) {
  EnvSnapshot s;
  s.env_id = r.str();
  s.version = r.u32();
  s.reals = r.f64_vec();
  s.words = r.u64_vec();
  s.params.delta_used = r.f64();
  s.params.reset_mode = r.u32() == 0 ? ResetMode::kRegular : ResetMode::kDemonstration;
  const uint64_t count = r.u64();
  for (uint64_t i = 0; i < count; ++i) {
    std::string name = r.str();
    s.params.values[name] = r.f64();
  }
  return s;
}

void write_tracker(BinWriter& w, const SuccessRateTracker& t) {
  w.f64(t.sr);
  w.f64(t.smoothing);
  w.i64(t.episodes_seen);
}

SuccessRateTracker read_tracker(BinReader& r) {
  SuccessRateTracker t;
  t.sr = r.f64();
  t.smoothing = r.f64();
  t.episodes_seen = r.i64();
  return t;
}
}  // namespace

void Trainer::serialize(BinWriter& w) const {
  auto tensors = const_cast<PolicyNetwork&>(*policy_).tensors();
  w.u64(tensors.size());
  for (const TensorRef& t : tensors) {
    w.str(t.name);
    w.f64_span(t.data, t.size);
  }
  auto& adam = const_cast<AdamOptimizer&>(adam_);
  w.i64(adam.t());
  for (const auto& m : adam.moments_m()) w.f64_span(m.data(), m.size());
  for (const auto& v : adam.moments_v()) w.f64_span(v.data(), v.size());

  w.f64(state_.demo.delta);
  write_tracker(w, state_.demo.tracker);
  w.f64(state_.regular.delta);
  write_tracker(w, state_.regular.tracker);
  w.i64(state_.iteration);
  w.i64(state_.total_iterations);
  w.f64(state_.alpha);
  w.f64(state_.beta);
  w.f64(state_.increment);

  w.i64(env_steps_);
  write_rng(w, trainer_rng_);
  write_rng(w, coordinator_rng_);
  w.u32(iter_mode_ == ResetMode::kRegular ? 0 : 1);
  w.boolean(workers_initialized_);
  w.u64(workers_.size());
  for (const Worker& worker : workers_) {
    write_rng(w, worker.rng);
    w.u32(worker.mode == ResetMode::kRegular ? 0 : 1);
    if (workers_initialized_) {
      w.f64_vec(worker.pending_obs);
      write_snapshot(w, worker.env->save_state());
    }
  }
}

void Trainer::deserialize(BinReader& r) {
  const uint64_t n_tensors = r.u64();
  auto tensors = policy_->tensors();
  if (n_tensors != tensors.size()) throw ParseError("checkpoint: tensor count mismatch");
  for (TensorRef& t : tensors) {
    const std::string name = r.str();
    if (name != t.name) throw ParseError("checkpoint: tensor order mismatch at '" + name + "'");
    r.f64_into(t.data, t.size);
  }
  adam_.set_t(r.i64());
  for (auto& m : adam_.moments_m()) r.f64_into(m.data(), m.size());
  for (auto& v : adam_.moments_v()) r.f64_into(v.data(), v.size());

  state_.demo.delta = r.f64();
  state_.demo.tracker = read_tracker(r);
  state_.regular.delta = r.f64();
  state_.regular.tracker = read_tracker(r);
  state_.iteration = r.i64();
  state_.total_iterations = r.i64();
  state_.alpha = r.f64();
  state_.beta = r.f64();
  state_.increment = r.f64();

  env_steps_ = r.i64();
  trainer_rng_ = read_rng(r);
  coordinator_rng_ = read_rng(r);
  iter_mode_ = r.u32() == 0 ? ResetMode::kRegular : ResetMode::kDemonstration;
  workers_initialized_ = r.boolean();
  const uint64_t n_workers = r.u64();
  if (n_workers != workers_.size()) throw ParseError("checkpoint: actor count mismatch");
  for (Worker& worker : workers_) {
    worker.rng = read_rng(r);
    worker.mode = r.u32() == 0 ? ResetMode::kRegular : ResetMode::kDemonstration;
    if (workers_initialized_) {
      worker.pending_obs = r.f64_vec();
      EnvSnapshot snap = read_snapshot(r);
      worker.env->reset_from_state(snap, ParamAssignment{});
    }
  }
}

}  // namespace acgd
