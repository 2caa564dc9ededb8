#include "acgd/baselines.hpp"

#include <cmath>

namespace acgd {

DemoRestart uniform_demo_sampler(const DemoStore& store, Rng& rng) {
  return sample_demo_restart(store, 1.0, rng);
}

double linear_schedule(int64_t i, int64_t n_total) {
  if (n_total <= 0) throw ConfigError("linear_schedule: total iterations must be > 0");
  return static_cast<double>(i) / static_cast<double>(n_total);
}

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
}

BcReport behavior_cloning_train(const DemoStore& store, PolicyNetwork& policy, Env& scratch_env,
                                const BcConfig& cfg) {
  if (!store.with_actions) {
    throw ConfigError("behavior cloning needs a demo store recorded with actions");
  }
  if (store.env_id != scratch_env.id()) {
    throw ConfigError("behavior cloning store env '" + store.env_id +
                      "' does not match environment '" + scratch_env.id() + "'");
  }
  const int obs_dim = policy.config().obs_dim;
  const int act_dim = policy.config().action_dim;

  // Rebuild (observation, action) pairs from the recorded states.
  std::vector<Obs> observations;
  std::vector<std::array<double, 3>> actions;
  for (const Trajectory& traj : store.trajectories) {
    if (traj.actions.size() + 1 != traj.states.size()) {
      throw ParseError("trajectory action count does not match state count");
    }
    for (size_t t = 0; t + 1 < traj.states.size(); ++t) {
      scratch_env.reset_from_state(traj.states[t], ParamAssignment{});
      observations.push_back(scratch_env.observe());
      actions.push_back(traj.actions[t]);
    }
  }
  const int64_t total = static_cast<int64_t>(observations.size());
  if (total < 2) throw ConfigError("behavior cloning needs at least two transitions");

  Rng rng(cfg.seed, 0xbc);
  std::vector<int64_t> order(total);
  for (int64_t i = 0; i < total; ++i) order[i] = i;
  for (int64_t i = total - 1; i > 0; --i) {
    std::swap(order[i], order[rng.uniform_int(static_cast<uint64_t>(i + 1))]);
  }
  int64_t holdout = static_cast<int64_t>(std::llround(cfg.holdout_fraction * total));
  holdout = std::min(std::max<int64_t>(holdout, total >= 10 ? 1 : 0), total - 1);
  const int64_t train_n = total - holdout;

  auto gather = [&](int64_t first, int64_t count, Eigen::MatrixXd& X, Eigen::MatrixXd& A) {
    X.resize(count, obs_dim);
    A.resize(count, act_dim);
    for (int64_t i = 0; i < count; ++i) {
      const int64_t src = order[first + i];
      for (int k = 0; k < obs_dim; ++k) X(i, k) = observations[src][k];
      for (int k = 0; k < act_dim; ++k) A(i, k) = actions[src][k];
    }
  };
  Eigen::MatrixXd x_train, a_train, x_hold, a_hold;
  gather(0, train_n, x_train, a_train);
  gather(train_n, holdout, x_hold, a_hold);

  AdamOptimizer adam(0.9, 0.999, 1e-8);
  adam.attach(policy.tensors(), policy.grad_tensors());

  auto nll_batch = [&](const Eigen::MatrixXd& X, const Eigen::MatrixXd& A, bool update) {
    Eigen::MatrixXd mu;
    Eigen::VectorXd v;
    policy.forward(X, mu, v);
    const int64_t m = X.rows();
    const Eigen::VectorXd sigma = policy.sigma();
    Eigen::MatrixXd z = (A - mu).array().rowwise() / sigma.transpose().array();
    const double nll =
        (0.5 * z.array().square()).sum() / static_cast<double>(m) + policy.log_std().sum() +
        0.5 * act_dim * kLog2Pi;
    if (update) {
      Eigen::MatrixXd d_mu(m, act_dim);
      Eigen::VectorXd d_log_std = Eigen::VectorXd::Zero(act_dim);
      for (int64_t i = 0; i < m; ++i) {
        for (int k = 0; k < act_dim; ++k) {
          d_mu(i, k) = -z(i, k) / sigma(k) / static_cast<double>(m);
          d_log_std(k) += (1.0 - z(i, k) * z(i, k)) / static_cast<double>(m);
        }
      }
      Eigen::VectorXd d_v = Eigen::VectorXd::Zero(m);  // value head untouched
      policy.zero_grads();
      policy.backward(d_mu, d_v, d_log_std);
      adam.step(cfg.lr);
      policy.clamp_log_std();
    }
    return nll;
  };

  BcReport report;
  report.train_samples = train_n;
  report.holdout_samples = holdout;
  std::vector<int64_t> idx(train_n);
  for (int64_t i = 0; i < train_n; ++i) idx[i] = i;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (int64_t i = train_n - 1; i > 0; --i) {
      std::swap(idx[i], idx[rng.uniform_int(static_cast<uint64_t>(i + 1))]);
    }
    double epoch_loss = 0.0;
    int64_t batches = 0;
    for (int64_t start = 0; start < train_n; start += cfg.minibatch) {
      const int64_t m = std::min<int64_t>(cfg.minibatch, train_n - start);
      Eigen::MatrixXd xb(m, obs_dim), ab(m, act_dim);
      for (int64_t i = 0; i < m; ++i) {
        xb.row(i) = x_train.row(idx[start + i]);
        ab.row(i) = a_train.row(idx[start + i]);
      }
      epoch_loss += nll_batch(xb, ab, /*update=*/true);
      ++batches;
    }
    report.train_loss_per_epoch.push_back(epoch_loss / static_cast<double>(batches));
  }
  if (holdout > 0) report.holdout_loss = nll_batch(x_hold, a_hold, /*update=*/false);

  // memorization diagnostic: squared error of the deterministic policy
  Eigen::MatrixXd mu;
  Eigen::VectorXd v;
  policy.forward(x_train, mu, v);
  report.train_action_mse = (mu - a_train).array().square().mean();
  return report;
}

}  // namespace acgd
