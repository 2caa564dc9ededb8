#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "acgd/common.hpp"
#include "acgd/rng.hpp"

namespace acgd {

// Named view of one parameter tensor; used by the optimizer, gradient
// clipping, checkpointing and the finite-difference tests.
struct TensorRef {
  std::string name;
  double* data = nullptr;
  int64_t size = 0;
};

struct PolicyConfig {
  int obs_dim = 8;
  int action_dim = 3;
  std::vector<int> hidden = {64, 64};
  double log_std_init = -0.7;
  double log_std_min = -5.0;
  double log_std_max = 2.0;
};

// MLP with tanh hidden layers, a Gaussian action head (state-independent
// learned log-std) and a scalar value head on the shared trunk. Forward and
// reverse passes are batched; backward() accumulates exact gradients of any
// scalar objective given its partials w.r.t. the heads.
class PolicyNetwork {
 public:
  PolicyNetwork(const PolicyConfig& cfg, Rng& rng);

  const PolicyConfig& config() const { return cfg_; }

  // X is (N x obs_dim); fills mu (N x A) and v (N). Caches activations for
  // backward().
  void forward(const Eigen::MatrixXd& X, Eigen::MatrixXd& mu, Eigen::VectorXd& v);

  // Partials of the objective w.r.t. mu rows, values and log-std; adds the
  // resulting parameter gradients into the grad buffers.
  void backward(const Eigen::MatrixXd& d_mu, const Eigen::VectorXd& d_v,
                const Eigen::VectorXd& d_log_std);

  void zero_grads();

  // sum_k [ -0.5*((a_k-mu_k)/sigma_k)^2 - log sigma_k - 0.5*log(2*pi) ]
  double log_prob(const Eigen::RowVectorXd& mu, const Eigen::RowVectorXd& action) const;
  // sum_k [ log sigma_k + 0.5*log(2*pi*e) ], state-independent
  double entropy() const;

  const Eigen::VectorXd& log_std() const { return log_std_; }
  Eigen::VectorXd sigma() const { return log_std_.array().exp(); }
  void clamp_log_std();

  std::vector<TensorRef> tensors();
  std::vector<TensorRef> grad_tensors();

  int64_t parameter_count() const;
  Eigen::VectorXd flat_parameters() const;
  void set_flat_parameters(const Eigen::VectorXd& flat);

  // Reinitializes the value head (used by the BC-initialized PPO baseline,
  // which keeps the cloned policy but starts the critic from scratch).
  void reset_value_head(Rng& rng);

 private:
  static void xavier_init(Eigen::MatrixXd& w, Rng& rng, double gain);

  PolicyConfig cfg_;

  std::vector<Eigen::MatrixXd> w_;  // trunk weights, layer i: (h_i x h_{i-1})
  std::vector<Eigen::VectorXd> b_;
  Eigen::MatrixXd w_mu_;  // (A x h_last)
  Eigen::VectorXd b_mu_;
  Eigen::MatrixXd w_v_;  // (1 x h_last)
  Eigen::VectorXd b_v_;  // (1)
  Eigen::VectorXd log_std_;

  std::vector<Eigen::MatrixXd> g_w_;
  std::vector<Eigen::VectorXd> g_b_;
  Eigen::MatrixXd g_w_mu_;
  Eigen::VectorXd g_b_mu_;
  Eigen::MatrixXd g_w_v_;
  Eigen::VectorXd g_b_v_;
  Eigen::VectorXd g_log_std_;

  // forward cache
  Eigen::MatrixXd x_;
  std::vector<Eigen::MatrixXd> h_;  // post-tanh activations per layer
};

}  // namespace acgd
