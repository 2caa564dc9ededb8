#pragma once

#include <Eigen/Dense>
#include <vector>

#include "acgd/rl/policy.hpp"

namespace acgd {

// Adam with bias correction over a fixed list of parameter tensors.
class AdamOptimizer {
 public:
  AdamOptimizer(double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-5)
      : beta1_(beta1), beta2_(beta2), eps_(eps) {}

  void attach(std::vector<TensorRef> params, std::vector<TensorRef> grads);

  // One update with the given learning rate; grads are read, params written.
  void step(double lr);

  // Scales all gradients so the global norm does not exceed max_norm;
  // returns the pre-clip norm.
  double clip_gradients(double max_norm);

  int64_t t() const { return t_; }
  std::vector<Eigen::VectorXd>& moments_m() { return m_; }
  std::vector<Eigen::VectorXd>& moments_v() { return v_; }
  void set_t(int64_t t) { t_ = t; }

 private:
  double beta1_, beta2_, eps_;
  int64_t t_ = 0;
  std::vector<TensorRef> params_;
  std::vector<TensorRef> grads_;
  std::vector<Eigen::VectorXd> m_;
  std::vector<Eigen::VectorXd> v_;
};

}  // namespace acgd
