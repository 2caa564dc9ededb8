#include "acgd/rl/adam.hpp"

#include <cmath>

namespace acgd {

void AdamOptimizer::attach(std::vector<TensorRef> params, std::vector<TensorRef> grads) {
  if (params.size() != grads.size()) throw ConfigError("adam: param/grad tensor count mismatch");
  params_ = std::move(params);
  grads_ = std::move(grads);
  m_.clear();
  v_.clear();
  for (const TensorRef& p : params_) {
    m_.push_back(Eigen::VectorXd::Zero(p.size));
    v_.push_back(Eigen::VectorXd::Zero(p.size));
  }
  t_ = 0;
}

double AdamOptimizer::clip_gradients(double max_norm) {
  double sq = 0.0;
  for (const TensorRef& g : grads_) {
    for (int64_t i = 0; i < g.size; ++i) sq += g.data[i] * g.data[i];
  }
  const double norm = std::sqrt(sq);
  if (norm > max_norm && norm > 0.0) {
    const double scale = max_norm / norm;
    for (const TensorRef& g : grads_) {
      for (int64_t i = 0; i < g.size; ++i) g.data[i] *= scale;
    }
  }
  return norm;
}

void AdamOptimizer::step(double lr) {
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (size_t k = 0; k < params_.size(); ++k) {
    double* p = params_[k].data;
    const double* g = grads_[k].data;
    Eigen::VectorXd& m = m_[k];
    Eigen::VectorXd& v = v_[k];
    for (int64_t i = 0; i < params_[k].size; ++i) {
      m(i) = beta1_ * m(i) + (1.0 - beta1_) * g[i];
      v(i) = beta2_ * v(i) + (1.0 - beta2_) * g[i] * g[i];
      const double mhat = m(i) / bc1;
      const double vhat = v(i) / bc2;
      p[i] -= lr * mhat / (std::sqrt(vhat) + eps_);
    }
  }
}

}  // namespace acgd
