#include "acgd/rl/policy.hpp"

#include <cmath>

namespace acgd {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
constexpr double half_log_2pi_e() { return 0.5 * (kLog2Pi + 1.0); }
}  // namespace

PolicyNetwork::PolicyNetwork(const PolicyConfig& cfg, Rng& rng) : cfg_(cfg) {
  if (cfg.obs_dim <= 0 || cfg.action_dim <= 0 || cfg.hidden.empty()) {
    throw ConfigError("policy network needs obs_dim > 0, action_dim > 0, >= 1 hidden layer");
  }
  int prev = cfg.obs_dim;
  for (int h : cfg.hidden) {
    Eigen::MatrixXd w(h, prev);
    xavier_init(w, rng, 1.0);
    w_.push_back(std::move(w));
    b_.push_back(Eigen::VectorXd::Zero(h));
    prev = h;
  }
  w_mu_.resize(cfg.action_dim, prev);
  xavier_init(w_mu_, rng, 0.01);  // small policy head keeps initial actions near zero
  b_mu_ = Eigen::VectorXd::Zero(cfg.action_dim);
  w_v_.resize(1, prev);
  xavier_init(w_v_, rng, 1.0);
  b_v_ = Eigen::VectorXd::Zero(1);
  log_std_ = Eigen::VectorXd::Constant(cfg.action_dim, cfg.log_std_init);
  clamp_log_std();

  g_w_.resize(w_.size());
  g_b_.resize(b_.size());
  zero_grads();
}

void PolicyNetwork::xavier_init(Eigen::MatrixXd& w, Rng& rng, double gain) {
  const double limit = gain * std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
  for (Eigen::Index r = 0; r < w.rows(); ++r) {
    for (Eigen::Index c = 0; c < w.cols(); ++c) {
      w(r, c) = rng.uniform(-limit, limit);
    }
  }
}

void PolicyNetwork::zero_grads() {
  for (size_t i = 0; i < w_.size(); ++i) {
    g_w_[i] = Eigen::MatrixXd::Zero(w_[i].rows(), w_[i].cols());
    g_b_[i] = Eigen::VectorXd::Zero(b_[i].size());
  }
  g_w_mu_ = Eigen::MatrixXd::Zero(w_mu_.rows(), w_mu_.cols());
  g_b_mu_ = Eigen::VectorXd::Zero(b_mu_.size());
  g_w_v_ = Eigen::MatrixXd::Zero(w_v_.rows(), w_v_.cols());
  g_b_v_ = Eigen::VectorXd::Zero(b_v_.size());
  g_log_std_ = Eigen::VectorXd::Zero(log_std_.size());
}

void PolicyNetwork::forward(const Eigen::MatrixXd& X, Eigen::MatrixXd& mu, Eigen::VectorXd& v) {
  if (X.cols() != cfg_.obs_dim) throw ConfigError("policy forward: observation width mismatch");
  x_ = X;
  h_.resize(w_.size());
  const Eigen::MatrixXd* cur = &x_;
  for (size_t i = 0; i < w_.size(); ++i) {
    h_[i] = ((*cur) * w_[i].transpose()).rowwise() + b_[i].transpose();
    h_[i] = h_[i].array().tanh();
    cur = &h_[i];
  }
  mu = ((*cur) * w_mu_.transpose()).rowwise() + b_mu_.transpose();
  v = ((*cur) * w_v_.transpose()).col(0).array() + b_v_(0);
  if (!mu.allFinite() || !v.allFinite()) {
    throw NumericError("policy forward produced non-finite outputs");
  }
}

void PolicyNetwork::backward(const Eigen::MatrixXd& d_mu, const Eigen::VectorXd& d_v,
                             const Eigen::VectorXd& d_log_std) {
  const Eigen::MatrixXd& h_last = h_.back();
  g_w_mu_ += d_mu.transpose() * h_last;
  g_b_mu_ += d_mu.colwise().sum().transpose();
  g_w_v_ += d_v.transpose() * h_last;
  g_b_v_(0) += d_v.sum();
  g_log_std_ += d_log_std;

  Eigen::MatrixXd dh = d_mu * w_mu_ + d_v * w_v_;
  for (int i = static_cast<int>(w_.size()) - 1; i >= 0; --i) {
    const Eigen::MatrixXd dz = dh.array() * (1.0 - h_[i].array().square());
    const Eigen::MatrixXd& input = i == 0 ? x_ : h_[i - 1];
    g_w_[i] += dz.transpose() * input;
    g_b_[i] += dz.colwise().sum().transpose();
    if (i > 0) dh = dz * w_[i];
  }
}

double PolicyNetwork::log_prob(const Eigen::RowVectorXd& mu,
                               const Eigen::RowVectorXd& action) const {
  double lp = 0.0;
  for (Eigen::Index k = 0; k < log_std_.size(); ++k) {
    const double ls = log_std_(k);
    const double z = (action(k) - mu(k)) * std::exp(-ls);
    lp += -0.5 * z * z - ls - 0.5 * kLog2Pi;
  }
  return lp;
}

double PolicyNetwork::entropy() const {
  return log_std_.sum() + static_cast<double>(log_std_.size()) * half_log_2pi_e();
}

void PolicyNetwork::clamp_log_std() {
  log_std_ = log_std_.cwiseMax(cfg_.log_std_min).cwiseMin(cfg_.log_std_max);
}

std::vector<TensorRef> PolicyNetwork::tensors() {
  std::vector<TensorRef> out;
  for (size_t i = 0; i < w_.size(); ++i) {
    out.push_back({"w" + std::to_string(i), w_[i].data(), w_[i].size()});
    out.push_back({"b" + std::to_string(i), b_[i].data(), b_[i].size()});
  }
  out.push_back({"w_mu", w_mu_.data(), w_mu_.size()});
  out.push_back({"b_mu", b_mu_.data(), b_mu_.size()});
  out.push_back({"w_v", w_v_.data(), w_v_.size()});
  out.push_back({"b_v", b_v_.data(), b_v_.size()});
  out.push_back({"log_std", log_std_.data(), log_std_.size()});
  return out;
}

std::vector<TensorRef> PolicyNetwork::grad_tensors() {
  std::vector<TensorRef> out;
  for (size_t i = 0; i < g_w_.size(); ++i) {
    out.push_back({"w" + std::to_string(i), g_w_[i].data(), g_w_[i].size()});
    out.push_back({"b" + std::to_string(i), g_b_[i].data(), g_b_[i].size()});
  }
  out.push_back({"w_mu", g_w_mu_.data(), g_w_mu_.size()});
  out.push_back({"b_mu", g_b_mu_.data(), g_b_mu_.size()});
  out.push_back({"w_v", g_w_v_.data(), g_w_v_.size()});
  out.push_back({"b_v", g_b_v_.data(), g_b_v_.size()});
  out.push_back({"log_std", g_log_std_.data(), g_log_std_.size()});
  return out;
}

int64_t PolicyNetwork::parameter_count() const {
  int64_t n = 0;
  for (const auto& w : w_) n += w.size();
  for (const auto& b : b_) n += b.size();
  return n + w_mu_.size() + b_mu_.size() + w_v_.size() + b_v_.size() + log_std_.size();
}

Eigen::VectorXd PolicyNetwork::flat_parameters() const {
  Eigen::VectorXd flat(parameter_count());
  int64_t off = 0;
  auto self = const_cast<PolicyNetwork*>(this);
  for (const TensorRef& t : self->tensors()) {
    for (int64_t i = 0; i < t.size; ++i) flat(off++) = t.data[i];
  }
  return flat;
}

void PolicyNetwork::set_flat_parameters(const Eigen::VectorXd& flat) {
  if (flat.size() != parameter_count()) {
    throw ConfigError("flat parameter vector has wrong length");
  }
  int64_t off = 0;
  for (const TensorRef& t : tensors()) {
    for (int64_t i = 0; i < t.size; ++i) t.data[i] = flat(off++);
  }
}

void PolicyNetwork::reset_value_head(Rng& rng) {
  xavier_init(w_v_, rng, 1.0);
  b_v_.setZero();
}

}  // namespace acgd
