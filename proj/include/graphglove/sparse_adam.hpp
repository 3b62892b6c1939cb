#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <vector>

#include "graphglove/common.hpp"

namespace graphglove {

// Adam with per-parameter step counts: parameters that receive no gradient in
// a step keep their first/second-moment state untouched (lazy updates), so the
// cost of a step is proportional to the number of touched parameters.
// beta^t factors are memoized incrementally; recomputing them after load gives
// bit-identical values because each table entry is a product chain.
class SparseAdam {
 public:
  SparseAdam() = default;
  SparseAdam(size_t n, double lr, double beta1, double beta2, double eps)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps), m_(n, 0.0), v_(n, 0.0), t_(n, 0) {
    pow1_.push_back(1.0);
    pow2_.push_back(1.0);
  }

  size_t size() const { return m_.size(); }

  void update(size_t i, double grad, double& param) {
    uint32_t t = ++t_[i];
    double m = m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad;
    double v = v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad * grad;
    double m_hat = m / (1.0 - pow1(t));
    double v_hat = v / (1.0 - pow2(t));
    param -= lr_ * m_hat / (std::sqrt(v_hat) + eps_);
  }

  void save(std::ostream& out) const {
    write_u64(out, m_.size());
    for (double m : m_) write_f64(out, m);
    for (double v : v_) write_f64(out, v);
    for (uint32_t t : t_) write_u32(out, t);
  }

  void load(std::istream& in, const char* what = "optimizer state") {
    uint64_t n = read_u64(in, what);
    m_.assign(n, 0.0);
    v_.assign(n, 0.0);
    t_.assign(n, 0);
    for (auto& m : m_) m = read_f64(in, what);
    for (auto& v : v_) v = read_f64(in, what);
    for (auto& t : t_) t = read_u32(in, what);
  }

  // Hyperparameters live in the training config, not the state file; callers
  // re-apply them after load. Resets the beta^t tables.
  void configure(double lr, double beta1, double beta2, double eps) {
    lr_ = lr;
    beta1_ = beta1;
    beta2_ = beta2;
    eps_ = eps;
    pow1_.assign(1, 1.0);
    pow2_.assign(1, 1.0);
  }

 private:
  double pow1(uint32_t t) {
    while (pow1_.size() <= t) pow1_.push_back(pow1_.back() * beta1_);
    return pow1_[t];
  }
  double pow2(uint32_t t) {
    while (pow2_.size() <= t) pow2_.push_back(pow2_.back() * beta2_);
    return pow2_[t];
  }

  double lr_ = 0.001, beta1_ = 0.9, beta2_ = 0.999, eps_ = 1e-8;
  std::vector<double> m_, v_;
  std::vector<uint32_t> t_;
  std::vector<double> pow1_, pow2_;
};

}  // namespace graphglove
