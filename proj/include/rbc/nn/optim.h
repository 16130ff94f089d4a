#ifndef RBC_NN_OPTIM_H_
#define RBC_NN_OPTIM_H_

#include <cmath>
#include <vector>

#include "rbc/nn/layers.h"

namespace rbc::nn {

struct AdamWConfig {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 0.01;
};

// AdamW with decoupled weight decay: w <- w * (1 - lr * wd), then the bias
// corrected Adam step.
template <typename T>
class AdamW {
 public:
  AdamW() = default;
  AdamW(std::vector<Parameter<T>*> params, AdamWConfig cfg)
      : params_(std::move(params)), cfg_(cfg) {
    for (auto* p : params_) {
      m_.push_back(Matrix<T>::Zero(p->value.rows(), p->value.cols()));
      v_.push_back(Matrix<T>::Zero(p->value.rows(), p->value.cols()));
    }
  }

  void ZeroGrad() {
    for (auto* p : params_) p->ZeroGrad();
  }

  // Applies one update using the accumulated gradients; `step` is 1-based.
  void Step() {
    ++step_;
    const T lr = T(cfg_.learning_rate);
    const T b1 = T(cfg_.beta1), b2 = T(cfg_.beta2);
    const T c1 = T(1) - T(std::pow(cfg_.beta1, step_));
    const T c2 = T(1) - T(std::pow(cfg_.beta2, step_));
    const T eps = T(cfg_.epsilon);
    const T decay = T(1) - lr * T(cfg_.weight_decay);
    for (size_t i = 0; i < params_.size(); ++i) {
      auto& w = params_[i]->value;
      const auto& g = params_[i]->grad;
      m_[i] = b1 * m_[i] + (T(1) - b1) * g;
      v_[i] = b2 * v_[i] + (T(1) - b2) * g.cwiseProduct(g);
      w *= decay;
      w.array() -= lr * (m_[i].array() / c1) / ((v_[i].array() / c2).sqrt() + eps);
    }
  }

  long step() const { return step_; }
  void set_step(long s) { step_ = s; }
  std::vector<Matrix<T>>& first_moments() { return m_; }
  std::vector<Matrix<T>>& second_moments() { return v_; }
  const AdamWConfig& config() const { return cfg_; }

 private:
  std::vector<Parameter<T>*> params_;
  AdamWConfig cfg_;
  std::vector<Matrix<T>> m_, v_;
  long step_ = 0;
};

}  // namespace rbc::nn

#endif  // RBC_NN_OPTIM_H_
