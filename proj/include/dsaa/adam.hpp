// Adam with bias correction, one state object per network.
#pragma once

#include "dsaa/mlp.hpp"

namespace dsaa {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

class AdamState {
 public:
  AdamState() = default;
  AdamState(const Mlp& net, AdamConfig cfg);

  // In-place update of net from grads; increments the step counter.
  void step(Mlp& net, const MlpGrads& grads);

  long step_count() const { return t_; }
  AdamConfig& config() { return cfg_; }
  const AdamConfig& config() const { return cfg_; }

 private:
  AdamConfig cfg_;
  std::vector<Matrix> mw_, vw_;
  std::vector<Vec> mb_, vb_;
  long t_ = 0;
};

}  // namespace dsaa
