// Appends k fresh U(0,1) dimensions to every observation; dynamics and
// reward pass through untouched.
#pragma once

#include "dsaa/env.hpp"
#include "dsaa/rng.hpp"

namespace dsaa {

class NoiseWrapper final : public Env {
 public:
  NoiseWrapper(std::unique_ptr<Env> inner, int noise_dims, uint64_t seed);

  Vec reset() override;
  StepResult step(int action) override;
  int obs_dim() const override { return inner_->obs_dim() + noise_dims_; }
  int n_actions() const override { return inner_->n_actions(); }
  int state_id() const override { return inner_->state_id(); }
  int n_state_ids() const override { return inner_->n_state_ids(); }
  std::unique_ptr<Env> clone() const override;
  std::string name() const override { return inner_->name() + "+noise"; }

  const Env& inner() const { return *inner_; }
  int noise_dims() const { return noise_dims_; }

 private:
  Vec augment(Vec obs);

  std::unique_ptr<Env> inner_;
  int noise_dims_;
  uint64_t seed_;
  Rng rng_;
};

}  // namespace dsaa
