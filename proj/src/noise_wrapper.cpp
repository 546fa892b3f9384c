#include "dsaa/noise_wrapper.hpp"

#include <stdexcept>

namespace dsaa {

NoiseWrapper::NoiseWrapper(std::unique_ptr<Env> inner, int noise_dims, uint64_t seed)
    : inner_(std::move(inner)), noise_dims_(noise_dims), seed_(seed), rng_(seed) {
  if (noise_dims_ < 1) throw std::invalid_argument("NoiseWrapper: need k >= 1");
}

Vec NoiseWrapper::augment(Vec obs) {
  for (int i = 0; i < noise_dims_; ++i) obs.push_back(rng_.uniform());
  return obs;
}

Vec NoiseWrapper::reset() { return augment(inner_->reset()); }

StepResult NoiseWrapper::step(int action) {
  StepResult res = inner_->step(action);
  res.obs = augment(std::move(res.obs));
  return res;
}

std::unique_ptr<Env> NoiseWrapper::clone() const {
  auto copy = std::make_unique<NoiseWrapper>(inner_->clone(), noise_dims_, seed_);
  copy->rng_ = rng_;
  return copy;
}

}  // namespace dsaa
