#include "dsaa/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace dsaa {

AdamState::AdamState(const Mlp& net, AdamConfig cfg) : cfg_(cfg) {
  for (const auto& layer : net.layers()) {
    mw_.emplace_back(layer.w.rows, layer.w.cols);
    vw_.emplace_back(layer.w.rows, layer.w.cols);
    mb_.emplace_back(layer.b.size(), 0.0);
    vb_.emplace_back(layer.b.size(), 0.0);
  }
}

namespace {

// Returns the sum of updated parameters; a NaN/Inf anywhere poisons it.
double adam_update(double* p, const double* g, double* m, double* v, size_t n,
                   const AdamConfig& c, double bc1, double bc2) {
  double sentinel = 0;
  for (size_t i = 0; i < n; ++i) {
    m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g[i];
    v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * g[i] * g[i];
    const double mhat = m[i] / bc1;
    const double vhat = v[i] / bc2;
    p[i] -= c.lr * mhat / (std::sqrt(vhat) + c.eps);
    sentinel += p[i];
  }
  return sentinel;
}

}  // namespace

void AdamState::step(Mlp& net, const MlpGrads& grads) {
  auto& layers = net.layers();
  if (layers.size() != mw_.size() || grads.dw.size() != mw_.size())
    throw std::invalid_argument("AdamState::step: shape mismatch");
  ++t_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  double sentinel = 0;
  for (size_t l = 0; l < layers.size(); ++l) {
    if (grads.dw[l].rows != layers[l].w.rows || grads.dw[l].cols != layers[l].w.cols ||
        grads.db[l].size() != layers[l].b.size())
      throw std::invalid_argument("AdamState::step: gradient shape mismatch");
    sentinel += adam_update(layers[l].w.data.data(), grads.dw[l].data.data(),
                            mw_[l].data.data(), vw_[l].data.data(),
                            layers[l].w.size(), cfg_, bc1, bc2);
    sentinel += adam_update(layers[l].b.data(), grads.db[l].data(),
                            mb_[l].data(), vb_[l].data(), layers[l].b.size(),
                            cfg_, bc1, bc2);
  }
  if (!std::isfinite(sentinel))
    throw std::runtime_error("AdamState::step: parameters became non-finite");
}

}  // namespace dsaa
