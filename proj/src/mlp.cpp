#include "dsaa/mlp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dsaa {

void MlpGrads::zero() {
  for (auto& m : dw) m.zero();
  for (auto& v : db) std::fill(v.begin(), v.end(), 0.0);
}

Mlp::Mlp(int input_dim, const std::vector<int>& hidden, int output_dim, Rng& rng,
         bool zero_init_output) {
  if (input_dim <= 0 || output_dim <= 0)
    throw std::invalid_argument("Mlp: dimensions must be positive");
  std::vector<int> dims;
  dims.push_back(input_dim);
  for (int h : hidden) {
    if (h <= 0) throw std::invalid_argument("Mlp: hidden size must be positive");
    dims.push_back(h);
  }
  dims.push_back(output_dim);
  for (size_t l = 0; l + 1 < dims.size(); ++l) {
    DenseLayer layer;
    layer.w.resize(dims[l + 1], dims[l]);
    layer.b.assign(dims[l + 1], 0.0);
    layer.act = (l + 2 < dims.size()) ? Activation::kLeakyRelu : Activation::kLinear;
    const bool zero = zero_init_output && l + 2 == dims.size();
    if (!zero) {
      const double scale = 1.0 / std::sqrt(static_cast<double>(dims[l]));
      for (double& v : layer.w.data) v = rng.uniform(-scale, scale);
    }
    layers_.push_back(std::move(layer));
  }
  input_dim_ = input_dim;
  output_dim_ = output_dim;
}

void Mlp::set_dims_from_layers() {
  if (layers_.empty()) {
    input_dim_ = output_dim_ = 0;
    return;
  }
  input_dim_ = layers_.front().w.cols;
  output_dim_ = layers_.back().w.rows;
  for (size_t l = 0; l + 1 < layers_.size(); ++l)
    if (layers_[l].w.rows != layers_[l + 1].w.cols)
      throw std::invalid_argument("Mlp: consecutive layer dimensions do not chain");
}

namespace {

inline void leaky_relu_inplace(Matrix& m) {
  for (double& v : m.data)
    if (v < 0) v *= kLeakyReluSlope;
}

// act'(z) recovered from the post-activation value: LeakyReLU is sign
// preserving, so y > 0 iff z > 0.
inline void leaky_relu_backward_inplace(Matrix& grad, const Matrix& post) {
  for (size_t i = 0; i < grad.data.size(); ++i)
    if (post.data[i] <= 0) grad.data[i] *= kLeakyReluSlope;
}

}  // namespace

const Matrix& Mlp::forward_batch(const Matrix& x, MlpCache& cache) const {
  if (x.cols != input_dim_)
    throw std::invalid_argument("Mlp::forward: input has dimension " +
                                std::to_string(x.cols) + ", expected " +
                                std::to_string(input_dim_));
  cache.inputs.resize(layers_.size());
  cache.inputs[0] = x;
  for (size_t l = 0; l < layers_.size(); ++l) {
    const DenseLayer& layer = layers_[l];
    Matrix& out = (l + 1 < layers_.size()) ? cache.inputs[l + 1] : cache.out;
    linear_forward(cache.inputs[l], layer.w, layer.b, out);
    if (layer.act == Activation::kLeakyRelu) leaky_relu_inplace(out);
  }
  return cache.out;
}

const Matrix& Mlp::backward_batch(const Matrix& upstream, MlpCache& cache,
                                  MlpGrads& grads) const {
  if (cache.inputs.size() != layers_.size())
    throw std::invalid_argument("Mlp::backward: no cached forward pass");
  cache.ga = upstream;
  for (int l = static_cast<int>(layers_.size()) - 1; l >= 0; --l) {
    const DenseLayer& layer = layers_[l];
    if (layer.act == Activation::kLeakyRelu) {
      const Matrix& post = (l + 1 < static_cast<int>(layers_.size()))
                               ? cache.inputs[l + 1]
                               : cache.out;
      leaky_relu_backward_inplace(cache.ga, post);
    }
    linear_backward(cache.inputs[l], layer.w, cache.ga, cache.gb, grads.dw[l],
                    grads.db[l]);
    std::swap(cache.ga, cache.gb);
  }
  return cache.ga;
}

Vec Mlp::forward(const Vec& x) {
  Matrix xm(1, static_cast<int>(x.size()));
  xm.data = x;
  const Matrix& out = forward_batch(xm, cache1_);
  has_cache_ = true;
  if (!all_finite(out)) throw std::runtime_error("Mlp::forward: non-finite output");
  return out.data;
}

Vec Mlp::forward_const(const Vec& x) const {
  Matrix xm(1, static_cast<int>(x.size()));
  xm.data = x;
  MlpCache cache;
  forward_batch(xm, cache);
  if (!all_finite(cache.out))
    throw std::runtime_error("Mlp::forward: non-finite output");
  return cache.out.data;
}

Mlp::BackwardResult Mlp::backward(const Vec& upstream) {
  if (!has_cache_)
    throw std::invalid_argument("Mlp::backward called without a cached forward pass");
  if (static_cast<int>(upstream.size()) != output_dim_)
    throw std::invalid_argument("Mlp::backward: upstream gradient has wrong dimension");
  BackwardResult res;
  res.grads = make_grads();
  Matrix up(1, output_dim_);
  up.data = upstream;
  const Matrix& dx = backward_batch(up, cache1_, res.grads);
  res.dx = dx.data;
  return res;
}

MlpGrads Mlp::make_grads() const {
  MlpGrads g;
  for (const auto& layer : layers_) {
    g.dw.emplace_back(layer.w.rows, layer.w.cols);
    g.db.emplace_back(layer.b.size(), 0.0);
  }
  return g;
}

size_t Mlp::param_count() const {
  size_t n = 0;
  for (const auto& layer : layers_) n += layer.w.size() + layer.b.size();
  return n;
}

bool Mlp::params_finite() const {
  for (const auto& layer : layers_)
    if (!all_finite(layer.w) || !all_finite(layer.b)) return false;
  return true;
}

}  // namespace dsaa
