// Small dense networks with manual backpropagation. Layer set is fixed
// (affine + LeakyReLU / linear) which keeps the finite-difference gradient
// checker exhaustive.
#pragma once

#include <vector>

#include "dsaa/numeric.hpp"
#include "dsaa/rng.hpp"

namespace dsaa {

enum class Activation { kLeakyRelu, kLinear };

constexpr double kLeakyReluSlope = 0.01;

struct DenseLayer {
  Matrix w;  // out x in
  Vec b;     // out
  Activation act = Activation::kLinear;
};

struct MlpGrads {
  std::vector<Matrix> dw;
  std::vector<Vec> db;
  void zero();
};

// Caller-owned scratch for the batched pass; holds per-layer inputs plus
// ping-pong gradient buffers so hot loops never allocate.
struct MlpCache {
  std::vector<Matrix> inputs;  // inputs[l] = batch input to layer l
  Matrix out;                  // post-activation output of the final layer
  Matrix ga, gb;               // gradient scratch
};

class Mlp {
 public:
  Mlp() = default;
  // Hidden layers get LeakyReLU, the final layer is linear. Weights are
  // uniform in +-1/sqrt(fan_in), biases zero. zero_init_output forces the
  // final layer to all-zero parameters.
  Mlp(int input_dim, const std::vector<int>& hidden, int output_dim, Rng& rng,
      bool zero_init_output = false);

  int input_dim() const { return input_dim_; }
  int output_dim() const { return output_dim_; }
  bool empty() const { return layers_.empty(); }

  std::vector<DenseLayer>& layers() { return layers_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }
  // Recompute input/output dims after tests hand-assemble layers.
  void set_dims_from_layers();

  // Single-sample API. forward() caches activations for a following
  // backward(); backward() without a cached forward is a usage error.
  Vec forward(const Vec& x);
  Vec forward_const(const Vec& x) const;
  struct BackwardResult {
    MlpGrads grads;
    Vec dx;
  };
  BackwardResult backward(const Vec& upstream);

  // Batched API. Returns cache.out.
  const Matrix& forward_batch(const Matrix& x, MlpCache& cache) const;
  // Accumulates into grads (zero it first); returns dL/dx via cache.ga.
  const Matrix& backward_batch(const Matrix& upstream, MlpCache& cache,
                               MlpGrads& grads) const;

  MlpGrads make_grads() const;
  size_t param_count() const;
  bool params_finite() const;

  // Visits every parameter tensor in a fixed order (w0, b0, w1, b1, ...).
  template <typename F>
  void visit_params(F&& f) {
    for (auto& layer : layers_) {
      f(layer.w.data);
      f(layer.b);
    }
  }
  template <typename F>
  void visit_params(F&& f) const {
    for (const auto& layer : layers_) {
      f(layer.w.data);
      f(layer.b);
    }
  }

 private:
  std::vector<DenseLayer> layers_;
  int input_dim_ = 0;
  int output_dim_ = 0;
  MlpCache cache1_;      // scratch for the single-sample API
  bool has_cache_ = false;
};

}  // namespace dsaa
