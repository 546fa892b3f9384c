// Sampling and loss heads used on top of the networks.
#pragma once

#include "dsaa/numeric.hpp"
#include "dsaa/rng.hpp"

namespace dsaa {

enum class GumbelMode { kGumbelSoft, kPlainSoftmax };

struct GumbelConfig {
  double tau = 0.5;
  GumbelMode mode = GumbelMode::kGumbelSoft;
  bool zero_noise = false;  // test hook: forces g == 0
};

// gumbel_soft: softmax((logits + g) / tau) with g iid standard Gumbel.
// plain_softmax: softmax(logits), no noise, no temperature.
Vec gumbel_softmax(const Vec& logits, const GumbelConfig& cfg, Rng& rng);

// dL/dlogits for p = softmax(z / tau_eff) given dL/dp. The reparameterized
// Gumbel sample has the same Jacobian with tau_eff = tau; plain softmax uses
// tau_eff = 1.
Vec softmax_temperature_backward(const Vec& p, const Vec& dp, double tau_eff);

// KL(p || U(N)) = log N - H(p), with 0*log 0 = 0. Throws if p is off the
// simplex by more than 1e-6.
double kl_to_uniform(const Vec& p);
// dKL/dp (unconstrained; feed through softmax_temperature_backward).
Vec kl_to_uniform_grad(const Vec& p);

// || psi_x - (phi_x + gamma * psi_x_next) ||^2 with the target held fixed:
// the only nonzero gradient is d_psi_x; target-side inputs get exactly zero.
struct SrTdResult {
  double loss = 0;
  Vec d_psi_x;
};
SrTdResult sr_td_loss(const Vec& psi_x, const Vec& phi_x, const Vec& psi_x_next,
                      double gamma);

}  // namespace dsaa
