#include "dsaa/ops.hpp"

#include <cmath>
#include <stdexcept>

namespace dsaa {

Vec gumbel_softmax(const Vec& logits, const GumbelConfig& cfg, Rng& rng) {
  if (cfg.tau <= 0) throw std::invalid_argument("gumbel_softmax: tau must be > 0");
  if (!all_finite(logits))
    throw std::invalid_argument("gumbel_softmax: non-finite logits");
  Vec p(logits.size());
  if (cfg.mode == GumbelMode::kGumbelSoft) {
    const double inv_tau = 1.0 / cfg.tau;
    for (size_t i = 0; i < p.size(); ++i) {
      const double g = cfg.zero_noise ? 0.0 : rng.gumbel();
      p[i] = (logits[i] + g) * inv_tau;
    }
  } else {
    p = logits;
  }
  softmax_inplace(p.data(), static_cast<int>(p.size()));
  return p;
}

Vec softmax_temperature_backward(const Vec& p, const Vec& dp, double tau_eff) {
  double dot = 0;
  for (size_t i = 0; i < p.size(); ++i) dot += dp[i] * p[i];
  Vec dz(p.size());
  const double inv_tau = 1.0 / tau_eff;
  for (size_t i = 0; i < p.size(); ++i) dz[i] = inv_tau * p[i] * (dp[i] - dot);
  return dz;
}

namespace {

void check_simplex(const Vec& p) {
  double sum = 0;
  for (double v : p) {
    if (v < -1e-6) throw std::invalid_argument("kl_to_uniform: negative component");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-6)
    throw std::invalid_argument("kl_to_uniform: components do not sum to 1");
}

}  // namespace

double kl_to_uniform(const Vec& p) {
  check_simplex(p);
  const double n = static_cast<double>(p.size());
  double kl = 0;
  for (double v : p)
    if (v > 0) kl += v * std::log(v * n);
  return kl < 0 ? 0.0 : kl;  // clip tiny negatives from rounding
}

Vec kl_to_uniform_grad(const Vec& p) {
  const double n = static_cast<double>(p.size());
  Vec g(p.size());
  for (size_t i = 0; i < p.size(); ++i) {
    const double v = p[i] > 1e-300 ? p[i] : 1e-300;
    g[i] = std::log(v * n) + 1.0;
  }
  return g;
}

SrTdResult sr_td_loss(const Vec& psi_x, const Vec& phi_x, const Vec& psi_x_next,
                      double gamma) {
  if (gamma <= 0 || gamma >= 1)
    throw std::invalid_argument("sr_td_loss: gamma must be in (0,1)");
  if (psi_x.size() != phi_x.size() || psi_x.size() != psi_x_next.size())
    throw std::invalid_argument("sr_td_loss: vector length mismatch");
  SrTdResult res;
  res.d_psi_x.resize(psi_x.size());
  for (size_t i = 0; i < psi_x.size(); ++i) {
    const double target = phi_x[i] + gamma * psi_x_next[i];  // fixed, no gradient
    const double diff = psi_x[i] - target;
    res.loss += diff * diff;
    res.d_psi_x[i] = 2.0 * diff;
  }
  return res;
}

}  // namespace dsaa
