// Encoder (observation -> N-simplex) and SR decoder (simplex -> R^N),
// trained jointly on replay batches: L = beta_h * KL(. || U) + beta_sr * TD.
#pragma once

#include <string>
#include <vector>

#include "dsaa/adam.hpp"
#include "dsaa/mlp.hpp"
#include "dsaa/ops.hpp"
#include "dsaa/replay.hpp"

namespace dsaa {

enum class EntropyScope { kPerSample, kBatchMarginal };

// What the entropy regularizer reads: the categorical distribution
// softmax(logits), or the sharpened Gumbel-Softmax sample that feeds the SR
// path. The sample variant saturates once assignments harden (the jacobian
// scales with the near-zero sample components), so the distribution form is
// the default.
enum class EntropyInput { kDistribution, kSample };

struct AbstractionLossConfig {
  double gamma = 0.95;
  double beta_h = 1.0;
  double beta_sr = 1.0;
  GumbelConfig gumbel;  // tau = 0.5 default
  EntropyScope entropy_scope = EntropyScope::kBatchMarginal;
  EntropyInput entropy_input = EntropyInput::kDistribution;
  int sgd_steps = 2000;
  int batch_size = 512;
  double lr = 1e-3;
};

struct Encoder {
  Mlp net;  // obs_dim -> hidden -> N logits
  GumbelConfig gumbel;
  int n_abstract = 0;

  Encoder() = default;
  Encoder(int obs_dim, int n_abstract, Rng& rng,
          const std::vector<int>& hidden = {128, 256},
          GumbelConfig gumbel_cfg = {});
};

struct SrDecoder {
  Mlp net;  // N -> hidden -> N, final layer zero-initialized

  SrDecoder() = default;
  SrDecoder(int n_abstract, Rng& rng, const std::vector<int>& hidden = {64, 128});
};

// Differentiable Gumbel-Softmax sample of the logit distribution.
Vec encode_soft(Encoder& enc, const Vec& x, Rng& rng);
// Hard abstract state: argmax over logits, lowest index on ties, no noise.
int encode_hard(const Encoder& enc, const Vec& x);

struct AbstractionLossHistory {
  std::vector<double> total;
  std::vector<double> entropy_term;  // beta_h * L_H
  std::vector<double> sr_term;       // beta_sr * L_SR
};

// SGD steps of the joint loss over batches from buf. Gradient reaches the
// encoder only through the prediction side; the TD target is held fixed.
AbstractionLossHistory abstraction_update(Encoder& enc, SrDecoder& dec,
                                          const ReplayBuffer& buf,
                                          const AbstractionLossConfig& cfg,
                                          AdamState& enc_opt, AdamState& dec_opt,
                                          Rng& rng);

// Decoder-only TD training on explicit simplex pairs (p, p_next). This is the
// inner core of abstraction_update, exposed so a frozen/tabular encoder can
// drive it directly.
double sr_decoder_td_step(SrDecoder& dec, const Matrix& p, const Matrix& p_next,
                          double gamma, AdamState& dec_opt);

// CSV of (probe fields..., abstract_state) rows over a caller-supplied
// probe set.
void dump_abstraction_csv(const Encoder& enc, const std::vector<Vec>& probes,
                          const std::string& path);

}  // namespace dsaa
