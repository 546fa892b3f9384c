#include "dsaa/abstraction.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace dsaa {

Encoder::Encoder(int obs_dim, int n, Rng& rng, const std::vector<int>& hidden,
                 GumbelConfig gumbel_cfg)
    : net(obs_dim, hidden, n, rng), gumbel(gumbel_cfg), n_abstract(n) {}

SrDecoder::SrDecoder(int n_abstract, Rng& rng, const std::vector<int>& hidden)
    : net(n_abstract, hidden, n_abstract, rng, /*zero_init_output=*/true) {}

Vec encode_soft(Encoder& enc, const Vec& x, Rng& rng) {
  return gumbel_softmax(enc.net.forward_const(x), enc.gumbel, rng);
}

int encode_hard(const Encoder& enc, const Vec& x) {
  const Vec logits = enc.net.forward_const(x);
  return argmax_lowest_tie(logits.data(), static_cast<int>(logits.size()));
}

namespace {

// Row-wise reparameterized sample: p = softmax((logits + g)/tau) or plain
// softmax(logits). Overwrites logits with p.
void sample_rows(Matrix& logits, const GumbelConfig& cfg, Rng& rng) {
  for (int r = 0; r < logits.rows; ++r) {
    double* row = logits.row(r);
    if (cfg.mode == GumbelMode::kGumbelSoft) {
      const double inv_tau = 1.0 / cfg.tau;
      for (int c = 0; c < logits.cols; ++c) {
        const double g = cfg.zero_noise ? 0.0 : rng.gumbel();
        row[c] = (row[c] + g) * inv_tau;
      }
    }
    softmax_inplace(row, logits.cols);
  }
}

void softmax_backward_rows(const Matrix& p, Matrix& dp, double tau_eff) {
  const double inv_tau = 1.0 / tau_eff;
  for (int r = 0; r < p.rows; ++r) {
    const double* pr = p.row(r);
    double* dr = dp.row(r);
    double dot = 0;
    for (int c = 0; c < p.cols; ++c) dot += dr[c] * pr[c];
    for (int c = 0; c < p.cols; ++c) dr[c] = inv_tau * pr[c] * (dr[c] - dot);
  }
}

}  // namespace

double sr_decoder_td_step(SrDecoder& dec, const Matrix& p, const Matrix& p_next,
                          double gamma, AdamState& dec_opt) {
  if (gamma <= 0 || gamma >= 1)
    throw std::invalid_argument("sr_decoder_td_step: gamma must be in (0,1)");
  static thread_local MlpCache cache, cache_next;
  MlpGrads grads = dec.net.make_grads();

  const Matrix& psi = dec.net.forward_batch(p, cache);
  MlpCache& tgt = cache_next;
  dec.net.forward_batch(p_next, tgt);

  const int batch = p.rows, n = p.cols;
  Matrix dpsi(batch, n);
  double loss = 0;
  const double inv_b = 1.0 / batch;
  for (int r = 0; r < batch; ++r) {
    const double* psi_r = psi.row(r);
    const double* pr = p.row(r);
    const double* psin_r = tgt.out.row(r);
    double* d = dpsi.row(r);
    for (int c = 0; c < n; ++c) {
      const double target = pr[c] + gamma * psin_r[c];  // fixed target
      const double diff = psi_r[c] - target;
      loss += diff * diff;
      d[c] = 2.0 * diff * inv_b;
    }
  }
  loss *= inv_b;
  if (!std::isfinite(loss))
    throw std::runtime_error("sr_decoder_td_step: non-finite loss");
  dec.net.backward_batch(dpsi, cache, grads);
  dec_opt.step(dec.net, grads);
  return loss;
}

AbstractionLossHistory abstraction_update(Encoder& enc, SrDecoder& dec,
                                          const ReplayBuffer& buf,
                                          const AbstractionLossConfig& cfg,
                                          AdamState& enc_opt, AdamState& dec_opt,
                                          Rng& rng) {
  if (buf.size() == 0)
    throw std::invalid_argument("abstraction_update: replay buffer is empty");
  if (cfg.gamma <= 0 || cfg.gamma >= 1)
    throw std::invalid_argument("abstraction_update: gamma must be in (0,1)");

  const int n = enc.n_abstract;
  const int obs_dim = enc.net.input_dim();
  const double tau_eff =
      cfg.gumbel.mode == GumbelMode::kGumbelSoft ? cfg.gumbel.tau : 1.0;

  AbstractionLossHistory hist;
  MlpCache enc_cache, enc_cache_next, dec_cache, dec_cache_next;
  MlpGrads enc_grads = enc.net.make_grads();
  MlpGrads dec_grads = dec.net.make_grads();
  Matrix x, x_next;

  for (int step = 0; step < cfg.sgd_steps; ++step) {
    const auto batch = buf.sample(cfg.batch_size, rng);
    const int b = static_cast<int>(batch.size());
    x.resize(b, obs_dim);
    x_next.resize(b, obs_dim);
    for (int r = 0; r < b; ++r) {
      const Transition& t = batch[r]->t;
      std::copy(t.x.begin(), t.x.end(), x.row(r));
      std::copy(t.x_next.begin(), t.x_next.end(), x_next.row(r));
    }

    // p = sample(enc(x)) kept with its cache for the backward pass;
    // p' = sample(enc(x')) is target-side only.
    Matrix logits = enc.net.forward_batch(x, enc_cache);
    Matrix p = logits;
    sample_rows(p, cfg.gumbel, rng);
    Matrix p_next = enc.net.forward_batch(x_next, enc_cache_next);
    sample_rows(p_next, cfg.gumbel, rng);

    const Matrix& psi = dec.net.forward_batch(p, dec_cache);
    dec.net.forward_batch(p_next, dec_cache_next);
    const Matrix& psi_next = dec_cache_next.out;

    const double inv_b = 1.0 / b;
    Matrix dpsi(b, n);
    double sr_loss = 0;
    for (int r = 0; r < b; ++r) {
      const double* psi_r = psi.row(r);
      const double* p_r = p.row(r);
      const double* psin_r = psi_next.row(r);
      double* d = dpsi.row(r);
      for (int c = 0; c < n; ++c) {
        const double target = p_r[c] + cfg.gamma * psin_r[c];
        const double diff = psi_r[c] - target;
        sr_loss += diff * diff;
        d[c] = 2.0 * diff * inv_b * cfg.beta_sr;
      }
    }
    sr_loss *= inv_b;

    // dL/dp from the decoder (prediction side only).
    dec_grads.zero();
    const Matrix& dp_sr = dec.net.backward_batch(dpsi, dec_cache, dec_grads);
    Matrix dp = dp_sr;

    // Entropy regularizer reads either the sample rows or the plain
    // categorical softmax(logits).
    const bool on_sample = cfg.entropy_input == EntropyInput::kSample;
    Matrix q;
    if (!on_sample) {
      q = logits;
      for (int r = 0; r < b; ++r) softmax_inplace(q.row(r), n);
    }
    const Matrix& h_src = on_sample ? p : q;
    Matrix dq;
    if (!on_sample) dq.resize(b, n);
    double h_loss = 0;
    auto h_grad_row = [&](int r) { return on_sample ? dp.row(r) : dq.row(r); };
    if (cfg.entropy_scope == EntropyScope::kBatchMarginal) {
      Vec mean(n, 0.0);
      for (int r = 0; r < b; ++r) {
        const double* hr = h_src.row(r);
        for (int c = 0; c < n; ++c) mean[c] += hr[c];
      }
      for (int c = 0; c < n; ++c) mean[c] *= inv_b;
      h_loss = kl_to_uniform(mean);
      const Vec gm = kl_to_uniform_grad(mean);
      for (int r = 0; r < b; ++r) {
        double* d = h_grad_row(r);
        for (int c = 0; c < n; ++c) d[c] += cfg.beta_h * inv_b * gm[c];
      }
    } else {
      for (int r = 0; r < b; ++r) {
        Vec hr(h_src.row(r), h_src.row(r) + n);
        h_loss += kl_to_uniform(hr);
        const Vec g = kl_to_uniform_grad(hr);
        double* d = h_grad_row(r);
        for (int c = 0; c < n; ++c) d[c] += cfg.beta_h * inv_b * g[c];
      }
      h_loss *= inv_b;
    }

    const double total = cfg.beta_h * h_loss + cfg.beta_sr * sr_loss;
    if (!std::isfinite(total)) {
      char msg[160];
      std::snprintf(msg, sizeof(msg),
                    "abstraction_update: non-finite loss at step %d (H=%g, SR=%g)",
                    step, h_loss, sr_loss);
      throw std::runtime_error(msg);
    }

    softmax_backward_rows(p, dp, tau_eff);
    if (!on_sample) {
      softmax_backward_rows(q, dq, 1.0);
      for (size_t i = 0; i < dp.data.size(); ++i) dp.data[i] += dq.data[i];
    }
    enc_grads.zero();
    enc.net.backward_batch(dp, enc_cache, enc_grads);

    enc_opt.step(enc.net, enc_grads);
    dec_opt.step(dec.net, dec_grads);

    hist.total.push_back(total);
    hist.entropy_term.push_back(cfg.beta_h * h_loss);
    hist.sr_term.push_back(cfg.beta_sr * sr_loss);
  }
  return hist;
}

void dump_abstraction_csv(const Encoder& enc, const std::vector<Vec>& probes,
                          const std::string& path) {
  FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("dump_abstraction_csv: cannot open " + path);
  const int d = enc.net.input_dim();
  std::fprintf(f, "# columns: x0..x%d,abstract_state\n", d - 1);
  for (const Vec& probe : probes) {
    for (double v : probe) std::fprintf(f, "%.17g,", v);
    std::fprintf(f, "%d\n", encode_hard(enc, probe));
  }
  std::fclose(f);
}

}  // namespace dsaa
