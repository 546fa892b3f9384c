#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dsaa/abstraction.hpp"
#include "dsaa/eval.hpp"

using namespace dsaa;

namespace {

// buffer of transitions over a set of observations with x' drawn by next(x)
ReplayBuffer chain_buffer(const std::vector<Vec>& xs,
                          const std::vector<int>& next, int copies) {
  ReplayBuffer buf(xs.size() * copies);
  for (int k = 0; k < copies; ++k)
    for (size_t i = 0; i < xs.size(); ++i) {
      StoredTransition st;
      st.t.x = xs[i];
      st.t.x_next = xs[next[i]];
      buf.push(std::move(st));
    }
  return buf;
}

}  // namespace

TEST_CASE("encode_soft: zero-logit head with zero noise is uniform") {
  Rng rng(1);
  Encoder enc(3, 4, rng, {8}, {});
  // zero the output layer -> all logits 0
  auto& out_layer = enc.net.layers().back();
  out_layer.w.zero();
  std::fill(out_layer.b.begin(), out_layer.b.end(), 0.0);
  enc.gumbel.zero_noise = true;
  Rng noise(2);
  const Vec p = encode_soft(enc, {0.3, -0.2, 0.9}, noise);
  for (double v : p) CHECK(v == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("encode_soft output stays on the simplex over random inputs") {
  Rng rng(5);
  Encoder enc(2, 6, rng, {16, 16}, {});
  Rng noise(6);
  for (int i = 0; i < 1000; ++i) {
    const Vec p = encode_soft(enc, {rng.uniform(-2, 2), rng.uniform(-2, 2)}, noise);
    double sum = 0;
    for (double v : p) {
      CHECK(v >= 0.0);
      sum += v;
    }
    CHECK(std::abs(sum - 1.0) < 1e-6);
  }
}

TEST_CASE("encode_soft: sharply peaked logits survive the noise at low tau") {
  Rng rng(7);
  Encoder enc(1, 3, rng, {}, {});
  auto& layer = enc.net.layers()[0];
  layer.w.zero();
  layer.b = {30.0, 0.0, 0.0};  // strongly prefers state 0
  enc.gumbel.tau = 0.1;
  Rng noise(11);
  int hits = 0;
  const int draws = 2000;
  for (int i = 0; i < draws; ++i) {
    const Vec p = encode_soft(enc, {0.0}, noise);
    if (std::abs(p[0] - 1.0) < 1e-2) ++hits;
  }
  CHECK(hits > 0.99 * draws);
}

TEST_CASE("encode_hard: argmax with lowest-index ties, shift invariant") {
  Rng rng(9);
  Encoder enc(1, 3, rng, {}, {});
  auto& layer = enc.net.layers()[0];
  layer.w.zero();
  layer.b = {3.0, 1.0, 2.0};
  CHECK(encode_hard(enc, {0.0}) == 0);
  layer.b = {5.0, 5.0, 1.0};
  CHECK(encode_hard(enc, {0.0}) == 0);
  layer.b = {1.0, 5.0, 5.0};
  CHECK(encode_hard(enc, {0.0}) == 1);
  // adding a constant to all logits does not change the argmax
  layer.b = {1.0 + 7.0, 5.0 + 7.0, 5.0 + 7.0};
  CHECK(encode_hard(enc, {0.0}) == 1);
}

TEST_CASE("entropy-only training drives per-sample entropy to log N") {
  // plain softmax mode so the per-sample output is the distribution itself
  Rng rng(21);
  Encoder enc(2, 4, rng, {16}, {});
  enc.gumbel.mode = GumbelMode::kPlainSoftmax;
  SrDecoder dec(4, rng, {8});
  std::vector<Vec> xs;
  for (int i = 0; i < 16; ++i)
    xs.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1)});
  std::vector<int> next(16);
  for (int i = 0; i < 16; ++i) next[i] = (i + 1) % 16;
  ReplayBuffer buf = chain_buffer(xs, next, 4);

  AbstractionLossConfig cfg;
  cfg.beta_sr = 0.0;
  cfg.beta_h = 1.0;
  cfg.entropy_scope = EntropyScope::kPerSample;
  cfg.gumbel.mode = GumbelMode::kPlainSoftmax;
  cfg.sgd_steps = 1500;
  cfg.batch_size = 64;
  AdamState enc_opt(enc.net, {});
  AdamState dec_opt(dec.net, {});
  Rng train_rng(33);
  abstraction_update(enc, dec, buf, cfg, enc_opt, dec_opt, train_rng);

  Rng noise(44);
  for (const Vec& x : xs) {
    const Vec p = encode_soft(enc, x, noise);
    double h = 0;
    for (double v : p)
      if (v > 0) h -= v * std::log(v);
    CHECK(h > std::log(4.0) - 0.05);
  }
}

TEST_CASE("decoder TD on a frozen one-hot encoder matches the tabular oracle") {
  // 2-state chain: 0 -> 1 -> 1 (absorbing)
  TabularMdp m;
  m.n = 2;
  m.gamma = 0.95;
  m.p.resize(2, 2);
  m.p.at(0, 1) = 1.0;
  m.p.at(1, 1) = 1.0;
  const Matrix truth = oracle_sr(m);

  Rng rng(3);
  SrDecoder dec(2, rng, {});  // single zero-initialized linear layer
  AdamState opt(dec.net, AdamConfig{0.05, 0.9, 0.999, 1e-8});
  Matrix p(2, 2), p_next(2, 2);
  p.at(0, 0) = 1.0;
  p.at(1, 1) = 1.0;
  p_next.at(0, 1) = 1.0;  // next(0) = 1
  p_next.at(1, 1) = 1.0;  // next(1) = 1
  for (int k = 0; k < 6000; ++k) sr_decoder_td_step(dec, p, p_next, m.gamma, opt);
  for (int s = 0; s < 2; ++s) {
    Vec e(2, 0.0);
    e[s] = 1.0;
    const Vec psi = dec.net.forward_const(e);
    for (int v = 0; v < 2; ++v)
      CHECK(std::abs(psi[v] - truth.at(s, v)) < 0.05);
  }
}

TEST_CASE("absorbing abstract state drives dec(e_s)[s] to 1/(1-gamma)") {
  Rng rng(13);
  SrDecoder dec(3, rng, {});
  AdamState opt(dec.net, AdamConfig{0.05, 0.9, 0.999, 1e-8});
  Matrix p(1, 3), p_next(1, 3);
  p.at(0, 1) = 1.0;
  p_next.at(0, 1) = 1.0;  // x = x', both map to e_1
  for (int k = 0; k < 8000; ++k) sr_decoder_td_step(dec, p, p_next, 0.95, opt);
  const Vec psi = dec.net.forward_const({0.0, 1.0, 0.0});
  CHECK(psi[1] == doctest::Approx(20.0).epsilon(2e-3));
}

TEST_CASE("gradient flows end to end: perturbing encoder weights moves the SR loss") {
  Rng rng(31);
  Encoder enc(2, 3, rng, {8}, {});
  SrDecoder dec(3, rng, {8});
  // make the decoder nontrivial, otherwise dL/dp is zero at psi == 0
  for (auto& layer : dec.net.layers())
    for (double& v : layer.w.data) v = rng.uniform(-0.5, 0.5);

  const Vec x = {0.4, -0.7}, x2 = {-0.2, 0.3};
  Vec noise(3), noise2(3);
  Rng noise_rng(17);
  for (double& g : noise) g = noise_rng.gumbel();
  for (double& g : noise2) g = noise_rng.gumbel();
  const double tau = 0.5, gamma = 0.95;

  auto sample = [&](const Vec& logits, const Vec& g) {
    Vec p(logits.size());
    for (size_t i = 0; i < p.size(); ++i) p[i] = (logits[i] + g[i]) / tau;
    softmax_inplace(p.data(), 3);
    return p;
  };
  // frozen target (stop-gradient)
  const Vec p0 = sample(enc.net.forward_const(x), noise);
  const Vec psi2 = dec.net.forward_const(sample(enc.net.forward_const(x2), noise2));
  Vec target(3);
  for (int i = 0; i < 3; ++i) target[i] = p0[i] + gamma * psi2[i];
  auto loss = [&]() {
    const Vec psi = dec.net.forward_const(sample(enc.net.forward_const(x), noise));
    double l = 0;
    for (int i = 0; i < 3; ++i) l += (psi[i] - target[i]) * (psi[i] - target[i]);
    return l;
  };
  const double base = loss();
  int moved = 0;
  auto& w = enc.net.layers()[0].w;
  for (size_t i = 0; i < w.data.size(); ++i) {
    const double saved = w.data[i];
    w.data[i] = saved + 1e-3;
    if (std::abs(loss() - base) > 1e-12) ++moved;
    w.data[i] = saved;
  }
  CHECK(moved > 0);  // encoder weights reach the loss through psi(phi(x))
}

TEST_CASE("abstraction_update is deterministic given seed and buffer") {
  auto run = [] {
    Rng rng(71);
    Encoder enc(2, 4, rng, {16}, {});
    SrDecoder dec(4, rng, {8});
    std::vector<Vec> xs;
    Rng data_rng(5);
    for (int i = 0; i < 8; ++i)
      xs.push_back({data_rng.uniform(0, 1), data_rng.uniform(0, 1)});
    std::vector<int> next = {1, 2, 3, 4, 5, 6, 7, 0};
    ReplayBuffer buf = chain_buffer(xs, next, 2);
    AbstractionLossConfig cfg;
    cfg.sgd_steps = 50;
    cfg.batch_size = 16;
    AdamState eo(enc.net, {}), dopt(dec.net, {});
    Rng train(99);
    const auto hist = abstraction_update(enc, dec, buf, cfg, eo, dopt, train);
    return std::make_pair(enc.net.layers().back().w.data, hist.total);
  };
  const auto a = run(), b = run();
  CHECK(a.first == b.first);
  CHECK(a.second == b.second);
}

TEST_CASE("abstraction_update rejects an empty buffer and bad gamma") {
  Rng rng(1);
  Encoder enc(2, 3, rng, {8}, {});
  SrDecoder dec(3, rng, {8});
  ReplayBuffer buf(8);
  AbstractionLossConfig cfg;
  AdamState eo(enc.net, {}), dopt(dec.net, {});
  Rng train(2);
  CHECK_THROWS_AS(abstraction_update(enc, dec, buf, cfg, eo, dopt, train),
                  std::invalid_argument);
  StoredTransition st;
  st.t.x = {0.1, 0.2};
  st.t.x_next = {0.3, 0.4};
  buf.push(st);
  cfg.gamma = 1.0;
  CHECK_THROWS_AS(abstraction_update(enc, dec, buf, cfg, eo, dopt, train),
                  std::invalid_argument);
}

TEST_CASE("abstraction dump writes one row per probe") {
  Rng rng(2);
  Encoder enc(2, 3, rng, {8}, {});
  const std::string path = "abs_dump_test.csv";
  dump_abstraction_csv(enc, {{0.0, 0.0}, {0.5, 0.5}, {1.0, 1.0}}, path);
  FILE* f = std::fopen(path.c_str(), "rb");
  REQUIRE(f);
  char line[256];
  int rows = 0;
  while (std::fgets(line, sizeof(line), f)) ++rows;
  std::fclose(f);
  CHECK(rows == 4);  // header + 3 probes
  std::remove(path.c_str());
}
