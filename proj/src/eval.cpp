#include "dsaa/eval.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace dsaa {

// ---------------------------------------------------------------------------
// Tabular SR

void TabularMdp::validate() const {
  if (p.rows != n || p.cols != n)
    throw std::invalid_argument("TabularMdp: transition matrix must be n x n");
  for (int r = 0; r < n; ++r) {
    double sum = 0;
    for (int c = 0; c < n; ++c) {
      if (p.at(r, c) < 0) throw std::invalid_argument("TabularMdp: negative entry");
      sum += p.at(r, c);
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("TabularMdp: row does not sum to 1");
  }
}

Matrix solve_linear(Matrix a, Matrix b) {
  const int n = a.rows;
  if (a.cols != n || b.rows != n)
    throw std::invalid_argument("solve_linear: shape mismatch");
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a.at(r, col)) > std::abs(a.at(pivot, col))) pivot = r;
    if (std::abs(a.at(pivot, col)) < 1e-14)
      throw std::runtime_error("solve_linear: singular system");
    if (pivot != col) {
      for (int c = 0; c < n; ++c) std::swap(a.at(col, c), a.at(pivot, c));
      for (int c = 0; c < b.cols; ++c) std::swap(b.at(col, c), b.at(pivot, c));
    }
    const double inv = 1.0 / a.at(col, col);
    for (int r = col + 1; r < n; ++r) {
      const double f = a.at(r, col) * inv;
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) a.at(r, c) -= f * a.at(col, c);
      for (int c = 0; c < b.cols; ++c) b.at(r, c) -= f * b.at(col, c);
    }
  }
  for (int col = n - 1; col >= 0; --col) {
    const double inv = 1.0 / a.at(col, col);
    for (int c = 0; c < b.cols; ++c) {
      double s = b.at(col, c);
      for (int k = col + 1; k < n; ++k) s -= a.at(col, k) * b.at(k, c);
      b.at(col, c) = s * inv;
    }
  }
  return b;
}

Matrix oracle_sr(const TabularMdp& m) {
  if (m.gamma < 0 || m.gamma >= 1)
    throw std::invalid_argument("oracle_sr: gamma must be in [0,1)");
  m.validate();
  Matrix a(m.n, m.n), identity(m.n, m.n);
  for (int r = 0; r < m.n; ++r) {
    identity.at(r, r) = 1.0;
    for (int c = 0; c < m.n; ++c)
      a.at(r, c) = (r == c ? 1.0 : 0.0) - m.gamma * m.p.at(r, c);
  }
  Matrix psi = solve_linear(std::move(a), std::move(identity));
  if (!all_finite(psi)) throw std::runtime_error("oracle_sr: non-finite solution");
  return psi;
}

TabularMdp grid_uniform_mdp(const GridWorld& w, double gamma) {
  TabularMdp m;
  m.n = static_cast<int>(w.open_cells().size());
  m.gamma = gamma;
  m.p.resize(m.n, m.n);
  const int dr[4] = {-1, 1, 0, 0};
  const int dc[4] = {0, 0, -1, 1};
  for (int u = 0; u < m.n; ++u) {
    const auto [r, c] = w.open_cells()[u];
    for (int a = 0; a < 4; ++a) {
      const int nr = r + dr[a], nc = c + dc[a];
      const int v = w.wall(nr, nc) ? u : w.cell_index(nr, nc);
      m.p.at(u, v) += 0.25;
    }
  }
  return m;
}

Vec sr_distance_map(const TabularMdp& m, const Matrix& psi, int ref_state) {
  if (ref_state < 0 || ref_state >= m.n)
    throw std::invalid_argument("sr_distance_map: reference out of range");
  Vec out(m.n, 0.0);
  for (int u = 0; u < m.n; ++u) {
    double d2 = 0;
    for (int v = 0; v < m.n; ++v) {
      const double d = psi.at(u, v) - psi.at(ref_state, v);
      d2 += d * d;
    }
    out[u] = std::sqrt(d2);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Occupancy

double occupancy_entropy(const std::vector<uint64_t>& counts) {
  uint64_t total = 0;
  for (uint64_t c : counts) total += c;
  if (total == 0) return 0;
  double h = 0;
  for (uint64_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log(p);
  }
  return h < 0 ? 0.0 : h;
}

OccupancyStats occupancy_stats(const std::vector<int>& trajectory, int n_states) {
  OccupancyStats st;
  st.counts.assign(n_states, 0);
  long unique = 0;
  for (size_t i = 0; i < trajectory.size(); ++i) {
    const int s = trajectory[i];
    if (s < 0 || s >= n_states)
      throw std::invalid_argument("occupancy_stats: state out of range");
    if (st.counts[s]++ == 0) st.coverage.push_back({static_cast<long>(i), ++unique});
  }
  st.total = static_cast<long>(trajectory.size());
  st.support = unique;
  st.entropy = occupancy_entropy(st.counts);
  return st;
}

// ---------------------------------------------------------------------------
// Rooms and purity

RoomLabels room_labels(const GridWorld& w) {
  const auto& cells = w.open_cells();
  const int n = static_cast<int>(cells.size());
  RoomLabels out;
  out.label.assign(n, -2);  // -2 = unassigned, -1 = doorway
  auto open = [&](int r, int c) { return !w.wall(r, c); };
  for (int i = 0; i < n; ++i) {
    const auto [r, c] = cells[i];
    const bool horizontal_corridor =
        !open(r - 1, c) && !open(r + 1, c) && open(r, c - 1) && open(r, c + 1);
    const bool vertical_corridor =
        open(r - 1, c) && open(r + 1, c) && !open(r, c - 1) && !open(r, c + 1);
    if (horizontal_corridor || vertical_corridor) {
      out.label[i] = -1;
      ++out.n_doorways;
    }
  }
  // flood fill the remaining open cells; component ids in row-major order
  const int dr[4] = {-1, 1, 0, 0};
  const int dc[4] = {0, 0, -1, 1};
  for (int i = 0; i < n; ++i) {
    if (out.label[i] != -2) continue;
    const int room = out.n_rooms++;
    std::vector<int> stack{i};
    out.label[i] = room;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      const auto [r, c] = cells[u];
      for (int a = 0; a < 4; ++a) {
        const int nr = r + dr[a], nc = c + dc[a];
        if (w.wall(nr, nc)) continue;
        const int v = w.cell_index(nr, nc);
        if (out.label[v] == -2) {
          out.label[v] = room;
          stack.push_back(v);
        }
      }
    }
  }
  return out;
}

PurityResult room_purity(const std::vector<int>& assignment, const RoomLabels& rooms,
                         int n_abstract) {
  if (assignment.size() != rooms.label.size())
    throw std::invalid_argument("room_purity: assignment size mismatch");
  std::vector<std::vector<long>> hist(n_abstract,
                                      std::vector<long>(rooms.n_rooms, 0));
  for (size_t i = 0; i < assignment.size(); ++i) {
    if (rooms.label[i] < 0) continue;  // doorways excluded
    const int a = assignment[i];
    if (a < 0 || a >= n_abstract)
      throw std::invalid_argument("room_purity: abstract state out of range");
    ++hist[a][rooms.label[i]];
  }
  PurityResult res;
  double sum = 0;
  int nonempty = 0;
  for (int a = 0; a < n_abstract; ++a) {
    long total = 0, best = 0;
    for (long c : hist[a]) {
      total += c;
      best = std::max(best, c);
    }
    if (total == 0) {
      ++res.empty_preimages;
      continue;
    }
    sum += static_cast<double>(best) / static_cast<double>(total);
    ++nonempty;
  }
  res.purity = nonempty ? sum / nonempty : 0.0;
  return res;
}

double noise_consistency(const Encoder& enc, const GridWorld& w, int noise_dims,
                         int k_draws, Rng& rng) {
  if (k_draws < 2) throw std::invalid_argument("noise_consistency: k_draws >= 2");
  const int n = enc.n_abstract;
  double sum = 0;
  for (const auto& [r, c] : w.open_cells()) {
    const Vec base = w.observe_cell(r, c);
    std::vector<int> counts(n, 0);
    Vec probe(base.size() + noise_dims);
    std::copy(base.begin(), base.end(), probe.begin());
    for (int k = 0; k < k_draws; ++k) {
      for (int d = 0; d < noise_dims; ++d) probe[base.size() + d] = rng.uniform();
      ++counts[encode_hard(enc, probe)];
    }
    int modal = 0;
    for (int a = 1; a < n; ++a)
      if (counts[a] > counts[modal]) modal = a;
    sum += static_cast<double>(counts[modal]) / k_draws;
  }
  return sum / static_cast<double>(w.open_cells().size());
}

// ---------------------------------------------------------------------------
// Baselines

namespace {

struct Tracker {
  RunStats* stats;
  long unique = 0;
  void visit(int state_id, long step) {
    if (state_id < 0 || stats->visit_counts.empty()) return;
    if (stats->visit_counts[state_id]++ == 0)
      stats->coverage.push_back({step, ++unique});
  }
};

}  // namespace

BaselineStats baseline_uniform_walk(Env& env, long steps, int episode_cap,
                                    uint64_t seed, const StepCallback& on_step,
                                    long stop_at_unique_states) {
  BaselineStats out;
  RunStats& stats = out.stats;
  if (env.n_state_ids() > 0) stats.visit_counts.assign(env.n_state_ids(), 0);
  Tracker tracker{&stats, 0};
  Rng rng(derive_seed(seed, 20));
  EpisodeManager em(env, episode_cap);
  em.begin_episode();
  tracker.visit(env.state_id(), 0);
  for (long i = 0; i < steps; ++i) {
    const int action = rng.uniform_int(env.n_actions());
    EpisodeManager::Outcome o = em.step(action);
    const long step = ++stats.total_steps;
    tracker.visit(env.state_id(), step);
    if (o.result.reward > 0 && stats.first_success_step < 0)
      stats.first_success_step = step;
    if (on_step)
      on_step({step, 0, em.episode(), env.state_id(), 0, 0, action, 0.0,
               o.result.reward, o.episode_over});
    if (o.episode_over) {
      stats.episodes.push_back({em.episode(), em.episode_start_step(),
                                em.steps_in_episode(), em.episode_return()});
      ++stats.episodes_completed;
      em.begin_episode();
      tracker.visit(env.state_id(), step);
    }
    if (stop_at_unique_states > 0 && tracker.unique >= stop_at_unique_states) break;
  }
  return out;
}

BaselineStats baseline_flat_softq(Env& env, const FlatSoftQConfig& cfg, uint64_t seed,
                                  const StepCallback& on_step) {
  BaselineStats out;
  RunStats& stats = out.stats;
  if (env.n_state_ids() > 0) stats.visit_counts.assign(env.n_state_ids(), 0);
  Tracker tracker{&stats, 0};
  Rng rng_init(derive_seed(seed, 30));
  Rng rng_act(derive_seed(seed, 31));
  Rng rng_replay(derive_seed(seed, 32));
  OptionBank bank(env.obs_dim(), 1, env.n_actions(), cfg.bank, rng_init);
  bank.ensure_head(0);
  ReplayBuffer buffer(cfg.replay_capacity);
  EpisodeManager em(env, cfg.episode_cap);
  Vec obs = em.begin_episode();
  const Vec start_obs = obs;
  tracker.visit(env.state_id(), 0);
  for (long i = 0; i < cfg.max_steps; ++i) {
    const int action = bank.act(obs, 0, 0, rng_act);
    EpisodeManager::Outcome o = em.step(action);
    const long step = ++stats.total_steps;
    tracker.visit(env.state_id(), step);
    if (o.result.reward > 0 && stats.first_success_step < 0)
      stats.first_success_step = step;
    buffer.push({Transition{obs, action, o.result.obs, o.result.reward, o.episode_over},
                 0, 0, 0, o.episode_over});
    if (buffer.size() >= static_cast<size_t>(cfg.batch) &&
        (i + 1) % cfg.update_every == 0)
      bank.update(buffer.sample(cfg.batch, rng_replay));
    if (on_step)
      on_step({step, 0, em.episode(), env.state_id(), 0, 0, action, 0.0,
               o.result.reward, o.episode_over});
    if (o.episode_over) {
      stats.episodes.push_back({em.episode(), em.episode_start_step(),
                                em.steps_in_episode(), em.episode_return()});
      ++stats.episodes_completed;
      obs = em.begin_episode();
      tracker.visit(env.state_id(), step);
    } else {
      obs = o.result.obs;
    }
    if (stats.first_success_step >= 0) {
      // first success found; callers comparing times can stop here
      if (cfg.abort_if_no_success_by > 0) break;
    } else if (cfg.abort_if_no_success_by > 0 &&
               step >= cfg.abort_if_no_success_by) {
      break;
    }
  }
  out.final_q = bank.q_values(start_obs, 0, 0);
  return out;
}

// ---------------------------------------------------------------------------
// Gradient checker

double gradcheck_max_rel_err(std::vector<Mlp*> nets,
                             const std::function<double()>& loss,
                             const std::function<void(std::vector<MlpGrads>&)>& analytic,
                             double h) {
  std::vector<MlpGrads> grads;
  grads.reserve(nets.size());
  for (Mlp* net : nets) grads.push_back(net->make_grads());
  analytic(grads);
  double max_rel = 0;
  for (size_t ni = 0; ni < nets.size(); ++ni) {
    auto& layers = nets[ni]->layers();
    for (size_t l = 0; l < layers.size(); ++l) {
      auto check = [&](double& param, double analytic_grad) {
        const double saved = param;
        param = saved + h;
        const double up = loss();
        param = saved - h;
        const double down = loss();
        param = saved;
        const double fd = (up - down) / (2 * h);
        const double rel = std::abs(analytic_grad - fd) /
                           std::max({1.0, std::abs(analytic_grad), std::abs(fd)});
        max_rel = std::max(max_rel, rel);
      };
      for (size_t i = 0; i < layers[l].w.data.size(); ++i)
        check(layers[l].w.data[i], grads[ni].dw[l].data[i]);
      for (size_t i = 0; i < layers[l].b.size(); ++i)
        check(layers[l].b[i], grads[ni].db[l][i]);
    }
  }
  return max_rel;
}

// ---------------------------------------------------------------------------
// Soft-Q value iteration oracle

Matrix soft_q_value_iteration(const SmallMdp& mdp, double gamma, double alpha,
                              int iters) {
  Matrix q(mdp.n_states, mdp.n_actions);
  Matrix next(mdp.n_states, mdp.n_actions);
  for (int it = 0; it < iters; ++it) {
    for (int s = 0; s < mdp.n_states; ++s)
      for (int a = 0; a < mdp.n_actions; ++a) {
        const int s2 = mdp.next[s * mdp.n_actions + a];
        Vec scaled(mdp.n_actions);
        for (int a2 = 0; a2 < mdp.n_actions; ++a2)
          scaled[a2] = q.at(s2, a2) / alpha;
        const double soft_v =
            alpha * logsumexp(scaled.data(), mdp.n_actions);
        next.at(s, a) = mdp.reward[s * mdp.n_actions + a] + gamma * soft_v;
      }
    std::swap(q, next);
  }
  return q;
}

// ---------------------------------------------------------------------------
// Oracle suites

namespace {

Vec sampled_simplex(const Vec& logits, const Vec& noise, double tau) {
  Vec p(logits.size());
  for (size_t i = 0; i < p.size(); ++i) p[i] = (logits[i] + noise[i]) / tau;
  softmax_inplace(p.data(), static_cast<int>(p.size()));
  return p;
}

}  // namespace

double gradient_suite_max_rel_err(uint64_t seed, int n_nets) {
  double max_rel = 0;
  for (int k = 0; k < n_nets; ++k) {
    Rng rng(derive_seed(seed, 100 + k));
    const int in_dim = 2 + k % 3;
    const int n = 2 + k % 4;
    const int n_actions = 2 + k % 5;
    std::vector<int> hidden;
    const int depth = k % 3;  // 0..2 hidden layers
    for (int d = 0; d < depth; ++d) hidden.push_back(3 + (k + 5 * d) % 14);
    const double tau = (k % 2) ? 0.5 : 1.0;

    Mlp enc(in_dim, hidden, n, rng);
    Mlp dec(n, hidden, n, rng);
    Mlp qnet(in_dim, hidden, n_actions, rng);
    Vec x(in_dim), x2(in_dim), noise(n), noise2(n);
    for (auto v : {&x, &x2})
      for (double& e : *v) e = rng.uniform(-1, 1);
    for (auto v : {&noise, &noise2})
      for (double& e : *v) e = rng.gumbel();
    const double gamma = 0.95;

    // KL(softmax((enc(x)+g)/tau) || U)
    {
      auto loss = [&]() {
        return kl_to_uniform(sampled_simplex(enc.forward_const(x), noise, tau));
      };
      auto analytic = [&](std::vector<MlpGrads>& g) {
        const Vec p = sampled_simplex(enc.forward_const(x), noise, tau);
        const Vec dlogits =
            softmax_temperature_backward(p, kl_to_uniform_grad(p), tau);
        enc.forward(x);
        g[0] = enc.backward(dlogits).grads;
      };
      max_rel = std::max(max_rel,
                         gradcheck_max_rel_err({&enc}, loss, analytic));
    }

    // SR TD with the target frozen at its current numeric value
    {
      const Vec p0 = sampled_simplex(enc.forward_const(x), noise, tau);
      const Vec p2 = sampled_simplex(enc.forward_const(x2), noise2, tau);
      const Vec psi_next = dec.forward_const(p2);
      Vec target(n);
      for (int i = 0; i < n; ++i) target[i] = p0[i] + gamma * psi_next[i];
      auto loss = [&]() {
        const Vec p = sampled_simplex(enc.forward_const(x), noise, tau);
        const Vec psi = dec.forward_const(p);
        double l = 0;
        for (int i = 0; i < n; ++i) {
          const double d = psi[i] - target[i];
          l += d * d;
        }
        return l;
      };
      auto analytic = [&](std::vector<MlpGrads>& g) {
        const Vec p = sampled_simplex(enc.forward_const(x), noise, tau);
        const Vec psi = dec.forward(p);
        const SrTdResult res = sr_td_loss(psi, p0, psi_next, gamma);
        auto back = dec.backward(res.d_psi_x);
        g[1] = std::move(back.grads);
        const Vec dlogits = softmax_temperature_backward(p, back.dx, tau);
        enc.forward(x);
        g[0] = enc.backward(dlogits).grads;
      };
      max_rel = std::max(max_rel,
                         gradcheck_max_rel_err({&enc, &dec}, loss, analytic));
    }

    // soft-Q TD against fixed targets: (Q(x)[a] - y)^2
    {
      const int a = k % n_actions;
      const double y = rng.uniform(-2, 2);
      auto loss = [&]() {
        const Vec q = qnet.forward_const(x);
        const double d = q[a] - y;
        return d * d;
      };
      auto analytic = [&](std::vector<MlpGrads>& g) {
        const Vec q = qnet.forward(x);
        Vec dq(n_actions, 0.0);
        dq[a] = 2.0 * (q[a] - y);
        g[0] = qnet.backward(dq).grads;
      };
      max_rel = std::max(max_rel,
                         gradcheck_max_rel_err({&qnet}, loss, analytic));
    }
  }
  return max_rel;
}

SrEquivalenceResult sr_td_vs_oracle(uint64_t seed, int n_mdps, int n_states,
                                    long max_updates, double gamma) {
  SrEquivalenceResult out;
  for (int mdp_i = 0; mdp_i < n_mdps; ++mdp_i) {
    Rng rng(derive_seed(seed, 200 + mdp_i));
    TabularMdp m;
    m.n = n_states;
    m.gamma = gamma;
    m.p.resize(n_states, n_states);
    for (int r = 0; r < n_states; ++r) {
      double sum = 0;
      for (int c = 0; c < n_states; ++c) {
        const double v = rng.uniform(0.05, 1.0);
        m.p.at(r, c) = v;
        sum += v;
      }
      for (int c = 0; c < n_states; ++c) m.p.at(r, c) /= sum;
    }
    const Matrix truth = oracle_sr(m);

    // tabular psi trained by TD along a trajectory, annealed step size,
    // Polyak tail averaging for the last half of training
    Matrix psi(n_states, n_states);
    Matrix avg(n_states, n_states);
    long avg_count = 0;
    const long avg_start = max_updates / 2;
    int u = rng.uniform_int(n_states);
    const double lr0 = 1.0, anneal = 2000.0;
    for (long k = 0; k < max_updates; ++k) {
      if (k % 200 == 0) u = rng.uniform_int(n_states);  // restart
      // v ~ P[u]
      double cdf = rng.uniform();
      int v = n_states - 1;
      for (int c = 0; c < n_states; ++c) {
        cdf -= m.p.at(u, c);
        if (cdf <= 0) {
          v = c;
          break;
        }
      }
      Vec psi_u(psi.row(u), psi.row(u) + n_states);
      Vec e_u(n_states, 0.0);
      e_u[u] = 1.0;
      Vec psi_v(psi.row(v), psi.row(v) + n_states);
      const SrTdResult res = sr_td_loss(psi_u, e_u, psi_v, gamma);
      const double lr = lr0 * anneal / (anneal + static_cast<double>(k));
      double* row = psi.row(u);
      for (int c = 0; c < n_states; ++c) row[c] -= 0.5 * lr * res.d_psi_x[c];
      if (k >= avg_start) {
        ++avg_count;
        for (size_t i = 0; i < psi.data.size(); ++i)
          avg.data[i] += (psi.data[i] - avg.data[i]) / avg_count;
      }
      u = v;
    }
    double linf = 0;
    for (size_t i = 0; i < avg.data.size(); ++i)
      linf = std::max(linf, std::abs(avg.data[i] - truth.data[i]));
    out.per_mdp.push_back(linf);
    out.max_linf = std::max(out.max_linf, linf);
  }
  return out;
}

double soft_q_fixed_point_residual(uint64_t seed) {
  // 3-state deterministic MDP: action 0 advances the ring, action 1 stays.
  SmallMdp mdp;
  mdp.n_states = 3;
  mdp.n_actions = 2;
  mdp.next = {1, 0, 2, 1, 0, 2};
  mdp.reward = {1.0, 0.0, 0.0, 0.25, 0.5, 0.1};
  const double gamma = 0.95, alpha = 1.0;
  const Matrix q_star = soft_q_value_iteration(mdp, gamma, alpha, 3000);

  Rng rng(derive_seed(seed, 300));
  OptionBankConfig cfg;
  cfg.hidden = {};  // a linear head on one-hot inputs is exactly a table
  cfg.alpha = alpha;
  cfg.gamma = gamma;
  cfg.target_delay = 20;
  OptionBank bank(mdp.n_states, 1, mdp.n_actions, cfg, rng);
  bank.ensure_head(0);

  std::vector<StoredTransition> items;
  for (int s = 0; s < mdp.n_states; ++s)
    for (int a = 0; a < mdp.n_actions; ++a) {
      StoredTransition st;
      st.t.x.assign(mdp.n_states, 0.0);
      st.t.x[s] = 1.0;
      st.t.a = a;
      st.t.x_next.assign(mdp.n_states, 0.0);
      st.t.x_next[mdp.next[s * mdp.n_actions + a]] = 1.0;
      st.t.r = mdp.reward[s * mdp.n_actions + a];
      st.s = 0;
      st.s_goal = 0;
      st.s_next = 0;
      st.terminated = false;
      items.push_back(std::move(st));
    }
  std::vector<const StoredTransition*> batch;
  for (const auto& st : items) batch.push_back(&st);

  const std::pair<double, long> stages[] = {
      {0.05, 20000}, {5e-3, 20000}, {5e-4, 20000}, {5e-5, 40000}};
  for (const auto& [lr, iters] : stages) {
    bank.optimizer().config().lr = lr;
    for (long i = 0; i < iters; ++i) bank.update(batch);
  }

  double residual = 0;
  for (int s = 0; s < mdp.n_states; ++s) {
    Vec obs(mdp.n_states, 0.0);
    obs[s] = 1.0;
    const Vec q = bank.q_values(obs, 0, 0);
    for (int a = 0; a < mdp.n_actions; ++a)
      residual = std::max(residual, std::abs(q[a] - q_star.at(s, a)));
  }
  return residual;
}

std::vector<OracleCheckResult> run_oracle_checks(uint64_t seed) {
  std::vector<OracleCheckResult> results;
  {
    const double err = gradient_suite_max_rel_err(seed, 50);
    results.push_back({"gradients_vs_finite_differences", err < 1e-4, err,
                       "50 random nets, all loss heads, tol 1e-4"});
  }
  {
    const SrEquivalenceResult res = sr_td_vs_oracle(seed, 5, 10, 200000, 0.95);
    results.push_back({"sr_td_vs_matrix_inverse", res.max_linf < 0.05, res.max_linf,
                       "5 random 10-state MDPs, tol 0.05 (L-inf)"});
  }
  {
    const double res = soft_q_fixed_point_residual(seed);
    results.push_back({"soft_q_vs_value_iteration", res < 1e-3, res,
                       "3-state deterministic MDP, tol 1e-3"});
  }
  return results;
}

}  // namespace dsaa
