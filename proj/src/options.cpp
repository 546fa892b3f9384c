#include "dsaa/options.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace dsaa {

OptionBank::OptionBank(int obs_dim, int n_abstract, int n_actions,
                       const OptionBankConfig& cfg, Rng& rng)
    : cfg_(cfg),
      obs_dim_(obs_dim),
      n_abstract_(n_abstract),
      n_actions_(n_actions),
      online_(obs_dim + n_abstract, cfg.hidden, n_abstract * n_actions, rng,
              /*zero_init_output=*/true),
      live_(n_abstract, 0) {
  target_ = online_;
  opt_ = AdamState(online_, AdamConfig{cfg.lr, 0.9, 0.999, 1e-8});
  grads_ = online_.make_grads();
}

void OptionBank::build_input(const Vec& obs, int s, double* row) const {
  if (static_cast<int>(obs.size()) != obs_dim_)
    throw std::invalid_argument("OptionBank: observation has wrong dimension");
  if (s < 0 || s >= n_abstract_)
    throw std::invalid_argument("OptionBank: abstract state out of range");
  for (int i = 0; i < obs_dim_; ++i) row[i] = obs[i];
  for (int i = 0; i < n_abstract_; ++i) row[obs_dim_ + i] = (i == s) ? 1.0 : 0.0;
}

Vec OptionBank::q_values(const Vec& obs, int s, int goal) const {
  if (goal < 0 || goal >= n_abstract_)
    throw std::invalid_argument("OptionBank: goal out of range");
  Vec in(obs_dim_ + n_abstract_);
  build_input(obs, s, in.data());
  const Vec out = online_.forward_const(in);
  return Vec(out.begin() + static_cast<size_t>(goal) * n_actions_,
             out.begin() + static_cast<size_t>(goal + 1) * n_actions_);
}

int OptionBank::act(const Vec& obs, int s, int goal, Rng& rng) const {
  Vec q = q_values(obs, s, goal);
  const double inv_alpha = 1.0 / cfg_.alpha;
  for (double& v : q) v *= inv_alpha;
  softmax_inplace(q.data(), n_actions_);
  double u = rng.uniform();
  for (int a = 0; a < n_actions_; ++a) {
    u -= q[a];
    if (u <= 0) return a;
  }
  return n_actions_ - 1;
}

void OptionBank::ensure_head(int goal) {
  if (goal < 0 || goal >= n_abstract_)
    throw std::invalid_argument("OptionBank: goal out of range");
  live_[goal] = 1;
}

double OptionBank::update(const std::vector<const StoredTransition*>& batch) {
  if (batch.empty()) throw std::invalid_argument("OptionBank::update: empty batch");
  const int b = static_cast<int>(batch.size());
  const int in_dim = obs_dim_ + n_abstract_;

  xin_.resize(b, in_dim);
  for (int r = 0; r < b; ++r) build_input(batch[r]->t.x, batch[r]->s, xin_.row(r));

  // Bootstrap targets only for transitions whose option did not terminate.
  std::vector<int> boot_rows;
  boot_rows.reserve(b);
  for (int r = 0; r < b; ++r)
    if (!batch[r]->terminated) boot_rows.push_back(r);
  Vec boot(b, 0.0);
  if (!boot_rows.empty()) {
    xin_next_.resize(static_cast<int>(boot_rows.size()), in_dim);
    for (size_t i = 0; i < boot_rows.size(); ++i) {
      const StoredTransition& st = *batch[boot_rows[i]];
      build_input(st.t.x_next, st.s_next, xin_next_.row(static_cast<int>(i)));
    }
    const Matrix& qt = target_.forward_batch(xin_next_, target_cache_);
    const double alpha = cfg_.alpha;
    for (size_t i = 0; i < boot_rows.size(); ++i) {
      const StoredTransition& st = *batch[boot_rows[i]];
      const double* head =
          qt.row(static_cast<int>(i)) + static_cast<size_t>(st.s_goal) * n_actions_;
      // alpha * logsumexp(Q/alpha), computed around the max for stability
      double m = head[0];
      for (int a = 1; a < n_actions_; ++a) m = std::max(m, head[a]);
      double s = 0;
      for (int a = 0; a < n_actions_; ++a) s += std::exp((head[a] - m) / alpha);
      boot[boot_rows[i]] = m + alpha * std::log(s);
    }
  }

  const Matrix& q = online_.forward_batch(xin_, cache_);
  dq_.resize(b, n_abstract_ * n_actions_);
  dq_.zero();
  double loss = 0;
  const double inv_b = 1.0 / b;
  for (int r = 0; r < b; ++r) {
    const StoredTransition& st = *batch[r];
    const double target =
        st.t.r + (st.terminated ? 0.0 : cfg_.gamma * boot[r]);
    if (!std::isfinite(target)) {
      char msg[128];
      std::snprintf(msg, sizeof(msg),
                    "OptionBank::update: non-finite TD target (row %d, r=%g)", r,
                    st.t.r);
      throw std::runtime_error(msg);
    }
    const int col = st.s_goal * n_actions_ + st.t.a;
    const double diff = q.at(r, col) - target;
    loss += diff * diff;
    dq_.at(r, col) = 2.0 * diff * inv_b;
  }
  loss *= inv_b;

  grads_.zero();
  online_.backward_batch(dq_, cache_, grads_);
  opt_.step(online_, grads_);
  ++updates_;
  if (updates_ % cfg_.target_delay == 0) sync_target();
  return loss;
}

double option_reward(double reward_scale, int s_next, int goal, int s_cur,
                     double env_reward, bool online) {
  double r = (s_next == goal) ? reward_scale : 0.0;
  if (online && s_cur == goal) r += env_reward;
  return r;
}

}  // namespace dsaa
