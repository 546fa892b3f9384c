// Option bank: soft Q-learning policies for moving between abstract states.
// One shared trunk on (observation, one-hot current abstract state); the
// final linear layer holds one head per goal abstract state, n_abstract * n_actions
// outputs in total. A delayed target copy provides TD targets.
#pragma once

#include <vector>

#include "dsaa/adam.hpp"
#include "dsaa/mlp.hpp"
#include "dsaa/replay.hpp"
#include "dsaa/rng.hpp"

namespace dsaa {

struct OptionBankConfig {
  std::vector<int> hidden = {64, 128, 256, 512};
  double alpha = 1.0;        // soft-Q temperature
  double gamma = 0.95;
  int target_delay = 20;     // updates between target-network syncs
  double reward_scale = 200; // R: intrinsic reward for entering the goal
  double lr = 1e-3;
};

class OptionBank {
 public:
  OptionBank() = default;
  OptionBank(int obs_dim, int n_abstract, int n_actions, const OptionBankConfig& cfg,
             Rng& rng);

  int n_abstract() const { return n_abstract_; }
  int n_actions() const { return n_actions_; }
  int obs_dim() const { return obs_dim_; }
  const OptionBankConfig& config() const { return cfg_; }

  // Q(x, s)[goal, a] row for one goal head.
  Vec q_values(const Vec& obs, int s, int goal) const;
  // Boltzmann sample from softmax(Q / alpha).
  int act(const Vec& obs, int s, int goal, Rng& rng) const;

  // Marks a head live for training; all heads are preallocated, so this is
  // an idempotent bookkeeping guard.
  void ensure_head(int goal);
  bool head_live(int goal) const { return live_[goal]; }

  // One soft-Q TD step on a replay batch; items route to their stored goal
  // head. Syncs the target net every cfg.target_delay updates. Returns the
  // mean squared TD error.
  double update(const std::vector<const StoredTransition*>& batch);

  long update_count() const { return updates_; }
  AdamState& optimizer() { return opt_; }
  Mlp& online_net() { return online_; }
  const Mlp& online_net() const { return online_; }
  Mlp& target_net() { return target_; }
  const Mlp& target_net() const { return target_; }
  void sync_target() { target_ = online_; }

 private:
  void build_input(const Vec& obs, int s, double* row) const;

  OptionBankConfig cfg_;
  int obs_dim_ = 0;
  int n_abstract_ = 0;
  int n_actions_ = 0;
  Mlp online_;  // (obs_dim + n_abstract) -> hidden -> n_abstract * n_actions
  Mlp target_;
  AdamState opt_;
  std::vector<char> live_;
  long updates_ = 0;
  // batch scratch
  MlpCache cache_, target_cache_;
  MlpGrads grads_;
  Matrix xin_, xin_next_, dq_;
};

// R * [s_next == goal] plus, in online mode with the self-loop option
// active (s_cur == goal), the environment reward.
double option_reward(double reward_scale, int s_next, int goal, int s_cur,
                     double env_reward, bool online);

}  // namespace dsaa
