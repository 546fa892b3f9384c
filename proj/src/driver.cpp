#include "dsaa/driver.hpp"

#include <stdexcept>

#include "dsaa/checkpoint.hpp"

namespace dsaa {

bool stopping_criterion(const RunConfig& cfg, const RunStats& stats) {
  if (cfg.mode == RunMode::kUnsupervised)
    return static_cast<int>(stats.phases.size()) >= cfg.outer_iters;
  if (stats.total_steps >= cfg.max_total_steps) return true;
  if (static_cast<int>(stats.episodes.size()) < cfg.return_window) return false;
  double sum = 0;
  for (size_t i = stats.episodes.size() - cfg.return_window;
       i < stats.episodes.size(); ++i)
    sum += stats.episodes[i].env_return;
  return sum / cfg.return_window >= cfg.return_threshold;
}

EpisodeManager::EpisodeManager(Env& env, int cap) : env_(env), cap_(cap) {
  if (cap <= 0) throw std::invalid_argument("EpisodeManager: cap must be positive");
}

Vec EpisodeManager::begin_episode() {
  ++episode_;
  steps_in_episode_ = 0;
  episode_return_ = 0;
  episode_start_step_ = global_step_;
  return env_.reset();
}

EpisodeManager::Outcome EpisodeManager::step(int action) {
  Outcome out;
  out.result = env_.step(action);
  ++steps_in_episode_;
  ++global_step_;
  episode_return_ += out.result.reward;
  out.env_done = out.result.done;
  out.episode_over = out.result.done || steps_in_episode_ >= cap_;
  return out;
}

namespace {

struct VisitTracker {
  std::vector<uint64_t>* counts;
  std::vector<CoverageEvent>* events;
  long unique = 0;

  void visit(int state_id, long step) {
    if (!counts || state_id < 0) return;
    if ((*counts)[state_id]++ == 0) {
      ++unique;
      events->push_back({step, unique});
    }
  }
};

}  // namespace

DsaaResult run_dsaa(const RunConfig& cfg, Env& env, const StepCallback& on_step) {
  if (cfg.e_iters < cfg.episode_cap)
    throw std::invalid_argument("run_dsaa: e_iters must be >= episode_cap");
  if (cfg.n_abstract <= 0)
    throw std::invalid_argument("run_dsaa: n_abstract must be positive");

  const bool online = cfg.mode == RunMode::kOnline;

  Rng rng_enc_init(derive_seed(cfg.seed, 1));
  Rng rng_dec_init(derive_seed(cfg.seed, 2));
  Rng rng_bank_init(derive_seed(cfg.seed, 3));
  Rng rng_act(derive_seed(cfg.seed, 4));
  Rng rng_goal(derive_seed(cfg.seed, 5));
  Rng rng_replay(derive_seed(cfg.seed, 6));
  Rng rng_abstraction(derive_seed(cfg.seed, 7));

  DsaaResult res{
      Encoder(env.obs_dim(), cfg.n_abstract, rng_enc_init, cfg.encoder_hidden,
              cfg.abstraction.gumbel),
      SrDecoder(cfg.n_abstract, rng_dec_init, cfg.decoder_hidden),
      OptionBank(env.obs_dim(), cfg.n_abstract, env.n_actions(), cfg.options,
                 rng_bank_init),
      AbstractGraph(cfg.n_abstract),
      AbstractAgent(cfg.n_abstract, cfg.agent),
      RunStats{}};
  RunStats& stats = res.stats;

  AdamState enc_opt(res.encoder.net, AdamConfig{cfg.abstraction.lr, 0.9, 0.999, 1e-8});
  AdamState dec_opt(res.decoder.net, AdamConfig{cfg.abstraction.lr, 0.9, 0.999, 1e-8});
  ReplayBuffer buffer(cfg.replay_capacity);

  VisitTracker visits{nullptr, &stats.coverage, 0};
  if (env.n_state_ids() > 0) {
    stats.visit_counts.assign(env.n_state_ids(), 0);
    visits.counts = &stats.visit_counts;
  }

  EpisodeManager em(env, cfg.episode_cap);
  Vec obs = em.begin_episode();
  visits.visit(env.state_id(), 0);

  auto select_goal = [&](int s, int phase) {
    int goal;
    if (online)
      goal = res.agent.choose_goal(res.graph, s, res.agent.epsilon_for_phase(phase),
                                   rng_goal);
    else
      goal = choose_goal_walk(res.graph, s, rng_goal);
    res.bank.ensure_head(goal);
    return goal;
  };

  bool hard_stop = false;
  for (int phase = 0; !hard_stop; ++phase) {
    res.graph.reset();
    buffer.clear();
    if (cfg.reset_options && phase > 0) {
      Rng rng_reset(derive_seed(cfg.seed, 1000 + phase));
      res.bank = OptionBank(env.obs_dim(), cfg.n_abstract, env.n_actions(),
                            cfg.options, rng_reset);
    }

    int s = encode_hard(res.encoder, obs);
    int goal = select_goal(s, phase);
    int seg_start = s;
    double seg_reward = 0;

    long phase_episodes = 0;
    double phase_return = 0;
    int edges_discovered = 0;
    double loss_sum = 0;
    long loss_count = 0;

    for (long i = 0; i < cfg.e_iters; ++i) {
      const int action = res.bank.act(obs, s, goal, rng_act);
      EpisodeManager::Outcome out = em.step(action);
      const long global_step = ++stats.total_steps;

      const int s_next = encode_hard(res.encoder, out.result.obs);
      const double env_reward = out.result.reward;
      const double r_opt =
          option_reward(cfg.options.reward_scale, s_next, goal, s, env_reward, online);
      const bool terminated = (s_next != s) || out.episode_over;

      buffer.push({Transition{obs, action, out.result.obs, r_opt, out.episode_over},
                   s, goal, s_next, terminated});
      if (res.graph.add_edge(s, s_next)) {
        ++edges_discovered;
        res.bank.ensure_head(s_next);
      }
      visits.visit(env.state_id(), global_step);

      if (env_reward > 0 && stats.first_success_step < 0)
        stats.first_success_step = global_step;
      seg_reward += env_reward;
      phase_return += env_reward;

      if (buffer.size() >= static_cast<size_t>(cfg.option_batch) &&
          (i + 1) % cfg.option_update_every == 0) {
        loss_sum += res.bank.update(buffer.sample(cfg.option_batch, rng_replay));
        ++loss_count;
      }

      if (on_step || cfg.record_steps) {
        StepRecord rec{global_step, phase,          em.episode(), env.state_id(),
                       s,           goal,           action,       r_opt,
                       env_reward,  out.episode_over};
        if (on_step) on_step(rec);
        if (cfg.record_steps) stats.steps.push_back(rec);
      }

      if (out.episode_over) {
        stats.episodes.push_back({em.episode(), em.episode_start_step(),
                                  em.steps_in_episode(), em.episode_return()});
        ++stats.episodes_completed;
        ++phase_episodes;
        if (online)
          res.agent.update(res.graph, seg_start, goal, seg_reward, s_next, true);
        obs = em.begin_episode();
        visits.visit(env.state_id(), global_step);
        s = encode_hard(res.encoder, obs);
        goal = select_goal(s, phase);
        seg_start = s;
        seg_reward = 0;
      } else if (s_next != s) {
        if (online)
          res.agent.update(res.graph, seg_start, goal, seg_reward, s_next, false);
        obs = out.result.obs;
        s = s_next;
        goal = select_goal(s, phase);
        seg_start = s;
        seg_reward = 0;
      } else {
        obs = out.result.obs;
      }

      if (online && stats.total_steps >= cfg.max_total_steps) {
        hard_stop = true;
        break;
      }
      if (cfg.stop_at_unique_states > 0 && visits.unique >= cfg.stop_at_unique_states) {
        hard_stop = true;
        break;
      }
    }

    PhaseRecord pr;
    pr.phase = phase;
    pr.steps = stats.total_steps;
    pr.edges_discovered = edges_discovered;
    pr.episodes_completed = phase_episodes;
    pr.mean_option_loss = loss_count ? loss_sum / loss_count : 0.0;
    pr.env_return_sum = phase_return;
    pr.unique_states = visits.unique;

    if (!hard_stop) {
      AbstractionLossHistory hist = abstraction_update(
          res.encoder, res.decoder, buffer, cfg.abstraction, enc_opt, dec_opt,
          rng_abstraction);
      if (!hist.total.empty()) {
        pr.abstraction_loss_first = hist.total.front();
        pr.abstraction_loss_last = hist.total.back();
      }
    }
    stats.phases.push_back(pr);
    if (!cfg.checkpoint_path.empty())
      save_dsaa_checkpoint(cfg.checkpoint_path, res.encoder, res.decoder, res.bank);

    if (stopping_criterion(cfg, stats)) {
      if (cfg.mode == RunMode::kOnline && stats.total_steps < cfg.max_total_steps)
        stats.online_converged = true;
      break;
    }
  }
  if (!cfg.dump_replay_path.empty() && buffer.size() > 0)
    buffer.dump(cfg.dump_replay_path);
  return res;
}

void save_dsaa_checkpoint(const std::string& path, const Encoder& enc,
                          const SrDecoder& dec, const OptionBank& bank) {
  std::vector<NamedTensor> tensors;
  mlp_to_tensors("encoder", enc.net, tensors);
  mlp_to_tensors("decoder", dec.net, tensors);
  mlp_to_tensors("options.online", bank.online_net(), tensors);
  mlp_to_tensors("options.target", bank.target_net(), tensors);
  save_checkpoint(path, tensors);
}

void load_dsaa_checkpoint(const std::string& path, Encoder& enc, SrDecoder& dec,
                          OptionBank& bank) {
  const auto tensors = load_checkpoint(path);
  mlp_from_tensors("encoder", tensors, enc.net);
  mlp_from_tensors("decoder", tensors, dec.net);
  mlp_from_tensors("options.online", tensors, bank.online_net());
  mlp_from_tensors("options.target", tensors, bank.target_net());
}

}  // namespace dsaa
