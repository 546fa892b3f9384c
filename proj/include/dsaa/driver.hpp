// Orchestration of the full loop: exploration phases that act through
// options, discover abstract edges and train the bank, alternating with
// abstraction updates, until the stopping criterion.
#pragma once

#include <functional>
#include <optional>
#include <string>

#include "dsaa/abstract_graph.hpp"
#include "dsaa/abstraction.hpp"
#include "dsaa/env.hpp"
#include "dsaa/options.hpp"
#include "dsaa/replay.hpp"

namespace dsaa {

enum class RunMode { kUnsupervised, kOnline };

struct RunConfig {
  RunMode mode = RunMode::kUnsupervised;
  int n_abstract = 8;
  long e_iters = 100000;   // exploration steps per outer phase
  int episode_cap = 5000;  // driver-owned; the env may also terminate
  int outer_iters = 10;    // unsupervised stopping

  // online stopping: mean return over the last return_window episodes
  // reaches return_threshold, or the hard step cap is hit
  int return_window = 10;
  double return_threshold = 0.9;
  long max_total_steps = 3000000;

  AbstractionLossConfig abstraction;
  std::vector<int> encoder_hidden = {128, 256};
  std::vector<int> decoder_hidden = {64, 128};
  OptionBankConfig options;
  AbstractAgentConfig agent;

  size_t replay_capacity = 100000;
  int option_batch = 512;
  int option_update_every = 1;  // env steps per soft-Q update

  uint64_t seed = 0;
  bool record_steps = false;  // keep per-step records in memory (small runs)
  // hard-stop once this many unique states were visited (<=0 disables);
  // used by coverage experiments with matched exploration budgets
  long stop_at_unique_states = -1;

  // retrain the option bank from scratch after every abstraction update
  // instead of warm-starting it
  bool reset_options = false;
  std::string checkpoint_path;   // written at phase boundaries when set
  std::string dump_replay_path;  // final-phase buffer dump when set
};

struct StepRecord {
  long step = 0;  // global env step index
  int phase = 0;
  long episode = 0;
  int state_id = -1;
  int s = 0;
  int goal = 0;
  int action = 0;
  double option_reward = 0;
  double env_reward = 0;
  bool done = false;
};

struct EpisodeRecord {
  long episode = 0;
  long start_step = 0;
  long length = 0;
  double env_return = 0;
};

struct PhaseRecord {
  int phase = 0;
  long steps = 0;
  int edges_discovered = 0;
  long episodes_completed = 0;
  double mean_option_loss = 0;
  double abstraction_loss_first = 0;
  double abstraction_loss_last = 0;
  double env_return_sum = 0;
  long unique_states = 0;  // cumulative, for enumerable envs
};

struct CoverageEvent {
  long step = 0;
  long unique_states = 0;
};

struct RunStats {
  std::vector<PhaseRecord> phases;
  std::vector<EpisodeRecord> episodes;
  std::vector<CoverageEvent> coverage;
  std::vector<uint64_t> visit_counts;  // per state_id when enumerable
  std::vector<StepRecord> steps;       // only when record_steps
  long total_steps = 0;
  long first_success_step = -1;
  long episodes_completed = 0;
  bool online_converged = false;
};

struct DsaaResult {
  Encoder encoder;
  SrDecoder decoder;
  OptionBank bank;
  AbstractGraph graph{1};
  AbstractAgent agent;
  RunStats stats;
};

using StepCallback = std::function<void(const StepRecord&)>;

// True when the run should stop: phase count reached (unsupervised), or the
// return window converged / hard step cap hit (online).
bool stopping_criterion(const RunConfig& cfg, const RunStats& stats);

// Episode bookkeeping shared by the driver and the baselines: counts steps,
// accumulates returns, and decides when the driver must reset.
class EpisodeManager {
 public:
  EpisodeManager(Env& env, int cap);

  Vec begin_episode();  // resets env, bumps the episode counter
  struct Outcome {
    StepResult result;
    bool episode_over = false;  // env-terminal or cap hit
    bool env_done = false;
  };
  Outcome step(int action);

  long episode() const { return episode_; }
  long steps_in_episode() const { return steps_in_episode_; }
  double episode_return() const { return episode_return_; }
  long episode_start_step() const { return episode_start_step_; }
  long global_step() const { return global_step_; }

 private:
  Env& env_;
  int cap_;
  long episode_ = -1;
  long steps_in_episode_ = 0;
  double episode_return_ = 0;
  long episode_start_step_ = 0;
  long global_step_ = 0;
};

DsaaResult run_dsaa(const RunConfig& cfg, Env& env,
                    const StepCallback& on_step = nullptr);

// Bundles encoder + decoder + option bank into one checkpoint file.
void save_dsaa_checkpoint(const std::string& path, const Encoder& enc,
                          const SrDecoder& dec, const OptionBank& bank);
// Loads into identically shaped models.
void load_dsaa_checkpoint(const std::string& path, Encoder& enc, SrDecoder& dec,
                          OptionBank& bank);

}  // namespace dsaa
