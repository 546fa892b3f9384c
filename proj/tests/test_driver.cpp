#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dsaa/driver.hpp"
#include "dsaa/grid_world.hpp"

using namespace dsaa;

namespace {

RunConfig small_config(uint64_t seed) {
  RunConfig cfg;
  cfg.mode = RunMode::kUnsupervised;
  cfg.n_abstract = 4;
  cfg.e_iters = 500;
  cfg.episode_cap = 100;
  cfg.outer_iters = 2;
  cfg.encoder_hidden = {16};
  cfg.decoder_hidden = {8};
  cfg.options.hidden = {16};
  cfg.abstraction.sgd_steps = 20;
  cfg.abstraction.batch_size = 32;
  cfg.option_batch = 32;
  cfg.option_update_every = 4;
  cfg.replay_capacity = 1000;
  cfg.seed = seed;
  cfg.record_steps = true;
  return cfg;
}

// one-state environment that pays 1 on every step and never terminates
class ConstantRewardEnv final : public Env {
 public:
  Vec reset() override { return {0.5}; }
  StepResult step(int) override { return {{0.5}, 1.0, false}; }
  int obs_dim() const override { return 1; }
  int n_actions() const override { return 2; }
  std::unique_ptr<Env> clone() const override {
    return std::make_unique<ConstantRewardEnv>(*this);
  }
  std::string name() const override { return "constant"; }
};

// terminal reward exactly at the 40th step of every episode
class TerminalAt40Env final : public Env {
 public:
  Vec reset() override {
    t_ = 0;
    return {0.0};
  }
  StepResult step(int) override {
    ++t_;
    const bool done = t_ == 40;
    return {{t_ / 40.0}, done ? 1.0 : 0.0, done};
  }
  int obs_dim() const override { return 1; }
  int n_actions() const override { return 2; }
  std::unique_ptr<Env> clone() const override {
    return std::make_unique<TerminalAt40Env>(*this);
  }
  std::string name() const override { return "terminal40"; }

 private:
  int t_ = 0;
};

}  // namespace

TEST_CASE("step accounting: outer_iters * e_iters steps, one update per phase") {
  GridWorld env(four_rooms_map());
  RunConfig cfg = small_config(7);
  cfg.outer_iters = 1;
  const DsaaResult res = run_dsaa(cfg, env);
  CHECK(res.stats.total_steps == 500);
  CHECK(res.stats.steps.size() == 500);
  REQUIRE(res.stats.phases.size() == 1);
  CHECK(res.stats.phases[0].abstraction_loss_first != 0.0);  // update executed
}

TEST_CASE("the first goal ever selected is the initial abstract state") {
  GridWorld env(four_rooms_map());
  RunConfig cfg = small_config(11);
  cfg.outer_iters = 1;
  const DsaaResult res = run_dsaa(cfg, env);
  const StepRecord& first = res.stats.steps.front();
  CHECK(first.goal == first.s);  // fresh graph: only the self-loop exists
}

TEST_CASE("goal persists between abstract-state changes and episode resets") {
  GridWorld env(four_rooms_map());
  RunConfig cfg = small_config(13);
  const DsaaResult res = run_dsaa(cfg, env);
  const auto& steps = res.stats.steps;
  for (size_t i = 1; i < steps.size(); ++i) {
    if (steps[i].phase != steps[i - 1].phase) continue;  // re-drawn at phase start
    if (steps[i - 1].done) continue;                     // re-drawn after reset
    if (steps[i].s == steps[i - 1].s)
      CHECK(steps[i].goal == steps[i - 1].goal);
  }
}

TEST_CASE("episodes reset at the cap and the goal is re-drawn from the new state") {
  GridWorld env(four_rooms_map());
  RunConfig cfg = small_config(17);
  cfg.outer_iters = 1;
  const DsaaResult res = run_dsaa(cfg, env);
  REQUIRE(res.stats.episodes.size() == 5);  // 500 steps / cap 100
  for (const auto& ep : res.stats.episodes) CHECK(ep.length == 100);
  // after each reset the active abstract state matches the start cell again
  const auto& steps = res.stats.steps;
  const int start_s = steps.front().s;
  for (size_t i = 1; i < steps.size(); ++i)
    if (steps[i - 1].done && steps[i].phase == steps[i - 1].phase)
      CHECK(steps[i].s == start_s);
}

TEST_CASE("terminal environments cut episodes early") {
  TerminalAt40Env env;
  RunConfig cfg = small_config(19);
  cfg.outer_iters = 1;
  cfg.e_iters = 200;
  cfg.episode_cap = 100;
  const DsaaResult res = run_dsaa(cfg, env);
  REQUIRE(res.stats.episodes.size() == 5);  // 200 / 40
  for (const auto& ep : res.stats.episodes) {
    CHECK(ep.length == 40);
    CHECK(ep.env_return == 1.0);
  }
  CHECK(res.stats.first_success_step == 40);
}

TEST_CASE("online rewards follow the self-loop augmentation formula") {
  ConstantRewardEnv env;
  RunConfig cfg = small_config(23);
  cfg.mode = RunMode::kOnline;
  cfg.n_abstract = 2;
  cfg.outer_iters = 1;
  cfg.e_iters = 300;
  cfg.episode_cap = 100;
  cfg.max_total_steps = 300;
  cfg.return_threshold = 1e18;  // never converges; runs to the step cap
  const DsaaResult res = run_dsaa(cfg, env);
  for (const auto& rec : res.stats.steps) {
    CHECK(rec.env_reward == 1.0);
    if (rec.s == rec.goal)
      CHECK((rec.option_reward == 1.0 || rec.option_reward == 201.0));
    else
      CHECK((rec.option_reward == 0.0 || rec.option_reward == 200.0));
  }
}

TEST_CASE("unsupervised stopping: exactly outer_iters phases") {
  GridWorld env(four_rooms_map());
  RunConfig cfg = small_config(29);
  cfg.outer_iters = 3;
  const DsaaResult res = run_dsaa(cfg, env);
  CHECK(res.stats.phases.size() == 3);
  CHECK(res.stats.total_steps == 3 * cfg.e_iters);
}

TEST_CASE("stopping_criterion semantics") {
  RunConfig cfg;
  cfg.mode = RunMode::kUnsupervised;
  cfg.outer_iters = 10;
  RunStats stats;
  stats.phases.resize(9);
  CHECK(!stopping_criterion(cfg, stats));
  stats.phases.resize(10);
  CHECK(stopping_criterion(cfg, stats));

  RunConfig online;
  online.mode = RunMode::kOnline;
  online.return_window = 10;
  online.return_threshold = 0.9;
  online.max_total_steps = 1000000;
  RunStats ostats;
  ostats.total_steps = 500;
  for (int i = 0; i < 9; ++i) ostats.episodes.push_back({i, 0, 10, 1.0});
  CHECK(!stopping_criterion(online, ostats));  // window not filled yet
  ostats.episodes.push_back({9, 0, 10, 0.0});
  ostats.episodes.push_back({10, 0, 10, 0.0});
  CHECK(!stopping_criterion(online, ostats));  // mean of last 10 is 0.8 < rho
  for (int i = 0; i < 10; ++i) ostats.episodes.push_back({10 + i, 0, 10, 1.0});
  CHECK(stopping_criterion(online, ostats));
  // hard cap triggers regardless of returns
  RunStats capped;
  capped.total_steps = 1000000;
  CHECK(stopping_criterion(online, capped));
}

TEST_CASE("phase hygiene: the graph is rebuilt from self-loops each phase") {
  GridWorld env(four_rooms_map());
  RunConfig cfg = small_config(31);
  cfg.outer_iters = 2;
  const DsaaResult res = run_dsaa(cfg, env);
  // edges have to be rediscovered after the reset, so both phases report some
  CHECK(res.stats.phases[0].edges_discovered >= 1);
  CHECK(res.stats.phases[1].edges_discovered >= 1);
  // the returned graph only holds edges witnessed in the final phase
  int non_self = 0;
  for (int s = 0; s < cfg.n_abstract; ++s)
    for (int u = 0; u < cfg.n_abstract; ++u)
      if (s != u && res.graph.has_edge(s, u)) ++non_self;
  CHECK(non_self == res.stats.phases[1].edges_discovered);
}

TEST_CASE("runs are bit-reproducible from (seed, config)") {
  auto run = [](uint64_t seed) {
    GridWorld env(four_rooms_map());
    return run_dsaa(small_config(seed), env);
  };
  const DsaaResult a = run(101), b = run(101), c = run(202);
  REQUIRE(a.stats.steps.size() == b.stats.steps.size());
  for (size_t i = 0; i < a.stats.steps.size(); ++i) {
    CHECK(a.stats.steps[i].s == b.stats.steps[i].s);
    CHECK(a.stats.steps[i].goal == b.stats.steps[i].goal);
    CHECK(a.stats.steps[i].action == b.stats.steps[i].action);
    CHECK(a.stats.steps[i].state_id == b.stats.steps[i].state_id);
  }
  for (size_t l = 0; l < a.encoder.net.layers().size(); ++l)
    CHECK(a.encoder.net.layers()[l].w.data == b.encoder.net.layers()[l].w.data);
  // different seed, different trajectory
  bool differs = false;
  for (size_t i = 0; i < std::min(a.stats.steps.size(), c.stats.steps.size()); ++i)
    if (a.stats.steps[i].action != c.stats.steps[i].action) differs = true;
  CHECK(differs);
}

TEST_CASE("config validation") {
  GridWorld env(four_rooms_map());
  RunConfig cfg = small_config(1);
  cfg.e_iters = 50;  // below the episode cap
  cfg.episode_cap = 100;
  CHECK_THROWS_AS(run_dsaa(cfg, env), std::invalid_argument);
}

TEST_CASE("coverage events are monotone and counts match steps") {
  GridWorld env(four_rooms_map());
  RunConfig cfg = small_config(37);
  const DsaaResult res = run_dsaa(cfg, env);
  uint64_t total = 0;
  for (uint64_t c : res.stats.visit_counts) total += c;
  // initial state of each episode counts once, plus one visit per step
  CHECK(total == static_cast<uint64_t>(res.stats.total_steps) + 1 +
                     res.stats.episodes_completed);
  for (size_t i = 1; i < res.stats.coverage.size(); ++i) {
    CHECK(res.stats.coverage[i].unique_states >
          res.stats.coverage[i - 1].unique_states);
    CHECK(res.stats.coverage[i].step >= res.stats.coverage[i - 1].step);
  }
}
