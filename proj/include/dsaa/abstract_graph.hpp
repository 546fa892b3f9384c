// The abstract MDP: directed graph over abstract states with mandatory
// self-loops, plus the tabular Q agent that picks option goals online.
#pragma once

#include <string>
#include <vector>

#include "dsaa/numeric.hpp"
#include "dsaa/rng.hpp"

namespace dsaa {

class AbstractGraph {
 public:
  explicit AbstractGraph(int n);

  int n() const { return n_; }
  bool has_edge(int s, int s2) const { return adj_[idx(s, s2)] != 0; }
  // Adds the directed edge and bumps its visit counter; returns whether it
  // was newly added. Self-loops are permanent.
  bool add_edge(int s, int s2);
  uint64_t visits(int s, int s2) const { return visits_[idx(s, s2)]; }
  // Out-neighborhood in ascending order. Always contains s itself.
  std::vector<int> neighbors(int s) const;
  int edge_count() const;  // including self-loops
  // Back to self-loops only; counters zeroed.
  void reset();

  std::string to_json() const;
  std::string to_dot() const;

 private:
  size_t idx(int s, int s2) const;
  int n_;
  std::vector<uint8_t> adj_;
  std::vector<uint64_t> visits_;
};

// Uniform draw from N_G(s); the self-loop keeps the walk lazy.
int choose_goal_walk(const AbstractGraph& g, int s, Rng& rng);

struct AbstractAgentConfig {
  double lr = 0.1;
  double gamma = 0.95;
  double eps_start = 1.0;
  double eps_end = 0.05;
  int eps_anneal_phases = 20;
};

class AbstractAgent {
 public:
  AbstractAgent() = default;
  AbstractAgent(int n, AbstractAgentConfig cfg);

  // Epsilon-greedy over Q[s][.] restricted to N_G(s); ties to lowest index.
  int choose_goal(const AbstractGraph& g, int s, double eps, Rng& rng) const;
  // Q-learning backup for a finished option segment: reward is the summed
  // environment reward along the segment.
  void update(const AbstractGraph& g, int s, int goal, double segment_reward,
              int s_terminal, bool done);

  double epsilon_for_phase(int phase) const;
  double q(int s, int goal) const { return q_.at(s, goal); }
  Matrix& table() { return q_; }
  const AbstractAgentConfig& config() const { return cfg_; }

 private:
  AbstractAgentConfig cfg_;
  Matrix q_;  // n x n; rows = state, cols = goal
};

}  // namespace dsaa
