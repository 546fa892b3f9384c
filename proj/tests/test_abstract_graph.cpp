#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "dsaa/abstract_graph.hpp"

using namespace dsaa;

TEST_CASE("fresh graph has exactly the self-loops") {
  AbstractGraph g(4);
  CHECK(g.edge_count() == 4);
  for (int s = 0; s < 4; ++s) {
    CHECK(g.has_edge(s, s));
    CHECK(g.neighbors(s) == std::vector<int>{s});
  }
}

TEST_CASE("add_edge reports novelty and keeps visit counts") {
  AbstractGraph g(4);
  CHECK(!g.add_edge(2, 2));  // self-loop already present
  CHECK(g.add_edge(0, 1));
  CHECK(g.neighbors(0) == std::vector<int>{0, 1});
  CHECK(!g.add_edge(0, 1));  // idempotent
  CHECK(g.visits(0, 1) == 2);
}

TEST_CASE("reset restores the identity and zeroes counters") {
  AbstractGraph g(5);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(4, 0);
  g.add_edge(2, 2);
  g.reset();
  CHECK(g.edge_count() == 5);
  for (int s = 0; s < 5; ++s)
    for (int u = 0; u < 5; ++u) {
      CHECK(g.has_edge(s, u) == (s == u));
      CHECK(g.visits(s, u) == 0);
    }
  g.reset();  // idempotent
  CHECK(g.edge_count() == 5);
}

TEST_CASE("edges only accumulate within a phase") {
  Rng rng(10);
  AbstractGraph g(6);
  std::set<std::pair<int, int>> model;
  for (int s = 0; s < 6; ++s) model.insert({s, s});
  for (int i = 0; i < 300; ++i) {
    const int s = rng.uniform_int(6), u = rng.uniform_int(6);
    const size_t before = model.size();
    model.insert({s, u});
    CHECK(g.add_edge(s, u) == (model.size() > before));
    CHECK(g.edge_count() == static_cast<int>(model.size()));
    for (auto [a, b] : model) CHECK(g.has_edge(a, b));
  }
}

TEST_CASE("choose_goal_walk on a fresh graph always returns the self-loop") {
  AbstractGraph g(3);
  Rng rng(4);
  for (int i = 0; i < 20; ++i) CHECK(choose_goal_walk(g, 1, rng) == 1);
}

TEST_CASE("choose_goal_walk is uniform over the neighborhood") {
  AbstractGraph g(5);
  g.add_edge(0, 2);
  g.add_edge(0, 4);
  Rng rng(123);
  int counts[5] = {0, 0, 0, 0, 0};
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) ++counts[choose_goal_walk(g, 0, rng)];
  CHECK(counts[1] == 0);
  CHECK(counts[3] == 0);
  for (int u : {0, 2, 4})
    CHECK(std::abs(counts[u] / static_cast<double>(draws) - 1.0 / 3.0) < 0.02);
}

TEST_CASE("choose_goal_walk is deterministic under a seeded rng") {
  AbstractGraph g(4);
  g.add_edge(1, 0);
  g.add_edge(1, 3);
  Rng a(7), b(7);
  for (int i = 0; i < 50; ++i)
    CHECK(choose_goal_walk(g, 1, a) == choose_goal_walk(g, 1, b));
}

TEST_CASE("agent with epsilon=1 reduces to the lazy walk distribution") {
  AbstractGraph g(4);
  g.add_edge(0, 1);
  AbstractAgent agent(4, {});
  Rng rng(55);
  int counts[4] = {0, 0, 0, 0};
  for (int i = 0; i < 60000; ++i) ++counts[agent.choose_goal(g, 0, 1.0, rng)];
  CHECK(counts[2] == 0);
  CHECK(counts[3] == 0);
  CHECK(std::abs(counts[0] / 60000.0 - 0.5) < 0.02);
}

TEST_CASE("agent with epsilon=0 picks the best live edge, ties to lowest") {
  AbstractGraph g(3);
  g.add_edge(0, 1);
  g.add_edge(0, 2);
  AbstractAgent agent(3, {});
  agent.table().at(0, 0) = 0.0;
  agent.table().at(0, 1) = 5.0;
  agent.table().at(0, 2) = -1.0;
  Rng rng(3);
  CHECK(agent.choose_goal(g, 0, 0.0, rng) == 1);
  agent.table().at(0, 1) = 0.0;
  agent.table().at(0, 2) = 0.0;
  CHECK(agent.choose_goal(g, 0, 0.0, rng) == 0);  // tie -> lowest index
}

TEST_CASE("agent never selects a goal outside the edge set") {
  AbstractGraph g(5);
  g.add_edge(2, 4);
  AbstractAgent agent(5, {});
  agent.table().at(2, 3) = 100.0;  // tempting but not an edge
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    const int goal = agent.choose_goal(g, 2, 0.5, rng);
    CHECK((goal == 2 || goal == 4));
  }
}

TEST_CASE("agent update: terminal segment writes the reward directly at lr=1") {
  AbstractAgentConfig cfg;
  cfg.lr = 1.0;
  AbstractGraph g(3);
  AbstractAgent agent(3, cfg);
  agent.update(g, 0, 1, 1.0, 2, true);
  CHECK(agent.q(0, 1) == doctest::Approx(1.0));
  // zero reward, zero table: no change
  AbstractAgent agent2(3, cfg);
  agent2.update(g, 0, 1, 0.0, 2, false);
  CHECK(agent2.q(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("agent converges on a two-node chain with terminal reward") {
  AbstractGraph g(2);
  g.add_edge(0, 1);
  AbstractAgentConfig cfg;
  cfg.lr = 0.5;
  AbstractAgent agent(2, cfg);
  for (int i = 0; i < 100; ++i) agent.update(g, 0, 1, 1.0, 1, true);
  CHECK(agent.q(0, 1) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("agent follows a three-node line to the far reward") {
  // value iteration oracle on the abstract MDP: Q*(0,1)=gamma, Q*(1,2)=1
  AbstractGraph g(3);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  AbstractAgentConfig cfg;
  cfg.lr = 0.2;
  cfg.gamma = 0.9;
  AbstractAgent agent(3, cfg);
  Rng rng(17);
  for (int sweep = 0; sweep < 4000; ++sweep) {
    // segments: 0 -(goal 1)-> 1 no reward; 1 -(goal 2)-> 2 reward 1, done
    agent.update(g, 0, 1, 0.0, 1, false);
    agent.update(g, 1, 2, 1.0, 2, true);
    // background: staying put earns nothing
    agent.update(g, 0, 0, 0.0, 0, false);
    agent.update(g, 1, 1, 0.0, 1, false);
  }
  CHECK(agent.q(1, 2) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(agent.q(0, 1) == doctest::Approx(0.9).epsilon(1e-2));
  CHECK(agent.choose_goal(g, 0, 0.0, rng) == 1);
  CHECK(agent.choose_goal(g, 1, 0.0, rng) == 2);
}

TEST_CASE("epsilon anneals across phases down to the floor") {
  AbstractAgentConfig cfg;
  AbstractAgent agent(2, cfg);
  CHECK(agent.epsilon_for_phase(0) == doctest::Approx(1.0));
  CHECK(agent.epsilon_for_phase(19) == doctest::Approx(0.05));
  CHECK(agent.epsilon_for_phase(100) == doctest::Approx(0.05));
}

TEST_CASE("graph exports are deterministic and well formed") {
  AbstractGraph g(3);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  const std::string json = g.to_json();
  CHECK(json == "{\"n\":3,\"edges\":[[0,0,0],[0,1,1],[1,1,0],[1,2,1],[2,2,0]]}");
  const std::string dot = g.to_dot();
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("0 -> 1") != std::string::npos);
  CHECK(g.to_dot() == dot);
}
