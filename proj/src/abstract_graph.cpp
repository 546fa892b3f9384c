#include "dsaa/abstract_graph.hpp"

#include <sstream>
#include <stdexcept>

namespace dsaa {

AbstractGraph::AbstractGraph(int n) : n_(n) {
  if (n <= 0) throw std::invalid_argument("AbstractGraph: n must be positive");
  adj_.assign(static_cast<size_t>(n) * n, 0);
  visits_.assign(static_cast<size_t>(n) * n, 0);
  for (int s = 0; s < n; ++s) adj_[idx(s, s)] = 1;
}

size_t AbstractGraph::idx(int s, int s2) const {
  if (s < 0 || s >= n_ || s2 < 0 || s2 >= n_)
    throw std::invalid_argument("AbstractGraph: state out of range");
  return static_cast<size_t>(s) * n_ + s2;
}

bool AbstractGraph::add_edge(int s, int s2) {
  const size_t i = idx(s, s2);
  ++visits_[i];
  if (adj_[i]) return false;
  adj_[i] = 1;
  return true;
}

std::vector<int> AbstractGraph::neighbors(int s) const {
  std::vector<int> out;
  for (int s2 = 0; s2 < n_; ++s2)
    if (adj_[idx(s, s2)]) out.push_back(s2);
  return out;
}

int AbstractGraph::edge_count() const {
  int count = 0;
  for (uint8_t e : adj_) count += e;
  return count;
}

void AbstractGraph::reset() {
  std::fill(adj_.begin(), adj_.end(), 0);
  std::fill(visits_.begin(), visits_.end(), 0);
  for (int s = 0; s < n_; ++s) adj_[idx(s, s)] = 1;
}

std::string AbstractGraph::to_json() const {
  std::ostringstream out;
  out << "{\"n\":" << n_ << ",\"edges\":[";
  bool first = true;
  for (int s = 0; s < n_; ++s)
    for (int s2 = 0; s2 < n_; ++s2)
      if (adj_[idx(s, s2)]) {
        if (!first) out << ",";
        first = false;
        out << "[" << s << "," << s2 << "," << visits_[idx(s, s2)] << "]";
      }
  out << "]}";
  return out.str();
}

std::string AbstractGraph::to_dot() const {
  std::ostringstream out;
  out << "digraph abstract {\n";
  for (int s = 0; s < n_; ++s) out << "  " << s << ";\n";
  for (int s = 0; s < n_; ++s)
    for (int s2 = 0; s2 < n_; ++s2)
      if (adj_[idx(s, s2)])
        out << "  " << s << " -> " << s2 << " [label=\"" << visits_[idx(s, s2)]
            << "\"];\n";
  out << "}\n";
  return out.str();
}

int choose_goal_walk(const AbstractGraph& g, int s, Rng& rng) {
  const std::vector<int> nbrs = g.neighbors(s);
  return nbrs[static_cast<size_t>(rng.uniform_int(static_cast<int>(nbrs.size())))];
}

AbstractAgent::AbstractAgent(int n, AbstractAgentConfig cfg)
    : cfg_(cfg), q_(n, n) {}

int AbstractAgent::choose_goal(const AbstractGraph& g, int s, double eps,
                               Rng& rng) const {
  const std::vector<int> nbrs = g.neighbors(s);
  if (rng.uniform() < eps)
    return nbrs[static_cast<size_t>(rng.uniform_int(static_cast<int>(nbrs.size())))];
  int best = nbrs[0];
  for (int u : nbrs)
    if (q_.at(s, u) > q_.at(s, best)) best = u;
  return best;
}

void AbstractAgent::update(const AbstractGraph& g, int s, int goal,
                           double segment_reward, int s_terminal, bool done) {
  double best_next = 0;
  if (!done) {
    const std::vector<int> nbrs = g.neighbors(s_terminal);
    best_next = q_.at(s_terminal, nbrs[0]);
    for (int u : nbrs) best_next = std::max(best_next, q_.at(s_terminal, u));
  }
  double& q = q_.at(s, goal);
  q += cfg_.lr * (segment_reward + cfg_.gamma * best_next - q);
}

double AbstractAgent::epsilon_for_phase(int phase) const {
  if (cfg_.eps_anneal_phases <= 1) return cfg_.eps_end;
  const double frac =
      static_cast<double>(phase) / static_cast<double>(cfg_.eps_anneal_phases - 1);
  const double f = frac > 1.0 ? 1.0 : frac;
  return cfg_.eps_start + (cfg_.eps_end - cfg_.eps_start) * f;
}

}  // namespace dsaa
