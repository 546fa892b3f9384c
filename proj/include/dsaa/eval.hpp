// Verification oracles and figure metrics: exact tabular SR, occupancy and
// coverage statistics, abstraction quality scores, baselines, and the
// finite-difference gradient checker.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dsaa/abstraction.hpp"
#include "dsaa/driver.hpp"
#include "dsaa/grid_world.hpp"
#include "dsaa/noise_wrapper.hpp"
#include "dsaa/options.hpp"

namespace dsaa {

// ---------------------------------------------------------------------------
// Tabular successor representation

struct TabularMdp {
  int n = 0;
  Matrix p;  // n x n row-stochastic transition matrix under a fixed policy
  double gamma = 0.95;

  void validate() const;  // rows must sum to 1 within 1e-9
};

// Exact SR: the unique solution of Psi = I + gamma * P * Psi, i.e.
// (I - gamma * P)^-1. Direct dense solve.
Matrix oracle_sr(const TabularMdp& m);

// Solves a x = b (dense, partial pivoting); b holds multiple RHS columns.
Matrix solve_linear(Matrix a, Matrix b);

// Uniform-random-policy MDP over the open cells of a grid (blocked moves
// stay in place).
TabularMdp grid_uniform_mdp(const GridWorld& w, double gamma);

// || Psi[x] - Psi[ref] ||_2 per open cell.
Vec sr_distance_map(const TabularMdp& m, const Matrix& psi, int ref_state);

// ---------------------------------------------------------------------------
// Occupancy / coverage

struct OccupancyStats {
  std::vector<uint64_t> counts;
  double entropy = 0;           // of the normalized visit distribution
  long total = 0;
  long support = 0;             // states with nonzero count
  std::vector<CoverageEvent> coverage;
};

OccupancyStats occupancy_stats(const std::vector<int>& state_trajectory, int n_states);
double occupancy_entropy(const std::vector<uint64_t>& counts);

// ---------------------------------------------------------------------------
// Abstraction quality

// Room labels for a grid: connected components of the open cells once
// corridor cells (open cells walled on one opposite pair of sides) are
// removed. Doorways get label -1 and are excluded from purity.
struct RoomLabels {
  std::vector<int> label;  // per open-cell index; -1 = doorway
  int n_rooms = 0;
  int n_doorways = 0;
};
RoomLabels room_labels(const GridWorld& w);

struct PurityResult {
  double purity = 0;       // mean over nonempty abstract states of max room share
  int empty_preimages = 0; // abstract states with no assigned cell
};
// assignment[i] = abstract state of open cell i (doorway cells ignored).
PurityResult room_purity(const std::vector<int>& assignment, const RoomLabels& rooms,
                         int n_abstract);

// Mean (over probe cells) fraction of noise redraws that map to the cell's
// modal abstract state.
double noise_consistency(const Encoder& enc, const GridWorld& w, int noise_dims,
                         int k_draws, Rng& rng);

// ---------------------------------------------------------------------------
// Baselines

struct BaselineStats {
  RunStats stats;  // episodes / coverage / visit_counts / first success
  Vec final_q;     // flat soft-Q only: trained Q row at the start observation
};

// Uniform-random actions under the same episode manager as the driver.
// stop_at_unique_states > 0 ends the walk once coverage reaches it.
BaselineStats baseline_uniform_walk(Env& env, long steps, int episode_cap, uint64_t seed,
                                    const StepCallback& on_step = nullptr,
                                    long stop_at_unique_states = -1);

struct FlatSoftQConfig {
  OptionBankConfig bank;  // same machinery, single head
  int batch = 512;
  int update_every = 1;
  size_t replay_capacity = 100000;
  long max_steps = 3000000;
  int episode_cap = 5000;
  // first-success probe mode: when > 0, stop at the first success or once
  // this many steps pass without one (whichever comes first)
  long abort_if_no_success_by = 0;
};

// Single soft-Q policy on the raw environment reward.
BaselineStats baseline_flat_softq(Env& env, const FlatSoftQConfig& cfg, uint64_t seed,
                                  const StepCallback& on_step = nullptr);

// ---------------------------------------------------------------------------
// Oracle suites (used by tests and the oracle-check command)

// Central finite differences vs analytic gradient; returns the max relative
// error over every parameter of every net touched by loss().
double gradcheck_max_rel_err(std::vector<Mlp*> nets,
                             const std::function<double()>& loss,
                             const std::function<void(std::vector<MlpGrads>&)>& analytic,
                             double h = 1e-5);

// Deterministic finite MDP for the soft-Q fixed point oracle.
struct SmallMdp {
  int n_states = 0;
  int n_actions = 0;
  std::vector<int> next;      // [s * n_actions + a]
  std::vector<double> reward; // [s * n_actions + a]
};
// Q(s,a) = r + gamma * alpha * logsumexp(Q(s',.)/alpha) iterated to a fixed
// point.
Matrix soft_q_value_iteration(const SmallMdp& mdp, double gamma, double alpha,
                              int iters);

// Max relative FD error over random small nets composed with every loss
// head (KL-to-uniform, SR TD with stop-gradient, soft-Q TD).
double gradient_suite_max_rel_err(uint64_t seed, int n_nets);

// Tabular TD via sr_td_loss on trajectories from random row-stochastic
// MDPs, compared against (I - gamma P)^-1. Returns max L-inf over MDPs.
struct SrEquivalenceResult {
  double max_linf = 0;
  std::vector<double> per_mdp;
};
SrEquivalenceResult sr_td_vs_oracle(uint64_t seed, int n_mdps, int n_states,
                                    long max_updates, double gamma);

// Iterated OptionBank soft-Q updates on a 3-state deterministic MDP vs the
// logsumexp value-iteration fixed point; returns max |Q - Q*|.
double soft_q_fixed_point_residual(uint64_t seed);

struct OracleCheckResult {
  std::string name;
  bool pass = false;
  double residual = 0;
  std::string detail;
};
// Gradient suite, SR TD-vs-inverse equivalence, soft-Q fixed point.
std::vector<OracleCheckResult> run_oracle_checks(uint64_t seed);

}  // namespace dsaa
