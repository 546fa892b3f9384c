// Environment interface shared by the grid worlds and the arm.
#pragma once

#include <memory>
#include <string>

#include "dsaa/numeric.hpp"

namespace dsaa {

// One environment step as stored in the replay buffer.
struct Transition {
  Vec x;
  int a = 0;
  Vec x_next;
  double r = 0;
  bool done = false;
};

struct StepResult {
  Vec obs;
  double reward = 0;
  bool done = false;  // environment-terminal; episode caps live in the driver
};

class Env {
 public:
  virtual ~Env() = default;
  virtual Vec reset() = 0;
  virtual StepResult step(int action) = 0;
  virtual int obs_dim() const = 0;
  virtual int n_actions() const = 0;
  // Discrete identity of the current state when the space is enumerable,
  // otherwise -1. Used for occupancy/coverage metrics.
  virtual int state_id() const { return -1; }
  virtual int n_state_ids() const { return -1; }
  virtual std::unique_ptr<Env> clone() const = 0;
  virtual std::string name() const = 0;
};

}  // namespace dsaa
