// Bounded FIFO transition buffer with uniform-with-replacement sampling.
// Shared by option training and abstraction updates.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dsaa/env.hpp"
#include "dsaa/rng.hpp"

namespace dsaa {

// A Transition plus the abstract-state annotations recorded when it was
// generated, which route option training to the right head.
struct StoredTransition {
  Transition t;
  int s = 0;           // abstract state at x
  int s_goal = 0;      // active option goal
  int s_next = 0;      // abstract state at x_next
  bool terminated = false;  // option ended: left s or episode ended
};

class ReplayBuffer {
 public:
  explicit ReplayBuffer(size_t capacity = 100000);

  void push(StoredTransition t);
  void clear();
  size_t size() const { return size_; }
  size_t capacity() const { return capacity_; }

  // batch_size independent uniform draws (with replacement).
  std::vector<const StoredTransition*> sample(size_t batch_size, Rng& rng) const;

  const StoredTransition& at(size_t logical_index) const;  // 0 = oldest

  // Binary dump: versioned header followed by fixed-width records.
  void dump(const std::string& path) const;
  static ReplayBuffer load(const std::string& path);

 private:
  size_t capacity_;
  size_t size_ = 0;
  size_t cursor_ = 0;  // next write slot
  std::vector<StoredTransition> store_;
};

}  // namespace dsaa
