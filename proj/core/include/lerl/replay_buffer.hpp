#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "lerl/env.hpp"

namespace lerl {

struct Transition {
  Observation state;
  std::size_t action = 0;
  double reward = 0.0;
  Observation next_state;
  bool done = false;
};

/// Fixed-capacity ring of transitions; inserting into a full buffer evicts the oldest.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(Transition transition);
  /// Uniform sample with replacement. Throws UsageError when empty.
  std::vector<const Transition*> sample(std::size_t count, std::mt19937_64& rng) const;

  std::size_t size() const noexcept { return storage_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }
  bool empty() const noexcept { return storage_.empty(); }
  /// i-th transition in insertion order, 0 = oldest retained.
  const Transition& at(std::size_t i) const;
  void clear() noexcept;

 private:
  std::size_t capacity_;
  std::vector<Transition> storage_;
  std::size_t next_ = 0;  // slot the next push overwrites once full
};

}  // namespace lerl
