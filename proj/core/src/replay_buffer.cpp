#include "lerl/replay_buffer.hpp"

#include "lerl/errors.hpp"

namespace lerl {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw UsageError("replay buffer capacity must be positive");
}

void ReplayBuffer::push(Transition transition) {
  if (storage_.size() < capacity_) {
    storage_.push_back(std::move(transition));
    return;
  }
  storage_[next_] = std::move(transition);
  next_ = (next_ + 1) % capacity_;
}

std::vector<const Transition*> ReplayBuffer::sample(std::size_t count, std::mt19937_64& rng) const {
  if (storage_.empty()) throw UsageError("cannot sample from an empty replay buffer");
  std::uniform_int_distribution<std::size_t> pick(0, storage_.size() - 1);
  std::vector<const Transition*> batch;
  batch.reserve(count);
  for (std::size_t i = 0; i < count; ++i) batch.push_back(&storage_[pick(rng)]);
  return batch;
}

const Transition& ReplayBuffer::at(std::size_t i) const {
  if (i >= storage_.size()) throw UsageError("replay buffer index out of range");
  return storage_[(next_ + i) % storage_.size()];
}

void ReplayBuffer::clear() noexcept {
  storage_.clear();
  next_ = 0;
}

}  // namespace lerl
