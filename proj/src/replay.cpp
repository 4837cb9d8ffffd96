#include "uavmec/replay.hpp"

#include "uavmec/error.hpp"

namespace uavmec {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw Error(ErrorCode::kConfig, "replay buffer capacity must be > 0");
}

void ReplayBuffer::push(Transition t) {
  if (items_.size() < capacity_) {
    items_.push_back(std::move(t));
    cursor_ = items_.size() % capacity_;
    return;
  }
  items_[cursor_] = std::move(t);
  cursor_ = (cursor_ + 1) % capacity_;
}

std::optional<Batch> ReplayBuffer::sample(std::size_t batch_size, std::size_t min_fill,
                                          std::mt19937_64& rng) const {
  if (items_.empty() || items_.size() < min_fill || batch_size == 0) return std::nullopt;
  const Transition& first = items_.front();
  const auto b = static_cast<Eigen::Index>(batch_size);
  Batch batch;
  batch.observation.resize(first.observation.size(), b);
  batch.action.resize(first.action.size(), b);
  batch.next_observation.resize(first.next_observation.size(), b);
  batch.reward.resize(b);
  batch.indices.resize(batch_size);
  std::uniform_int_distribution<std::size_t> pick(0, items_.size() - 1);
  for (Eigen::Index j = 0; j < b; ++j) {
    const std::size_t i = pick(rng);
    const Transition& t = items_[i];
    batch.indices[j] = i;
    batch.observation.col(j) = t.observation;
    batch.action.col(j) = t.action;
    batch.next_observation.col(j) = t.next_observation;
    batch.reward(j) = t.reward;
  }
  return batch;
}

}  // namespace uavmec
