#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <vector>

#include "uavmec/mlp.hpp"

namespace uavmec {

/// Joint observation, joint action, shared reward and next joint observation.
struct Transition {
  Vector observation;
  Vector action;
  double reward = 0.0;
  Vector next_observation;
};

/// Column-stacked sample of transitions.
struct Batch {
  Matrix observation;
  Matrix action;
  Vector reward;
  Matrix next_observation;
  std::vector<std::size_t> indices;

  Eigen::Index size() const { return reward.size(); }
};

/// Fixed-capacity ring buffer with uniform sampling.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(Transition t);

  /// nullopt until `min_fill` transitions are stored.
  std::optional<Batch> sample(std::size_t batch_size, std::size_t min_fill,
                              std::mt19937_64& rng) const;

  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  std::size_t cursor() const { return cursor_; }
  const Transition& at(std::size_t i) const { return items_.at(i); }

 private:
  std::size_t capacity_;
  std::size_t cursor_ = 0;  // next slot to overwrite once full
  std::vector<Transition> items_;
};

}  // namespace uavmec
