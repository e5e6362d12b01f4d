// Copyright 2026 The sls-rl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Value-based agents sharing one network and one replay buffer across all
// four seats. Action choice and bootstrap maxima are restricted to the
// phase group (rows or colors), not to the exact legal set, so agents can
// still pick illegal moves and learn from the penalty.

#ifndef SLS_AGENTS_HPP_
#define SLS_AGENTS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sls/env.hpp"
#include "sls/neural.hpp"
#include "sls/rng.hpp"

namespace sls {

enum class AgentVariant : std::uint8_t { kDqn, kDdqn, kDueling, kRandom };

constexpr std::string_view VariantName(AgentVariant v) {
  switch (v) {
    case AgentVariant::kDqn: return "dqn";
    case AgentVariant::kDdqn: return "ddqn";
    case AgentVariant::kDueling: return "dueling";
    case AgentVariant::kRandom: return "random";
  }
  return "unknown";
}

inline std::optional<AgentVariant> VariantFromName(std::string_view name) {
  for (auto v : {AgentVariant::kDqn, AgentVariant::kDdqn,
                 AgentVariant::kDueling, AgentVariant::kRandom}) {
    if (VariantName(v) == name) return v;
  }
  return std::nullopt;
}

constexpr Architecture ArchitectureFor(AgentVariant v) {
  return v == AgentVariant::kDueling ? Architecture::kDueling
                                     : Architecture::kStandard;
}

struct ExplorationSchedule {
  double epsilon = 1.0;
  double start = 1.0;
  double decay = 0.995;
  double minimum = 0.01;

  // Called once at the end of every episode.
  void Decay() { epsilon = std::max(minimum, epsilon * decay); }

  // Closed form for the value after `episodes` decays.
  double After(int episodes) const {
    return std::max(minimum, start * std::pow(decay, episodes));
  }
};

// Lowest-id argmax of q over the ids allowed by `mask`; nullopt if the mask
// is empty.
inline std::optional<ActionId> MaskedArgmax(std::span<const float> q,
                                            const ActionMask& mask) {
  std::optional<ActionId> best;
  for (int a = 0; a < kNumActions; ++a) {
    if (!mask[a]) continue;
    if (!best || q[a] > q[*best]) best = a;
  }
  return best;
}

inline ActionId UniformInGroup(ActionGroup group, SplitMix64& rng) {
  const int lo = GroupBegin(group);
  return lo + static_cast<int>(UniformIndex(rng, GroupEnd(group) - lo));
}

// Epsilon-greedy restricted to the phase group. The random variant ignores
// epsilon and the network. Greedy choices break ties toward the lowest id.
inline ActionId SelectAction(AgentVariant variant, const Network<float>* params,
                             std::span<const float> obs, ActionGroup group,
                             double epsilon, SplitMix64& rng) {
  if (variant == AgentVariant::kRandom) return UniformInGroup(group, rng);
  if (UniformUnit(rng) < epsilon) return UniformInGroup(group, rng);
  if (params == nullptr) throw std::invalid_argument("greedy action needs a network");
  const auto q = ForwardOne(*params, obs);
  return *MaskedArgmax(q, GroupMask(group));
}

// Greedy choice from precomputed Q-values; exposed for tests and the
// server.
inline ActionId GreedyInGroup(std::span<const float> q, ActionGroup group) {
  return *MaskedArgmax(q, GroupMask(group));
}

struct Transition {
  Observation obs;
  ActionId action = 0;
  double reward = 0.0;
  Observation next_obs;
  ActionMask next_phase_mask{};
  bool done = false;

  friend bool operator==(const Transition&, const Transition&) = default;
};

// Sparse lossless form of an observation: (index, value) pairs of the
// non-zero entries. Encoded observations are mostly zeros, so this keeps a
// full replay buffer small.
class PackedObservation {
 public:
  struct Entry {
    std::uint16_t index;
    float value;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  PackedObservation() = default;

  static PackedObservation Pack(std::span<const float> obs) {
    if (obs.size() > 0xFFFF) throw std::invalid_argument("observation too long to pack");
    PackedObservation p;
    p.size_ = static_cast<std::uint16_t>(obs.size());
    for (std::size_t i = 0; i < obs.size(); ++i) {
      const float v = obs[i];
      if (v == 0.0f) continue;
      p.entries_.push_back({static_cast<std::uint16_t>(i), v});
    }
    return p;
  }

  void UnpackInto(std::span<float> out) const {
    if (out.size() != size_) throw std::invalid_argument("unpack size mismatch");
    std::fill(out.begin(), out.end(), 0.0f);
    for (const auto& e : entries_) out[e.index] = e.value;
  }

  Observation Unpack() const {
    Observation o(size_);
    UnpackInto(o);
    return o;
  }

  std::size_t size() const { return size_; }
  const std::vector<Entry>& entries() const { return entries_; }
  static PackedObservation FromEntries(std::uint16_t size,
                                       std::vector<Entry> entries) {
    PackedObservation p;
    p.size_ = size;
    p.entries_ = std::move(entries);
    return p;
  }

  friend bool operator==(const PackedObservation&,
                         const PackedObservation&) = default;

 private:
  std::uint16_t size_ = 0;
  std::vector<Entry> entries_;
};

struct StoredTransition {
  PackedObservation obs;
  ActionId action = 0;
  double reward = 0.0;
  PackedObservation next_obs;
  ActionMask next_phase_mask{};
  bool done = false;

  friend bool operator==(const StoredTransition&,
                         const StoredTransition&) = default;
};

// Fixed-capacity FIFO ring with uniform sampling (with replacement).
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity = 50000, std::uint64_t seed = 0)
      : capacity_(capacity), rng_(seed) {
    if (capacity == 0) throw std::invalid_argument("buffer capacity must be > 0");
    items_.reserve(std::min<std::size_t>(capacity, 4096));
  }

  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  SplitMix64& rng() { return rng_; }
  const SplitMix64& rng() const { return rng_; }

  void Push(const Transition& t) {
    Push(StoredTransition{PackedObservation::Pack(t.obs), t.action, t.reward,
                          PackedObservation::Pack(t.next_obs),
                          t.next_phase_mask, t.done});
  }

  void Push(StoredTransition t) {
    if (items_.size() < capacity_) {
      items_.push_back(std::move(t));
    } else {
      items_[head_] = std::move(t);
      head_ = (head_ + 1) % capacity_;
    }
  }

  // Oldest-first view position i (0 = oldest still stored).
  const StoredTransition& at(std::size_t i) const {
    return items_[(head_ + i) % items_.size()];
  }

  std::vector<std::size_t> SampleIndices(std::size_t batch_size) {
    if (batch_size == 0 || items_.size() < batch_size) {
      throw std::logic_error("replay buffer holds " +
                             std::to_string(items_.size()) +
                             " transitions, cannot sample " +
                             std::to_string(batch_size));
    }
    std::vector<std::size_t> idx(batch_size);
    for (auto& i : idx) i = UniformIndex(rng_, items_.size());
    return idx;
  }

  std::vector<Transition> Sample(std::size_t batch_size) {
    std::vector<Transition> out;
    out.reserve(batch_size);
    for (std::size_t i : SampleIndices(batch_size)) {
      const auto& s = at(i);
      out.push_back(Transition{s.obs.Unpack(), s.action, s.reward,
                               s.next_obs.Unpack(), s.next_phase_mask, s.done});
    }
    return out;
  }

  // Raw ring access for persistence.
  const std::vector<StoredTransition>& raw_items() const { return items_; }
  std::size_t raw_head() const { return head_; }
  void Restore(std::vector<StoredTransition> items, std::size_t head,
               SplitMix64 rng) {
    if (items.size() > capacity_ || (head != 0 && head >= items.size())) {
      throw std::invalid_argument("inconsistent replay buffer snapshot");
    }
    items_ = std::move(items);
    head_ = head;
    rng_ = rng;
  }

 private:
  std::size_t capacity_;
  std::vector<StoredTransition> items_;
  std::size_t head_ = 0;  // next slot to overwrite once full
  SplitMix64 rng_;
};

// Bootstrapped regression targets.
//   DQN / Dueling: y = r + gamma (1 - done) max_{a' in mask} Q_target(s', a')
//   DDQN:          a* = argmax_{a' in mask} Q_online(s', a')
//                  y = r + gamma (1 - done) Q_target(s', a*)
inline std::vector<float> ComputeTargets(AgentVariant variant,
                                         const Network<float>& online,
                                         const Network<float>& target,
                                         std::span<const Transition> batch,
                                         double gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("gamma must lie in [0, 1)");
  }
  if (variant == AgentVariant::kRandom) {
    throw std::invalid_argument("the random agent has no targets");
  }
  const int n = static_cast<int>(batch.size());
  std::vector<float> y(n);
  if (n == 0) return y;
  const int width = target.input_size;
  Matrix<float> next(n, width);
  for (int i = 0; i < n; ++i) {
    const auto& t = batch[i];
    if (static_cast<int>(t.next_obs.size()) != width) {
      throw std::invalid_argument("next observation width mismatch");
    }
    if (!t.done && std::none_of(t.next_phase_mask.begin(),
                                t.next_phase_mask.end(),
                                [](bool b) { return b; })) {
      throw std::invalid_argument("empty next-state mask on a non-terminal transition");
    }
    std::copy(t.next_obs.begin(), t.next_obs.end(), next.row(i).begin());
  }
  const auto q_target = Forward(target, next);
  Matrix<float> q_online;
  if (variant == AgentVariant::kDdqn) q_online = Forward(online, next);

  for (int i = 0; i < n; ++i) {
    const auto& t = batch[i];
    double bootstrap = 0.0;
    if (!t.done) {
      if (variant == AgentVariant::kDdqn) {
        const ActionId a = *MaskedArgmax(q_online.row(i), t.next_phase_mask);
        bootstrap = q_target(i, a);
      } else {
        const ActionId a = *MaskedArgmax(q_target.row(i), t.next_phase_mask);
        bootstrap = q_target(i, a);
      }
    }
    y[i] = static_cast<float>(t.reward + gamma * bootstrap);
  }
  return y;
}

}  // namespace sls

#endif  // SLS_AGENTS_HPP_
