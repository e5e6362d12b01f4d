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

// Reinforcement-learning wrapper around the rules engine.
//
// Observation layout (all entries stored as float):
//   [ board one-hot    n_rows * n_players * max_pile  (row, color, depth)
//   | holdings         n_players^2  raw counts, row-major (holder, color)
//   | eliminated       n_players    0/1
//   | current player   n_players    one-hot, all zero once the game is over
//   | phase            4            one-hot
//   | step count       1            raw integer ]
//
// Actions 0..5 pick a row, 6..9 pick a color/player. Only the group that
// matches the phase is ever unmasked; within that group illegal choices are
// still possible and cost -reward_cap.

#ifndef SLS_ENV_HPP_
#define SLS_ENV_HPP_

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sls/game.hpp"
#include "sls/game_json.hpp"

namespace sls {

inline constexpr int kNumActions = 10;
inline constexpr int kPileActions = 6;
inline constexpr int kPlayerActionBase = 6;

using ActionId = int;
using ActionMask = std::array<bool, kNumActions>;
using Observation = std::vector<float>;

enum class ActionGroup : std::uint8_t { kPile, kPlayer };

constexpr ActionGroup GroupOf(ActionId id) {
  return id < kPlayerActionBase ? ActionGroup::kPile : ActionGroup::kPlayer;
}

constexpr ActionGroup GroupForPhase(Phase p) {
  return p == Phase::kChoosePile ? ActionGroup::kPile : ActionGroup::kPlayer;
}

constexpr int GroupBegin(ActionGroup g) {
  return g == ActionGroup::kPile ? 0 : kPlayerActionBase;
}
constexpr int GroupEnd(ActionGroup g) {
  return g == ActionGroup::kPile ? kPileActions : kNumActions;
}

inline ActionMask GroupMask(ActionGroup g) {
  ActionMask m{};
  for (int a = GroupBegin(g); a < GroupEnd(g); ++a) m[a] = true;
  return m;
}

constexpr Move ActionToMove(ActionId id) {
  return id < kPlayerActionBase ? Move::Row(id)
                                : Move::Color(id - kPlayerActionBase);
}

constexpr ActionId MoveToAction(Move m) {
  return m.kind == Move::Kind::kSelectRow ? m.value
                                          : kPlayerActionBase + m.value;
}

struct EnvSpec {
  int n_rows = kDefaultRows;
  int n_chips = kDefaultChips;
  int payoff = 1;
  double reward_cap = 5.0;
  double alpha = 0.3;
  int max_steps = 500;

  int max_pile() const { return kNumPlayers * n_chips; }
  int board_size() const { return n_rows * kNumPlayers * max_pile(); }
  int obs_size() const {
    return board_size() + kNumPlayers * kNumPlayers + 2 * kNumPlayers +
           kNumPhases + 1;
  }
  static constexpr int action_count() { return kNumActions; }

  GameConfig game_config(std::uint64_t seed) const {
    GameConfig c;
    c.n_chips = n_chips;
    c.n_rows = n_rows;
    c.payoff = payoff;
    c.seed = seed;
    return c;
  }

  void Validate() const {
    game_config(0).Validate();
    if (n_rows != kPileActions) {
      throw std::invalid_argument("the 10-action space requires n_rows == 6");
    }
    if (!(reward_cap > 0)) throw std::invalid_argument("reward_cap must be > 0");
    if (!(alpha > 0 && alpha <= 1)) {
      throw std::invalid_argument("alpha must lie in (0, 1]");
    }
    if (max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
  }

  friend bool operator==(const EnvSpec&, const EnvSpec&) = default;
};

// Offsets of each block inside an observation.
struct ObsLayout {
  int board = 0;
  int holdings = 0;
  int eliminated = 0;
  int current = 0;
  int phase = 0;
  int step = 0;
  int size = 0;

  explicit ObsLayout(const EnvSpec& spec) {
    holdings = spec.board_size();
    eliminated = holdings + kNumPlayers * kNumPlayers;
    current = eliminated + kNumPlayers;
    phase = current + kNumPlayers;
    step = phase + kNumPhases;
    size = step + 1;
  }

  // Index of the board cell for (row, color, depth).
  static int BoardIndex(const EnvSpec& spec, int row, Color color, int depth) {
    return (row * kNumPlayers + color) * spec.max_pile() + depth;
  }
};

inline void EncodeInto(const EnvSpec& spec, const GameState& s,
                       std::span<float> out) {
  const ObsLayout layout(spec);
  if (static_cast<int>(out.size()) != layout.size) {
    throw std::invalid_argument("observation buffer has wrong size");
  }
  std::fill(out.begin(), out.end(), 0.0f);
  for (int r = 0; r < static_cast<int>(s.rows.size()); ++r) {
    const Pile& pile = s.rows[r];
    for (int d = 0; d < static_cast<int>(pile.size()); ++d) {
      out[ObsLayout::BoardIndex(spec, r, pile[d], d)] = 1.0f;
    }
  }
  for (int i = 0; i < kNumPlayers; ++i) {
    for (int j = 0; j < kNumPlayers; ++j) {
      out[layout.holdings + i * kNumPlayers + j] =
          static_cast<float>(s.holdings[i][j]);
    }
    out[layout.eliminated + i] = s.eliminated[i] ? 1.0f : 0.0f;
  }
  if (!s.terminal()) out[layout.current + s.current_player] = 1.0f;
  out[layout.phase + static_cast<int>(s.phase)] = 1.0f;
  out[layout.step] = static_cast<float>(s.step_count);
}

inline Observation Encode(const EnvSpec& spec, const GameState& s) {
  Observation obs(spec.obs_size());
  EncodeInto(spec, s, obs);
  return obs;
}

// Exact legality mask over all ten actions. Ids outside the phase group are
// always false; a terminal state is all false.
inline ActionMask LegalActionMask(const GameState& s) {
  ActionMask m{};
  for (Move mv : LegalMoves(s)) m[MoveToAction(mv)] = true;
  return m;
}

// Phase-group mask: what an agent is allowed to choose from (legal or not).
inline ActionMask PhaseMask(const GameState& s) {
  if (s.terminal()) return ActionMask{};
  return GroupMask(GroupForPhase(s.phase));
}

struct RewardParams {
  double reward_cap = 5.0;
  double alpha = 0.3;
  int n_chips = kDefaultChips;

  static RewardParams From(const EnvSpec& spec) {
    return {spec.reward_cap, spec.alpha, spec.n_chips};
  }
};

// min(cap, cap / ((alpha / n_chips) * t)) for a legal move at step t >= 1,
// -cap for an illegal one.
inline double ShapedReward(int t, bool legal, const RewardParams& p) {
  if (!legal) return -p.reward_cap;
  if (t < 1) throw std::logic_error("shaped reward needs step index >= 1");
  const double decayed = p.reward_cap / ((p.alpha / p.n_chips) * t);
  return std::min(p.reward_cap, decayed);
}

struct StepInfo {
  bool legal = false;
  std::optional<IllegalReason> reason;
  std::vector<GameEvent> events;
  Player acting_player = 0;
  Phase acting_phase = Phase::kChoosePile;
  ActionMask phase_mask{};  // for the resulting state
};

struct StepResult {
  Observation observation;
  double reward = 0.0;
  bool done = false;
  StepInfo info;
};

struct ResetResult {
  Observation observation;
  Player acting_player = 0;
  ActionMask mask{};
};

// One line of an episode trace file.
struct TraceRecord {
  int t = 0;
  Player player = 0;
  Phase phase = Phase::kChoosePile;
  ActionId action = 0;
  bool legal = false;
  double reward = 0.0;
  bool done = false;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

inline Json ToJson(const TraceRecord& r) {
  return Json{{"t", r.t},           {"player", r.player},
              {"phase", PhaseName(r.phase)}, {"action", r.action},
              {"legal", r.legal},   {"reward", r.reward},
              {"done", r.done}};
}

inline TraceRecord TraceRecordFromJson(const Json& j) {
  TraceRecord r;
  r.t = j.at("t").get<int>();
  r.player = j.at("player").get<int>();
  auto phase = PhaseFromName(j.at("phase").get<std::string>());
  if (!phase) throw std::invalid_argument("unknown phase in trace record");
  r.phase = *phase;
  r.action = j.at("action").get<int>();
  r.legal = j.at("legal").get<bool>();
  r.reward = j.at("reward").get<double>();
  r.done = j.at("done").get<bool>();
  return r;
}

inline Json ToJson(const EnvSpec& s) {
  return Json{{"n_rows", s.n_rows},         {"n_chips", s.n_chips},
              {"payoff", s.payoff},         {"reward_cap", s.reward_cap},
              {"alpha", s.alpha},           {"max_steps", s.max_steps}};
}

inline EnvSpec EnvSpecFromJson(const Json& j) {
  EnvSpec s;
  s.n_rows = j.at("n_rows").get<int>();
  s.n_chips = j.at("n_chips").get<int>();
  s.payoff = j.at("payoff").get<int>();
  s.reward_cap = j.at("reward_cap").get<double>();
  s.alpha = j.at("alpha").get<double>();
  s.max_steps = j.at("max_steps").get<int>();
  return s;
}

class Env {
 public:
  explicit Env(EnvSpec spec = {}) : spec_(spec) { spec_.Validate(); }

  const EnvSpec& spec() const { return spec_; }
  const GameState& state() const { return state_; }
  bool done() const { return done_; }
  bool active() const { return active_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<TraceRecord>& trace() const { return trace_; }

  ResetResult Reset(std::uint64_t seed) {
    seed_ = seed;
    state_ = NewGame(spec_.game_config(seed));
    done_ = false;
    active_ = true;
    trace_.clear();
    return {Encode(spec_, state_), state_.current_player, PhaseMask(state_)};
  }

  // Writes the observation of the current state into `out` (length
  // obs_size) without allocating.
  void ObserveInto(std::span<float> out) const {
    EncodeInto(spec_, state_, out);
  }

  StepResult Step(ActionId action) {
    StepResult res;
    StepCore(action, res);
    res.observation = Encode(spec_, state_);
    return res;
  }

  // Same as Step but leaves `res.observation` empty; callers that encode
  // into their own storage use this.
  void StepNoObservation(ActionId action, StepResult& res) {
    StepCore(action, res);
  }

 private:
  void StepCore(ActionId action, StepResult& res) {
    if (!active_ || done_) {
      throw std::logic_error("step called on a finished or unstarted episode");
    }
    if (action < 0 || action >= kNumActions) {
      throw std::out_of_range("action id out of range");
    }
    res.info = StepInfo{};
    res.info.acting_player = state_.current_player;
    res.info.acting_phase = state_.phase;
    auto why = ApplyInPlace(state_, ActionToMove(action), res.info.events);
    if (why) {
      // Rejected: the game is untouched except for the shared step counter.
      ++state_.step_count;
      res.info.legal = false;
      res.info.reason = why;
    } else {
      res.info.legal = true;
    }
    res.reward = ShapedReward(state_.step_count, res.info.legal,
                              RewardParams::From(spec_));
    done_ = state_.terminal() || state_.step_count >= spec_.max_steps;
    res.done = done_;
    res.info.phase_mask = PhaseMask(state_);
    trace_.push_back(TraceRecord{state_.step_count, res.info.acting_player,
                                 res.info.acting_phase, action,
                                 res.info.legal, res.reward, res.done});
  }

  EnvSpec spec_;
  GameState state_;
  std::uint64_t seed_ = 0;
  bool done_ = false;
  bool active_ = false;
  std::vector<TraceRecord> trace_;
};

}  // namespace sls

#endif  // SLS_ENV_HPP_
