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

// Rules engine for the zero-sum generalized Hofstra variant of So Long
// Sucker. Four players, each owning one chip color (color id == player id),
// play chips onto a fixed set of rows. Two equal colors on top of a pile
// capture it; players without chips at the start of their turn are
// eliminated; the last survivor wins the whole payoff.
//
// A turn is split into decisions (phases):
//   ChoosePile       -> pick a row (empty rows start a new pile)
//   ChooseChip       -> pick a color from the hand to place on that row
//   ChooseNextPlayer -> pick a player whose color is absent from the pile
//   EliminateChip    -> capturer picks a color to kill from the captured pile
//
// Every function here is a pure transition over GameState values.

#ifndef SLS_GAME_HPP_
#define SLS_GAME_HPP_

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "sls/rng.hpp"

namespace sls {

inline constexpr int kNumPlayers = 4;
inline constexpr int kDefaultChips = 5;
inline constexpr int kDefaultRows = 6;

using Player = int;
using Color = int;

struct GameConfig {
  int n_players = kNumPlayers;
  int n_chips = kDefaultChips;
  int n_rows = kDefaultRows;
  int payoff = 1;
  std::uint64_t seed = 0;

  int max_pile() const { return n_players * n_chips; }

  // Throws std::invalid_argument describing the first violated constraint.
  void Validate() const {
    if (n_players != kNumPlayers) {
      throw std::invalid_argument("n_players must be 4, got " +
                                  std::to_string(n_players));
    }
    if (n_chips < 1) throw std::invalid_argument("n_chips must be >= 1");
    if (n_rows < 1) throw std::invalid_argument("n_rows must be >= 1");
    if (payoff < 1) throw std::invalid_argument("payoff must be >= 1");
  }

  friend bool operator==(const GameConfig&, const GameConfig&) = default;
};

enum class Phase : std::uint8_t {
  kChoosePile = 0,
  kChooseChip = 1,
  kChooseNextPlayer = 2,
  kEliminateChip = 3,
};
inline constexpr int kNumPhases = 4;

constexpr std::string_view PhaseName(Phase p) {
  switch (p) {
    case Phase::kChoosePile: return "choose_pile";
    case Phase::kChooseChip: return "choose_chip";
    case Phase::kChooseNextPlayer: return "choose_next_player";
    case Phase::kEliminateChip: return "eliminate_chip";
  }
  return "unknown";
}

inline std::optional<Phase> PhaseFromName(std::string_view name) {
  for (int i = 0; i < kNumPhases; ++i) {
    auto p = static_cast<Phase>(i);
    if (PhaseName(p) == name) return p;
  }
  return std::nullopt;
}

// Chips bottom-first: index 0 is the deepest (earliest placed) chip.
using Pile = std::vector<Color>;
using Holdings = std::array<std::array<int, kNumPlayers>, kNumPlayers>;

struct GameState {
  GameConfig config;
  std::vector<Pile> rows;  // config.n_rows slots, empty vector == empty slot
  Holdings holdings{};     // holdings[holder][color]
  std::array<int, kNumPlayers> dead{};
  std::array<bool, kNumPlayers> eliminated{};
  Player current_player = 0;
  Phase phase = Phase::kChoosePile;
  std::optional<int> selected_row;     // iff phase == ChooseChip
  std::optional<int> next_player_row;  // iff phase == ChooseNextPlayer
  std::optional<int> capture_row;      // iff phase == EliminateChip
  std::vector<Player> pass_history;
  int step_count = 0;
  SplitMix64 rng;
  std::optional<Player> winner;

  bool terminal() const { return winner.has_value(); }

  int HandTotal(Player p) const {
    const auto& h = holdings[p];
    return std::accumulate(h.begin(), h.end(), 0);
  }
  int AliveCount() const {
    return static_cast<int>(
        std::count(eliminated.begin(), eliminated.end(), false));
  }
  int NonEmptyRows() const {
    return static_cast<int>(std::count_if(
        rows.begin(), rows.end(), [](const Pile& p) { return !p.empty(); }));
  }
  int OnBoard(Color c) const {
    int n = 0;
    for (const auto& pile : rows) {
      n += static_cast<int>(std::count(pile.begin(), pile.end(), c));
    }
    return n;
  }

  friend bool operator==(const GameState&, const GameState&) = default;
};

struct Move {
  enum class Kind : std::uint8_t { kSelectRow, kSelectColor };
  Kind kind = Kind::kSelectRow;
  int value = 0;

  static constexpr Move Row(int r) { return {Kind::kSelectRow, r}; }
  static constexpr Move Color(int c) { return {Kind::kSelectColor, c}; }

  friend constexpr bool operator==(const Move&, const Move&) = default;
};

// Why a move was rejected. The state is never modified on rejection.
enum class IllegalReason : std::uint8_t {
  kGameOver,
  kWrongPhase,
  kRowOutOfRange,
  kColorOutOfRange,
  kEmptyHand,
  kColorAbsent,
  kIneligiblePlayer,
};

constexpr std::string_view IllegalReasonName(IllegalReason r) {
  switch (r) {
    case IllegalReason::kGameOver: return "game_over";
    case IllegalReason::kWrongPhase: return "wrong_phase";
    case IllegalReason::kRowOutOfRange: return "row_out_of_range";
    case IllegalReason::kColorOutOfRange: return "color_out_of_range";
    case IllegalReason::kEmptyHand: return "empty_hand";
    case IllegalReason::kColorAbsent: return "color_absent";
    case IllegalReason::kIneligiblePlayer: return "ineligible_player";
  }
  return "unknown";
}

class IllegalMoveError : public std::runtime_error {
 public:
  explicit IllegalMoveError(IllegalReason reason)
      : std::runtime_error("illegal move: " +
                           std::string(IllegalReasonName(reason))),
        reason_(reason) {}
  IllegalReason reason() const { return reason_; }

 private:
  IllegalReason reason_;
};

enum class TurnReason : std::uint8_t {
  kChosen,     // explicit ChooseNextPlayer decision
  kDeepest,    // all colors in the pile: owner of the bottom chip
  kCapture,    // the captured color's player resolves the capture
  kBacktrack,  // popped from the pass history after an elimination
  kRandom,     // pass history exhausted
};

constexpr std::string_view TurnReasonName(TurnReason r) {
  switch (r) {
    case TurnReason::kChosen: return "chosen";
    case TurnReason::kDeepest: return "deepest";
    case TurnReason::kCapture: return "capture";
    case TurnReason::kBacktrack: return "backtrack";
    case TurnReason::kRandom: return "random";
  }
  return "unknown";
}

namespace event {
struct ChipPlaced {
  Player player;
  Color color;
  int row;
  friend bool operator==(const ChipPlaced&, const ChipPlaced&) = default;
};
struct PileCaptured {
  Player capturer;
  int row;
  friend bool operator==(const PileCaptured&, const PileCaptured&) = default;
};
struct ChipKilled {
  Color color;
  int row;
  friend bool operator==(const ChipKilled&, const ChipKilled&) = default;
};
struct PileDestroyed {
  int row;
  Pile chips;
  friend bool operator==(const PileDestroyed&, const PileDestroyed&) = default;
};
struct PlayerEliminated {
  Player player;
  friend bool operator==(const PlayerEliminated&,
                         const PlayerEliminated&) = default;
};
struct TurnAssigned {
  Player player;
  TurnReason reason;
  friend bool operator==(const TurnAssigned&, const TurnAssigned&) = default;
};
struct GameOver {
  Player winner;
  std::array<int, kNumPlayers> payoff;
  friend bool operator==(const GameOver&, const GameOver&) = default;
};
}  // namespace event

using GameEvent =
    std::variant<event::ChipPlaced, event::PileCaptured, event::ChipKilled,
                 event::PileDestroyed, event::PlayerEliminated,
                 event::TurnAssigned, event::GameOver>;

// Result of resolving who moves after a non-capturing placement.
struct ChoiceSet {
  std::vector<Player> players;
  friend bool operator==(const ChoiceSet&, const ChoiceSet&) = default;
};
struct Forced {
  Player player;
  friend bool operator==(const Forced&, const Forced&) = default;
};
using NextPlayerOptions = std::variant<ChoiceSet, Forced>;

namespace internal {

inline void CheckRow(const GameState& s, int row) {
  if (row < 0 || row >= static_cast<int>(s.rows.size())) {
    throw std::out_of_range("row index out of range");
  }
}

// Pops the pass history until an alive player is found; falls back to a
// uniform draw among alive players.
inline void Backtrack(GameState& s, std::vector<GameEvent>& events) {
  while (!s.pass_history.empty()) {
    Player p = s.pass_history.back();
    s.pass_history.pop_back();
    if (!s.eliminated[p]) {
      s.current_player = p;
      events.emplace_back(event::TurnAssigned{p, TurnReason::kBacktrack});
      return;
    }
  }
  std::vector<Player> alive;
  for (Player p = 0; p < kNumPlayers; ++p) {
    if (!s.eliminated[p]) alive.push_back(p);
  }
  Player p = alive[UniformIndex(s.rng, alive.size())];
  s.current_player = p;
  events.emplace_back(event::TurnAssigned{p, TurnReason::kRandom});
}

inline void FinishIfDecided(GameState& s, std::vector<GameEvent>& events) {
  if (s.winner || s.AliveCount() != 1) return;
  Player w = static_cast<Player>(
      std::find(s.eliminated.begin(), s.eliminated.end(), false) -
      s.eliminated.begin());
  s.winner = w;
  std::array<int, kNumPlayers> payoff{};
  payoff[w] = s.config.payoff;
  events.emplace_back(event::GameOver{w, payoff});
}

// Every entry into ChoosePile goes through here: players whose hand is
// empty are eliminated and the turn is reassigned until somebody able to
// move holds it, or the game is over.
inline void EnterChoosePile(GameState& s, std::vector<GameEvent>& events) {
  s.phase = Phase::kChoosePile;
  s.selected_row.reset();
  s.next_player_row.reset();
  s.capture_row.reset();
  for (;;) {
    FinishIfDecided(s, events);
    if (s.winner) return;
    if (s.eliminated[s.current_player]) {
      Backtrack(s, events);
      continue;
    }
    if (s.HandTotal(s.current_player) == 0) {
      s.eliminated[s.current_player] = true;
      events.emplace_back(event::PlayerEliminated{s.current_player});
      continue;
    }
    return;
  }
}

inline void ClearRow(GameState& s, int row) { s.rows[row].clear(); }

}  // namespace internal

inline GameState NewGame(const GameConfig& config) {
  config.Validate();
  GameState s;
  s.config = config;
  s.rows.assign(config.n_rows, Pile{});
  for (Player p = 0; p < kNumPlayers; ++p) s.holdings[p][p] = config.n_chips;
  s.rng = SplitMix64(config.seed);
  s.current_player = static_cast<Player>(UniformIndex(s.rng, kNumPlayers));
  s.phase = Phase::kChoosePile;
  return s;
}

// Who may (or must) move next after a non-capturing placement on `row`.
inline NextPlayerOptions NextPlayerOptionsFor(const GameState& s, int row) {
  internal::CheckRow(s, row);
  const Pile& pile = s.rows[row];
  if (pile.empty()) throw std::logic_error("next player options: empty row");
  std::array<bool, kNumPlayers> present{};
  for (Color c : pile) present[c] = true;
  if (std::all_of(present.begin(), present.end(), [](bool b) { return b; })) {
    return Forced{pile.front()};
  }
  ChoiceSet set;
  for (Player p = 0; p < kNumPlayers; ++p) {
    if (!present[p] && !s.eliminated[p]) set.players.push_back(p);
  }
  return set;
}

inline std::optional<IllegalReason> CheckMove(const GameState& s, Move m) {
  if (s.terminal()) return IllegalReason::kGameOver;
  const bool row_move = m.kind == Move::Kind::kSelectRow;
  if (row_move != (s.phase == Phase::kChoosePile)) {
    return IllegalReason::kWrongPhase;
  }
  if (row_move) {
    if (m.value < 0 || m.value >= static_cast<int>(s.rows.size())) {
      return IllegalReason::kRowOutOfRange;
    }
    return std::nullopt;
  }
  if (m.value < 0 || m.value >= kNumPlayers) {
    return IllegalReason::kColorOutOfRange;
  }
  switch (s.phase) {
    case Phase::kChooseChip:
      if (s.holdings[s.current_player][m.value] <= 0) {
        return IllegalReason::kEmptyHand;
      }
      return std::nullopt;
    case Phase::kChooseNextPlayer: {
      auto opts = NextPlayerOptionsFor(s, *s.next_player_row);
      const auto* set = std::get_if<ChoiceSet>(&opts);
      if (set == nullptr ||
          std::find(set->players.begin(), set->players.end(), m.value) ==
              set->players.end()) {
        return IllegalReason::kIneligiblePlayer;
      }
      return std::nullopt;
    }
    case Phase::kEliminateChip: {
      const Pile& pile = s.rows[*s.capture_row];
      if (std::find(pile.begin(), pile.end(), m.value) == pile.end()) {
        return IllegalReason::kColorAbsent;
      }
      return std::nullopt;
    }
    case Phase::kChoosePile:
      break;
  }
  return IllegalReason::kWrongPhase;
}

inline std::vector<Move> LegalMoves(const GameState& s) {
  std::vector<Move> moves;
  if (s.terminal()) return moves;
  if (s.phase == Phase::kChoosePile) {
    for (int r = 0; r < static_cast<int>(s.rows.size()); ++r) {
      moves.push_back(Move::Row(r));
    }
    return moves;
  }
  for (Color c = 0; c < kNumPlayers; ++c) {
    if (!CheckMove(s, Move::Color(c))) moves.push_back(Move::Color(c));
  }
  return moves;
}

// Applies `m` in place and appends the resulting events. On an illegal
// move the state is untouched and the reason is returned.
inline std::optional<IllegalReason> ApplyInPlace(
    GameState& s, Move m, std::vector<GameEvent>& events) {
  if (auto why = CheckMove(s, m)) return why;
  ++s.step_count;
  const Player mover = s.current_player;
  switch (s.phase) {
    case Phase::kChoosePile:
      s.selected_row = m.value;
      s.phase = Phase::kChooseChip;
      break;

    case Phase::kChooseChip: {
      const int row = *s.selected_row;
      const Color c = m.value;
      s.selected_row.reset();
      Pile& pile = s.rows[row];
      --s.holdings[mover][c];
      pile.push_back(c);
      events.emplace_back(event::ChipPlaced{mover, c, row});

      const auto n = pile.size();
      if (n >= 2 && pile[n - 2] == c) {
        if (s.eliminated[c]) {
          for (Color d : pile) ++s.dead[d];
          events.emplace_back(event::PileDestroyed{row, pile});
          internal::ClearRow(s, row);
          internal::EnterChoosePile(s, events);
        } else {
          s.current_player = c;
          s.capture_row = row;
          s.phase = Phase::kEliminateChip;
          events.emplace_back(event::PileCaptured{c, row});
          events.emplace_back(event::TurnAssigned{c, TurnReason::kCapture});
        }
        break;
      }

      auto opts = NextPlayerOptionsFor(s, row);
      if (const auto* forced = std::get_if<Forced>(&opts)) {
        if (!s.eliminated[forced->player]) {
          s.current_player = forced->player;
          events.emplace_back(
              event::TurnAssigned{forced->player, TurnReason::kDeepest});
        } else {
          internal::Backtrack(s, events);
        }
        internal::EnterChoosePile(s, events);
      } else if (std::get<ChoiceSet>(opts).players.empty()) {
        internal::Backtrack(s, events);
        internal::EnterChoosePile(s, events);
      } else {
        s.next_player_row = row;
        s.phase = Phase::kChooseNextPlayer;
      }
      break;
    }

    case Phase::kChooseNextPlayer:
      s.pass_history.push_back(mover);
      s.current_player = m.value;
      events.emplace_back(event::TurnAssigned{m.value, TurnReason::kChosen});
      internal::EnterChoosePile(s, events);
      break;

    case Phase::kEliminateChip: {
      const int row = *s.capture_row;
      Pile& pile = s.rows[row];
      const Color victim = m.value;
      auto it = std::find(pile.rbegin(), pile.rend(), victim);
      pile.erase(std::next(it).base());
      ++s.dead[victim];
      events.emplace_back(event::ChipKilled{victim, row});
      for (Color d : pile) ++s.holdings[mover][d];
      internal::ClearRow(s, row);
      internal::EnterChoosePile(s, events);
      break;
    }
  }
  return std::nullopt;
}

struct ApplyResult {
  GameState state;
  std::vector<GameEvent> events;
};

// Value-returning form; throws IllegalMoveError on an illegal move.
inline ApplyResult Apply(GameState state, Move m) {
  ApplyResult out{std::move(state), {}};
  if (auto why = ApplyInPlace(out.state, m, out.events)) {
    throw IllegalMoveError(*why);
  }
  return out;
}

struct Outcome {
  Player winner;
  std::array<int, kNumPlayers> payoff;
  friend bool operator==(const Outcome&, const Outcome&) = default;
};

inline std::optional<Outcome> Winner(const GameState& s) {
  if (s.AliveCount() != 1) return std::nullopt;
  Outcome o{};
  o.winner = static_cast<Player>(
      std::find(s.eliminated.begin(), s.eliminated.end(), false) -
      s.eliminated.begin());
  o.payoff[o.winner] = s.config.payoff;
  return o;
}

// Returns an empty string when every structural invariant holds, otherwise
// a description of the first violation.
inline std::string CheckInvariants(const GameState& s) {
  const int n = static_cast<int>(s.rows.size());
  if (n != s.config.n_rows) return "row count differs from config";
  if (s.NonEmptyRows() > s.config.n_rows) return "too many piles";
  for (Color c = 0; c < kNumPlayers; ++c) {
    int hand = 0;
    for (Player p = 0; p < kNumPlayers; ++p) {
      if (s.holdings[p][c] < 0) return "negative holding";
      hand += s.holdings[p][c];
    }
    if (s.dead[c] < 0) return "negative dead count";
    if (hand + s.OnBoard(c) + s.dead[c] != s.config.n_chips) {
      return "chip conservation violated for color " + std::to_string(c);
    }
  }
  for (const auto& pile : s.rows) {
    if (static_cast<int>(pile.size()) > s.config.max_pile()) {
      return "pile exceeds max size";
    }
    for (Color c : pile) {
      if (c < 0 || c >= kNumPlayers) return "bad chip color";
    }
  }
  const auto in_range = [n](const std::optional<int>& r) {
    return !r || (*r >= 0 && *r < n);
  };
  if (!in_range(s.selected_row) || !in_range(s.capture_row) ||
      !in_range(s.next_player_row)) {
    return "row marker out of range";
  }
  if (s.selected_row.has_value() != (s.phase == Phase::kChooseChip)) {
    return "selected_row inconsistent with phase";
  }
  if (s.next_player_row.has_value() !=
      (s.phase == Phase::kChooseNextPlayer)) {
    return "next_player_row inconsistent with phase";
  }
  if (s.capture_row.has_value() != (s.phase == Phase::kEliminateChip)) {
    return "capture_row inconsistent with phase";
  }
  if (s.capture_row && s.rows[*s.capture_row].size() < 2) {
    return "captured pile too small";
  }
  if (s.winner.has_value() != (s.AliveCount() == 1)) {
    return "winner inconsistent with eliminations";
  }
  if (!s.winner && s.eliminated[s.current_player]) {
    return "current player is eliminated";
  }
  return {};
}

}  // namespace sls

#endif  // SLS_GAME_HPP_
