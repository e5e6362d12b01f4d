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

// Canonical JSON form of game states, moves and events.
//
// State shape:
//   {
//     "config":   {"n_players":4,"n_chips":5,"n_rows":6,"payoff":1,"seed":"7"},
//     "rows":     [[0,2],[],...],          // color ids, bottom-first
//     "holdings": [[5,0,0,0],...],         // holdings[holder][color]
//     "dead":     [0,0,0,0],
//     "eliminated":[false,false,false,false],
//     "current_player": 2,
//     "phase": "choose_pile",
//     "selected_row": null, "next_player_row": null, "capture_row": null,
//     "pass_history": [1,3],
//     "step_count": 12,
//     "rng_state": "0123456789abcdef",     // 64-bit hex, string for JS safety
//     "winner": null
//   }
//
// Events are objects tagged by "type" (ChipPlaced, PileCaptured, ...).

#ifndef SLS_GAME_JSON_HPP_
#define SLS_GAME_JSON_HPP_

#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "sls/game.hpp"

namespace sls {

using Json = nlohmann::json;

namespace internal {

inline std::string Hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

inline std::uint64_t ParseHex64(const std::string& s) {
  std::size_t used = 0;
  auto v = std::stoull(s, &used, 16);
  if (used != s.size()) throw std::invalid_argument("bad hex word: " + s);
  return v;
}

inline Json OptionalInt(const std::optional<int>& v) {
  return v ? Json(*v) : Json(nullptr);
}

inline std::optional<int> ReadOptionalInt(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<int>();
}

}  // namespace internal

inline Json ToJson(const GameConfig& c) {
  return Json{{"n_players", c.n_players},
              {"n_chips", c.n_chips},
              {"n_rows", c.n_rows},
              {"payoff", c.payoff},
              {"seed", std::to_string(c.seed)}};
}

inline GameConfig GameConfigFromJson(const Json& j) {
  GameConfig c;
  c.n_players = j.at("n_players").get<int>();
  c.n_chips = j.at("n_chips").get<int>();
  c.n_rows = j.at("n_rows").get<int>();
  c.payoff = j.at("payoff").get<int>();
  const Json& seed = j.at("seed");
  c.seed = seed.is_string() ? std::stoull(seed.get<std::string>())
                            : seed.get<std::uint64_t>();
  return c;
}

inline Json ToJson(const GameState& s) {
  Json rows = Json::array();
  for (const auto& pile : s.rows) rows.push_back(pile);
  return Json{{"config", ToJson(s.config)},
              {"rows", rows},
              {"holdings", s.holdings},
              {"dead", s.dead},
              {"eliminated", s.eliminated},
              {"current_player", s.current_player},
              {"phase", PhaseName(s.phase)},
              {"selected_row", internal::OptionalInt(s.selected_row)},
              {"next_player_row", internal::OptionalInt(s.next_player_row)},
              {"capture_row", internal::OptionalInt(s.capture_row)},
              {"pass_history", s.pass_history},
              {"step_count", s.step_count},
              {"rng_state", internal::Hex64(s.rng.state())},
              {"winner", internal::OptionalInt(s.winner)}};
}

inline GameState GameStateFromJson(const Json& j) {
  GameState s;
  s.config = GameConfigFromJson(j.at("config"));
  s.config.Validate();
  s.rows = j.at("rows").get<std::vector<Pile>>();
  s.holdings = j.at("holdings").get<Holdings>();
  s.dead = j.at("dead").get<std::array<int, kNumPlayers>>();
  s.eliminated = j.at("eliminated").get<std::array<bool, kNumPlayers>>();
  s.current_player = j.at("current_player").get<int>();
  auto phase = PhaseFromName(j.at("phase").get<std::string>());
  if (!phase) throw std::invalid_argument("unknown phase tag");
  s.phase = *phase;
  s.selected_row = internal::ReadOptionalInt(j.at("selected_row"));
  s.next_player_row = internal::ReadOptionalInt(j.at("next_player_row"));
  s.capture_row = internal::ReadOptionalInt(j.at("capture_row"));
  s.pass_history = j.at("pass_history").get<std::vector<Player>>();
  s.step_count = j.at("step_count").get<int>();
  s.rng.set_state(internal::ParseHex64(j.at("rng_state").get<std::string>()));
  s.winner = internal::ReadOptionalInt(j.at("winner"));
  if (auto err = CheckInvariants(s); !err.empty()) {
    throw std::invalid_argument("inconsistent game state: " + err);
  }
  return s;
}

inline Json ToJson(Move m) {
  return Json{{"kind", m.kind == Move::Kind::kSelectRow ? "row" : "color"},
              {"value", m.value}};
}

inline Move MoveFromJson(const Json& j) {
  const auto kind = j.at("kind").get<std::string>();
  const int value = j.at("value").get<int>();
  if (kind == "row") return Move::Row(value);
  if (kind == "color") return Move::Color(value);
  throw std::invalid_argument("move kind must be 'row' or 'color'");
}

inline Json ToJson(const GameEvent& ev) {
  return std::visit(
      [](const auto& e) -> Json {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, event::ChipPlaced>) {
          return {{"type", "ChipPlaced"},
                  {"player", e.player},
                  {"color", e.color},
                  {"row", e.row}};
        } else if constexpr (std::is_same_v<T, event::PileCaptured>) {
          return {{"type", "PileCaptured"},
                  {"capturer", e.capturer},
                  {"row", e.row}};
        } else if constexpr (std::is_same_v<T, event::ChipKilled>) {
          return {{"type", "ChipKilled"}, {"color", e.color}, {"row", e.row}};
        } else if constexpr (std::is_same_v<T, event::PileDestroyed>) {
          return {{"type", "PileDestroyed"}, {"row", e.row}, {"chips", e.chips}};
        } else if constexpr (std::is_same_v<T, event::PlayerEliminated>) {
          return {{"type", "PlayerEliminated"}, {"player", e.player}};
        } else if constexpr (std::is_same_v<T, event::TurnAssigned>) {
          return {{"type", "TurnAssigned"},
                  {"player", e.player},
                  {"reason", TurnReasonName(e.reason)}};
        } else {
          return {{"type", "GameOver"},
                  {"winner", e.winner},
                  {"payoff", e.payoff}};
        }
      },
      ev);
}

inline Json ToJson(const std::vector<GameEvent>& events) {
  Json out = Json::array();
  for (const auto& e : events) out.push_back(ToJson(e));
  return out;
}

}  // namespace sls

#endif  // SLS_GAME_JSON_HPP_
