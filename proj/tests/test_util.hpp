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

#ifndef SLS_TESTS_TEST_UTIL_HPP_
#define SLS_TESTS_TEST_UTIL_HPP_

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "sls/env.hpp"
#include "sls/game.hpp"

namespace sls::testing {

// Named colors for hand-built positions.
inline constexpr Color kRed = 0;
inline constexpr Color kBlue = 1;
inline constexpr Color kGreen = 2;
inline constexpr Color kYellow = 3;

// A fresh game with player `p` to move and empty hands, for building
// positions by hand.
inline GameState BlankState(Player p = 0) {
  GameState s = NewGame(GameConfig{});
  s.current_player = p;
  for (auto& h : s.holdings) h.fill(0);
  return s;
}

// Puts the remaining chips of every color into dead so that conservation
// holds for a hand-built position.
inline void BalanceWithDead(GameState& s) {
  for (Color c = 0; c < kNumPlayers; ++c) {
    int used = s.OnBoard(c);
    for (Player p = 0; p < kNumPlayers; ++p) used += s.holdings[p][c];
    s.dead[c] = s.config.n_chips - used;
  }
}

// Plays uniformly random legal moves until the game ends or `max_moves`
// moves were made. Returns the number of moves played.
inline int PlayRandomLegal(GameState& s, SplitMix64& rng, int max_moves,
                           std::vector<GameEvent>* all_events = nullptr) {
  int n = 0;
  std::vector<GameEvent> events;
  while (!s.terminal() && n < max_moves) {
    const auto moves = LegalMoves(s);
    events.clear();
    ApplyInPlace(s, moves[UniformIndex(rng, moves.size())], events);
    if (all_events) all_events->insert(all_events->end(), events.begin(), events.end());
    ++n;
  }
  return n;
}

// Unique scratch directory under the system temp dir.
inline std::filesystem::path ScratchDir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() /
             ("sls_test_" + name + "_" + std::to_string(std::random_device{}()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace sls::testing

#endif  // SLS_TESTS_TEST_UTIL_HPP_
