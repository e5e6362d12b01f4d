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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "sls/env.hpp"
#include "sls/game_json.hpp"
#include "test_util.hpp"

namespace sls {
namespace {

using testing::kBlue;

// Independent decoder for the board block: for each (row, depth) slot find
// the color with a 1, if any.
std::vector<Pile> DecodeBoard(const EnvSpec& spec, const Observation& obs) {
  std::vector<Pile> rows(spec.n_rows);
  const int depth_max = 4 * spec.n_chips;
  for (int r = 0; r < spec.n_rows; ++r) {
    for (int d = 0; d < depth_max; ++d) {
      int found = -1;
      for (int c = 0; c < 4; ++c) {
        const float v = obs[(r * 4 + c) * depth_max + d];
        if (v == 1.0f) {
          EXPECT_EQ(found, -1) << "two colors in one slot";
          found = c;
        } else {
          EXPECT_EQ(v, 0.0f);
        }
      }
      if (found < 0) break;
      rows[r].push_back(found);
    }
  }
  return rows;
}

TEST(EncodeTest, DefaultSizeIs509) {
  EnvSpec spec;
  EXPECT_EQ(spec.obs_size(), 6 * 4 * 20 + 16 + 8 + 4 + 1);
  EXPECT_EQ(spec.obs_size(), 509);
  EXPECT_EQ(Encode(spec, NewGame(GameConfig{})).size(), 509u);
  EXPECT_EQ(EnvSpec::action_count(), 10);
}

TEST(EncodeTest, SizeFollowsChips) {
  EnvSpec spec;
  spec.n_chips = 3;
  EXPECT_EQ(spec.obs_size(), 6 * 4 * 12 + 16 + 8 + 4 + 1);
}

TEST(EncodeTest, FreshGameLayout) {
  EnvSpec spec;
  GameState s = NewGame(GameConfig{.seed = 4});
  const auto obs = Encode(spec, s);
  const ObsLayout L(spec);
  for (int i = 0; i < L.holdings; ++i) ASSERT_EQ(obs[i], 0.0f);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      EXPECT_EQ(obs[L.holdings + 4 * i + j], i == j ? 5.0f : 0.0f);
    }
    EXPECT_EQ(obs[L.eliminated + i], 0.0f);
    EXPECT_EQ(obs[L.current + i], i == s.current_player ? 1.0f : 0.0f);
  }
  EXPECT_EQ(obs[L.phase], 1.0f);
  EXPECT_EQ(obs[L.phase + 1] + obs[L.phase + 2] + obs[L.phase + 3], 0.0f);
  EXPECT_EQ(obs[L.step], 0.0f);
  EXPECT_EQ(L.step, 508);
}

TEST(EncodeTest, OneBlueChipOnRowTwo) {
  EnvSpec spec;
  GameState s = testing::BlankState(kBlue);
  s.rows[2] = {kBlue};
  const auto obs = Encode(spec, s);
  const ObsLayout L(spec);
  int ones = 0;
  for (int i = 0; i < L.holdings; ++i) ones += obs[i] == 1.0f;
  EXPECT_EQ(ones, 1);
  EXPECT_EQ(obs[(2 * 4 + kBlue) * 20 + 0], 1.0f);
  EXPECT_EQ(ObsLayout::BoardIndex(spec, 2, kBlue, 0), (2 * 4 + kBlue) * 20);
}

TEST(EncodeTest, BoardRoundTripAndOneHotDiscipline) {
  EnvSpec spec;
  SplitMix64 rng(12);
  const ObsLayout L(spec);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    GameState s = NewGame(GameConfig{.seed = seed});
    while (!s.terminal()) {
      const auto obs = Encode(spec, s);
      ASSERT_EQ(DecodeBoard(spec, obs), s.rows);
      float phase_sum = 0, current_sum = 0;
      for (int i = 0; i < 4; ++i) {
        phase_sum += obs[L.phase + i];
        current_sum += obs[L.current + i];
      }
      ASSERT_EQ(phase_sum, 1.0f);
      ASSERT_EQ(current_sum, 1.0f);
      ASSERT_EQ(obs[L.step], static_cast<float>(s.step_count));
      for (int i = 0; i < 16; ++i) {
        ASSERT_EQ(obs[L.holdings + i], static_cast<float>(s.holdings[i / 4][i % 4]));
      }
      const auto moves = LegalMoves(s);
      std::vector<GameEvent> ev;
      ApplyInPlace(s, moves[UniformIndex(rng, moves.size())], ev);
    }
    const auto obs = Encode(spec, s);
    float current_sum = 0;
    for (int i = 0; i < 4; ++i) current_sum += obs[L.current + i];
    EXPECT_EQ(current_sum, 0.0f);  // terminal: no current player
  }
}

TEST(RewardTest, KnownValues) {
  const RewardParams p;
  EXPECT_DOUBLE_EQ(ShapedReward(1, false, p), -5.0);
  EXPECT_DOUBLE_EQ(ShapedReward(300, false, p), -5.0);
  EXPECT_DOUBLE_EQ(ShapedReward(1, true, p), 5.0);
  for (int t = 1; t <= 16; ++t) EXPECT_DOUBLE_EQ(ShapedReward(t, true, p), 5.0);
  EXPECT_NEAR(ShapedReward(17, true, p), 4.901960784313726, 1e-12);
  EXPECT_NEAR(ShapedReward(100, true, p), 0.8333333333333334, 1e-12);
  EXPECT_THROW(ShapedReward(0, true, p), std::logic_error);
}

TEST(RewardTest, NonIncreasingAndContinuousAtCap) {
  const RewardParams p;
  for (int t = 1; t < 1000; ++t) {
    EXPECT_GE(ShapedReward(t, true, p), ShapedReward(t + 1, true, p));
  }
  // floor(n_c / alpha) = 16; the uncapped curve meets the cap at t = 16.67.
  const double boundary = p.n_chips / p.alpha;
  EXPECT_NEAR(p.reward_cap / ((p.alpha / p.n_chips) * boundary), p.reward_cap, 1e-9);
}

TEST(RewardTest, SumOverLegalEpisode) {
  const RewardParams p;
  double sum = 0.0;
  for (int t = 1; t <= 60; ++t) sum += ShapedReward(t, true, p);
  // Closed-form oracle: 16 capped steps, then 250/(3t).
  double oracle = 16 * 5.0;
  for (int t = 17; t <= 60; ++t) oracle += 250.0 / (3.0 * t);
  EXPECT_NEAR(sum, oracle, 1e-9);
  EXPECT_NEAR(sum, 188.26, 0.005);  // quoted as ~188.2 (truncated)
}

TEST(MaskTest, Examples) {
  GameState s = NewGame(GameConfig{});
  EXPECT_EQ(LegalActionMask(s),
            (ActionMask{true, true, true, true, true, true, false, false, false, false}));
  s = testing::BlankState(0);
  s.holdings[0] = {0, 2, 0, 1};
  s.phase = Phase::kChooseChip;
  s.selected_row = 0;
  EXPECT_EQ(LegalActionMask(s),
            (ActionMask{false, false, false, false, false, false, false, true, false, true}));
  s = testing::BlankState(testing::kRed);
  s.rows[0] = {kBlue, testing::kRed, testing::kRed};
  s.phase = Phase::kEliminateChip;
  s.capture_row = 0;
  const auto m = LegalActionMask(s);
  for (int a = 0; a < 10; ++a) {
    EXPECT_EQ(m[a], a == 6 + kBlue || a == 6 + testing::kRed) << a;
  }
  s.winner = 0;
  EXPECT_EQ(LegalActionMask(s), ActionMask{});
  EXPECT_EQ(PhaseMask(s), ActionMask{});
}

TEST(MaskTest, SoundAndCompleteOnSampledStates) {
  EnvSpec spec;
  SplitMix64 rng(31);
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    GameState s = NewGame(GameConfig{.seed = seed});
    while (!s.terminal()) {
      const auto mask = LegalActionMask(s);
      const auto group = GroupForPhase(s.phase);
      ASSERT_TRUE(std::any_of(mask.begin(), mask.end(), [](bool b) { return b; }));
      for (int a = 0; a < kNumActions; ++a) {
        const bool in_group = a >= GroupBegin(group) && a < GroupEnd(group);
        if (!in_group) ASSERT_FALSE(mask[a]);
        GameState copy = s;
        std::vector<GameEvent> ev;
        const bool legal = !ApplyInPlace(copy, ActionToMove(a), ev);
        ASSERT_EQ(legal, mask[a]) << "action " << a;
        ++checked;
      }
      const auto moves = LegalMoves(s);
      std::vector<GameEvent> ev;
      ApplyInPlace(s, moves[UniformIndex(rng, moves.size())], ev);
    }
  }
  EXPECT_GT(checked, 10000);
}

TEST(ActionTest, GroupsAndConversion) {
  for (int a = 0; a < 10; ++a) {
    EXPECT_EQ(GroupOf(a), a < 6 ? ActionGroup::kPile : ActionGroup::kPlayer);
    EXPECT_EQ(MoveToAction(ActionToMove(a)), a);
  }
  EXPECT_EQ(GroupForPhase(Phase::kChoosePile), ActionGroup::kPile);
  for (Phase p : {Phase::kChooseChip, Phase::kChooseNextPlayer, Phase::kEliminateChip}) {
    EXPECT_EQ(GroupForPhase(p), ActionGroup::kPlayer);
  }
}

TEST(EnvTest, ResetIsDeterministic) {
  Env a, b;
  const auto ra = a.Reset(1);
  const auto rb = b.Reset(1);
  EXPECT_EQ(ra.observation, rb.observation);
  EXPECT_EQ(ra.observation.size(), 509u);
  EXPECT_EQ(ra.mask, GroupMask(ActionGroup::kPile));
  EXPECT_EQ(ra.acting_player, a.state().current_player);
}

TEST(EnvTest, IllegalActionCostsAStepOnly) {
  Env env;
  env.Reset(2);
  GameState before = env.state();
  const auto r = env.Step(8);
  EXPECT_FALSE(r.info.legal);
  EXPECT_EQ(r.info.reason, IllegalReason::kWrongPhase);
  EXPECT_DOUBLE_EQ(r.reward, -5.0);
  EXPECT_FALSE(r.done);
  before.step_count = 1;
  EXPECT_EQ(env.state(), before);
  EXPECT_EQ(r.info.acting_player, before.current_player);
}

TEST(EnvTest, LegalActionRewardAndPhase) {
  Env env;
  env.Reset(2);
  const auto r = env.Step(0);
  EXPECT_TRUE(r.info.legal);
  EXPECT_DOUBLE_EQ(r.reward, 5.0);
  EXPECT_EQ(env.state().phase, Phase::kChooseChip);
  EXPECT_EQ(env.state().step_count, 1);
  EXPECT_EQ(r.info.phase_mask, GroupMask(ActionGroup::kPlayer));
}

TEST(EnvTest, TerminalTransitionEndsWithGameOver) {
  Env env;
  env.Reset(9);
  SplitMix64 rng(3);
  StepResult r;
  while (!env.done()) {
    const auto mask = LegalActionMask(env.state());
    std::vector<int> ids;
    for (int a = 0; a < 10; ++a) if (mask[a]) ids.push_back(a);
    r = env.Step(ids[UniformIndex(rng, ids.size())]);
  }
  ASSERT_TRUE(r.done);
  ASSERT_TRUE(env.state().terminal());
  ASSERT_FALSE(r.info.events.empty());
  EXPECT_TRUE(std::holds_alternative<event::GameOver>(r.info.events.back()));
  EXPECT_EQ(r.info.phase_mask, ActionMask{});
  EXPECT_THROW(env.Step(0), std::logic_error);
}

TEST(EnvTest, MaxStepsTruncates) {
  EnvSpec spec;
  spec.max_steps = 7;
  Env env(spec);
  env.Reset(1);
  int n = 0;
  while (!env.done()) {
    env.Step(9);  // never legal in ChoosePile
    ++n;
  }
  EXPECT_EQ(n, 7);
  EXPECT_FALSE(env.state().terminal());
}

TEST(EnvTest, StepCountAdvancesOnEveryCall) {
  Env env;
  env.Reset(5);
  SplitMix64 rng(8);
  for (int i = 1; i <= 100 && !env.done(); ++i) {
    env.Step(static_cast<int>(UniformIndex(rng, 10)));
    ASSERT_EQ(env.state().step_count, i);
  }
}

TEST(EnvTest, TraceRecordsEveryStep) {
  Env env;
  env.Reset(5);
  env.Step(0);
  env.Step(9);
  ASSERT_EQ(env.trace().size(), 2u);
  EXPECT_EQ(env.trace()[0].t, 1);
  EXPECT_TRUE(env.trace()[0].legal);
  EXPECT_EQ(env.trace()[1].t, 2);
  EXPECT_EQ(env.trace()[1].phase, Phase::kChooseChip);
  EXPECT_EQ(TraceRecordFromJson(ToJson(env.trace()[1])), env.trace()[1]);
}

TEST(EnvSpecTest, Validation) {
  EnvSpec bad;
  bad.alpha = 0.0;
  EXPECT_THROW(Env{bad}, std::invalid_argument);
  bad = EnvSpec{};
  bad.n_rows = 5;
  EXPECT_THROW(Env{bad}, std::invalid_argument);
  EnvSpec ok;
  EXPECT_EQ(EnvSpecFromJson(ToJson(ok)), ok);
}

}  // namespace
}  // namespace sls
