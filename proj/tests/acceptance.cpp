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

// Acceptance run: one PASS/FAIL line per criterion. Exits non-zero if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include "gradcheck.hpp"
#include "sls/agents.hpp"
#include "sls/checkpoint.hpp"
#include "sls/trace.hpp"
#include "sls/training.hpp"
#include "test_util.hpp"

namespace sls {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string ReadBytes(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

// The engine's own invariant check plus what a live state must offer.
std::string Violation(const GameState& s) {
  if (auto bad = CheckInvariants(s); !bad.empty()) return bad;
  if (s.terminal()) return "";
  if (s.eliminated[s.current_player]) return "eliminated player to move";
  if (LegalMoves(s).empty()) return "no legal move in a live state";
  return "";
}

Outcome RulesSoundness() {
  const auto t0 = Clock::now();
  Env env;
  SplitMix64 rng(MixSeed(2026, 1));
  StepResult res;
  int winners = 0, truncated = 0;
  long long steps = 0;
  for (int g = 1; g <= 10000; ++g) {
    env.Reset(MixSeed(2026, 100 + g));
    if (auto bad = Violation(env.state()); !bad.empty()) {
      return {false, Fmt("game %d at reset: %s", g, bad.c_str())};
    }
    while (!env.done()) {
      const auto group = GroupForPhase(env.state().phase);
      env.StepNoObservation(UniformInGroup(group, rng), res);
      ++steps;
      if (auto bad = Violation(env.state()); !bad.empty()) {
        return {false, Fmt("game %d step %d: %s", g, env.state().step_count, bad.c_str())};
      }
    }
    if (env.state().terminal()) {
      ++winners;
    } else if (env.state().step_count == env.spec().max_steps) {
      ++truncated;
    } else {
      return {false, Fmt("game %d stopped without a winner before max_steps", g)};
    }
  }
  const double secs = Seconds(t0);
  return {secs < 120.0, Fmt("10000 games, %lld steps, %d won, %d at max_steps, %.1f s (limit 120 s)",
                            steps, winners, truncated, secs)};
}

Outcome ObservationSize() {
  const EnvSpec spec;
  // board + holdings + eliminated + current player + phase + step count
  const int formula = spec.n_rows * kNumPlayers * (kNumPlayers * spec.n_chips) +
                      kNumPlayers * kNumPlayers + kNumPlayers + kNumPlayers + kNumPhases + 1;
  const auto obs = Encode(spec, NewGame(spec.game_config(1)));
  const bool ok = spec.obs_size() == 509 && formula == 509 &&
                  static_cast<int>(obs.size()) == 509;
  return {ok, Fmt("obs_size %d, formula %d, encoded %zu", spec.obs_size(), formula, obs.size())};
}

Outcome RewardFormula() {
  const RewardParams p;
  double worst = 0.0;
  auto check = [&](double got, double want) { worst = std::max(worst, std::abs(got - want)); };
  check(ShapedReward(1, false, p), -5.0);
  check(ShapedReward(250, false, p), -5.0);
  for (int t = 1; t <= 16; ++t) check(ShapedReward(t, true, p), 5.0);
  for (int t = 17; t <= 2000; ++t) check(ShapedReward(t, true, p), 5.0 / (0.06 * t));
  check(ShapedReward(17, true, p), 4.901960784313726);
  check(ShapedReward(100, true, p), 0.8333333333333334);
  return {worst <= 1e-6, Fmt("max abs deviation %.3g (tolerance 1e-6), r(17)=%.6f r(100)=%.6f",
                             worst, ShapedReward(17, true, p), ShapedReward(100, true, p))};
}

Outcome GradientCheck() {
  const auto t0 = Clock::now();
  SplitMix64 rng(MixSeed(2026, 2));
  double worst = 0.0;
  int nets = 0, rejected = 0;
  for (auto arch : {Architecture::kStandard, Architecture::kDueling}) {
    int clean = 0;
    while (clean < 20) {
      if (rejected > 200) return {false, "too many kink-straddling draws"};
      auto net = InitNetwork<double>(arch, 8, MixSeed(7, nets + rejected), 4, 10);
      testing::RandomizeBiases(net, rng);
      const auto batch = testing::RandomBatch<double>(5, 8, 10, rng);
      const auto r = testing::GradientCheck(net, batch);
      if (r.kink_crossings > 0) {
        ++rejected;
        continue;
      }
      worst = std::max(worst, r.max_rel);
      ++clean;
      ++nets;
    }
  }
  const double secs = Seconds(t0);
  return {worst < 1e-4 && nets >= 20 && secs < 10.0,
          Fmt("%d nets (both architectures, %d kink-straddling draws redrawn), max rel err %.3g "
              "(limit 1e-4), %.2f s",
              nets, rejected, worst, secs)};
}

// Per-transition enumeration of the target definitions, in the same float
// arithmetic as the trainer.
float OracleTarget(AgentVariant v, const Network<float>& online, const Network<float>& target,
                   const Transition& t, double gamma) {
  if (t.done) return static_cast<float>(t.reward);
  const auto qt = ForwardOne(target, std::span<const float>(t.next_obs));
  const auto qo = ForwardOne(online, std::span<const float>(t.next_obs));
  int best = -1;
  for (int a = 0; a < kNumActions; ++a) {
    if (!t.next_phase_mask[a]) continue;
    const auto& chooser = v == AgentVariant::kDdqn ? qo : qt;
    if (best < 0 || chooser[a] > chooser[best]) best = a;
  }
  return static_cast<float>(t.reward + gamma * qt[best]);
}

Outcome TargetOracle() {
  int mismatches = 0, checked = 0;
  // Handcrafted: online prefers 7, target prefers 6.
  auto online = MakeNetwork<float>(Architecture::kStandard, 3, 2, 10);
  auto target = MakeNetwork<float>(Architecture::kStandard, 3, 2, 10);
  online.layers[2].bias = {0, 0, 0, 0, 0, 0, 1, 5, 0, 0};
  target.layers[2].bias = {0, 0, 0, 0, 0, 0, 4, 2, 0, 0};
  Transition t{{0, 0, 0}, 0, 1.0, {0, 0, 0}, GroupMask(ActionGroup::kPlayer), false};
  Transition term = t;
  term.done = true;
  Transition pile = t;
  pile.next_phase_mask = GroupMask(ActionGroup::kPile);
  const std::vector<Transition> hand{t, term, pile};
  const auto dqn = ComputeTargets(AgentVariant::kDqn, online, target, hand, 0.5);
  const auto ddqn = ComputeTargets(AgentVariant::kDdqn, online, target, hand, 0.5);
  const bool constructed = dqn[0] == 3.0f && ddqn[0] == 2.0f && dqn[1] == 1.0f && ddqn[1] == 1.0f &&
                           dqn[2] == 1.0f && ddqn[2] == 1.0f;
  for (std::size_t i = 0; i < hand.size(); ++i) {
    mismatches += dqn[i] != OracleTarget(AgentVariant::kDqn, online, target, hand[i], 0.5);
    mismatches += ddqn[i] != OracleTarget(AgentVariant::kDdqn, online, target, hand[i], 0.5);
    checked += 2;
  }

  // Random batches over real observations and masks.
  SplitMix64 rng(MixSeed(2026, 3));
  Env env;
  std::vector<Transition> batch;
  Observation obs = env.Reset(5).observation;
  while (batch.size() < 256) {
    if (env.done()) obs = env.Reset(batch.size()).observation;
    const auto a = UniformInGroup(GroupForPhase(env.state().phase), rng);
    auto r = env.Step(a);
    batch.push_back(Transition{obs, a, r.reward, r.observation, r.info.phase_mask, r.done});
    obs = r.observation;
  }
  for (auto v : {AgentVariant::kDqn, AgentVariant::kDdqn, AgentVariant::kDueling}) {
    for (int k = 0; k < 4; ++k) {
      const auto arch = ArchitectureFor(v);
      const auto on = InitNetwork(arch, 509, MixSeed(k, 1));
      const auto tg = InitNetwork(arch, 509, MixSeed(k, 2));
      const auto y = ComputeTargets(v, on, tg, batch, 0.95);
      for (std::size_t i = 0; i < batch.size(); ++i) {
        mismatches += y[i] != OracleTarget(v, on, tg, batch[i], 0.95);
        ++checked;
      }
    }
  }

  // Dueling identity.
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    auto net = InitNetwork(Architecture::kDueling, 509, MixSeed(k, 3));
    testing::RandomizeBiases(net, rng);
    Matrix<float> x(8, 509);
    for (int b = 0; b < 8; ++b) std::copy(batch[b * 7].obs.begin(), batch[b * 7].obs.end(), x.row(b).begin());
    ForwardCache<float> cache;
    ForwardWithCache(net, x, cache);
    for (int b = 0; b < 8; ++b) {
      double mean = 0;
      for (int a = 0; a < 10; ++a) mean += cache.q(b, a);
      worst = std::max(worst, std::abs(mean / 10 - cache.value(b, 0)));
    }
  }
  const bool ok = constructed && mismatches == 0 && worst <= 1e-5;
  return {ok, Fmt("%d targets vs enumeration oracle, %d mismatches; constructed DDQN!=DQN case %s "
                  "(3.0 vs 2.0); dueling |mean Q - V| max %.3g (limit 1e-5)",
                  checked, mismatches, constructed ? "ok" : "WRONG", worst)};
}

struct Baseline {
  double reward = 0, steps = 0;
};

Outcome RandomBaseline(Baseline& out) {
  const auto t0 = Clock::now();
  EvalOptions opts;
  opts.episodes = 1000;
  opts.seed = 0;
  const auto r = Evaluate(AgentVariant::kRandom, nullptr, opts);
  out = {r.reward.mean, r.steps.mean};
  const double secs = Seconds(t0);
  const bool ok = r.reward.mean >= -40 && r.reward.mean <= 10 && r.steps.mean >= 45 &&
                  r.steps.mean <= 95 && secs < 60;
  return {ok, Fmt("1000 episodes: mean reward %.2f (band [-40, 10]), mean steps %.2f (band [45, 95]), "
                  "mean illegal %.1f, %.1f s",
                  r.reward.mean, r.steps.mean, r.illegal.mean, secs)};
}

struct LearnStats {
  double reward = 0, steps = 0, illegal = 0, secs = 0;
};

LearnStats TrainFinal200(AgentVariant v, const fs::path& dir) {
  const auto t0 = Clock::now();
  TrainConfig c;
  c.variant = v;
  c.episodes = 2000;
  c.seed = 1;
  c.output_dir = dir;
  const auto result = Train(c);
  LearnStats s;
  const auto& m = result.metrics;
  for (std::size_t i = m.size() - 200; i < m.size(); ++i) {
    s.reward += m[i].reward / 200;
    s.steps += m[i].steps / 200.0;
    s.illegal += m[i].illegal / 200.0;
  }
  s.secs = Seconds(t0);
  return s;
}

Outcome Learning(const Baseline& baseline, const fs::path& scratch) {
  const auto dqn = TrainFinal200(AgentVariant::kDqn, scratch / "dqn");
  const auto ddqn = TrainFinal200(AgentVariant::kDdqn, scratch / "ddqn");
  const bool dqn_ok = dqn.reward >= 50 && dqn.reward - baseline.reward >= 40 &&
                      dqn.steps >= 40 && dqn.steps <= 90;
  const bool ddqn_ok = std::abs(ddqn.reward - dqn.reward) <= 30;
  return {dqn_ok && ddqn_ok,
          Fmt("2000 episodes, seed 1, final-200 means: DQN reward %.1f (need >= 50 and >= baseline+40 = %.1f), "
              "steps %.1f (band [40, 90]), illegal %.1f, %.0f s; DDQN reward %.1f (need within 30 of DQN), "
              "steps %.1f, %.0f s",
              dqn.reward, baseline.reward + 40, dqn.steps, dqn.illegal, dqn.secs, ddqn.reward,
              ddqn.steps, ddqn.secs)};
}

Outcome DeterminismAndPersistence(const fs::path& scratch) {
  TrainConfig c;
  c.episodes = 30;
  c.sync_period = 10;
  c.seed = 42;
  c.trace_every = 1;
  c.env.max_steps = 200;
  c.output_dir = scratch / "det_a";
  const auto a = Train(c);
  c.output_dir = scratch / "det_b";
  const auto b = Train(c);
  const bool same_metrics =
      ReadBytes(scratch / "det_a" / "metrics.jsonl") == ReadBytes(scratch / "det_b" / "metrics.jsonl") &&
      a.metrics == b.metrics;
  const bool same_ckpt = ReadBytes(a.final_checkpoint) == ReadBytes(b.final_checkpoint);

  // Save -> load -> save is byte-identical and the network is unchanged.
  const auto net = LoadCheckpoint(a.final_checkpoint);
  SaveCheckpoint(scratch / "resaved.bin", net);
  const bool roundtrip = ReadBytes(scratch / "resaved.bin") == ReadBytes(a.final_checkpoint) &&
                         LoadCheckpoint(scratch / "resaved.bin") == net;

  // Every emitted trace (training and evaluation) replays.
  EvalOptions eo;
  eo.episodes = 20;
  eo.trace_dir = scratch / "eval_traces";
  Evaluate(AgentVariant::kDqn, &net, eo);
  int traces = 0, failed = 0;
  for (const auto& dir : {scratch / "det_a" / "traces", scratch / "eval_traces"}) {
    for (const auto& e : fs::directory_iterator(dir)) {
      ++traces;
      failed += !ReplayTraceFile(e.path()).ok();
    }
  }
  const bool ok = same_metrics && same_ckpt && roundtrip && failed == 0 && traces == 50;
  return {ok, Fmt("metrics streams %s, final checkpoints %s, save/load %s, %d/%d traces replay",
                  same_metrics ? "identical" : "DIFFER", same_ckpt ? "identical" : "DIFFER",
                  roundtrip ? "bit-exact" : "NOT bit-exact", traces - failed, traces)};
}

int Main() {
  const auto scratch = testing::ScratchDir("acceptance");
  int failures = 0;
  auto report = [&](const char* name, const std::function<Outcome()>& fn) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  };
  Baseline baseline;
  report("rules-soundness", RulesSoundness);
  report("observation-size", ObservationSize);
  report("reward-formula", RewardFormula);
  report("gradient-check", GradientCheck);
  report("target-oracle", TargetOracle);
  report("random-baseline", [&] { return RandomBaseline(baseline); });
  report("learning-desk-scale", [&] { return Learning(baseline, scratch); });
  report("determinism-persistence", [&] { return DeterminismAndPersistence(scratch); });
  fs::remove_all(scratch);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace sls

int main() { return sls::Main(); }
