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

// Multi-seat training loop (one shared online network, one target network,
// one replay buffer for all four seats) and the frozen-policy evaluator.
//
// Output directory layout written by Train():
//   metrics.jsonl                one EpisodeStats object per line
//   checkpoints/ep_NNNNNN.bin    network checkpoint every sync period
//   checkpoints/ep_NNNNNN.json   sidecar {episode, epsilon, rng_state, ...}
//   checkpoints/final.bin/.json  after the last episode
//   resume.state                 full trainer state at the last sync point
//   traces/episode_NNNNNN.jsonl  optional episode traces

#ifndef SLS_TRAINING_HPP_
#define SLS_TRAINING_HPP_

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sls/agents.hpp"
#include "sls/checkpoint.hpp"
#include "sls/env.hpp"
#include "sls/neural.hpp"
#include "sls/stats.hpp"
#include "sls/trace.hpp"

namespace sls {

struct TrainConfig {
  EnvSpec env;
  AgentVariant variant = AgentVariant::kDqn;
  int episodes = 10000;
  double gamma = 0.95;
  double epsilon_start = 1.0;
  double epsilon_decay = 0.995;
  double epsilon_min = 0.01;
  double learning_rate = 0.001;
  int batch_size = 64;
  int update_period = 10;
  int sync_period = 500;  // target copy + checkpoint, in episodes
  int buffer_capacity = 50000;
  int hidden_units = 64;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "runs/default";
  int trace_every = 0;  // 0: no traces; k: every k-th episode

  void Validate() const {
    env.Validate();
    if (variant == AgentVariant::kRandom) {
      throw std::invalid_argument("the random agent is not trainable; use baseline");
    }
    if (episodes < 1) throw std::invalid_argument("episodes must be >= 1");
    if (!(gamma >= 0 && gamma < 1)) throw std::invalid_argument("gamma must lie in [0, 1)");
    if (!(epsilon_min > 0 && epsilon_min <= epsilon_start && epsilon_start <= 1)) {
      throw std::invalid_argument("need 0 < epsilon_min <= epsilon_start <= 1");
    }
    if (!(epsilon_decay > 0 && epsilon_decay <= 1)) {
      throw std::invalid_argument("epsilon_decay must lie in (0, 1]");
    }
    if (!(learning_rate > 0)) throw std::invalid_argument("learning_rate must be > 0");
    if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
    if (update_period < 1) throw std::invalid_argument("update_period must be >= 1");
    if (sync_period < 1) throw std::invalid_argument("sync_period must be >= 1");
    if (buffer_capacity < batch_size) {
      throw std::invalid_argument("buffer_capacity must be >= batch_size");
    }
    if (hidden_units < 1) throw std::invalid_argument("hidden_units must be >= 1");
    if (trace_every < 0) throw std::invalid_argument("trace_every must be >= 0");
  }
};

// Everything that shapes the learning trajectory; the output directory and
// trace settings are excluded so moving a run does not change its hash.
inline Json LearningConfigJson(const TrainConfig& c) {
  return Json{{"env", ToJson(c.env)},
              {"variant", VariantName(c.variant)},
              {"episodes", c.episodes},
              {"gamma", c.gamma},
              {"epsilon_start", c.epsilon_start},
              {"epsilon_decay", c.epsilon_decay},
              {"epsilon_min", c.epsilon_min},
              {"learning_rate", c.learning_rate},
              {"batch_size", c.batch_size},
              {"update_period", c.update_period},
              {"sync_period", c.sync_period},
              {"buffer_capacity", c.buffer_capacity},
              {"hidden_units", c.hidden_units},
              {"seed", std::to_string(c.seed)}};
}

inline std::string ConfigHash(const TrainConfig& c) {
  Json j = LearningConfigJson(c);
  j.erase("episodes");  // extending a run keeps the same hash
  const std::string text = j.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) h = (h ^ ch) * 1099511628211ULL;
  return internal::Hex64(h);
}

struct EpisodeStats {
  int episode = 0;  // 1-based
  double reward = 0.0;
  int steps = 0;
  int illegal = 0;
  double epsilon = 0.0;  // value used during the episode
  double mean_loss = 0.0;
  int updates = 0;
  std::optional<Player> winner;
  std::array<int, kNumPlayers> seat_transitions{};

  friend bool operator==(const EpisodeStats&, const EpisodeStats&) = default;
};

inline Json ToJson(const EpisodeStats& s) {
  return Json{{"episode", s.episode},
              {"reward", s.reward},
              {"steps", s.steps},
              {"illegal", s.illegal},
              {"epsilon", s.epsilon},
              {"mean_loss", s.mean_loss},
              {"updates", s.updates},
              {"winner", s.winner ? Json(*s.winner) : Json(nullptr)},
              {"seat_transitions", s.seat_transitions}};
}

inline EpisodeStats EpisodeStatsFromJson(const Json& j) {
  EpisodeStats s;
  s.episode = j.at("episode").get<int>();
  s.reward = j.at("reward").get<double>();
  s.steps = j.at("steps").get<int>();
  s.illegal = j.at("illegal").get<int>();
  s.epsilon = j.at("epsilon").get<double>();
  s.mean_loss = j.at("mean_loss").get<double>();
  s.updates = j.at("updates").get<int>();
  s.winner = j.at("winner").is_null()
                 ? std::nullopt
                 : std::optional<Player>(j.at("winner").get<int>());
  s.seat_transitions =
      j.at("seat_transitions").get<std::array<int, kNumPlayers>>();
  return s;
}

inline std::vector<EpisodeStats> ReadMetrics(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open metrics " + path.string());
  std::vector<EpisodeStats> out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(EpisodeStatsFromJson(Json::parse(line)));
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": " + e.what());
    }
  }
  return out;
}

// Seed of the game played in training episode `episode` (1-based).
inline std::uint64_t TrainEpisodeSeed(std::uint64_t seed, int episode) {
  return MixSeed(seed ^ 0x5EED5EED5EED5EEDULL, static_cast<std::uint64_t>(episode));
}

inline std::uint64_t EvalEpisodeSeed(std::uint64_t seed, int episode) {
  return MixSeed(seed ^ 0xE7A1E7A1E7A1E7A1ULL, static_cast<std::uint64_t>(episode));
}

namespace internal {

inline constexpr std::array<char, 4> kResumeMagic = {'S', 'L', 'S', 'R'};
inline constexpr std::uint32_t kResumeVersion = 1;

inline void WritePacked(std::ostream& os, const PackedObservation& p) {
  io::WritePod<std::uint16_t>(os, static_cast<std::uint16_t>(p.size()));
  io::WritePod<std::uint32_t>(os, static_cast<std::uint32_t>(p.entries().size()));
  for (const auto& e : p.entries()) {
    io::WritePod(os, e.index);
    io::WritePod(os, e.value);
  }
}

inline PackedObservation ReadPacked(std::istream& is) {
  const auto size = io::ReadPod<std::uint16_t>(is);
  const auto n = io::ReadPod<std::uint32_t>(is);
  if (n > size) throw CheckpointError("corrupt packed observation");
  std::vector<PackedObservation::Entry> entries(n);
  for (auto& e : entries) {
    e.index = io::ReadPod<std::uint16_t>(is);
    e.value = io::ReadPod<float>(is);
    if (e.index >= size) throw CheckpointError("corrupt packed observation");
  }
  return PackedObservation::FromEntries(size, std::move(entries));
}

inline std::uint16_t MaskBits(const ActionMask& m) {
  std::uint16_t bits = 0;
  for (int a = 0; a < kNumActions; ++a) {
    if (m[a]) bits |= static_cast<std::uint16_t>(1u << a);
  }
  return bits;
}

inline ActionMask MaskFromBits(std::uint16_t bits) {
  ActionMask m{};
  for (int a = 0; a < kNumActions; ++a) m[a] = (bits >> a) & 1u;
  return m;
}

inline void WriteSidecar(const std::filesystem::path& path, const Json& j) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << j.dump(2) << '\n';
  if (!os.flush()) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace internal

// Algorithm state for one training run. RunEpisode() advances by exactly one
// episode; SaveState/LoadState capture everything needed to continue
// bit-identically.
class Trainer {
 public:
  explicit Trainer(TrainConfig config)
      : config_(std::move(config)),
        env_((config_.Validate(), config_.env)),
        online_(InitNetwork<float>(ArchitectureFor(config_.variant),
                                   config_.env.obs_size(),
                                   MixSeed(config_.seed, 1),
                                   config_.hidden_units, kNumActions)),
        target_(CopyParams(online_)),
        adam_(online_, AdamHyperParams{config_.learning_rate}),
        buffer_(static_cast<std::size_t>(config_.buffer_capacity),
                MixSeed(config_.seed, 2)),
        action_rng_(MixSeed(config_.seed, 3)),
        schedule_{config_.epsilon_start, config_.epsilon_start,
                  config_.epsilon_decay, config_.epsilon_min} {}

  const TrainConfig& config() const { return config_; }
  const Network<float>& online() const { return online_; }
  const Network<float>& target() const { return target_; }
  const AdamState<float>& adam() const { return adam_; }
  const ReplayBuffer& buffer() const { return buffer_; }
  const ExplorationSchedule& schedule() const { return schedule_; }
  const SplitMix64& action_rng() const { return action_rng_; }
  int episodes_done() const { return episode_; }
  const Env& env() const { return env_; }

  EpisodeStats RunEpisode() {
    EpisodeStats stats;
    stats.episode = episode_ + 1;
    stats.epsilon = schedule_.epsilon;
    env_.Reset(TrainEpisodeSeed(config_.seed, stats.episode));
    const int obs_size = config_.env.obs_size();
    Observation obs(obs_size);
    env_.ObserveInto(obs);
    double loss_sum = 0.0;
    StepResult res;
    while (!env_.done()) {
      const Player seat = env_.state().current_player;
      const ActionGroup group = GroupForPhase(env_.state().phase);
      const ActionId action = SelectAction(config_.variant, &online_, obs,
                                           group, schedule_.epsilon,
                                           action_rng_);
      env_.StepNoObservation(action, res);
      Observation next(obs_size);
      env_.ObserveInto(next);
      buffer_.Push(Transition{obs, action, res.reward, next,
                              res.info.phase_mask, res.done});
      ++stats.seat_transitions[seat];
      stats.reward += res.reward;
      if (!res.info.legal) ++stats.illegal;

      const int t = env_.state().step_count;
      if (buffer_.size() > static_cast<std::size_t>(config_.batch_size) &&
          t % config_.update_period == 0) {
        loss_sum += UpdateOnce();
        ++stats.updates;
      }
      obs = std::move(next);
    }
    stats.steps = env_.state().step_count;
    stats.winner = env_.state().winner;
    stats.mean_loss = stats.updates > 0 ? loss_sum / stats.updates : 0.0;

    schedule_.Decay();
    ++episode_;
    if (episode_ % config_.sync_period == 0) target_ = CopyParams(online_);
    if (!AllFinite(online_)) {
      throw std::runtime_error("non-finite parameters after episode " +
                               std::to_string(episode_));
    }
    return stats;
  }

  // One minibatch gradient step; returns the minibatch loss.
  double UpdateOnce() {
    auto batch = buffer_.Sample(static_cast<std::size_t>(config_.batch_size));
    auto targets = ComputeTargets(config_.variant, online_, target_, batch,
                                  config_.gamma);
    Batch<float> b;
    b.inputs = Matrix<float>(static_cast<int>(batch.size()), online_.input_size);
    for (std::size_t i = 0; i < batch.size(); ++i) {
      std::copy(batch[i].obs.begin(), batch[i].obs.end(),
                b.inputs.row(static_cast<int>(i)).begin());
      b.actions.push_back(batch[i].action);
    }
    b.targets = std::move(targets);
    auto lg = Backward(online_, b);
    AdamStep(online_, lg.grads, adam_);
    return lg.loss;
  }

  Json Sidecar() const {
    return Json{{"episode", episode_},
                {"epsilon", schedule_.epsilon},
                {"rng_state",
                 {{"action", internal::Hex64(action_rng_.state())},
                  {"replay", internal::Hex64(buffer_.rng().state())}}},
                {"config_hash", ConfigHash(config_)},
                {"variant", VariantName(config_.variant)},
                {"architecture", ArchitectureName(online_.arch)},
                {"obs_size", online_.input_size}};
  }

  void SaveState(const std::filesystem::path& path) const {
    const auto tmp = path.string() + ".tmp";
    {
      std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
      if (!os) throw CheckpointError("cannot open " + tmp + " for writing");
      os.write(internal::kResumeMagic.data(), internal::kResumeMagic.size());
      io::WritePod<std::uint32_t>(os, internal::kResumeVersion);
      const std::string hash = ConfigHash(config_);
      io::WritePod<std::uint32_t>(os, static_cast<std::uint32_t>(hash.size()));
      os.write(hash.data(), static_cast<std::streamsize>(hash.size()));
      io::WritePod<std::int32_t>(os, episode_);
      io::WritePod<double>(os, schedule_.epsilon);
      io::WritePod<std::uint64_t>(os, action_rng_.state());
      WriteNetwork(os, online_);
      WriteNetwork(os, target_);
      io::WritePod<std::int64_t>(os, adam_.step);
      WriteNetwork(os, adam_.m);
      WriteNetwork(os, adam_.v);
      io::WritePod<std::uint64_t>(os, buffer_.rng().state());
      io::WritePod<std::uint64_t>(os, buffer_.raw_head());
      const auto& items = buffer_.raw_items();
      io::WritePod<std::uint64_t>(os, items.size());
      for (const auto& t : items) {
        internal::WritePacked(os, t.obs);
        io::WritePod<std::int32_t>(os, t.action);
        io::WritePod<double>(os, t.reward);
        internal::WritePacked(os, t.next_obs);
        io::WritePod<std::uint16_t>(os, internal::MaskBits(t.next_phase_mask));
        io::WritePod<std::uint8_t>(os, t.done ? 1 : 0);
      }
      if (!os.flush()) throw CheckpointError("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
  }

  void LoadState(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw CheckpointError("cannot open resume state " + path.string());
    std::array<char, 4> magic{};
    if (!is.read(magic.data(), magic.size()) ||
        magic != internal::kResumeMagic) {
      throw CheckpointError("not a resume state file: " + path.string());
    }
    if (io::ReadPod<std::uint32_t>(is) != internal::kResumeVersion) {
      throw CheckpointError("unsupported resume state version");
    }
    const auto hash_len = io::ReadPod<std::uint32_t>(is);
    if (hash_len > 64) throw CheckpointError("corrupt resume state");
    std::string hash(hash_len, '\0');
    is.read(hash.data(), hash_len);
    if (hash != ConfigHash(config_)) {
      throw CheckpointError("resume state was written with a different configuration");
    }
    const auto episode = io::ReadPod<std::int32_t>(is);
    const auto epsilon = io::ReadPod<double>(is);
    const auto action_state = io::ReadPod<std::uint64_t>(is);
    auto online = ReadNetwork(is);
    auto target = ReadNetwork(is);
    AdamState<float> adam;
    adam.hp = adam_.hp;
    adam.step = io::ReadPod<std::int64_t>(is);
    adam.m = ReadNetwork(is);
    adam.v = ReadNetwork(is);
    if (!SameShape(online, online_) || !SameShape(target, online_) ||
        !SameShape(adam.m, online_) || !SameShape(adam.v, online_)) {
      throw CheckpointError("resume state network shapes do not match config");
    }
    const auto replay_state = io::ReadPod<std::uint64_t>(is);
    const auto head = io::ReadPod<std::uint64_t>(is);
    const auto count = io::ReadPod<std::uint64_t>(is);
    if (count > buffer_.capacity()) throw CheckpointError("corrupt replay buffer");
    std::vector<StoredTransition> items(count);
    for (auto& t : items) {
      t.obs = internal::ReadPacked(is);
      t.action = io::ReadPod<std::int32_t>(is);
      t.reward = io::ReadPod<double>(is);
      t.next_obs = internal::ReadPacked(is);
      t.next_phase_mask = internal::MaskFromBits(io::ReadPod<std::uint16_t>(is));
      t.done = io::ReadPod<std::uint8_t>(is) != 0;
    }
    buffer_.Restore(std::move(items), head, SplitMix64(replay_state));
    episode_ = episode;
    schedule_.epsilon = epsilon;
    action_rng_.set_state(action_state);
    online_ = std::move(online);
    target_ = std::move(target);
    adam_ = std::move(adam);
  }

 private:
  TrainConfig config_;
  Env env_;
  Network<float> online_;
  Network<float> target_;
  AdamState<float> adam_;
  ReplayBuffer buffer_;
  SplitMix64 action_rng_;
  ExplorationSchedule schedule_;
  int episode_ = 0;
};

struct TrainResult {
  std::filesystem::path final_checkpoint;
  std::vector<EpisodeStats> metrics;
};

using EpisodeCallback = std::function<void(const EpisodeStats&)>;

inline std::string EpisodeTag(int episode) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "ep_%06d", episode);
  return buf;
}

// Runs the training loop, writing metrics, checkpoints and traces under
// config.output_dir. If `resume_from` names a resume.state file, the run
// continues from it and the metrics file is truncated to the episodes it
// covers.
inline TrainResult Train(const TrainConfig& config,
                         const EpisodeCallback& on_episode = {},
                         const std::optional<std::filesystem::path>& resume_from = {}) {
  namespace fs = std::filesystem;
  Trainer trainer(config);
  const fs::path dir = config.output_dir;
  const fs::path ckpt_dir = dir / "checkpoints";
  const fs::path trace_dir = dir / "traces";
  const fs::path metrics_path = dir / "metrics.jsonl";
  try {
    fs::create_directories(ckpt_dir);
    if (config.trace_every > 0) fs::create_directories(trace_dir);
  } catch (const fs::filesystem_error& e) {
    throw std::runtime_error(std::string("cannot create output directory: ") + e.what());
  }

  TrainResult result;
  if (resume_from) {
    trainer.LoadState(*resume_from);
    if (trainer.episodes_done() > config.episodes) {
      throw std::runtime_error("resume state is past the requested episode count");
    }
    auto previous = fs::exists(metrics_path) ? ReadMetrics(metrics_path)
                                             : std::vector<EpisodeStats>{};
    if (static_cast<int>(previous.size()) < trainer.episodes_done()) {
      throw std::runtime_error("metrics file is shorter than the resume point");
    }
    previous.resize(trainer.episodes_done());
    result.metrics = std::move(previous);
  }

  std::ofstream metrics(metrics_path, std::ios::trunc);
  if (!metrics) throw std::runtime_error("cannot write " + metrics_path.string());
  for (const auto& s : result.metrics) metrics << ToJson(s).dump() << '\n';

  while (trainer.episodes_done() < config.episodes) {
    EpisodeStats stats;
    try {
      stats = trainer.RunEpisode();
    } catch (const std::exception& e) {
      throw std::runtime_error("episode " +
                               std::to_string(trainer.episodes_done() + 1) +
                               ": " + e.what());
    }
    metrics << ToJson(stats).dump() << '\n';
    if (!metrics) {
      throw std::runtime_error("episode " + std::to_string(stats.episode) +
                               ": failed writing metrics");
    }
    if (config.trace_every > 0 && stats.episode % config.trace_every == 0) {
      WriteTrace(trace_dir / ("episode_" + EpisodeTag(stats.episode).substr(3) + ".jsonl"),
                 trainer.env().seed(), config.env, trainer.env().trace());
    }
    const int done = trainer.episodes_done();
    if (done % config.sync_period == 0) {
      const auto tag = EpisodeTag(done);
      SaveCheckpoint(ckpt_dir / (tag + ".bin"), trainer.online());
      internal::WriteSidecar(ckpt_dir / (tag + ".json"), trainer.Sidecar());
      trainer.SaveState(dir / "resume.state");
      metrics.flush();
    }
    result.metrics.push_back(stats);
    if (on_episode) on_episode(stats);
  }
  result.final_checkpoint = ckpt_dir / "final.bin";
  SaveCheckpoint(result.final_checkpoint, trainer.online());
  internal::WriteSidecar(ckpt_dir / "final.json", trainer.Sidecar());
  return result;
}

struct EvalReport {
  std::string variant;
  std::string checkpoint;
  int episodes = 0;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  Summary reward;
  Summary steps;
  Summary illegal;
  std::array<int, kNumPlayers> wins{};
  int truncated = 0;  // episodes that hit max_steps
};

inline Json ToJson(const EvalReport& r) {
  return Json{{"variant", r.variant},
              {"checkpoint", r.checkpoint},
              {"episodes", r.episodes},
              {"epsilon", r.epsilon},
              {"seed", std::to_string(r.seed)},
              {"reward", ToJson(r.reward)},
              {"steps", ToJson(r.steps)},
              {"illegal", ToJson(r.illegal)},
              {"wins", r.wins},
              {"truncated", r.truncated},
              {"stdev_denominator", "population"}};
}

struct EvalOptions {
  EnvSpec env;
  int episodes = 1000;
  double epsilon = 0.01;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> trace_dir;
};

// Plays `options.episodes` frozen-policy games with every seat driven by the
// same agent. No parameter is modified.
inline EvalReport Evaluate(AgentVariant variant, const Network<float>* params,
                           const EvalOptions& options,
                           std::string checkpoint_id = "") {
  if (options.episodes < 1) throw std::invalid_argument("evaluation needs at least one episode");
  if (variant != AgentVariant::kRandom) {
    if (params == nullptr) throw std::invalid_argument("evaluation needs a network");
    if (params->input_size != options.env.obs_size()) {
      throw std::invalid_argument("checkpoint input width does not match the environment");
    }
    if (ArchitectureFor(variant) != params->arch) {
      throw std::invalid_argument("checkpoint architecture does not match the variant");
    }
  }
  if (options.trace_dir) std::filesystem::create_directories(*options.trace_dir);
  Env env(options.env);
  SplitMix64 rng(MixSeed(options.seed, 4));
  std::vector<double> rewards, steps, illegal;
  EvalReport report;
  Observation obs(options.env.obs_size());
  StepResult res;
  for (int e = 1; e <= options.episodes; ++e) {
    env.Reset(EvalEpisodeSeed(options.seed, e));
    double total = 0.0;
    int bad = 0;
    while (!env.done()) {
      env.ObserveInto(obs);
      const auto group = GroupForPhase(env.state().phase);
      const auto a = SelectAction(variant, params, obs, group, options.epsilon, rng);
      env.StepNoObservation(a, res);
      total += res.reward;
      if (!res.info.legal) ++bad;
    }
    rewards.push_back(total);
    steps.push_back(env.state().step_count);
    illegal.push_back(bad);
    if (env.state().winner) {
      ++report.wins[*env.state().winner];
    } else {
      ++report.truncated;
    }
    if (options.trace_dir) {
      WriteTrace(*options.trace_dir / ("eval_" + EpisodeTag(e).substr(3) + ".jsonl"),
                 env.seed(), options.env, env.trace());
    }
  }
  report.variant = std::string(VariantName(variant));
  report.checkpoint = std::move(checkpoint_id);
  report.episodes = options.episodes;
  report.epsilon = variant == AgentVariant::kRandom ? 1.0 : options.epsilon;
  report.seed = options.seed;
  report.reward = Summarize(rewards);
  report.steps = Summarize(steps);
  report.illegal = Summarize(illegal);
  return report;
}

}  // namespace sls

#endif  // SLS_TRAINING_HPP_
