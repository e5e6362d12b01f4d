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

// Live game sessions for human-vs-agent play, independent of transport.
//
// Every change to a session is a Frame {version, event, state}; versions
// start at 1 (the "SessionStarted" frame) and grow by exactly one per frame.
// An accepted move produces a "MoveApplied" frame followed by one frame per
// game event. Subscribers get frames in version order; they are invoked
// with the session lock held, so they must not call back into the session.
//
// Agent and random seats only ever play legal moves here: the shaped-reward
// penalty is a training device, so in play the agent's argmax runs over the
// exact legal set.

#ifndef SLS_SESSION_HPP_
#define SLS_SESSION_HPP_

#include <array>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <stop_token>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "sls/agents.hpp"
#include "sls/checkpoint.hpp"
#include "sls/env.hpp"
#include "sls/game.hpp"
#include "sls/game_json.hpp"

namespace sls {

// An error carrying the HTTP status the transport should answer with.
class ApiError : public std::runtime_error {
 public:
  ApiError(int status, Json body)
      : std::runtime_error(body.value("error", "error")),
        status_(status),
        body_(std::move(body)) {}
  ApiError(int status, const char* message)
      : ApiError(status, Json{{"error", message}}) {}
  ApiError(int status, const std::string& message)
      : ApiError(status, message.c_str()) {}

  int status() const { return status_; }
  const Json& body() const { return body_; }

 private:
  int status_;
  Json body_;
};

enum class SeatKind : std::uint8_t { kHuman, kAgent, kRandom };

constexpr std::string_view SeatKindName(SeatKind k) {
  switch (k) {
    case SeatKind::kHuman: return "human";
    case SeatKind::kAgent: return "agent";
    case SeatKind::kRandom: return "random";
  }
  return "unknown";
}

struct SeatSpec {
  SeatKind kind = SeatKind::kRandom;
  std::optional<AgentVariant> variant;  // agents only; inferred if absent
  std::string checkpoint;               // agents only; empty: server default
};

struct SessionRequest {
  std::array<SeatSpec, kNumPlayers> seats{};
  std::optional<std::uint64_t> seed;
  bool spectator = false;
  std::optional<int> agent_delay_ms;
};

// Request body:
//   {"seats": ["human", "random", {"type": "agent", "variant": "dqn",
//              "checkpoint": "path"}, ...4 entries],
//    "seed": 5 | "5", "spectator": false, "agent_delay_ms": 0}
inline SessionRequest SessionRequestFromJson(const Json& j) {
  auto bad = [](const std::string& m) { return ApiError(400, m); };
  if (!j.is_object()) throw bad("request body must be a JSON object");
  SessionRequest r;
  for (const auto& [key, _] : j.items()) {
    if (key != "seats" && key != "seed" && key != "spectator" &&
        key != "agent_delay_ms") {
      throw bad("unknown field '" + key + "'");
    }
  }
  if (!j.contains("seats") || !j["seats"].is_array() ||
      j["seats"].size() != kNumPlayers) {
    throw bad("'seats' must be an array of 4 seat descriptions");
  }
  for (int i = 0; i < kNumPlayers; ++i) {
    const Json& s = j["seats"][i];
    std::string type;
    if (s.is_string()) {
      type = s.get<std::string>();
    } else if (s.is_object() && s.contains("type") && s["type"].is_string()) {
      type = s["type"].get<std::string>();
    } else {
      throw bad("seat " + std::to_string(i) + " must be a string or an object with 'type'");
    }
    SeatSpec& seat = r.seats[i];
    if (type == "human") {
      seat.kind = SeatKind::kHuman;
    } else if (type == "random") {
      seat.kind = SeatKind::kRandom;
    } else if (type == "agent" || VariantFromName(type)) {
      seat.kind = SeatKind::kAgent;
      if (type != "agent") seat.variant = VariantFromName(type);
      if (s.is_object()) {
        if (s.contains("variant")) {
          auto v = VariantFromName(s["variant"].get<std::string>());
          if (!v || *v == AgentVariant::kRandom) {
            throw bad("seat " + std::to_string(i) + ": unknown variant");
          }
          seat.variant = v;
        }
        if (s.contains("checkpoint")) seat.checkpoint = s["checkpoint"].get<std::string>();
      }
      if (seat.variant == AgentVariant::kRandom) seat.kind = SeatKind::kRandom;
    } else {
      throw bad("seat " + std::to_string(i) + ": unknown seat type '" + type + "'");
    }
  }
  try {
    if (j.contains("seed")) {
      const Json& s = j["seed"];
      if (s.is_string()) {
        const auto text = s.get<std::string>();
        if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
          throw bad("seed must be an unsigned integer");
        }
        r.seed = std::stoull(text);
      } else if (s.is_number_unsigned()) {
        r.seed = s.get<std::uint64_t>();
      } else {
        throw bad("seed must be an unsigned integer");
      }
    }
    if (j.contains("spectator")) r.spectator = j["spectator"].get<bool>();
    if (j.contains("agent_delay_ms")) {
      r.agent_delay_ms = j["agent_delay_ms"].get<int>();
      if (*r.agent_delay_ms < 0) throw bad("agent_delay_ms must be >= 0");
    }
  } catch (const Json::exception& e) {
    throw bad(std::string("malformed field: ") + e.what());
  } catch (const std::logic_error&) {
    throw bad("seed must be an unsigned integer");
  }
  return r;
}

struct Frame {
  std::int64_t version = 0;
  Json event;
  std::shared_ptr<const Json> state;  // canonical game state after the frame
  ActionMask legal{};
};

inline Json MaskJson(const ActionMask& m) {
  Json out = Json::array();
  for (bool b : m) out.push_back(b);
  return out;
}

inline Json ToJson(const Frame& f) {
  return Json{{"version", f.version},
              {"event", f.event},
              {"state", *f.state},
              {"legal_actions", MaskJson(f.legal)}};
}

struct ResolvedSeat {
  SeatKind kind = SeatKind::kRandom;
  AgentVariant variant = AgentVariant::kRandom;
  std::string checkpoint;
  std::shared_ptr<const Network<float>> net;
};

inline Json ToJson(const ResolvedSeat& s) {
  Json j{{"type", SeatKindName(s.kind)}};
  if (s.kind == SeatKind::kAgent) {
    j["variant"] = VariantName(s.variant);
    j["checkpoint"] = s.checkpoint;
  }
  return j;
}

struct SessionOptions {
  int agent_delay_ms = 0;
  double agent_epsilon = 0.0;
  int n_chips = kDefaultChips;
};

class Session {
 public:
  using Callback = std::function<void(const Frame&)>;

  Session(std::string id, std::array<ResolvedSeat, kNumPlayers> seats,
          std::uint64_t seed, SessionOptions options)
      : id_(std::move(id)),
        seats_(std::move(seats)),
        options_(options),
        seed_(seed),
        agent_rng_(MixSeed(seed, 17)) {
    env_spec_.n_chips = options.n_chips;
    GameConfig cfg = env_spec_.game_config(seed);
    state_ = NewGame(cfg);
    current_state_json_ = std::make_shared<const Json>(ToJson(state_));
    Json seats_json = Json::array();
    for (const auto& s : seats_) seats_json.push_back(ToJson(s));
    PublishLocked(Json{{"type", "SessionStarted"},
                       {"seats", seats_json},
                       {"seed", std::to_string(seed)},
                       {"starter", state_.current_player}});
    worker_ = std::jthread([this](std::stop_token st) { WorkerLoop(st); });
  }

  ~Session() {
    worker_.request_stop();
    cv_.notify_all();
  }

  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  const std::string& id() const { return id_; }
  const std::array<ResolvedSeat, kNumPlayers>& seats() const { return seats_; }

  std::int64_t version() const {
    std::lock_guard lock(mu_);
    return version_;
  }

  GameState state() const {
    std::lock_guard lock(mu_);
    return state_;
  }

  // Full snapshot: canonical state plus mask, legal moves and seats.
  Json Snapshot() const {
    std::lock_guard lock(mu_);
    return SnapshotLocked();
  }

  // Applies a human move. Returns the version of the "MoveApplied" frame.
  std::int64_t Submit(int seat, Move move) {
    std::int64_t applied_version = 0;
    {
      std::lock_guard lock(mu_);
      if (state_.terminal()) throw ApiError(409, "game is over");
      if (seat < 0 || seat >= kNumPlayers) throw ApiError(400, "seat out of range");
      if (seats_[seat].kind != SeatKind::kHuman) {
        throw ApiError(409, "seat " + std::to_string(seat) + " is not human-controlled");
      }
      if (seat != state_.current_player) throw ApiError(409, "not your turn");
      if (auto why = CheckMove(state_, move)) {
        Json legal = Json::array();
        for (Move m : LegalMoves(state_)) legal.push_back(ToJson(m));
        throw ApiError(422, Json{{"error", "illegal move"},
                                 {"reason", IllegalReasonName(*why)},
                                 {"legal_moves", legal}});
      }
      applied_version = ApplyLocked(move);
    }
    cv_.notify_all();
    return applied_version;
  }

  struct Subscription {
    std::uint64_t token = 0;
    Json snapshot;  // state as of snapshot["version"]; frames follow it
  };

  Subscription Subscribe(Callback cb) {
    std::lock_guard lock(mu_);
    const std::uint64_t token = ++next_token_;
    subscribers_.emplace(token, std::move(cb));
    return {token, SnapshotLocked()};
  }

  void Unsubscribe(std::uint64_t token) {
    std::lock_guard lock(mu_);
    subscribers_.erase(token);
  }

  // Frames with version > `after`, in order.
  std::vector<Frame> FramesSince(std::int64_t after) const {
    std::lock_guard lock(mu_);
    std::vector<Frame> out;
    for (const auto& f : log_) {
      if (f.version > after) out.push_back(f);
    }
    return out;
  }

  // Blocks until a human must act or the game is over. Returns false on
  // timeout.
  bool WaitIdle(std::chrono::milliseconds timeout) const {
    std::unique_lock lock(mu_);
    return idle_cv_.wait_for(lock, timeout, [&] { return !AgentToMoveLocked(); });
  }

 private:
  bool AgentToMoveLocked() const {
    return !state_.terminal() &&
           seats_[state_.current_player].kind != SeatKind::kHuman;
  }

  Json SnapshotLocked() const {
    Json legal = Json::array();
    for (Move m : LegalMoves(state_)) legal.push_back(ToJson(m));
    Json seats_json = Json::array();
    for (const auto& s : seats_) seats_json.push_back(ToJson(s));
    return Json{{"id", id_},
                {"version", version_},
                {"state", *current_state_json_},
                {"legal_actions", MaskJson(LegalActionMask(state_))},
                {"legal_moves", legal},
                {"seats", seats_json},
                {"seed", std::to_string(seed_)},
                {"done", state_.terminal()}};
  }

  void PublishLocked(Json event) {
    Frame f;
    f.version = ++version_;
    f.event = std::move(event);
    f.state = current_state_json_;
    f.legal = LegalActionMask(state_);
    for (const auto& [_, cb] : subscribers_) cb(f);
    log_.push_back(std::move(f));
  }

  std::int64_t ApplyLocked(Move move) {
    const Player mover = state_.current_player;
    const Phase phase = state_.phase;
    std::vector<GameEvent> events;
    if (auto why = ApplyInPlace(state_, move, events)) {
      throw std::logic_error("session applied an unchecked move");
    }
    current_state_json_ = std::make_shared<const Json>(ToJson(state_));
    PublishLocked(Json{{"type", "MoveApplied"},
                       {"player", mover},
                       {"phase", PhaseName(phase)},
                       {"move", ToJson(move)},
                       {"action", MoveToAction(move)}});
    const std::int64_t v = version_;
    for (const auto& ev : events) PublishLocked(ToJson(ev));
    if (!AgentToMoveLocked()) idle_cv_.notify_all();
    return v;
  }

  Move ChooseAgentMoveLocked() {
    const ResolvedSeat& seat = seats_[state_.current_player];
    const auto legal = LegalMoves(state_);
    if (seat.kind == SeatKind::kRandom ||
        UniformUnit(agent_rng_) < options_.agent_epsilon) {
      return legal[UniformIndex(agent_rng_, legal.size())];
    }
    const Observation obs = Encode(env_spec_, state_);
    const auto q = ForwardOne(*seat.net, std::span<const float>(obs));
    return ActionToMove(*MaskedArgmax(q, LegalActionMask(state_)));
  }

  void WorkerLoop(std::stop_token st) {
    std::unique_lock lock(mu_);
    while (!st.stop_requested()) {
      cv_.wait(lock, st, [&] { return AgentToMoveLocked(); });
      if (st.stop_requested()) return;
      if (options_.agent_delay_ms > 0) {
        // Interruptible pause; re-check afterwards in case of shutdown.
        cv_.wait_for(lock, st, std::chrono::milliseconds(options_.agent_delay_ms),
                     [] { return false; });
        if (st.stop_requested()) return;
        if (!AgentToMoveLocked()) continue;
      }
      ApplyLocked(ChooseAgentMoveLocked());
    }
  }

  const std::string id_;
  const std::array<ResolvedSeat, kNumPlayers> seats_;
  const SessionOptions options_;
  const std::uint64_t seed_;
  EnvSpec env_spec_;

  mutable std::mutex mu_;
  std::condition_variable_any cv_;
  mutable std::condition_variable_any idle_cv_;
  GameState state_;
  std::shared_ptr<const Json> current_state_json_ =
      std::make_shared<const Json>(Json::object());
  std::int64_t version_ = 0;
  std::vector<Frame> log_;
  std::map<std::uint64_t, Callback> subscribers_;
  std::uint64_t next_token_ = 0;
  SplitMix64 agent_rng_;
  std::jthread worker_;  // last: joins before the members above go away
};

struct ServerOptions {
  std::string default_checkpoint;  // used by agent seats that name none
  SessionOptions session;
};

class SessionManager {
 public:
  explicit SessionManager(ServerOptions options = {}) : options_(std::move(options)) {}

  std::shared_ptr<Session> Create(const SessionRequest& req) {
    const bool any_human = std::any_of(req.seats.begin(), req.seats.end(),
                                       [](const SeatSpec& s) { return s.kind == SeatKind::kHuman; });
    if (!any_human && !req.spectator) {
      throw ApiError(422, "a session needs at least one human seat or the spectator flag");
    }
    std::array<ResolvedSeat, kNumPlayers> seats;
    for (int i = 0; i < kNumPlayers; ++i) seats[i] = Resolve(req.seats[i], i);

    SessionOptions opts = options_.session;
    if (req.agent_delay_ms) opts.agent_delay_ms = *req.agent_delay_ms;
    const std::uint64_t n = ++counter_;
    const std::uint64_t seed = req.seed.value_or(n);
    auto session = std::make_shared<Session>(std::to_string(n), std::move(seats), seed, opts);
    std::unique_lock lock(mu_);
    sessions_.emplace(session->id(), session);
    return session;
  }

  std::shared_ptr<Session> Get(const std::string& id) const {
    std::shared_lock lock(mu_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw ApiError(404, "no session '" + id + "'");
    return it->second;
  }

  std::size_t size() const {
    std::shared_lock lock(mu_);
    return sessions_.size();
  }

 private:
  ResolvedSeat Resolve(const SeatSpec& spec, int index) {
    ResolvedSeat seat;
    seat.kind = spec.kind;
    if (spec.kind != SeatKind::kAgent) return seat;
    seat.checkpoint = spec.checkpoint.empty() ? options_.default_checkpoint : spec.checkpoint;
    if (seat.checkpoint.empty()) {
      throw ApiError(422, "seat " + std::to_string(index) +
                              ": agent seat needs a checkpoint (none given, no server default)");
    }
    seat.net = LoadCached(seat.checkpoint, index);
    const AgentVariant inferred = seat.net->arch == Architecture::kDueling
                                      ? AgentVariant::kDueling
                                      : AgentVariant::kDqn;
    seat.variant = spec.variant.value_or(inferred);
    if (ArchitectureFor(seat.variant) != seat.net->arch) {
      throw ApiError(422, "seat " + std::to_string(index) + ": checkpoint architecture does not match variant '" +
                              std::string(VariantName(seat.variant)) + "'");
    }
    if (seat.net->input_size != EnvSpec{.n_chips = options_.session.n_chips}.obs_size()) {
      throw ApiError(422, "seat " + std::to_string(index) + ": checkpoint input width does not match the game");
    }
    return seat;
  }

  std::shared_ptr<const Network<float>> LoadCached(const std::string& path, int index) {
    std::lock_guard lock(cache_mu_);
    auto it = cache_.find(path);
    if (it != cache_.end()) return it->second;
    try {
      auto net = std::make_shared<const Network<float>>(LoadCheckpoint(path));
      cache_.emplace(path, net);
      return net;
    } catch (const std::exception& e) {
      throw ApiError(422, "seat " + std::to_string(index) + ": cannot load checkpoint: " + e.what());
    }
  }

  ServerOptions options_;
  mutable std::shared_mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::mutex cache_mu_;
  std::map<std::string, std::shared_ptr<const Network<float>>> cache_;
  std::atomic<std::uint64_t> counter_{0};
};

}  // namespace sls

#endif  // SLS_SESSION_HPP_
