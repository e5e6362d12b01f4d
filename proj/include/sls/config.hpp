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

// JSON run configuration. DefaultConfigJson() is the one table of defaults;
// a config file is a partial copy of it. Keys not present in the table are
// rejected, and command-line flags are applied after the file.

#ifndef SLS_CONFIG_HPP_
#define SLS_CONFIG_HPP_

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "sls/training.hpp"

namespace sls {

inline constexpr const char* kOutputDirEnv = "SLS_OUTPUT_DIR";

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ServeConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string static_dir;       // empty: no static files
  int agent_delay_ms = 0;
  double agent_epsilon = 0.0;   // greedy by default
};

struct RunConfig {
  TrainConfig train;
  EvalOptions eval;
  ServeConfig serve;
  std::filesystem::path output_dir;
};

// Default output root: $SLS_OUTPUT_DIR if set and non-empty, else "runs".
inline std::filesystem::path DefaultOutputRoot() {
  const char* v = std::getenv(kOutputDirEnv);
  return (v != nullptr && *v != '\0') ? std::filesystem::path(v)
                                      : std::filesystem::path("runs");
}

inline Json DefaultConfigJson() {
  const TrainConfig t;
  const EvalOptions e;
  const ServeConfig s;
  return Json{
      {"env", ToJson(t.env)},
      {"train",
       {{"variant", VariantName(t.variant)},
        {"episodes", t.episodes},
        {"gamma", t.gamma},
        {"epsilon_start", t.epsilon_start},
        {"epsilon_decay", t.epsilon_decay},
        {"epsilon_min", t.epsilon_min},
        {"learning_rate", t.learning_rate},
        {"batch_size", t.batch_size},
        {"update_period", t.update_period},
        {"sync_period", t.sync_period},
        {"buffer_capacity", t.buffer_capacity},
        {"hidden_units", t.hidden_units},
        {"seed", t.seed},
        {"trace_every", t.trace_every}}},
      {"eval",
       {{"episodes", e.episodes}, {"epsilon", e.epsilon}, {"seed", e.seed}}},
      {"serve",
       {{"host", s.host},
        {"port", s.port},
        {"static_dir", s.static_dir},
        {"agent_delay_ms", s.agent_delay_ms},
        {"agent_epsilon", s.agent_epsilon}}},
      {"output_dir", DefaultOutputRoot().string()}};
}

namespace internal {

inline void CheckKeys(const Json& user, const Json& defaults,
                      const std::string& where) {
  if (!user.is_object()) {
    throw ConfigError(where.empty() ? "config root must be a JSON object"
                                    : "'" + where + "' must be an object");
  }
  for (const auto& [key, value] : user.items()) {
    const std::string path = where.empty() ? key : where + "." + key;
    if (!defaults.contains(key)) throw ConfigError("unknown config key '" + path + "'");
    const Json& def = defaults.at(key);
    if (def.is_object()) {
      CheckKeys(value, def, path);
    } else if (def.is_number() != value.is_number() ||
               def.is_string() != value.is_string()) {
      throw ConfigError("config key '" + path + "' has the wrong type");
    }
  }
}

}  // namespace internal

// Builds a RunConfig from a partial JSON document (already merged with
// flags, if any). Throws ConfigError on unknown keys or bad values.
inline RunConfig ConfigFromJson(const Json& user) {
  const Json defaults = DefaultConfigJson();
  internal::CheckKeys(user, defaults, "");
  Json j = defaults;
  j.merge_patch(user);

  RunConfig c;
  try {
    c.train.env = EnvSpecFromJson(j.at("env"));
    const Json& t = j.at("train");
    const auto variant = VariantFromName(t.at("variant").get<std::string>());
    if (!variant) throw ConfigError("unknown variant '" + t.at("variant").get<std::string>() + "'");
    c.train.variant = *variant;
    c.train.episodes = t.at("episodes").get<int>();
    c.train.gamma = t.at("gamma").get<double>();
    c.train.epsilon_start = t.at("epsilon_start").get<double>();
    c.train.epsilon_decay = t.at("epsilon_decay").get<double>();
    c.train.epsilon_min = t.at("epsilon_min").get<double>();
    c.train.learning_rate = t.at("learning_rate").get<double>();
    c.train.batch_size = t.at("batch_size").get<int>();
    c.train.update_period = t.at("update_period").get<int>();
    c.train.sync_period = t.at("sync_period").get<int>();
    c.train.buffer_capacity = t.at("buffer_capacity").get<int>();
    c.train.hidden_units = t.at("hidden_units").get<int>();
    c.train.seed = t.at("seed").get<std::uint64_t>();
    c.train.trace_every = t.at("trace_every").get<int>();

    const Json& e = j.at("eval");
    c.eval.env = c.train.env;
    c.eval.episodes = e.at("episodes").get<int>();
    c.eval.epsilon = e.at("epsilon").get<double>();
    c.eval.seed = e.at("seed").get<std::uint64_t>();

    const Json& s = j.at("serve");
    c.serve.host = s.at("host").get<std::string>();
    c.serve.port = s.at("port").get<int>();
    c.serve.static_dir = s.at("static_dir").get<std::string>();
    c.serve.agent_delay_ms = s.at("agent_delay_ms").get<int>();
    c.serve.agent_epsilon = s.at("agent_epsilon").get<double>();

    c.output_dir = j.at("output_dir").get<std::string>();
  } catch (const Json::exception& ex) {
    throw ConfigError(std::string("bad config value: ") + ex.what());
  }
  try {
    c.train.env.Validate();
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(ex.what());
  }
  if (c.eval.episodes < 1) throw ConfigError("eval.episodes must be >= 1");
  if (!(c.eval.epsilon >= 0 && c.eval.epsilon <= 1)) {
    throw ConfigError("eval.epsilon must lie in [0, 1]");
  }
  if (c.serve.port < 0 || c.serve.port > 65535) throw ConfigError("serve.port out of range");
  if (c.serve.agent_delay_ms < 0) throw ConfigError("serve.agent_delay_ms must be >= 0");
  return c;
}

inline Json ReadConfigFile(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path.string());
  try {
    return Json::parse(is);
  } catch (const Json::exception& ex) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " + ex.what());
  }
}

}  // namespace sls

#endif  // SLS_CONFIG_HPP_
