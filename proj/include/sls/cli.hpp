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

// The `sls` command: train, eval, baseline, plot, replay, serve.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 runtime failure
// (including a trace that does not replay).

#ifndef SLS_CLI_HPP_
#define SLS_CLI_HPP_

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sls/config.hpp"
#include "sls/curves.hpp"
#include "sls/http_server.hpp"
#include "sls/session.hpp"
#include "sls/trace.hpp"
#include "sls/training.hpp"

namespace sls {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

namespace internal {

// A flag that lands on a config-table key when given.
template <typename T>
struct Flag {
  std::optional<T> value;
  const char* key;  // "section.name" or "name"
};

template <typename T>
void Overlay(Json& j, const Flag<T>& f) {
  if (!f.value) return;
  const std::string key = f.key;
  const auto dot = key.find('.');
  if (dot == std::string::npos) {
    j[key] = *f.value;
  } else {
    j[key.substr(0, dot)][key.substr(dot + 1)] = *f.value;
  }
}

// Variant recorded in the checkpoint's sidecar, else implied by the
// architecture.
inline AgentVariant VariantForCheckpoint(const std::filesystem::path& ckpt,
                                         const Network<float>& net) {
  auto sidecar = ckpt;
  sidecar.replace_extension(".json");
  std::ifstream is(sidecar);
  if (is) {
    try {
      const Json j = Json::parse(is);
      if (auto v = VariantFromName(j.value("variant", ""))) return *v;
    } catch (const Json::exception&) {
    }
  }
  return net.arch == Architecture::kDueling ? AgentVariant::kDueling
                                            : AgentVariant::kDqn;
}

inline void WriteJsonFile(const std::filesystem::path& path, const Json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::trunc);
  if (!(os << j.dump(2) << '\n')) throw std::runtime_error("cannot write " + path.string());
}

inline std::vector<std::filesystem::path> ExpandTraces(
    const std::vector<std::string>& inputs) {
  namespace fs = std::filesystem;
  std::vector<fs::path> out;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::recursive_directory_iterator(in)) {
        if (e.is_regular_file() && e.path().extension() == ".jsonl" &&
            e.path().filename() != "metrics.jsonl") {
          found.push_back(e.path());
        }
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else {
      out.emplace_back(in);
    }
  }
  return out;
}

}  // namespace internal

inline int Run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  using internal::Flag;
  CLI::App app{"So Long Sucker: rules engine, DQN-family training, evaluation and play server", "sls"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (keys as in `sls defaults`)")
      ->check(CLI::ExistingFile);

  // train
  auto* train = app.add_subcommand("train", "train a dqn / ddqn / dueling agent");
  Flag<std::string> t_variant{{}, "train.variant"};
  Flag<int> t_episodes{{}, "train.episodes"};
  Flag<std::uint64_t> t_seed{{}, "train.seed"};
  Flag<int> t_trace{{}, "train.trace_every"};
  std::string t_out, t_resume;
  bool t_quiet = false;
  train->add_option("--variant", t_variant.value, "dqn | ddqn | dueling")
      ->check(CLI::IsMember({"dqn", "ddqn", "dueling"}));
  train->add_option("--episodes", t_episodes.value, "episodes to train")->check(CLI::PositiveNumber);
  train->add_option("--seed", t_seed.value, "run seed");
  train->add_option("--trace-every", t_trace.value, "write a trace every k-th episode (0: never)")
      ->check(CLI::NonNegativeNumber);
  train->add_option("--out", t_out, "run directory (default <output_dir>/<variant>-seed<S>)");
  train->add_option("--resume", t_resume, "continue from a resume.state file")
      ->check(CLI::ExistingFile);
  train->add_flag("--quiet", t_quiet, "no progress lines");

  // eval / baseline
  auto* eval = app.add_subcommand("eval", "evaluate a checkpoint with a frozen policy");
  auto* baseline = app.add_subcommand("baseline", "evaluate the uniform random agent");
  std::string e_checkpoint, e_variant, e_traces, e_report;
  Flag<int> e_episodes{{}, "eval.episodes"};
  Flag<std::uint64_t> e_seed{{}, "eval.seed"};
  Flag<double> e_epsilon{{}, "eval.epsilon"};
  eval->add_option("--checkpoint", e_checkpoint, "checkpoint .bin")->required()->check(CLI::ExistingFile);
  eval->add_option("--variant", e_variant, "override the variant (default: sidecar or architecture)")
      ->check(CLI::IsMember({"dqn", "ddqn", "dueling"}));
  eval->add_option("--epsilon", e_epsilon.value, "exploration rate during evaluation")
      ->check(CLI::Range(0.0, 1.0));
  for (auto* sub : {eval, baseline}) {
    sub->add_option("--episodes", e_episodes.value, "evaluation episodes")->check(CLI::PositiveNumber);
    sub->add_option("--seed", e_seed.value, "evaluation seed");
    sub->add_option("--traces", e_traces, "write one trace per episode into this directory");
    sub->add_option("--report", e_report, "also write the JSON report here");
  }

  // plot
  auto* plot = app.add_subcommand("plot", "moving-average reward/steps curves (CSV + SVG)");
  std::string p_metrics, p_out;
  int p_window = 100;
  plot->add_option("--metrics", p_metrics, "metrics.jsonl from a training run")
      ->required()->check(CLI::ExistingFile);
  plot->add_option("--window", p_window, "moving-average window")->check(CLI::PositiveNumber);
  plot->add_option("--out", p_out, "output directory (default: next to the metrics, curves/)");

  // replay
  auto* replay = app.add_subcommand("replay", "re-simulate traces and verify every record");
  std::vector<std::string> r_traces;
  replay->add_option("--trace", r_traces, "trace file(s) or directories")->required()->check(CLI::ExistingPath);

  // serve
  auto* serve = app.add_subcommand("serve", "HTTP/WebSocket play server");
  Flag<std::string> s_host{{}, "serve.host"};
  Flag<int> s_port{{}, "serve.port"};
  Flag<std::string> s_static{{}, "serve.static_dir"};
  Flag<int> s_delay{{}, "serve.agent_delay_ms"};
  Flag<double> s_eps{{}, "serve.agent_epsilon"};
  std::string s_checkpoint;
  serve->add_option("--checkpoint", s_checkpoint, "default checkpoint for agent seats")
      ->check(CLI::ExistingFile);
  serve->add_option("--port", s_port.value, "TCP port (0: any free port)")->check(CLI::Range(0, 65535));
  serve->add_option("--host", s_host.value, "bind address");
  serve->add_option("--static", s_static.value, "directory with the web UI bundle");
  serve->add_option("--delay-ms", s_delay.value, "pause before each agent move")->check(CLI::NonNegativeNumber);
  serve->add_option("--agent-epsilon", s_eps.value, "agent exploration in play")->check(CLI::Range(0.0, 1.0));

  auto* defaults = app.add_subcommand("defaults", "print the default configuration table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  RunConfig cfg;
  try {
    Json user = config_path.empty() ? Json::object() : ReadConfigFile(config_path);
    if (!user.is_object()) throw ConfigError("config root must be a JSON object");
    internal::Overlay(user, t_variant);
    internal::Overlay(user, t_episodes);
    internal::Overlay(user, t_seed);
    internal::Overlay(user, t_trace);
    internal::Overlay(user, e_episodes);
    internal::Overlay(user, e_seed);
    internal::Overlay(user, e_epsilon);
    internal::Overlay(user, s_host);
    internal::Overlay(user, s_port);
    internal::Overlay(user, s_static);
    internal::Overlay(user, s_delay);
    internal::Overlay(user, s_eps);
    cfg = ConfigFromJson(user);
  } catch (const ConfigError& e) {
    err << "sls: " << e.what() << '\n';
    return kExitUsage;
  }

  namespace fs = std::filesystem;
  try {
    if (*defaults) {
      out << DefaultConfigJson().dump(2) << '\n';
      return kExitOk;
    }

    if (*train) {
      TrainConfig tc = cfg.train;
      tc.output_dir = t_out.empty()
                          ? cfg.output_dir / (std::string(VariantName(tc.variant)) +
                                              "-seed" + std::to_string(tc.seed))
                          : fs::path(t_out);
      std::optional<fs::path> resume;
      if (!t_resume.empty()) resume = t_resume;
      double window_reward = 0, window_steps = 0;
      int window_n = 0;
      auto result = Train(tc, [&](const EpisodeStats& s) {
        window_reward += s.reward;
        window_steps += s.steps;
        ++window_n;
        if (!t_quiet && (s.episode % 100 == 0 || s.episode == tc.episodes)) {
          out << "episode " << s.episode << "  epsilon " << s.epsilon
              << "  mean reward " << window_reward / window_n << "  mean steps "
              << window_steps / window_n << '\n' << std::flush;
          window_reward = window_steps = 0;
          window_n = 0;
        }
      }, resume);
      out << Json{{"output_dir", tc.output_dir.string()},
                  {"final_checkpoint", result.final_checkpoint.string()},
                  {"episodes", result.metrics.size()}}.dump() << '\n';
      return kExitOk;
    }

    if (*eval || *baseline) {
      EvalOptions opts = cfg.eval;
      if (!e_traces.empty()) opts.trace_dir = e_traces;
      EvalReport report;
      if (*baseline) {
        report = Evaluate(AgentVariant::kRandom, nullptr, opts, "");
      } else {
        const auto net = LoadCheckpoint(e_checkpoint);
        const AgentVariant v = e_variant.empty()
                                   ? internal::VariantForCheckpoint(e_checkpoint, net)
                                   : *VariantFromName(e_variant);
        report = Evaluate(v, &net, opts, e_checkpoint);
      }
      const Json j = ToJson(report);
      if (!e_report.empty()) internal::WriteJsonFile(e_report, j);
      out << j.dump(2) << '\n';
      return kExitOk;
    }

    if (*plot) {
      const auto metrics = ReadMetrics(p_metrics);
      if (metrics.empty()) throw std::runtime_error(p_metrics + " holds no episodes");
      if (static_cast<int>(metrics.size()) < p_window) {
        err << "sls: window " << p_window << " is longer than the " << metrics.size()
            << " recorded episodes\n";
        return kExitUsage;
      }
      const fs::path dir = p_out.empty() ? fs::path(p_metrics).parent_path() / "curves" : fs::path(p_out);
      for (const auto& p : WriteCurves(CurvesFromMetrics(metrics, p_window), dir)) {
        out << p.string() << '\n';
      }
      return kExitOk;
    }

    if (*replay) {
      const auto files = internal::ExpandTraces(r_traces);
      if (files.empty()) {
        err << "sls: no trace files found\n";
        return kExitUsage;
      }
      int failed = 0;
      for (const auto& f : files) {
        const auto report = ReplayTraceFile(f);
        if (report.ok()) {
          out << "OK   " << f.string() << " (" << report.steps << " steps)\n";
        } else {
          ++failed;
          out << "FAIL " << f.string() << ": " << report.mismatch->Describe() << '\n';
        }
      }
      if (failed) {
        err << "sls: " << failed << " of " << files.size() << " traces did not replay\n";
        return kExitRuntime;
      }
      return kExitOk;
    }

    if (*serve) {
      ServerOptions so;
      so.default_checkpoint = s_checkpoint;
      so.session.agent_delay_ms = cfg.serve.agent_delay_ms;
      so.session.agent_epsilon = cfg.serve.agent_epsilon;
      so.session.n_chips = cfg.train.env.n_chips;
      if (!s_checkpoint.empty()) LoadCheckpoint(s_checkpoint);  // fail fast
      SessionManager sessions(so);
      HttpOptions ho;
      ho.host = cfg.serve.host;
      ho.port = static_cast<unsigned short>(cfg.serve.port);
      ho.static_dir = cfg.serve.static_dir;
      ho.stop_on_signals = true;
      HttpServer server(sessions, ho);
      server.Start();
      out << "listening on http://" << ho.host << ':' << server.port() << '\n' << std::flush;
      server.Wait();
      return kExitOk;
    }
  } catch (const std::exception& e) {
    err << "sls: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace sls

#endif  // SLS_CLI_HPP_
