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

// Episode trace files (JSON lines).
//
//   line 1:  {"type":"header","format":"sls-trace","version":1,
//             "seed":"<decimal u64>","env":{...EnvSpec...}}
//   line 2+: {"t":1,"player":2,"phase":"choose_pile","action":4,
//             "legal":true,"reward":5.0,"done":false}
//
// The header carries what is needed to re-simulate the episode; every
// following line is one env step in order.

#ifndef SLS_TRACE_HPP_
#define SLS_TRACE_HPP_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sls/env.hpp"

namespace sls {

inline constexpr int kTraceVersion = 1;

inline Json TraceHeader(std::uint64_t seed, const EnvSpec& spec) {
  return Json{{"type", "header"},
              {"format", "sls-trace"},
              {"version", kTraceVersion},
              {"seed", std::to_string(seed)},
              {"env", ToJson(spec)}};
}

inline void WriteTrace(const std::filesystem::path& path, std::uint64_t seed,
                       const EnvSpec& spec,
                       const std::vector<TraceRecord>& records) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write trace " + path.string());
  os << TraceHeader(seed, spec).dump() << '\n';
  for (const auto& r : records) os << ToJson(r).dump() << '\n';
  if (!os.flush()) throw std::runtime_error("write failed: " + path.string());
}

struct TraceMismatch {
  int line = 0;  // 1-based line in the file
  std::string field;
  std::string expected;
  std::string actual;

  std::string Describe() const {
    return "line " + std::to_string(line) + ": field '" + field +
           "' expected " + expected + " but trace has " + actual;
  }
};

struct ReplayReport {
  int steps = 0;
  std::optional<TraceMismatch> mismatch;
  bool ok() const { return !mismatch.has_value(); }
};

// Re-simulates a trace from its header and checks every recorded field.
// Throws std::runtime_error when the file cannot be read or parsed.
inline ReplayReport ReplayTrace(std::istream& is) {
  ReplayReport report;
  std::string line;
  int lineno = 0;
  if (!std::getline(is, line)) throw std::runtime_error("empty trace");
  ++lineno;
  Json header;
  try {
    header = Json::parse(line);
  } catch (const Json::exception& e) {
    throw std::runtime_error(std::string("trace header is not JSON: ") + e.what());
  }
  if (header.value("type", "") != "header" ||
      header.value("format", "") != "sls-trace") {
    throw std::runtime_error("trace is missing its header line");
  }
  if (header.at("version").get<int>() != kTraceVersion) {
    throw std::runtime_error("unsupported trace version");
  }
  const auto seed = std::stoull(header.at("seed").get<std::string>());
  Env env(EnvSpecFromJson(header.at("env")));
  env.Reset(seed);

  auto fail = [&](std::string field, auto expected, auto actual) {
    std::ostringstream e, a;
    e << std::boolalpha << expected;
    a << std::boolalpha << actual;
    report.mismatch = TraceMismatch{lineno, std::move(field), e.str(), a.str()};
    return report;
  };

  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    TraceRecord rec;
    try {
      rec = TraceRecordFromJson(Json::parse(line));
    } catch (const std::exception& e) {
      throw std::runtime_error("line " + std::to_string(lineno) +
                               ": malformed record: " + e.what());
    }
    if (env.done()) return fail("episode_end", "no further records", "a record");
    const GameState& s = env.state();
    if (rec.player != s.current_player) {
      return fail("player", s.current_player, rec.player);
    }
    if (rec.phase != s.phase) {
      return fail("phase", PhaseName(s.phase), PhaseName(rec.phase));
    }
    if (rec.action < 0 || rec.action >= kNumActions) {
      return fail("action", "an id in [0, 10)", rec.action);
    }
    auto res = env.Step(rec.action);
    ++report.steps;
    if (rec.t != env.state().step_count) {
      return fail("t", env.state().step_count, rec.t);
    }
    if (rec.legal != res.info.legal) return fail("legal", res.info.legal, rec.legal);
    if (rec.reward != res.reward) {
      std::ostringstream e, a;
      e.precision(17);
      a.precision(17);
      e << res.reward;
      a << rec.reward;
      return fail("reward", e.str(), a.str());
    }
    if (rec.done != res.done) return fail("done", res.done, rec.done);
  }
  if (!env.done()) {
    ++lineno;
    return fail("episode_end", "more records", "end of file");
  }
  return report;
}

inline ReplayReport ReplayTraceFile(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open trace " + path.string());
  return ReplayTrace(is);
}

}  // namespace sls

#endif  // SLS_TRACE_HPP_
