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

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sls/cli.hpp"
#include "test_util.hpp"

namespace sls {
namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult RunCli(std::vector<std::string> args) {
  args.insert(args.begin(), "sls");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = Run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

int CountLines(const fs::path& p) {
  std::ifstream is(p);
  int n = 0;
  for (std::string line; std::getline(is, line);) n += !line.empty();
  return n;
}

void WriteText(const fs::path& p, const std::string& text) {
  std::ofstream os(p);
  os << text;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override { dir_ = sls::testing::ScratchDir("cli"); }
  void TearDown() override { fs::remove_all(dir_); }
  std::string Path(const std::string& rel) const { return (dir_ / rel).string(); }
  fs::path dir_;
};

TEST_F(CliTest, DefaultsPrintsTable) {
  const auto r = RunCli({"defaults"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j.at("train").at("gamma"), 0.95);
  EXPECT_EQ(j.at("train").at("batch_size"), 64);
  EXPECT_EQ(j.at("env").at("n_chips"), 5);
  EXPECT_EQ(j.at("eval").at("episodes"), 1000);
}

TEST_F(CliTest, BaselineIsDeterministic) {
  const auto a = RunCli({"baseline", "--episodes", "20", "--seed", "3"});
  const auto b = RunCli({"baseline", "--episodes", "20", "--seed", "3"});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto j = Json::parse(a.out);
  EXPECT_EQ(j.at("variant"), "random");
  EXPECT_EQ(j.at("episodes"), 20);
  const auto c = RunCli({"baseline", "--episodes", "20", "--seed", "4"});
  EXPECT_NE(a.out, c.out);
}

TEST_F(CliTest, TrainOneEpisodeThenEvalAndPlot) {
  const auto run = Path("run");
  const auto r = RunCli({"train", "--episodes", "1", "--out", run, "--quiet"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(CountLines(fs::path(run) / "metrics.jsonl"), 1);
  const auto summary = Json::parse(r.out);
  EXPECT_EQ(summary.at("episodes"), 1);

  const auto ckpt = (fs::path(run) / "checkpoints" / "final.bin").string();
  const auto report_path = Path("report.json");
  const auto e = RunCli({"eval", "--checkpoint", ckpt, "--episodes", "3", "--report", report_path});
  ASSERT_EQ(e.code, kExitOk) << e.err;
  const auto report = Json::parse(std::ifstream(report_path));
  EXPECT_EQ(report.at("variant"), "dqn");
  EXPECT_EQ(report.at("episodes"), 3);
  EXPECT_EQ(report.at("epsilon"), 0.01);

  const auto p = RunCli({"plot", "--metrics", (fs::path(run) / "metrics.jsonl").string(),
                         "--window", "1"});
  ASSERT_EQ(p.code, kExitOk) << p.err;
  EXPECT_TRUE(fs::exists(fs::path(run) / "curves" / "reward.csv"));
  EXPECT_TRUE(fs::exists(fs::path(run) / "curves" / "steps.svg"));
  const auto too_wide = RunCli({"plot", "--metrics", (fs::path(run) / "metrics.jsonl").string()});
  EXPECT_EQ(too_wide.code, kExitUsage);
}

TEST_F(CliTest, EvalInfersDuelingFromArchitecture) {
  const auto run = Path("duel");
  ASSERT_EQ(RunCli({"train", "--variant", "dueling", "--episodes", "1", "--out", run, "--quiet"}).code,
            kExitOk);
  const auto ckpt = fs::path(run) / "checkpoints" / "final.bin";
  fs::remove(fs::path(run) / "checkpoints" / "final.json");  // no sidecar
  const auto e = RunCli({"eval", "--checkpoint", ckpt.string(), "--episodes", "2"});
  ASSERT_EQ(e.code, kExitOk) << e.err;
  EXPECT_EQ(Json::parse(e.out).at("variant"), "dueling");
  const auto bad = RunCli({"eval", "--checkpoint", ckpt.string(), "--variant", "dqn",
                           "--episodes", "2"});
  EXPECT_EQ(bad.code, kExitRuntime);
  EXPECT_NE(bad.err.find("architecture"), std::string::npos);
}

TEST_F(CliTest, ReplayAcceptsTrainerTracesAndFlagsTampering) {
  const auto run = Path("traced");
  ASSERT_EQ(RunCli({"train", "--episodes", "2", "--trace-every", "1", "--out", run, "--quiet"}).code,
            kExitOk);
  const auto traces = fs::path(run) / "traces";
  const auto ok = RunCli({"replay", "--trace", traces.string()});
  ASSERT_EQ(ok.code, kExitOk) << ok.out << ok.err;
  EXPECT_NE(ok.out.find("OK   "), std::string::npos);
  // A whole run directory also works; metrics.jsonl is skipped.
  EXPECT_EQ(RunCli({"replay", "--trace", run}).code, kExitOk);

  // Flip the "legal" field of the second step record (line 3).
  const auto file = traces / "episode_000001.jsonl";
  std::vector<std::string> lines;
  {
    std::ifstream is(file);
    for (std::string l; std::getline(is, l);) lines.push_back(l);
  }
  auto rec = Json::parse(lines[2]);
  rec["legal"] = !rec.at("legal").get<bool>();
  lines[2] = rec.dump();
  std::string text;
  for (const auto& l : lines) text += l + "\n";
  WriteText(file, text);

  const auto bad = RunCli({"replay", "--trace", file.string()});
  EXPECT_EQ(bad.code, kExitRuntime);
  EXPECT_NE(bad.out.find("FAIL"), std::string::npos);
  EXPECT_NE(bad.out.find("line 3"), std::string::npos) << bad.out;
  EXPECT_NE(bad.out.find("legal"), std::string::npos) << bad.out;
}

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(RunCli({}).code, kExitUsage);
  EXPECT_EQ(RunCli({"bogus"}).code, kExitUsage);
  EXPECT_EQ(RunCli({"train", "--bogus-flag"}).code, kExitUsage);
  EXPECT_EQ(RunCli({"train", "--variant", "ppo"}).code, kExitUsage);
  EXPECT_EQ(RunCli({"train", "--episodes", "0"}).code, kExitUsage);
  EXPECT_EQ(RunCli({"eval"}).code, kExitUsage);
  EXPECT_EQ(RunCli({"eval", "--checkpoint", Path("missing.bin")}).code, kExitUsage);
  EXPECT_EQ(RunCli({"replay", "--trace", Path("nothing-here")}).code, kExitUsage);
  EXPECT_EQ(RunCli({"--config", Path("missing.json"), "defaults"}).code, kExitUsage);
  EXPECT_EQ(RunCli({"--help"}).code, kExitOk);
}

TEST_F(CliTest, ConfigFileAndFlagPrecedence) {
  const auto cfg = Path("cfg.json");
  WriteText(cfg, R"({"train": {"episodes": 3, "seed": 9}, "env": {"max_steps": 80}})");
  const auto from_file = Path("from_file");
  ASSERT_EQ(RunCli({"--config", cfg, "train", "--out", from_file, "--quiet"}).code, kExitOk);
  EXPECT_EQ(CountLines(fs::path(from_file) / "metrics.jsonl"), 3);
  for (const auto& s : ReadMetrics(fs::path(from_file) / "metrics.jsonl")) {
    EXPECT_LE(s.steps, 80);
  }

  const auto from_flag = Path("from_flag");
  ASSERT_EQ(RunCli({"--config", cfg, "train", "--episodes", "2", "--out", from_flag, "--quiet"}).code,
            kExitOk);
  EXPECT_EQ(CountLines(fs::path(from_flag) / "metrics.jsonl"), 2);

  WriteText(cfg, R"({"train": {"episodez": 3}})");
  const auto bad = RunCli({"--config", cfg, "defaults"});
  EXPECT_EQ(bad.code, kExitUsage);
  EXPECT_NE(bad.err.find("episodez"), std::string::npos);
  WriteText(cfg, "{not json");
  EXPECT_EQ(RunCli({"--config", cfg, "defaults"}).code, kExitUsage);
}

TEST_F(CliTest, OutputRootFromEnvironment) {
  ::setenv(kOutputDirEnv, dir_.c_str(), 1);
  const auto r = RunCli({"train", "--episodes", "1", "--seed", "5", "--quiet"});
  ::unsetenv(kOutputDirEnv);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "dqn-seed5" / "metrics.jsonl"));
}

TEST_F(CliTest, ResumeThroughCli) {
  const auto run = Path("resume");
  const auto cfg = Path("cfg.json");
  WriteText(cfg, R"({"train": {"sync_period": 2}, "env": {"max_steps": 60}})");
  ASSERT_EQ(RunCli({"--config", cfg, "train", "--episodes", "2", "--out", run, "--quiet"}).code,
            kExitOk);
  const auto r = RunCli({"--config", cfg, "train", "--episodes", "4", "--out", run, "--quiet",
                         "--resume", (fs::path(run) / "resume.state").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(CountLines(fs::path(run) / "metrics.jsonl"), 4);
}

}  // namespace
}  // namespace sls
