// Copyright 2026 The fmppi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "json.hpp"

#include "test_util.h"

namespace {

namespace fs = std::filesystem;
using fmppi::testing::SourcePath;

struct Result {
  int code = 0;
  std::string stderr_text;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("fmppi_cli_" + std::string(info->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Result Cli(const std::string& args) {
    const fs::path err = dir_ / "stderr.txt";
    const std::string command = std::string(FMPPI_CLI) + " " + args +
                                " > " + (dir_ / "stdout.txt").string() +
                                " 2> " + err.string();
    const int status = std::system(command.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, Read(err)};
  }

  static std::string Read(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
  }

  // shipped config with edits applied, written into the test directory
  fs::path Edited(const std::string& name,
                  const std::vector<std::pair<std::string, std::string>>& edits) {
    std::string text = Read(SourcePath("configs/" + name));
    for (const auto& [from, to] : edits) {
      const auto pos = text.find(from);
      EXPECT_NE(pos, std::string::npos) << from;
      text.replace(pos, from.size(), to);
    }
    const fs::path path = dir_ / name;
    std::ofstream(path) << text;
    return path;
  }

  static int Rows(const std::string& csv) {
    int rows = 0;
    for (std::size_t p = csv.find("\r\n"); p != std::string::npos;
         p = csv.find("\r\n", p + 2)) {
      ++rows;
    }
    return rows - 1;
  }

  fs::path dir_;
};

TEST_F(CliTest, RepeatedSeedsGiveSeparateLogs) {
  const fs::path cfg = Edited("quadrotor_goal.cfg",
                              {{"samples: 800", "samples: 64"},
                               {"duration: 10.0", "duration: 0.2"}});
  const fs::path out = dir_ / "out";
  const Result r = Cli("run --config " + cfg.string() + " --out " +
                       out.string() + " --seed 7 --seed 8");
  ASSERT_EQ(r.code, 0) << r.stderr_text;
  for (const char* seed : {"seed_7", "seed_8"}) {
    EXPECT_TRUE(fs::exists(out / seed / "log.csv")) << seed;
    EXPECT_TRUE(fs::exists(out / seed / "solves.csv")) << seed;
    EXPECT_TRUE(fs::exists(out / seed / "metrics.json")) << seed;
    EXPECT_EQ(Rows(Read(out / seed / "log.csv")), 40);
  }
  EXPECT_FALSE(fs::exists(out / "seed_0"));
  EXPECT_NE(Read(out / "seed_7" / "log.csv"), Read(out / "seed_8" / "log.csv"));
}

TEST_F(CliTest, ShippedGoalConfigProducesLogAndMetrics) {
  const fs::path out = dir_ / "out";
  const Result r = Cli("run --config " + SourcePath("configs/quadrotor_goal.cfg") +
                       " --out " + out.string());
  ASSERT_EQ(r.code, 0) << r.stderr_text;
  EXPECT_EQ(Rows(Read(out / "seed_0" / "log.csv")), 2000);
  const auto metrics =
      nlohmann::json::parse(Read(out / "seed_0" / "metrics.json"));
  EXPECT_FALSE(metrics["goal_reach_time"].is_null());
  EXPECT_EQ(metrics["failed"], false);
}

TEST_F(CliTest, InvalidConfigGivesMachineReadableError) {
  const fs::path cfg = Edited("quadrotor_goal.cfg",
                              {{"inner_rate: 200.0", "inner_rate: 210.0"},
                               {"lambda: 1.0", "lambda: -1.0"}});
  const fs::path out = dir_ / "out";
  const Result r =
      Cli("run --config " + cfg.string() + " --out " + out.string());
  EXPECT_NE(r.code, 0);
  const auto error = nlohmann::json::parse(r.stderr_text);
  EXPECT_EQ(error["error"], "configuration");
  const std::string message = error["message"];
  EXPECT_NE(message.find("loop"), std::string::npos) << message;
  EXPECT_NE(message.find("solver.lambda"), std::string::npos) << message;
  // rejected before running
  EXPECT_FALSE(fs::exists(out / "seed_0"));
}

TEST_F(CliTest, BadFlagsRejected) {
  const std::string cfg = SourcePath("configs/lqr.cfg");
  EXPECT_NE(Cli("run --config " + cfg + " --gradient-engine adjoint").code, 0);
  EXPECT_NE(Cli("run --config " + cfg + " --workers 0").code, 0);
  EXPECT_NE(Cli("run --config " + (dir_ / "absent.cfg").string()).code, 0);
  EXPECT_NE(Cli("").code, 0);
}

TEST_F(CliTest, ValidateLqrIsByteIdentical) {
  const std::string cfg = SourcePath("configs/lqr.cfg");
  const fs::path a = dir_ / "a", b = dir_ / "b";
  const std::string flags = " --samples 256 --samples 1024 --seed 0 --seed 1";
  ASSERT_EQ(Cli("validate-lqr --config " + cfg + " --out " + a.string() + flags)
                .code,
            0);
  ASSERT_EQ(Cli("validate-lqr --config " + cfg + " --out " + b.string() +
                flags + " --workers 2")
                .code,
            0);
  const std::string csv = Read(a / "lqr_gains.csv");
  EXPECT_EQ(csv, Read(b / "lqr_gains.csv"));
  EXPECT_EQ(Rows(csv), 4);
  EXPECT_EQ(csv.substr(0, csv.find("\r\n")),
            "K,seed,gain_error,spectral_radius,F_p,F_v");
}

TEST_F(CliTest, BenchWritesNineRows) {
  const fs::path out = dir_ / "out";
  const Result r = Cli("bench --config " + SourcePath("configs/bench.cfg") +
                       " --out " + out.string());
  ASSERT_EQ(r.code, 0) << r.stderr_text;
  const std::string csv = Read(out / "timings.csv");
  EXPECT_EQ(Rows(csv), 9);
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  int row = 0;
  while (std::getline(lines, line)) {
    double values[6];
    std::istringstream fields(line);
    std::string field;
    for (double& v : values) {
      std::getline(fields, field, ',');
      v = std::stod(field);
    }
    EXPECT_EQ(values[0], (10 + 5 * (row / 3)));
    EXPECT_EQ(values[1], (400 + 400 * (row % 3)));
    EXPECT_EQ(values[2], 11);
    EXPECT_GE(values[4], values[3]) << line;
    ++row;
  }
}

}  // namespace
