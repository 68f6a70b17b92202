// Copyright 2026 The BayesGame Authors. All rights reserved.
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


// End-to-end checks of the bayesgame executable.

#include "synthetic_spam.hpp"

#include <bayesgame/serialization.hpp>

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#ifndef BAYESGAME_CLI_PATH
#error "BAYESGAME_CLI_PATH must point at the bayesgame executable"
#endif

namespace bayesgame {
namespace {

namespace fs = std::filesystem;

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           (std::string("bayesgame_cli_") + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write_json(const std::string& name, const Json& j) const {
    std::ofstream(path(name)) << j.dump(2);
    return path(name);
  }

  RunResult run(const std::string& args, const std::string& env = "") const {
    const std::string err_file = path("stderr.txt");
    const std::string cmd = env + " \"" BAYESGAME_CLI_PATH "\" " + args + " 2>\"" + err_file + "\"";
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = slurp(err_file);
    return r;
  }

  static std::string slurp(const std::string& file) {
    std::ifstream in(file);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

Json game_config(bool bounded = true) {
  Json game = Json::parse(R"({
    "X": [[0.1, -0.2], [0.3, 0.05], [-0.1, 0.2], [0.0, 0.1]],
    "y": [1, -0.5, 0.3, 0.2],
    "z": [0, 0.2, -0.1, 0.1],
    "c_l": 0.5,
    "reg_l": 0.5
  })");
  if (bounded) {
    game["learner_set"] = Json{{"type", "l2ball"}, {"radius", 1.0}};
    game["adversary_set"] = Json{{"type", "l2ball"}, {"radius", 1.0}};
  }
  return Json{{"game", game},
              {"prior", Json{{"type", "gamma"}, {"shape", 2.0}, {"scale", 0.5}}},
              {"K", 3},
              {"algorithm", "pg-rbc"},
              {"solver", Json{{"max_iters", 500}, {"gamma", 2.0}, {"trace_every", 50}}}};
}

// Every column but the wall-clock one.
std::string strip_wall_time(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + "\n";
  return out;
}

TEST_F(CliTest, SolveWritesArtifacts) {
  const std::string cfg = write_json("game.json", game_config());
  const RunResult r = run("solve --algo pg-rbc --config \"" + cfg + "\" --out \"" + path("run1") + "\"");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("final residual"), std::string::npos);
  for (const char* f : {"profile.json", "trace.csv", "trace.json", "meta.json"}) {
    EXPECT_TRUE(fs::exists(dir_ / "run1" / f)) << f;
  }
  const Json profile = read_json_file(path("run1/profile.json"));
  EXPECT_EQ(profile["w"].size(), 2u);
  EXPECT_EQ(profile["sigma"].size(), 3u);
  const Json meta = read_json_file(path("run1/meta.json"));
  EXPECT_EQ(meta["version"], kVersion);
  EXPECT_EQ(meta["algorithm"], "pg-rbc");
  EXPECT_EQ(meta["config_hash"].get<std::string>().size(), 16u);
  EXPECT_EQ(slurp(path("run1/trace.csv")).substr(0, 41), "t,residual,error_to_reference,wall_time_s");
}

TEST_F(CliTest, SolveSameSeedIsReproducible) {
  const std::string cfg = write_json("game.json", game_config());
  ASSERT_EQ(run("solve --config \"" + cfg + "\" --seed 7 --out \"" + path("a") + "\"").code, 0);
  ASSERT_EQ(run("solve --config \"" + cfg + "\" --seed 7 --out \"" + path("b") + "\"").code, 0);
  ASSERT_EQ(run("solve --config \"" + cfg + "\" --seed 8 --out \"" + path("c") + "\"").code, 0);
  EXPECT_EQ(slurp(path("a/profile.json")), slurp(path("b/profile.json")));
  EXPECT_EQ(strip_wall_time(slurp(path("a/trace.csv"))), strip_wall_time(slurp(path("b/trace.csv"))));
  EXPECT_EQ(slurp(path("a/meta.json")), slurp(path("b/meta.json")));
  EXPECT_NE(slurp(path("a/profile.json")), slurp(path("c/profile.json")));
  EXPECT_EQ(read_json_file(path("a/meta.json"))["seed"], 7);
}

TEST_F(CliTest, PrgIeOnUnboundedSetsIsConfigError) {
  const std::string cfg = write_json("game.json", game_config(false));
  const RunResult r = run("solve --algo prg-ie --config \"" + cfg + "\" --out \"" + path("x") + "\"");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("bounded"), std::string::npos) << r.err;
}

TEST_F(CliTest, PrgIeAndExtragradientSolve) {
  Json j = game_config();
  j["solver"]["gamma"] = 1e-3;
  j["reference"] = Json{{"tol", 1e-10}};
  const std::string cfg = write_json("game.json", j);
  ASSERT_EQ(run("solve --algo prg-ie --config \"" + cfg + "\" --out \"" + path("p") + "\"").code, 0);
  const std::string trace = slurp(path("p/trace.csv"));
  EXPECT_EQ(trace.find(",,"), std::string::npos) << "reference errors should be filled in";
  const RunResult eg = run("solve --algo extragradient --config \"" + cfg + "\" --out \"" + path("e") + "\"");
  ASSERT_EQ(eg.code, 0) << eg.err;
  EXPECT_TRUE(read_json_file(path("e/trace.json"))["converged"].get<bool>());
}

TEST_F(CliTest, MalformedConfigNamesJsonPath) {
  Json j = game_config();
  j["game"]["X"][1] = Json::array({1.0});
  const std::string cfg = write_json("bad.json", j);
  const RunResult r = run("solve --config \"" + cfg + "\" --out \"" + path("x") + "\"");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("/game/X/1"), std::string::npos) << r.err;

  j = game_config();
  j["solver"]["gamma"] = "fast";
  EXPECT_NE(run("solve --config \"" + write_json("bad2.json", j) + "\"").err.find("/solver/gamma"),
            std::string::npos);

  std::ofstream(path("broken.json")) << "{ not json";
  EXPECT_EQ(run("solve --config \"" + path("broken.json") + "\"").code, 1);
}

TEST_F(CliTest, SolverFailureExitsTwo) {
  Json j = game_config();
  j["extragradient"] = Json{{"tol", 1e-14}, {"max_iters", 1}};
  const RunResult r = run("solve --algo extragradient --config \"" + write_json("g.json", j) + "\" --out \"" +
                          path("x") + "\"");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("last residual"), std::string::npos) << r.err;
}

TEST_F(CliTest, ProbeDecoupledGame) {
  Json j = game_config();
  j["game"]["c_l"] = 0.0;
  j["game"]["reg_l"] = 1.0;
  j["prior"] = Json::parse(R"({"type": "finite", "atoms": [{"p": 1, "v": [0, 0, 0, 0]}]})");
  const std::string cfg = write_json("probe.json", j);
  const RunResult a = run("probe --config \"" + cfg + "\" --seed 3");
  const RunResult b = run("probe --config \"" + cfg + "\" --seed 3");
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const Json diag = Json::parse(a.out);
  EXPECT_GE(diag["lambda_hat"].get<double>(), 1.0 - 1e-9);
  EXPECT_GE(diag["L_hat"].get<double>(), 0.0);
  EXPECT_GE(diag["G_hat"].get<double>(), 0.0);
  EXPECT_EQ(diag["meta"]["seed"], 3);
}

TEST_F(CliTest, ProbeWarnsOnStepPrecondition) {
  Json j = game_config();
  j["solver"]["gamma"] = 0.5;
  const RunResult r = run("probe --algo prg-ie --config \"" + write_json("p.json", j) + "\"");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("warning"), std::string::npos);
}

TEST_F(CliTest, BenchmarkWithDataDirectory) {
  testing::write_synthetic_spam(path("spambase.data"), 150, 1);
  const Json j = Json::parse(R"({
    "train_n": 40, "test_n": 40, "repetitions": 2, "test_draws": 5,
    "priors": [{"type": "gaussian", "mean": 1, "std": 4}],
    "adam": {"total_samples": 40, "batch_size": 20, "epochs": 2},
    "fp_samples": 20
  })");
  const std::string cfg = write_json("bench.json", j);
  const RunResult r =
      run("benchmark --config \"" + cfg + "\" --workers 2 --out \"" + path("bench") + "\"",
          "BAYESGAME_DATA=\"" + dir_.string() + "\"");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("bayes-adam"), std::string::npos);
  const std::string csv = slurp(path("bench/results.csv"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "method,prior_family,prior_params,repetition,rmse");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 2 * 4);
  const Json agg = read_json_file(path("bench/aggregate.json"));
  EXPECT_EQ(agg["aggregates"].size(), 4u);
  const Json meta = read_json_file(path("bench/meta.json"));
  EXPECT_TRUE(meta.contains("config_hash"));
  EXPECT_TRUE(meta.at("standardization").at("applied").get<bool>());
  EXPECT_EQ(meta.at("standardization").at("mean").size(), 57u);
}

TEST_F(CliTest, BenchmarkInvalidDatasetPath) {
  const std::string cfg = write_json("bench.json", Json{{"dataset", path("nope.data")}});
  const RunResult r = run("benchmark --config \"" + cfg + "\" --scale desk --out \"" + path("b") + "\"");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("nope.data"), std::string::npos) << r.err;
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("solve").code, 1);
  EXPECT_EQ(run("solve --config \"" + path("missing.json") + "\"").code, 1);
  const std::string cfg = write_json("game.json", game_config());
  EXPECT_EQ(run("solve --algo newton --config \"" + cfg + "\"").code, 1);
  EXPECT_EQ(run("--version").code, 0);
  EXPECT_EQ(run("--help").code, 0);
}

}  // namespace
}  // namespace bayesgame
