// Copyright 2026 The rsegm Authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "rsegm/cli.hpp"
#include "rsegm/errors.hpp"
#include "rsegm/generators.hpp"
#include "rsegm/problem_io.hpp"
#include "rsegm/trace_io.hpp"

namespace rsegm {
namespace {

namespace fs = std::filesystem;

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("saddle_test_" + std::string(::testing::UnitTest::GetInstance()
                                             ->current_test_info()
                                             ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int cli(std::vector<std::string> args) {
    args.insert(args.begin(), "saddle");
    std::vector<char*> argv;
    for (std::string& a : args) argv.push_back(a.data());
    testing::internal::CaptureStdout();
    const int code = run_cli(static_cast<int>(argv.size()), argv.data());
    out_ = testing::internal::GetCapturedStdout();
    return code;
  }

  static std::string read(const std::string& file) {
    std::ifstream in(file);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
  std::string out_;
};

using ProblemIo = TempDir;
using Cli = TempDir;

TEST_F(ProblemIo, RoundTripWithMatrixFile) {
  const SaddleProblem p = generate_lp_known_solution(4, 7, 2);
  save_problem(path("lp.json"), p);
  EXPECT_TRUE(fs::exists(path("lp.mtx")));
  const SaddleProblem q = load_problem(path("lp.json"));
  EXPECT_EQ(q.kind(), ProblemKind::kLp);
  EXPECT_EQ(q.matrix().to_triplets(), p.matrix().to_triplets());
  EXPECT_EQ(*q.known_optimum(), *p.known_optimum());
  EXPECT_TRUE(std::equal(q.c().begin(), q.c().end(), p.c().begin()));
}

TEST_F(ProblemIo, InlineTriplets) {
  const nlohmann::json doc = nlohmann::json::parse(R"({
    "kind": "lp", "m": 1, "n": 2,
    "matrix": {"triplets": [[0, 1, 1.0]]},
    "b": [1], "c": [1, 1], "known_optimum": [0, 0, 0], "dual_nonneg_flag": true})");
  const SaddleProblem p = problem_from_json(doc);
  EXPECT_TRUE(p.dual_nonnegative());
  EXPECT_EQ(p.matrix().nnz(), 1u);
  const nlohmann::json back = problem_to_json(p);
  EXPECT_EQ(back["matrix"]["triplets"][0][1], 1);
}

TEST_F(ProblemIo, Errors) {
  EXPECT_THROW(load_problem(path("missing.json")), IoError);
  std::ofstream(path("bad.json")) << "{not json";
  EXPECT_THROW(load_problem(path("bad.json")), IoError);
  const nlohmann::json short_b = nlohmann::json::parse(
      R"({"kind": "bilinear", "m": 2, "n": 1, "matrix": {"triplets": []}, "b": [1], "c": [0]})");
  EXPECT_THROW(problem_from_json(short_b), StructuralError);
}

TEST_F(ProblemIo, EnsembleCsvLayout) {
  const SaddleProblem p = generate_bilinear(6, 6, 3, 1.0, 1);
  SolverOptions o;
  o.restarts = 2;
  o.inner_iters = 50;
  const SolverConfig c = resolve_config(p, o, p.zero_iterate());
  std::ostringstream out;
  write_ensemble_csv(out, run_trials(p, c, p.zero_iterate(), 3, 4));
  const std::string csv = out.str();
  EXPECT_NE(csv.find("# base_seed: 4"), std::string::npos);
  EXPECT_NE(csv.find("checkpoint,median,q10,q90,n_ok,n_failed\n0,"), std::string::npos);
}

TEST_F(Cli, GenerateKinds) {
  EXPECT_EQ(cli({"generate", "--kind", "bilinear", "--m", "100", "--n", "120", "--rank",
                 "10", "--density", "0.05", "--seed", "7", "--out", path("b.json")}),
            kExitOk);
  EXPECT_NE(out_.find("m=100 n=120"), std::string::npos);
  EXPECT_TRUE(fs::exists(path("b.mtx")));
  EXPECT_EQ(cli({"generate", "--kind", "lp", "--m", "20", "--n", "50", "--seed", "3",
                 "--out", path("lp.json")}),
            kExitOk);
  EXPECT_TRUE(load_problem(path("lp.json")).known_optimum().has_value());
  EXPECT_EQ(cli({"generate", "--kind", "counterexample", "--out", path("ce.json")}),
            kExitOk);
  const SaddleProblem ce = load_problem(path("ce.json"));
  EXPECT_EQ(ce.matrix().to_dense(), (std::vector<double>{0, 1}));
  EXPECT_EQ(ce.b()[0], 1.0);
  EXPECT_EQ(cli({"generate", "--kind", "qp", "--out", path("x.json")}), kExitUsage);
}

TEST_F(Cli, SolveCounterexample) {
  ASSERT_EQ(cli({"generate", "--kind", "counterexample", "--out", path("ce.json")}), kExitOk);
  std::ofstream(path("z0.json")) << "[5, 3, 1]";
  ASSERT_EQ(cli({"solve", "--problem", path("ce.json"), "--algo", "det-restart", "--eps",
                 "1e-6", "--z0", path("z0.json"), "--out", path("ce.jsonl")}),
            kExitOk);
  EXPECT_NE(out_.find("config: algo=det-restart"), std::string::npos);
  std::ifstream in(path("ce.jsonl"));
  std::string line, last;
  std::getline(in, line);
  const nlohmann::json header = nlohmann::json::parse(line);
  EXPECT_EQ(header["type"], "header");
  EXPECT_EQ(header["config"]["algorithm"], "det-restart");
  while (std::getline(in, line)) last = line;
  const auto sol = nlohmann::json::parse(last)["solution"].get<std::vector<double>>();
  for (double v : sol) EXPECT_NEAR(v, 0.0, 1e-6);
}

TEST_F(Cli, FullOracleWithUnitProbabilityIsDeterministicEgm) {
  ASSERT_EQ(cli({"generate", "--m", "6", "--n", "5", "--rank", "3", "--seed", "2", "--out",
                 path("b.json")}),
            kExitOk);
  ASSERT_EQ(cli({"solve", "--problem", path("b.json"), "--oracle", "full", "--p", "1",
                 "--restarts-T", "3", "--inner-K", "40", "--out", path("s.jsonl")}),
            kExitOk);
  ASSERT_EQ(cli({"solve", "--problem", path("b.json"), "--algo", "det-restart",
                 "--restarts-T", "3", "--inner-K", "40", "--tau",
                 "0", "--out", path("d.jsonl")}),
            kExitUsage);  // tau must be positive
  const auto last_solution = [&](const std::string& f) {
    std::ifstream in(f);
    std::string line, last;
    while (std::getline(in, line)) last = line;
    return nlohmann::json::parse(last)["solution"].get<std::vector<double>>();
  };
  const nlohmann::json header =
      nlohmann::json::parse(read(path("s.jsonl")).substr(0, read(path("s.jsonl")).find('\n')));
  const std::string tau = nlohmann::json(header["config"]["tau"].get<double>()).dump();
  ASSERT_EQ(cli({"solve", "--problem", path("b.json"), "--algo", "det-restart",
                 "--restarts-T", "3", "--inner-K", "40", "--tau", tau, "--out",
                 path("d.jsonl")}),
            kExitOk);
  EXPECT_EQ(last_solution(path("s.jsonl")), last_solution(path("d.jsonl")));
}

TEST_F(Cli, LazyMatchesDense) {
  ASSERT_EQ(cli({"generate", "--m", "30", "--n", "20", "--rank", "5", "--seed", "4", "--out",
                 path("b.json")}),
            kExitOk);
  const std::vector<std::string> base = {"solve", "--problem", path("b.json"), "--oracle",
                                         "coord-fro", "--restarts-T", "2", "--inner-K",
                                         "20000", "--seed", "3"};
  auto with = [&](std::vector<std::string> extra) {
    std::vector<std::string> a = base;
    a.insert(a.end(), extra.begin(), extra.end());
    return a;
  };
  ASSERT_EQ(cli(with({"--out", path("dense.jsonl")})), kExitOk);
  ASSERT_EQ(cli(with({"--lazy", "--out", path("lazy.jsonl")})), kExitOk);
  auto solution = [&](const std::string& f) {
    std::ifstream in(f);
    std::string line, last;
    while (std::getline(in, line)) last = line;
    return nlohmann::json::parse(last)["solution"].get<std::vector<double>>();
  };
  const auto d = solution(path("dense.jsonl"));
  const auto l = solution(path("lazy.jsonl"));
  ASSERT_EQ(d.size(), l.size());
  for (std::size_t k = 0; k < d.size(); ++k) EXPECT_NEAR(d[k], l[k], 1e-9 * (1 + std::abs(d[k])));
}

TEST_F(Cli, MultiTrialCsv) {
  ASSERT_EQ(cli({"generate", "--m", "8", "--n", "8", "--rank", "4", "--out", path("b.json")}),
            kExitOk);
  ASSERT_EQ(cli({"solve", "--problem", path("b.json"), "--restarts-T", "3", "--trials", "4",
                 "--threads", "2", "--out", path("e.csv")}),
            kExitOk);
  const std::string csv = read(path("e.csv"));
  EXPECT_NE(csv.find("# trials: 4"), std::string::npos);
  EXPECT_NE(csv.find("checkpoint,median"), std::string::npos);
}

TEST_F(Cli, BenchIsDeterministicAndCheaperThanDeterministic) {
  ASSERT_EQ(cli({"generate", "--m", "100", "--n", "100", "--rank", "5", "--seed", "7",
                 "--out", path("b.json")}),
            kExitOk);
  const std::vector<std::string> args = {"bench", "--problem", path("b.json"), "--eps",
                                         "1e-6", "--seed", "5", "--k-mult", "0.05",
                                         "--algo", "rsegm,det-restart", "--out"};
  auto run = [&](const std::string& out) {
    std::vector<std::string> a = args;
    a.push_back(out);
    return cli(a);
  };
  ASSERT_EQ(run(path("b1.csv")), kExitOk);
  ASSERT_EQ(run(path("b2.csv")), kExitOk);
  auto rows = [&](const std::string& f) {
    std::ifstream in(f);
    std::vector<std::vector<std::string>> out;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::vector<std::string> cells;
      std::stringstream s(line);
      std::string cell;
      while (std::getline(s, cell, ',')) cells.push_back(cell);
      out.push_back(cells);
    }
    return out;
  };
  auto r1 = rows(path("b1.csv"));
  auto r2 = rows(path("b2.csv"));
  ASSERT_EQ(r1.size(), 3u);
  for (auto* r : {&r1, &r2}) {
    for (auto& row : *r) row[4] = "";  // wall time
  }
  EXPECT_EQ(r1, r2);
  ASSERT_EQ(r1[1][7], "ok");
  ASSERT_EQ(r1[2][7], "ok");
  EXPECT_LT(std::stoll(r1[1][2]), std::stoll(r1[2][2]));

  std::vector<std::string> single = {"bench", "--problem", path("b.json"), "--eps", "1e-3",
                                     "--algo", "rsegm", "--out", path("one.csv")};
  ASSERT_EQ(cli(single), kExitOk);
  EXPECT_EQ(rows(path("one.csv")).size(), 2u);
}

TEST_F(Cli, VerifySuites) {
  EXPECT_EQ(cli({"verify", "--suite", "sharpness"}), kExitOk);
  EXPECT_NE(out_.find("sharpness"), std::string::npos);
  EXPECT_EQ(out_.find("unbiasedness"), std::string::npos);
  EXPECT_EQ(cli({"verify", "--suite", "unbiasedness", "--inject-bias", "1.01"}), kExitFailure);
  EXPECT_EQ(cli({"verify"}), kExitOk);
  EXPECT_EQ(cli({"verify", "--suite", "nope"}), kExitUsage);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(cli({}), kExitUsage);
  EXPECT_EQ(cli({"solve"}), kExitUsage);
  EXPECT_EQ(cli({"solve", "--problem", path("missing.json"), "--restarts-T", "1"}),
            kExitFailure);
  EXPECT_EQ(cli({"--help"}), kExitOk);
}

}  // namespace
}  // namespace rsegm
