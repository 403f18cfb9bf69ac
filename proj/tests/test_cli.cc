// Copyright 2026 The hazboost Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "cli.hpp"

namespace hazboost {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("hazboost_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, SimulateThenTrain) {
  EXPECT_EQ(run({"simulate", "--family", "lambda1", "--n", "100", "--seed", "1",
                 "--out", path("d.csv")})
                .code,
            0);
  const Result r = run({"train", "--data", path("d.csv"), "--m", "50", "--l",
                        "2", "--out", path("m.txt")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(path("m.txt")).rfind("hazboost-model 1\n", 0), 0u);
}

TEST_F(CliTest, UsageErrors) {
  Result r = run({"train", "--m", "5"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("--data"), std::string::npos);
  r = run({"train", "--data", "x.csv", "--bogus"});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"cv", "--data", "x.csv", "--m", "300:100:50"}).code, 2);
}

TEST_F(CliTest, HelpDocumentsFlagsAndDefaults) {
  const std::vector<std::pair<std::string, std::vector<std::string>>> expected{
      {"simulate",
       {"--family", "--n", "5000", "--irrelevant", "--rate", "--seed", "42",
        "--horizon", "--uniform-censoring", "--out", "--truth"}},
      {"train",
       {"--data", "--m", "100", "--l", "--nu", "0.1", "--quantiles", "10",
        "--unweighted-quantiles", "--categorical", "--no-impute",
        "--dump-grid", "--out"}},
      {"cv",
       {"--data", "--l", "1,2,3,4", "--m", "100:300:50", "--k", "5", "--seed",
        "7", "--nu", "--out"}},
      {"predict", {"--model", "--data", "--out"}},
      {"evaluate",
       {"--model", "--data", "--truth", "--metrics", "l2,auc", "--auc-grid",
        "20", "--points-per-subject", "--seed", "--out"}},
      {"importance", {"--model", "--bootstrap", "--seed", "--data", "--out"}},
      {"validate", {"--data", "--categorical"}},
  };
  for (const auto& [cmd, flags] : expected) {
    const Result r = run({cmd, "--help"});
    EXPECT_EQ(r.code, 0) << cmd;
    for (const auto& f : flags) {
      EXPECT_NE(r.out.find(f), std::string::npos) << cmd << " " << f;
    }
  }
  const Result top = run({"--help"});
  EXPECT_EQ(top.code, 0);
  EXPECT_NE(top.out.find("--threads"), std::string::npos);
  EXPECT_NE(top.out.find("--verbose"), std::string::npos);
  EXPECT_NE(top.out.find("--config"), std::string::npos);
}

TEST_F(CliTest, PipelineIsByteIdenticalOnRerun) {
  const auto pipeline = [&](const std::string& tag) {
    std::vector<std::string> outputs;
    const auto p = [&](const std::string& n) { return path(tag + n); };
    EXPECT_EQ(run({"simulate", "--family", "lambda1", "--n", "200", "--seed",
                   "3", "--out", p("train.csv"), "--truth", p("truth")})
                  .code,
              0);
    EXPECT_EQ(run({"simulate", "--family", "lambda1", "--n", "200", "--seed",
                   "4", "--out", p("test.csv")})
                  .code,
              0);
    const Result cv = run({"cv", "--data", p("train.csv"), "--l", "1,2", "--m",
                           "10:20:10", "--k", "3"});
    EXPECT_EQ(cv.code, 0) << cv.err;
    EXPECT_EQ(run({"train", "--data", p("train.csv"), "--m", "20", "--l", "2",
                   "--out", p("model.txt")})
                  .code,
              0);
    const Result ev = run({"evaluate", "--model", p("model.txt"), "--data",
                           p("test.csv"), "--truth", p("truth"), "--auc-grid",
                           "5"});
    EXPECT_EQ(ev.code, 0) << ev.err;
    const Result imp = run({"importance", "--model", p("model.txt")});
    const Result pred =
        run({"predict", "--model", p("model.txt"), "--data", p("test.csv")});
    EXPECT_EQ(pred.code, 0);
    return std::vector<std::string>{slurp(p("train.csv")), slurp(p("truth")),
                                    cv.out, slurp(p("model.txt")), ev.out,
                                    imp.out, pred.out};
  };
  const auto a = pipeline("a_");
  const auto b = pipeline("b_");
  EXPECT_EQ(a, b);

  // cv: header, one row per (L, M), a single selected row.
  std::istringstream cv(a[2]);
  std::string line;
  std::getline(cv, line);
  EXPECT_EQ(line, "l,m,mean_risk,valid_folds,selected,fold_1,fold_2,fold_3");
  int rows = 0, selected = 0;
  while (std::getline(cv, line)) {
    ++rows;
    selected += line.find(",3,1,") != std::string::npos;
  }
  EXPECT_EQ(rows, 4);
  EXPECT_EQ(selected, 1);

  // evaluate: l2 row, then model and true AUC curves.
  EXPECT_EQ(a[4].rfind("metric,t,value,pair_count\nl2,,", 0), 0u);
  EXPECT_NE(a[4].find("\nauc,"), std::string::npos);
  EXPECT_NE(a[4].find("\nauc_true,"), std::string::npos);
  EXPECT_EQ(a[5].rfind("variable,raw,relative,ci_lower,ci_upper\ntime,", 0), 0u);
  EXPECT_EQ(a[6].rfind("id,start,end,hazard,cumulative_hazard\n", 0), 0u);
}

TEST_F(CliTest, ConfigFileSuppliesFlagsCommandLineWins) {
  {
    std::ofstream cfg(path("run.cfg"));
    cfg << "# simulation settings\nfamily = lambda4\nn = 30\nseed=5\n";
  }
  ASSERT_EQ(run({"simulate", "--config", path("run.cfg"), "--out", path("a.csv")})
                .code,
            0);
  ASSERT_EQ(run({"simulate", "--family", "lambda4", "--n", "30", "--seed", "5",
                 "--out", path("b.csv")})
                .code,
            0);
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  ASSERT_EQ(run({"simulate", "--config", path("run.cfg"), "--n", "12", "--out",
                 path("c.csv")})
                .code,
            0);
  std::ifstream in(path("c.csv"));
  std::string line, last;
  while (std::getline(in, line)) last = line;
  EXPECT_EQ(last.substr(0, 3), "12,");

  EXPECT_EQ(run({"simulate", "--config", path("missing.cfg")}).code, 2);
}

TEST_F(CliTest, ValidationErrorsExitOne) {
  {
    std::ofstream bad(path("bad.csv"));
    bad << "id,time,x,followup,event\n1,0,0.5,,\n1,,,2,0\n";
  }
  Result r = run({"validate", "--data", path("bad.csv")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("no observed events"), std::string::npos);
  r = run({"train", "--data", path("bad.csv"), "--out", path("m.txt")});
  EXPECT_EQ(r.code, 1);
  {
    std::ofstream broken(path("broken.csv"));
    broken << "id,time,x,followup,event\n1,0,0.5\n";
  }
  r = run({"validate", "--data", path("broken.csv")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
  {
    std::ofstream good(path("good.csv"));
    good << "id,time,x,followup,event\n1,0,0.5,,\n1,,,2,1\n";
  }
  r = run({"validate", "--data", path("good.csv")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "ok: 1 subjects, 1 events\n");
}

TEST_F(CliTest, VerboseLogsIsoTimestamps) {
  const Result r = run({"simulate", "--family", "lambda1", "--n", "5",
                        "--verbose", "--out", path("d.csv")});
  EXPECT_EQ(r.code, 0);
  // e.g. 2026-01-01T12:00:00.000+00:00 [info] ...
  ASSERT_GE(r.err.size(), 20u);
  EXPECT_EQ(r.err[4], '-');
  EXPECT_EQ(r.err[10], 'T');
  EXPECT_NE(r.err.find("[info]"), std::string::npos);
}

TEST_F(CliTest, ImportanceBootstrap) {
  ASSERT_EQ(run({"simulate", "--family", "lambda1", "--n", "150", "--seed", "2",
                 "--out", path("d.csv")})
                .code,
            0);
  ASSERT_EQ(run({"train", "--data", path("d.csv"), "--m", "10", "--out",
                 path("m.txt")})
                .code,
            0);
  Result r = run({"importance", "--model", path("m.txt"), "--bootstrap", "3"});
  EXPECT_EQ(r.code, 2);
  r = run({"importance", "--model", path("m.txt"), "--bootstrap", "3", "--seed",
           "4", "--data", path("d.csv")});
  EXPECT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  // time row carries both interval ends.
  EXPECT_EQ(std::count(line.begin(), line.end(), ','), 4);
  EXPECT_NE(line.back(), ',');
}

TEST_F(CliTest, EvaluateWithoutTruthRejectsL2) {
  ASSERT_EQ(run({"simulate", "--family", "lambda1", "--n", "80", "--out",
                 path("d.csv")})
                .code,
            0);
  ASSERT_EQ(run({"train", "--data", path("d.csv"), "--m", "5", "--out",
                 path("m.txt")})
                .code,
            0);
  EXPECT_EQ(run({"evaluate", "--model", path("m.txt"), "--data", path("d.csv")})
                .code,
            2);
  const Result r = run({"evaluate", "--model", path("m.txt"), "--data",
                        path("d.csv"), "--metrics", "auc", "--auc-times",
                        "0.3,0.6"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("auc,0.3,"), std::string::npos);
  EXPECT_NE(r.out.find("auc,0.6,"), std::string::npos);
}

}  // namespace
}  // namespace hazboost
