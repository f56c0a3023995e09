// Copyright 2026 The bbtrain Authors
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


#include "bbtrain/cli.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bbtrain/netfile.h"
#include "gtest/gtest.h"

namespace bbtrain {
namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result Call(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  Result result;
  result.code = Dispatch(args, out, err);
  result.out = out.str();
  result.err = err.str();
  return result;
}

std::string Fig6Path() {
  return std::string(BBTRAIN_TEST_DATA_DIR) + "/fig6.bbn";
}

std::filesystem::path Scratch(const std::string& name) {
  const std::filesystem::path dir =
      std::filesystem::path(::testing::TempDir()) / "cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string Slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

TEST(CliTest, UsageErrors) {
  EXPECT_EQ(Call({}).code, kExitUsage);
  EXPECT_EQ(Call({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(Call({"run"}).code, kExitUsage);
  EXPECT_EQ(Call({"run", "--net", Fig6Path(), "--mode", "sideways"}).code,
            kExitUsage);
  EXPECT_EQ(Call({"generate", "--out", Scratch("x.bbn").string(), "--trigger",
                  "wide"})
                .code,
            kExitUsage);
  // Fig. 6 file carries no scenario, so the endpoints are mandatory.
  EXPECT_EQ(Call({"run", "--net", Fig6Path(), "--seed", "1"}).code,
            kExitUsage);
}

TEST(CliTest, HelpSucceeds) {
  const Result r = Call({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("inspect"), std::string::npos);
}

TEST(CliTest, MissingFileIsIoError) {
  const Result r = Call({"inspect", "--net", "/no/such/file.bbn", "--start",
                         "0", "--end", "1"});
  EXPECT_EQ(r.code, kExitIo);
  EXPECT_NE(r.err.find("/no/such/file.bbn"), std::string::npos);
}

TEST(CliTest, MalformedFileIsDataError) {
  const std::filesystem::path path = Scratch("bad.bbn");
  std::ofstream(path) << "bbn 1\nfact 0 1.2\n";
  const Result r =
      Call({"inspect", "--net", path.string(), "--start", "0", "--end", "0"});
  EXPECT_EQ(r.code, kExitData);
  EXPECT_NE(r.err.find("line 2, column 8"), std::string::npos) << r.err;
}

TEST(CliTest, InspectFig6) {
  const Result r = Call({"inspect", "--net", Fig6Path(), "--start", "1",
                         "--end", "5", "--porcelain"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("hops=1\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("rule:0 "), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("contribution=0.5\n"), std::string::npos) << r.out;

  const Result human =
      Call({"inspect", "--net", Fig6Path(), "--start", "2", "--end", "5"});
  ASSERT_EQ(human.code, kExitOk);
  EXPECT_NE(human.out.find("fact 2 --[rule 1"), std::string::npos);
}

TEST(CliTest, DisconnectedPairIsDataError) {
  const Result inspect =
      Call({"inspect", "--net", Fig6Path(), "--start", "5", "--end", "0"});
  EXPECT_EQ(inspect.code, kExitData);
  const Result train =
      Call({"train", "--net", Fig6Path(), "--start", "5", "--start-value",
            "0.5", "--end", "0", "--target", "0.3", "--seed", "1"});
  EXPECT_EQ(train.code, kExitData);
  EXPECT_NE(train.err.find("no path"), std::string::npos) << train.err;
}

TEST(CliTest, RunIsDeterministic) {
  const std::vector<std::string> args = {
      "run",  "--net", Fig6Path(), "--start", "1", "--start-value", "0.6",
      "--end", "5",    "--seed",   "7",       "--no-timing"};
  const Result a = Call(args);
  const Result b = Call(args);
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("end_value"), std::string::npos);
}

TEST(CliTest, UnseededRunReportsSeed) {
  const Result r = Call({"run", "--net", Fig6Path(), "--start", "1",
                         "--start-value", "0.6", "--end", "5"});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.err.rfind("seed=", 0), 0u);
}

TEST(CliTest, GenerateRunTrainSave) {
  const std::filesystem::path net = Scratch("gen.bbn");
  const Result gen = Call({"generate", "--facts", "40", "--rules", "60",
                           "--actions", "5", "--seed", "3", "--out",
                           net.string()});
  ASSERT_EQ(gen.code, kExitOk) << gen.err;
  const NetDocument doc = ParseNetFile(Slurp(net)).value();
  EXPECT_EQ(doc.network.fact_count(), 40u);
  EXPECT_EQ(doc.network.action_count(), 5u);
  ASSERT_TRUE(doc.scenario.has_value());
  const std::string sidecar = Slurp(net.string() + ".scenario");
  EXPECT_NE(sidecar.find("seed=3\n"), std::string::npos);
  EXPECT_NE(sidecar.find("target=" + FormatScalar(doc.scenario->target)),
            std::string::npos);

  // Same seed, same bytes.
  const std::filesystem::path again = Scratch("gen2.bbn");
  ASSERT_EQ(Call({"generate", "--facts", "40", "--rules", "60", "--actions",
                  "5", "--seed", "3", "--out", again.string()})
                .code,
            kExitOk);
  EXPECT_EQ(Slurp(net), Slurp(again));

  if (!doc.scenario->valid) GTEST_SKIP() << "generated pair is disconnected";
  const Result run = Call({"run", "--net", net.string(), "--seed", "1",
                           "--porcelain", "--no-timing"});
  ASSERT_EQ(run.code, kExitOk) << run.err;
  EXPECT_EQ(run.out.rfind("end_value=", 0), 0u);

  const std::filesystem::path trained = Scratch("trained.bbn");
  const Result train =
      Call({"train", "--net", net.string(), "--seed", "1", "--iterations",
            "20", "--errors", "--porcelain", "--save", trained.string()});
  ASSERT_EQ(train.code, kExitOk) << train.err;
  EXPECT_NE(train.out.find("error[19]="), std::string::npos);
  EXPECT_TRUE(ParseNetFile(Slurp(trained)).ok());
}

TEST(CliTest, ExperimentWritesCsv) {
  const std::filesystem::path grid = Scratch("grid.cfg");
  std::ofstream(grid) << "name = tiny\nfact_count = 20\nrule_count = 30\n"
                         "trials = 4\n";
  const std::filesystem::path out = Scratch("exp");
  const Result r = Call({"experiment", "--grid", grid.string(), "--out",
                         out.string(), "--base-seed", "5"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(std::filesystem::exists(out / "trials.csv"));
  EXPECT_TRUE(std::filesystem::exists(out / "summary.csv"));
  EXPECT_NE(r.out.find("tiny"), std::string::npos);

  const std::filesystem::path bad = Scratch("bad.cfg");
  std::ofstream(bad) << "colour = red\n";
  EXPECT_EQ(Call({"experiment", "--grid", bad.string(), "--out", out.string()})
                .code,
            kExitData);
}

}  // namespace
}  // namespace bbtrain
