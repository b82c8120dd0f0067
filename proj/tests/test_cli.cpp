#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("brt_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args) const {
    const std::string cmd = std::string(BRT_PARETO_EXE) + " " + args + " > " + (dir_ / "stdout.txt").string() +
                            " 2> " + (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string read(const std::string& name) const {
    std::ifstream in(dir_ / name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  void write(const std::string& name, const std::string& text) const { std::ofstream(dir_ / name) << text; }

  fs::path dir_;
};

const char* kThreeStation = R"({"stations": 3,
  "segments": [{"cost": 2, "improvement": 1}, {"cost": 1, "improvement": 1}],
  "municipalities": [{"id": "m1", "firstSegment": 1, "lastSegment": 1, "share": "2/3"},
                     {"id": "m2", "firstSegment": 2, "lastSegment": 2, "share": "1/3"}],
  "odPairs": [{"origin": 1, "destination": 2, "potential": 1, "threshold": 1},
              {"origin": 1, "destination": 3, "potential": 2, "threshold": 1}],
  "componentCap": "inf"})";

}  // namespace

TEST_F(Cli, GenerateScenarioAndFamily) {
  EXPECT_EQ(run("generate --stations 25 --cost unit --demand even --split equal --seed 7 -o " + path("inst.json")), 0);
  EXPECT_NE(read("inst.json").find("\"meta\""), std::string::npos);
  EXPECT_EQ(run("generate --family intractable --stations 6 -o " + path("hard.json")), 0);
  EXPECT_EQ(run("generate --cost middle --demand termini -o " + path("mt.json")), 0);
}

TEST_F(Cli, InvalidFlagsExitTwo) {
  EXPECT_EQ(run("generate --cost zigzag -o " + path("x.json")), 2);
  EXPECT_EQ(run("generate --components 0 -o " + path("x.json")), 2);
  EXPECT_EQ(run("generate --municipalities 40 -o " + path("x.json")), 2);
  EXPECT_EQ(run("solve"), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  write("bad.json", "{\"stations\": 2}");
  EXPECT_EQ(run("solve " + path("bad.json") + " --response linear"), 2);
}

TEST_F(Cli, SolveWritesFrontFiles) {
  write("ex.json", kThreeStation);
  EXPECT_EQ(run("solve " + path("ex.json") + " --response minimprov --svg"), 0);
  EXPECT_EQ(read("ex.front.csv"),
            "budget_num,budget_den,passengers_num,passengers_den,cost,components,witness_bitmask\n"
            "3,1,3,1,2,1,1\n0,1,0,1,0,0,0\n");
  EXPECT_NE(read("ex.front.json").find("\"iterations\""), std::string::npos);
  EXPECT_NE(read("ex.front.svg").find("<svg"), std::string::npos);
  EXPECT_EQ(read("ex.front.cost.csv"), "passengers_num,passengers_den,cost\n3,1,2\n0,1,0\n");
  EXPECT_EQ(run("solve " + path("ex.json") + " --response linear --out " + path("ex")), 2);
}

TEST_F(Cli, SolveWithoutDemandGivesSingleRow) {
  write("empty.json", R"({"stations": 3, "segments": [{"cost": 1, "improvement": 1}, {"cost": 1, "improvement": 1}],
    "municipalities": [{"id": "m", "firstSegment": 1, "lastSegment": 2, "share": 1}], "odPairs": []})");
  EXPECT_EQ(run("solve " + path("empty.json") + " --response linear"), 0);
  EXPECT_EQ(read("empty.front.csv"),
            "budget_num,budget_den,passengers_num,passengers_den,cost,components,witness_bitmask\n0,1,0,1,0,0,0\n");
}

TEST_F(Cli, ResourceLimitExitsThreeWithPartialOutput) {
  ASSERT_EQ(run("generate --cost middle --demand hubs --seed 3 -o " + path("g.json")), 0);
  EXPECT_EQ(run("solve " + path("g.json") + " --response minimprov --node-limit 5"), 3);
  EXPECT_EQ(read("g.front.csv").rfind("# incomplete\n", 0), 0u);
  EXPECT_NE(read("g.front.json").find("\"incomplete\": true"), std::string::npos);
}

TEST_F(Cli, VerifyPassesAndCatchesCorruption) {
  write("ex.json", kThreeStation);
  EXPECT_EQ(run("verify " + path("ex.json")), 0);
  EXPECT_NE(read("stdout.txt").find("differs from the cost front"), std::string::npos);
  EXPECT_EQ(run("verify " + path("ex.json") + " --components 1,inf"), 0);
  ASSERT_EQ(run("solve " + path("ex.json") + " --response minimprov"), 0);
  EXPECT_EQ(run("verify " + path("ex.json") + " --response minimprov --check-file " + path("ex.front.csv")), 0);
  std::string csv = read("ex.front.csv");
  csv.replace(csv.find("3,1,3,1"), 7, "3,1,2,1");
  write("bad.csv", csv);
  EXPECT_EQ(run("verify " + path("ex.json") + " --response minimprov --check-file " + path("bad.csv")), 1);
  EXPECT_NE(read("stdout.txt").find("first divergent point at index 0"), std::string::npos);
}

TEST_F(Cli, BenchSmokeGrid) {
  EXPECT_EQ(run("bench --stations 8 --out " + path("bench")), 0);
  EXPECT_NE(read("stdout.txt").find("288 fronts"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "bench" / "summary.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "bench" / "cells.csv"));
}
