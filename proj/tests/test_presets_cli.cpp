#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "certamp/presets.hpp"

using namespace certamp;
namespace fs = std::filesystem;

TEST(Config, ParsesKeyValues) {
  auto kv = parse_config(
      "# comment\n"
      "[protocol]\n"
      "n = 64   # trailing\n"
      "  name=\"full\"\n"
      "\n"
      "gamma=0.5\n");
  EXPECT_EQ(kv.size(), 3u);
  EXPECT_EQ(kv.at("n"), "64");
  EXPECT_EQ(kv.at("name"), "full");
  EXPECT_EQ(kv.at("gamma"), "0.5");
  EXPECT_THROW(parse_config("just words\n"), std::invalid_argument);
  EXPECT_THROW(read_config("/nonexistent/certamp.toml"), std::runtime_error);
}

TEST(Config, AppliesOverrides) {
  FullScalePreset p;
  p.apply(parse_config("L = 1000\nxeb = 0.5\nallocation = per-round\n"));
  EXPECT_EQ(p.L, 1000);
  EXPECT_EQ(p.xeb, 0.5);
  EXPECT_EQ(p.alloc, Allocation::per_round);
  EXPECT_THROW(p.apply(parse_config("L = many\n")), std::invalid_argument);
  DeskPreset d;
  d.apply(parse_config("M = 3\nbeta = 0.6\n"));
  EXPECT_EQ(d.M, 3);
  EXPECT_EQ(d.amplification().beta, 0.6);
}

TEST(Presets, FullScaleInstantiation) {
  FullScalePreset p;
  EXPECT_NEAR(p.distance_factor(), 1.0 / 3.0, 0.005);
  EXPECT_NEAR(p.Phi_C(), 5 * 10'624 * 6 * 0.03 / 4.9e5 * p.distance_factor(), 1e-15);
  EXPECT_NEAR(p.budget().total(), p.eps_sou, 1e-18);
  auto r = p.restricted();
  EXPECT_EQ(r.chi, p.xeb);
  EXPECT_EQ(r.f_adv, p.Phi_C());
  auto o = p.oracle();
  EXPECT_EQ(o.gamma, p.gamma);
  EXPECT_GT(o.s_star, 1 - std::exp(-2.0));  // above the uniform score
  auto j = p.to_json();
  EXPECT_EQ(j.at("n"), 64);
  DeskPreset d;
  EXPECT_EQ(d.protocol().n, 12);
  EXPECT_EQ(d.budget().M, 10);
}

// ---- CLI exit codes ------------------------------------------------------------------

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("certamp_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args) {
    std::string cmd = std::string(CERTAMP_CLI) + " --out " + dir_.string() + " " + args + " >" +
                      (dir_ / "stdout.txt").string() + " 2>&1";
    int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, NoArgumentsIsUsageError) {
  int st = std::system((std::string(CERTAMP_CLI) + " >/dev/null 2>&1").c_str());
  EXPECT_EQ(WEXITSTATUS(st), 2);
}

TEST_F(Cli, BadFlagOrValueIsUsageError) {
  EXPECT_EQ(run("entropy --bogus"), 2);
  EXPECT_EQ(run("entropy --model nonsense"), 2);
  EXPECT_EQ(run("--config /nonexistent.toml entropy"), 2);
}

TEST_F(Cli, EntropyWritesReport) {
  ASSERT_EQ(run("entropy --preset n64 --model restricted"), 0);
  std::ifstream is(dir_ / "entropy.json");
  ASSERT_TRUE(is);
  auto j = nlohmann::json::parse(is);
  EXPECT_NEAR(j.at("beta").get<double>(), 0.528, 0.03);
  EXPECT_EQ(j.at("metadata").at("verb"), "entropy");
}

TEST_F(Cli, SimulateAbortExitsOne) {
  EXPECT_EQ(run("simulate --n 8 --L 200 --layers 6 --server uniform --s-star 1.3"), 1);
  EXPECT_TRUE(fs::exists(dir_ / "summary.json"));
  EXPECT_EQ(run("simulate --n 8 --L 200 --layers 6 --server honest:1 --s-star 1.3"), 0);
  EXPECT_TRUE(fs::exists(dir_ / "transcript.jsonl"));
}

TEST_F(Cli, SeedMakesOutputsReproducible) {
  ASSERT_EQ(run("--seed 7 simulate --n 8 --L 50 --layers 4 --server honest:0.5 --s-star 0.1"), 0);
  std::ifstream a(dir_ / "transcript.jsonl");
  std::string first((std::istreambuf_iterator<char>(a)), {});
  ASSERT_EQ(run("--seed 7 simulate --n 8 --L 50 --layers 4 --server honest:0.5 --s-star 0.1"), 0);
  std::ifstream b(dir_ / "transcript.jsonl");
  std::string second((std::istreambuf_iterator<char>(b)), {});
  EXPECT_FALSE(first.empty());
  EXPECT_EQ(first, second);
}

TEST_F(Cli, InfeasibleExtractorExitsOne) {
  EXPECT_EQ(run("extract --mode raz --n1 2000 --k1 10 --n2 1000 --k2 10 --m 64 --eps 1e-6"), 1);
}
