#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
  std::string out;
  int code = -1;
};

Run cli(const std::string& args, const std::string& env = "") {
  std::string cmd = env + (env.empty() ? "" : " ") + JSJ_CLI_PATH + std::string(" ") + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string golden(const std::string& name) {
  std::ifstream in(std::string(JSJ_GOLDEN_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, GoldenDecompositionJson) {
  auto r = cli("jsj --rank 2 --words b,baa,a --format json");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, golden("jsj_b_baa_a.json"));
}

TEST(Cli, GoldenCutText) {
  auto r = cli("cut --rank 2 --words ab,ABab ab");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, golden("cut_ab.txt"));
}

TEST(Cli, GoldenDecompositionText) {
  EXPECT_EQ(cli("jsj --rank 2 --words AAABaab").out, golden("jsj_bs23.txt"));
}

TEST(Cli, GoldenGeometry) {
  EXPECT_EQ(cli("geom --rank 2 --words abAB --format json").out, golden("geom_commutator.json"));
}

TEST(Cli, GoldenLift) {
  EXPECT_EQ(cli("lift --rank 2 --words AABAbaBabAABAbaBab --subgroup aa,b,abA").out, golden("lift_baumslag.txt"));
}

TEST(Cli, FreeSplittingExitCode) {
  auto r = cli("jsj --rank 3 --words ab,c");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("free splitting"), std::string::npos);
}

TEST(Cli, InputErrorExitCode) {
  EXPECT_EQ(cli("jsj --rank 2 --words abz").code, 3);
  EXPECT_EQ(cli("cut --rank 2 --words ab a").code, 3);
  EXPECT_EQ(cli("scan --rank 2 --words abAB --max-len 4 --certified").code, 3);
}

TEST(Cli, VerifyRoundTrip) {
  std::string path = ::testing::TempDir() + "jsj_verify.json";
  {
    std::ofstream out(path);
    out << cli("jsj --rank 2 --words b,baa,a --format json").out;
  }
  auto ok = cli("verify --rank 2 --words b,baa,a " + path);
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(ok.out.rfind("PASS", 0), 0u);
  // a negative verdict is still an analytic success
  auto bad = cli("verify --rank 2 --words b,baa " + path);
  EXPECT_EQ(bad.code, 0);
  EXPECT_EQ(bad.out.rfind("FAIL", 0), 0u);
}

TEST(Cli, OutputIndependentOfThreadCount) {
  std::string args = "scan --rank 2 --words AABAbaBab --max-len 8 --format json";
  auto one = cli(args, "JSJ_THREADS=1");
  auto four = cli(args, "JSJ_THREADS=4");
  EXPECT_EQ(one.code, 0);
  EXPECT_FALSE(one.out.empty());
  EXPECT_EQ(one.out, four.out);
}

TEST(Cli, DotOutput) {
  auto r = cli("jsj --rank 2 --words AAABaab --format dot");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("graph"), std::string::npos);
}
