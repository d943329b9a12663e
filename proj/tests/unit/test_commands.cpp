#include "qdimer/commands.hpp"
#include "qdimer/spectral.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace qdimer;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, sep);) out.push_back(f);
  return out;
}

int run_cli(const std::string& args, std::string* stdout_text = nullptr) {
  const std::string out_file = testing::TempDir() + "qdimer_cli_out.txt";
  const std::string cmd = std::string(QDIMER_CLI_PATH) + " " + args + " > " + out_file + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  if (stdout_text) {
    std::ifstream in(out_file);
    std::stringstream ss;
    ss << in.rdbuf();
    *stdout_text = ss.str();
  }
  std::remove(out_file.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(FormatNumber, RoundTrips) {
  for (double x : {0.1, -2.0597671439071, 1.0 / 3.0, 1e-300, 6.02e23, 2.0}) {
    EXPECT_EQ(std::stod(format_number(x)), x);
  }
  EXPECT_EQ(format_number(2.0), "2");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(0.5), "0.5");
}

TEST(ExpandGrid, LinearAndLog) {
  const std::vector<double> lin = expand_grid({0.0, 10.0, 21, GridScale::kLinear});
  ASSERT_EQ(lin.size(), 21u);
  EXPECT_EQ(lin.front(), 0.0);
  EXPECT_EQ(lin.back(), 10.0);
  EXPECT_NEAR(lin[3], 1.5, 1e-15);
  const std::vector<double> lg = expand_grid({0.25, 16.0, 25, GridScale::kLog});
  EXPECT_EQ(lg.back(), 16.0);
  EXPECT_NEAR(lg[4], 0.5, 1e-14);
  EXPECT_NEAR(lg[20], 8.0, 1e-13);
  EXPECT_THROW(expand_grid({1.0, 1.0, 5, GridScale::kLinear}), UsageError);
  EXPECT_THROW(expand_grid({0.0, 1.0, 1, GridScale::kLinear}), UsageError);
  EXPECT_THROW(expand_grid({0.0, 1.0, 5, GridScale::kLog}), UsageError);
}

TEST(Spectrum, CsvShape) {
  std::ostringstream out;
  cmd_spectrum({Model::kQal, 2, 2.0, 1.0, 1e-15}, out);
  const std::vector<std::string> l = lines(out.str());
  ASSERT_EQ(l.size(), 5u);
  EXPECT_EQ(l[0].rfind("# command=spectrum model=al two_j=2 gamma=2 ", 0), 0u);
  EXPECT_NE(l[0].find("version=0.1.0"), std::string::npos);
  EXPECT_EQ(l[1], "index,eigenvalue,norm_constant");
  const std::vector<std::string> row = split(l[2]);
  ASSERT_EQ(row.size(), 3u);
  EXPECT_EQ(row[0], "0");
  EXPECT_NEAR(std::stod(row[1]), -std::sqrt(6.0 / std::sqrt(2.0)), 1e-14);
  EXPECT_NEAR(std::stod(row[2]), 0.5, 1e-14);
  EXPECT_THROW(cmd_spectrum({Model::kQal, -1, 2.0, 1.0, 1e-12}, out), UsageError);
  EXPECT_THROW(cmd_spectrum({Model::kQal, 2, -2.0, 1.0, 1e-12}, out), UsageError);
  EXPECT_THROW(cmd_spectrum({Model::kQal, 2, 2.0, 1.0, 0.0}, out), UsageError);
}

TEST(Sweep, RowsInGridOrderAndConsistent) {
  SweepParams p;
  p.model = Model::kQdnls;
  p.two_j = 5;
  p.grid = {0.0, 4.0, 5, GridScale::kLinear};
  p.threads = 3;
  const SweepResult r = run_sweep(p);
  ASSERT_EQ(r.rows.size(), 5u);
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    EXPECT_EQ(r.rows[i].gamma, static_cast<double>(i));
    const std::vector<double> ref = eigenvalues_bisection(build_qdnls_dimer(5, r.rows[i].gamma), p.tol);
    EXPECT_EQ(r.rows[i].eigenvalues, ref);
    EXPECT_EQ(r.rows[i].scale, -1.0);
  }
  std::ostringstream out;
  cmd_sweep(p, out);
  const std::vector<std::string> l = lines(out.str());
  ASSERT_EQ(l.size(), 7u);
  EXPECT_EQ(l[1], "gamma,energy_scale,energy_shift,lambda_0,lambda_1,lambda_2,lambda_3,lambda_4,lambda_5");
  EXPECT_EQ(split(l[2]).size(), 9u);
}

TEST(Sweep, ThreadCountDoesNotChangeOutput) {
  SweepParams p;
  p.model = Model::kQal;
  p.two_j = 9;
  p.grid = {0.0, 10.0, 17, GridScale::kLinear};
  std::ostringstream one, many;
  p.threads = 1;
  cmd_sweep(p, one);
  p.threads = 8;
  cmd_sweep(p, many);
  EXPECT_EQ(one.str(), many.str());
}

TEST(Gaps, PairsAndSlopes) {
  GapParams p;
  p.two_j = 6;
  p.pairs = 2;
  const GapAnalysis a = run_gaps(p);
  ASSERT_EQ(a.gap.size(), 2u);
  ASSERT_EQ(a.gamma.size(), 25u);
  EXPECT_TRUE(std::isnan(a.slope[0].front()));
  EXPECT_TRUE(std::isnan(a.slope[0].back()));
  for (std::size_t i = 0; i < a.gamma.size(); ++i) {
    for (int k = 0; k < 2; ++k) EXPECT_GT(a.gap[k][i], 0.0);
  }
  // centred difference of ln gap against ln gamma
  const std::size_t i = 10;
  const double expect = (std::log(a.gap[0][i + 1]) - std::log(a.gap[0][i - 1])) /
                        (std::log(a.gamma[i + 1]) - std::log(a.gamma[i - 1]));
  EXPECT_NEAR(a.slope[0][i], expect, 1e-12);
  EXPECT_EQ(a.steepest_gamma.size(), 2u);

  p.pairs = 4;
  EXPECT_THROW(run_gaps(p), UsageError);
  p.pairs = 0;
  EXPECT_THROW(run_gaps(p), UsageError);

  p.pairs = 1;
  std::ostringstream out;
  cmd_gaps(p, out);
  const std::vector<std::string> l = lines(out.str());
  EXPECT_EQ(l[1], "gamma,ln_gamma,gap_1,ln_gap_1,slope_1");
  EXPECT_EQ(l.back().rfind("# steepest_change pair=1 gamma=", 0), 0u);
}

TEST(QuantaScan, Shape) {
  std::ostringstream out;
  cmd_quanta_scan({2.0, 3, 2, 1e-15}, out);
  const std::vector<std::string> l = lines(out.str());
  ASSERT_EQ(l.size(), 8u);
  EXPECT_EQ(l[1], "two_j,level,energy");
  const std::vector<std::string> first = split(l[2]);
  EXPECT_EQ(first[0], "1");
  EXPECT_NEAR(std::stod(first[2]), 1.0, 1e-14);
  EXPECT_THROW(cmd_quanta_scan({2.0, 0, 2, 1e-12}, out), UsageError);
}

TEST(Verify, PassesAndInjectedFailureIsCaught) {
  VerifyParams p;
  p.suite = "spectral";
  p.two_j_max = 6;
  std::ostringstream ok;
  EXPECT_TRUE(cmd_verify(p, ok));
  EXPECT_NE(ok.str().find("status=PASS"), std::string::npos);
  p.inject_failure = true;
  std::ostringstream bad;
  EXPECT_FALSE(cmd_verify(p, bad));
  EXPECT_NE(bad.str().find("status=FAIL"), std::string::npos);
  p.suite = "nope";
  EXPECT_THROW(cmd_verify(p, bad), UsageError);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli("spectrum --model al --two-j 3 --gamma 2"), 0);
  EXPECT_EQ(run_cli("spectrum --two-j -1"), 2);
  EXPECT_EQ(run_cli("spectrum --no-such-flag"), 2);
  EXPECT_EQ(run_cli("gaps --two-j 4 --pairs 3"), 2);
  EXPECT_EQ(run_cli("verify --suite algebra --m-max 2 --inject-failure"), 1);
  EXPECT_EQ(run_cli("verify --suite algebra --m-max 2"), 0);
}

TEST(Cli, DeterministicOutput) {
  std::string a, b;
  ASSERT_EQ(run_cli("sweep --model dnls --two-j 8 --steps 11", &a), 0);
  ASSERT_EQ(run_cli("sweep --model dnls --two-j 8 --steps 11", &b), 0);
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, b);
}
