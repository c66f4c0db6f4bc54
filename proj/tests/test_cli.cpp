#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using namespace hyperis;
using io::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("hyperis_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST(Cli, OracleRejectsZeroDimension) {
  const auto r = run({"oracle", "--d", "0"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
  const auto j = json::parse(r.err);
  EXPECT_EQ(j["error"], "precondition");
  EXPECT_EQ(j["exit_code"], 1);
}

TEST(Cli, UsageErrorsAndHelp) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"oracle"}).code, 1);
  EXPECT_EQ(run({"count", "--beta", "abc", "--d", "5"}).code, 1);
  const auto h = run({"--help"});
  EXPECT_EQ(h.code, 0);
  EXPECT_NE(h.out.find("count-structured"), std::string::npos);
}

TEST(Cli, BudgetExhaustionExitsTwo) {
  const auto r = run({"polymers", "--d", "9", "--max-size", "4", "--budget", "1000"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(json::parse(r.err)["error"], "budget");
}

TEST(Cli, BeyondGuaranteedRNeedsFlag) { EXPECT_EQ(run({"rj", "--j", "4"}).code, 1); }

TEST(Cli, OracleCountsQ3) {
  const auto r = run({"oracle", "--d", "3", "--lambda", "1"});
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["total"], "35");
  EXPECT_EQ(j["partition_function"], "35");
  EXPECT_EQ(io::size_profile_from(j).counts.size(), 5u);
}

TEST(Cli, PjContainsFirstTwoCoefficients) {
  const auto r = run({"pj", "--t", "3"});
  ASSERT_EQ(r.code, 0);
  const auto t = io::p_table_from(json::parse(r.out));
  ASSERT_EQ(t.P.size(), 2u);
  for (int den : {3, 5, 7}) {
    const Rat beta{BigInt(1), BigInt(den)};
    EXPECT_EQ(t.P[0].evaluate(asym::bind_beta_d(beta, 11)), beta / (Rat(1) - beta));
  }
  // P_2 = (d²β⁴/4 + dβ⁴/4 − 3dβ³/2 + dβ² − β⁴/2 + β³ − β/2) / (1−β)⁴
  const Rat b{BigInt(2), BigInt(7)};
  const Rat d(9);
  const Rat num = d * d * pow(b, 4) / 4 + d * pow(b, 4) / 4 - Rat(3, 2) * d * pow(b, 3) + d * b * b - pow(b, 4) / 2 +
                  pow(b, 3) - b / 2;
  EXPECT_EQ(t.P[1].evaluate(asym::bind_beta_d(b, 9)), num / pow(Rat(1) - b, 4));
}

TEST(Cli, DecimalAndFractionInputsAgree) {
  const auto a = run({"lambda-beta", "--beta", "0.5", "--d", "10", "--t", "4"});
  const auto b = run({"lambda-beta", "--beta", "1/2", "--d", "10", "--t", "4"});
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(json::parse(a.out)["value"], "65/64");
}

TEST(Cli, CountVersusOracleReport) {
  const auto dir = scratch("report");
  ASSERT_EQ(run({"oracle", "--d", "5", "--out", (dir / "o5.json").string()}).code, 0);
  for (const char* t : {"1", "2", "3"})
    ASSERT_EQ(run({"count", "--beta", "0.5", "--d", "5", "--t", t, "--out", (dir / ("c" + std::string(t) + ".json")).string()}).code, 0);
  ASSERT_EQ(run({"zeta", "--lambda", "1", "--d", "5", "--t", "2", "--out", (dir / "z.json").string()}).code, 0);
  const auto r = run({"report", (dir / "o5.json").string(), (dir / "c1.json").string(), (dir / "c2.json").string(),
                      (dir / "c3.json").string(), (dir / "z.json").string(), "--plot-dir", (dir / "plots").string()});
  ASSERT_EQ(r.code, 0) << r.err;

  // Independent exact value: log i_8(Q_5).
  const auto prof = size_profile(Dim(5));
  PrecisionScope ps(50);
  const std::string exact = format_real(log_of(prof.counts[8]), 8);
  EXPECT_NE(r.out.find("| 5 | 1/2 | 2 | 8 |"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find(exact), std::string::npos) << r.out;

  const auto plot = slurp(dir / "plots" / "truncation_count_P_d5_beta1_2.dat");
  std::istringstream rows(plot);
  std::vector<int> ts;
  int t;
  std::string err;
  while (rows >> t >> err) ts.push_back(t);
  EXPECT_EQ(ts, (std::vector<int>{1, 2, 3}));
  EXPECT_TRUE(fs::exists(dir / "plots" / "truncation_logZ_d5_lambda1.dat"));
}

TEST(Cli, ReportRejectsMalformedInput) {
  const auto dir = scratch("bad");
  std::ofstream(dir / "x.json") << "{not json";
  EXPECT_EQ(run({"report", (dir / "x.json").string()}).code, 1);
  EXPECT_EQ(run({"report", (dir / "missing.json").string()}).code, 1);
}

TEST(Cli, SampleIsReproducible) {
  const auto dir = scratch("sample");
  auto go = [&](const std::string& tag) {
    return run({"sample", "--d", "5", "--samples", "300", "--seed", "17", "--chains", "2", "--csv",
                (dir / (tag + ".csv")).string(), "--out", (dir / (tag + ".json")).string()});
  };
  ASSERT_EQ(go("a").code, 0);
  ASSERT_EQ(go("b").code, 0);
  EXPECT_EQ(slurp(dir / "a.json"), slurp(dir / "b.json"));
  EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
  const auto j = json::parse(slurp(dir / "a.json"));
  EXPECT_EQ(j["kind"], "defect_summary");
  EXPECT_EQ(j["samples"], 600);
}

TEST(Cli, LogCountOutputsRoundTrip) {
  const auto r = run({"count-structured", "--beta", "1/2", "--d", "10", "--t", "3", "--fixed", "1:@0=1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  const auto c = io::log_count_from(j["result"]);
  EXPECT_EQ(io::to_json(c).dump(), j["result"].dump());
  EXPECT_TRUE(j["result"].contains("log10_value"));
}

TEST(Cli, ValidateSingleCriterion) {
  const auto r = run({"validate", "--only", "10"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("PASS criterion 10", 0), 0u) << r.out;
}
