#include "bt/cli.hpp"
#include "bt/relation_io.hpp"

#include "json.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

namespace bt::cli {
namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "btk");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> csv_rows(const std::string& text) {
  std::vector<std::string> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) rows.push_back(line);
  return rows;
}

TEST(Cli, DirichletSpectrumOfTheInterval) {
  const auto r = invoke({"spectrum", "--model", "interval", "--theta", "dirichlet", "--range", "0:50"});
  ASSERT_EQ(r.code, kSuccess) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j["eigenvalues"].size(), 2u);
  EXPECT_NEAR(j["eigenvalues"][0]["lambda"].get<double>(), 9.8696044, 1e-7);
  EXPECT_NEAR(j["eigenvalues"][1]["lambda"].get<double>(), 39.4784176, 1e-7);
  EXPECT_FALSE(j["caveats"].empty());
}

TEST(Cli, CsvSpectrumHasHeaderAndRows) {
  const auto r = invoke({"spectrum", "--theta", "robin:1", "--range", "0:100", "--format", "csv"});
  ASSERT_EQ(r.code, kSuccess) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0], "lambda,multiplicity,kernel_dim,tags");
}

TEST(Cli, RelationFileParameter) {
  const auto path = std::filesystem::temp_directory_path() / "bt_cli_relation.json";
  write_relation_file(path, multivalued<cplx>(Mat::Identity(2, 2)));
  const auto r = invoke({"spectrum", "--theta", "relation:" + path.string(), "--range", "0:50"});
  std::filesystem::remove(path);
  ASSERT_EQ(r.code, kSuccess) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["eigenvalues"].size(), 2u);
}

TEST(Cli, KreinVonNeumannSpec) {
  const auto r = invoke({"spectrum", "--theta", "kvn:0", "--range=-0.5:5"});
  ASSERT_EQ(r.code, kSuccess) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j["eigenvalues"].size(), 1u);
  EXPECT_NEAR(j["eigenvalues"][0]["lambda"].get<double>(), 0.0, 1e-8);
  EXPECT_EQ(j["eigenvalues"][0]["multiplicity"].get<int>(), 2);
}

TEST(Cli, UsageErrorsExitWithTwo) {
  EXPECT_EQ(invoke({}).code, kUsageError);
  EXPECT_EQ(invoke({"frobnicate"}).code, kUsageError);
  EXPECT_EQ(invoke({"spectrum", "--theta", "robin:x"}).code, kUsageError);
  EXPECT_EQ(invoke({"spectrum", "--theta", "bogus"}).code, kUsageError);
  EXPECT_EQ(invoke({"spectrum", "--range", "5"}).code, kUsageError);
  EXPECT_EQ(invoke({"spectrum", "--range", "5:1"}).code, kUsageError);
  EXPECT_EQ(invoke({"spectrum", "--model", "sphere"}).code, kUsageError);
  EXPECT_EQ(invoke({"spectrum", "--format", "xml"}).code, kUsageError);
  EXPECT_EQ(invoke({"spectrum", "--theta", "relation:/nonexistent.json"}).code, kUsageError);
  EXPECT_EQ(invoke({"counterexample", "--n-list", "8,4"}).code, kUsageError);
  EXPECT_EQ(invoke({"dtn-export", "--grid", "0"}).code, kUsageError);
}

TEST(Cli, ModelErrorsExitWithThree) {
  // The radial quadrature cannot resolve this degree.
  EXPECT_EQ(invoke({"spectrum", "--model", "disk", "--degree", "200"}).code, kModelError);
  // Base point on the Dirichlet spectrum.
  const std::string pole = std::to_string(std::numbers::pi * std::numbers::pi);
  EXPECT_EQ(invoke({"spectrum", "--theta", "robin:1", "--eta", pole}).code, kModelError);
}

TEST(Cli, HelpExitsCleanly) { EXPECT_EQ(invoke({"spectrum", "--help"}).code, kSuccess); }

TEST(Cli, VerifyPassesOnDefaultsAndCatchesAFault) {
  const auto ok = invoke({"verify"});
  EXPECT_EQ(ok.code, kSuccess) << ok.out;
  EXPECT_TRUE(nlohmann::json::parse(ok.out)["pass"].get<bool>());
  const auto bad = invoke({"verify", "--inject-fault", "gamma1-sign"});
  EXPECT_EQ(bad.code, kVerificationFailure);
  for (const auto& c : nlohmann::json::parse(bad.out)["checks"])
    if (c["name"] == "green") EXPECT_FALSE(c["pass"].get<bool>());
}

TEST(Cli, VerifyOnTheCounterexampleRaisesTheConditioningWarning) {
  const auto r = invoke({"verify", "--model", "counterexample", "--modes", "12"});
  EXPECT_EQ(r.code, kSuccess) << r.out;
  EXPECT_FALSE(nlohmann::json::parse(r.out)["warnings"].empty());
}

TEST(Cli, DtnExportOnTheNegativeAxis) {
  const auto r = invoke({"dtn-export", "--range=-5:-1", "--grid", "5"});
  ASSERT_EQ(r.code, kSuccess) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0].rfind("lambda_re,lambda_im,", 0), 0u);
  // Real symmetric entries: m0_1 equals m1_0 on every row.
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::vector<double> v;
    std::istringstream in(rows[i]);
    for (std::string cell; std::getline(in, cell, ',');) v.push_back(std::stod(cell));
    ASSERT_EQ(v.size(), 10u);
    EXPECT_NEAR(v[4], v[6], 1e-12);
    EXPECT_NEAR(v[5], 0.0, 1e-12);
  }
}

TEST(Cli, DtnExportSingleDiskModeIsMonotone) {
  const auto r = invoke({"dtn-export", "--model", "disk", "--modes", "4", "--mode", "3", "--range=-10:-0.1",
                         "--grid", "12"});
  ASSERT_EQ(r.code, kSuccess) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 13u);
  double prev = -1e300;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double v = std::stod(rows[i].substr(rows[i].find(',', rows[i].find(',') + 1) + 1));
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(Cli, DtnExportSkipsPoles) {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  std::ostringstream range;
  range << std::setprecision(17) << "--range=0:" << 2.0 * pi2;
  const auto r = invoke({"dtn-export", range.str(), "--grid", "3"});
  ASSERT_EQ(r.code, kSuccess) << r.err;
  EXPECT_EQ(csv_rows(r.out).size(), 1u + 2u);
  EXPECT_EQ(invoke({"dtn-export", range.str(), "--grid", "3", "--no-pole-skip"}).code, kModelError);
}

TEST(Cli, CounterexampleTraceDecreases) {
  const auto r = invoke({"counterexample", "--n-list", "4,8,12"});
  ASSERT_EQ(r.code, kSuccess) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["strictly_decreasing"].get<bool>());
  ASSERT_EQ(j["trace"].size(), 3u);
  EXPECT_EQ(j["trace"][2]["N"].get<int>(), 12);
}

TEST(Cli, KreinDemoPasses) {
  const auto r = invoke({"krein-demo", "--theta", "robin:-2", "--seed", "3"});
  EXPECT_EQ(r.code, kSuccess) << r.out;
}

TEST(Cli, OutputFile) {
  const auto path = std::filesystem::temp_directory_path() / "bt_cli_out.csv";
  const auto r = invoke({"counterexample", "--n-list", "1,2", "--format", "csv", "--out", path.string()});
  ASSERT_EQ(r.code, kSuccess);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "N,sigma_min,green_residual");
  std::filesystem::remove(path);
}

TEST(Cli, DeterministicGivenTheSeed) {
  const auto a = invoke({"krein-demo", "--seed", "7"});
  const auto b = invoke({"krein-demo", "--seed", "7"});
  EXPECT_EQ(a.out, b.out);
}

TEST(RunConfig, JsonRoundTrip) {
  RunConfig c;
  c.command = "spectrum";
  c.model = "disk";
  c.modes = 8;
  c.theta = "robin:-1.5";
  c.range_lo = -3.0;
  c.range_hi = 60.0;
  c.seed = 42;
  c.format = "csv";
  c.n_list = {1, 2, 3};
  c.mode = -2;
  c.pole_skip = false;
  const std::string text = to_json(c);
  EXPECT_EQ(to_json(config_from_json(text)), text);
  EXPECT_EQ(to_json(config_from_json(to_json(RunConfig{}))), to_json(RunConfig{}));
}

}  // namespace
}  // namespace bt::cli
