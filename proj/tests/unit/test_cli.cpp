#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

using hcomp::cli::kFail;
using hcomp::cli::kPass;
using hcomp::cli::kUsage;

namespace {

struct Outcome {
  int code = 0;
  nlohmann::json report;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Outcome o;
  o.code = hcomp::cli::run(args, out, err);
  o.err = err.str();
  if (!out.str().empty()) o.report = nlohmann::json::parse(out.str());
  return o;
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "hcomp_cli_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, kUsage);
  EXPECT_EQ(run({"nonsense"}).code, kUsage);
  EXPECT_EQ(run({"profile", "--group", "f2"}).code, kUsage);
  EXPECT_EQ(run({"profile", "--group", "q9", "--embedding", "tree"}).code, kUsage);
  EXPECT_EQ(run({"profile", "--group", "heis", "--embedding", "tree"}).code, kUsage);
  EXPECT_EQ(run({"kernel", "--group", "f2", "--embedding", "tree", "--checks", "spin"}).code, kUsage);
}

TEST(Cli, EnvelopeShape) {
  auto o = run({"profile", "--group", "f2", "--embedding", "tree", "--radius", "8"});
  ASSERT_EQ(o.code, kPass) << o.err;
  for (const char* key : {"version", "command", "config", "results", "timing"}) EXPECT_TRUE(o.report.contains(key));
  EXPECT_EQ(o.report["command"], "profile");
  EXPECT_TRUE(o.report["timing"].contains("wall_ms"));
  EXPECT_TRUE(o.report["timing"].contains("threads"));
  EXPECT_NEAR(o.report["results"]["estimate"]["slope"].get<double>(), 0.5, 1e-9);
}

TEST(Cli, DeterministicApartFromTiming) {
  std::vector<std::string> args{"cocycle-check", "--radius", "5", "--samples", "200", "--seed", "3", "--r-max", "8"};
  auto a = run(args);
  auto b = run(args);
  ASSERT_EQ(a.code, kPass) << a.err;
  a.report.erase("timing");
  b.report.erase("timing");
  EXPECT_EQ(a.report, b.report);
  EXPECT_EQ(a.report["verdict"], "pass");
}

TEST(Cli, ExitCodeFollowsVerdict) {
  EXPECT_EQ(run({"qgcheck", "--points", "line:20", "--lambda", "1", "--delta", "1"}).code, kPass);
  auto fail = run({"qgcheck", "--points", "heis-center:24", "--lambda", "2", "--delta", "3"});
  EXPECT_EQ(fail.code, kFail);
  EXPECT_EQ(fail.report["verdict"], "fail");
}

TEST(Cli, ProfileCsvFeedsEstimate) {
  auto csv = scratch("tree_profile.csv");
  ASSERT_EQ(run({"profile", "--group", "f2", "--embedding", "tree", "--radius", "12", "--out", csv.string()}).code,
            kPass);
  auto o = run({"estimate", "--from", csv.string(), "--window", "6,12"});
  ASSERT_EQ(o.code, kPass) << o.err;
  EXPECT_NEAR(o.report["results"]["slope"].get<double>(), 0.5, 1e-9);
  std::ofstream(scratch("broken.csv")) << "r,rho\n1,1\n";
  EXPECT_EQ(run({"estimate", "--from", scratch("broken.csv").string()}).code, kUsage);
}

TEST(Cli, KernelChecks) {
  auto o = run({"kernel", "--group", "f2", "--embedding", "tree", "--radius", "3", "--k", "4", "--checks",
                "psd,width:w=2|4"});
  ASSERT_EQ(o.code, kPass) << o.err;
  EXPECT_EQ(o.report["verdict"], "pass");
}

TEST(Cli, QuasiIsometryFixtures) {
  auto o = run({"qicheck", "--source", "line:{n}", "--target", "heis-center:{n}", "--range", "12,16,24,32,48"});
  EXPECT_EQ(o.code, kFail) << o.err;
  auto v = run({"qicheck", "--source", "line:20", "--target", "line:20:2", "--C", "2", "--D", "0"});
  EXPECT_EQ(v.code, kPass) << v.err;
}

TEST(Cli, ReportFileMatchesStdout) {
  auto path = scratch("report.json");
  auto o = run({"--report", path.string(), "qgcheck", "--points", "line:10"});
  ASSERT_EQ(o.code, kPass) << o.err;
  std::ifstream in(path);
  auto file = nlohmann::json::parse(in);
  EXPECT_EQ(file, o.report);
}

TEST(Cli, ResolveCloudIds) {
  auto ball = hcomp::cli::resolve_cloud("ball:f2:2");
  EXPECT_EQ(ball.size(), 17u);
  auto measured = hcomp::cli::resolve_cloud("ball:f2:2:f2+ab");
  EXPECT_EQ(measured.size(), 17u);
  auto fixture = hcomp::cli::resolve_cloud(std::string(HCOMP_FIXTURE_DIR) + "/z_line.csv");
  EXPECT_EQ(fixture.size(), 48u);
  EXPECT_DOUBLE_EQ(fixture.distance(0, 47), 47.0);
}
