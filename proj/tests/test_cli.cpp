#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "cli.hpp"

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = ispec::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string model(const std::string& name) { return std::string(ISPEC_MODELS_DIR) + "/" + name; }

std::filesystem::path temp_file(const std::string& name, const std::string& contents = "") {
  const auto p = std::filesystem::temp_directory_path() / ("ispec_cli_" + name);
  if (!contents.empty()) std::ofstream(p) << contents;
  return p;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(Cli, CriticalTempHomogeneous) {
  const auto r = run({"critical-temp", model("homogeneous.json"), "--tol", "1e-10"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j.at("beta_c").get<double>(), 0.44068679350977151, 1e-6);
  EXPECT_EQ(j.at("corner"), nlohmann::json::parse("[1,1]"));
  EXPECT_EQ(j.at("pf").size(), 4u);
  EXPECT_GT(j.at("iterations").get<int>(), 0);
}

TEST(Cli, CriticalTempWritesOutputFile) {
  const auto path = temp_file("crit.json");
  const auto r = run({"critical-temp", model("aniso.json"), "-o", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  const auto j = nlohmann::json::parse(in);
  EXPECT_NEAR(j.at("beta_c").get<double>(), 0.30468893171800312, 1e-6);
  std::filesystem::remove(path);
}

TEST(Cli, ValidateHomogeneous) {
  const auto r = run({"validate", model("homogeneous.json"), "--max-sites", "16"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  const auto ls = lines(r.out);
  ASSERT_FALSE(ls.empty());
  for (const auto& l : ls) EXPECT_EQ(l.rfind("PASS ", 0), 0u) << l;
}

TEST(Cli, SpectralScanSubcritical) {
  const auto r = run({"spectral-scan", model("aniso.json"), "--beta", "0.2", "--grid", "32"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 1u + 32u * 32u);
  EXPECT_EQ(ls[0], "a,b,theta,phi,abs_p");
  double min_abs = 1e300;
  for (std::size_t k = 1; k < ls.size(); ++k) min_abs = std::min(min_abs, std::stod(ls[k].substr(ls[k].rfind(',') + 1)));
  EXPECT_GT(min_abs, 0.0);
  const auto summary = nlohmann::json::parse(r.err);
  EXPECT_NEAR(summary.at("min_abs").get<double>(), min_abs, 1e-12 * min_abs);
}

TEST(Cli, CorrelateCsvAndSummary) {
  const auto summary = temp_file("summary.json");
  const auto r = run({"correlate", model("homogeneous.json"), "--beta", "0.53", "--n-max", "8", "--grid", "128",
                      "--kmax", "32", "--truncation", "32", "--summary", summary.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 9u);
  EXPECT_EQ(ls[0], "N,corr_sq,corr");
  std::ifstream in(summary);
  const auto j = nlohmann::json::parse(in);
  EXPECT_TRUE(j.contains("G"));
  EXPECT_GT(j.at("E").get<double>(), 0.0);
  EXPECT_TRUE(j.contains("alpha"));
  std::filesystem::remove(summary);
}

TEST(Cli, EdgeCorr) {
  const auto r = run({"edge-corr", model("homogeneous.json"), "--beta", "0.3", "--max-sep", "6", "--grid", "32"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 7u);
  EXPECT_EQ(ls[0], "d,p1,p2,joint,cov");
}

TEST(Cli, LeeYang) {
  const auto r = run({"lee-yang", model("homogeneous.json"), "--beta", "0.4", "--s", "2", "--t", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_LT(j.at("max_deviation").get<double>(), 1e-8);
  EXPECT_EQ(j.at("roots").size(), 4u);
}

TEST(Cli, Deterministic) {
  const std::vector<std::string> args{"spectral-scan", model("example_1x2.json"), "--beta", "0.3", "--grid", "16"};
  const auto a = run(args);
  const auto b = run(args);
  auto threaded = args;
  threaded.insert(threaded.begin(), {"--threads", "3"});
  const auto c = run(threaded);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, c.out);
}

TEST(Cli, HelpListsFlags) {
  const auto r = run({"critical-temp", "--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("--tol"), std::string::npos);
  EXPECT_NE(r.out.find("1e-12"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"critical-temp", model("homogeneous.json"), "--bogus"}).code, 1);
  EXPECT_EQ(run({"no-such-command"}).code, 1);
  EXPECT_EQ(run({"correlate", model("homogeneous.json")}).code, 1);
  EXPECT_EQ(run({"critical-temp", "/nonexistent/model.json"}).code, 1);
}

TEST(Cli, ModuleErrorsAreReportedAsJson) {
  const auto bad = temp_file("bad.json", R"({"m":1,"n":1,"Jh":[[-1]],"Jv":[[1]]})");
  const auto r = run({"critical-temp", bad.string()});
  EXPECT_EQ(r.code, 2);
  const auto j = nlohmann::json::parse(r.err);
  EXPECT_EQ(j.at("code").get<int>(), 10);
  EXPECT_EQ(j.at("error").get<std::string>(), "NonPositiveCoupling");
  std::filesystem::remove(bad);
}

TEST(Cli, NearSingularAtCriticalPoint) {
  const auto r = run({"correlate", model("homogeneous.json"), "--beta", "0.44068679350977151", "--grid", "128",
                      "--kmax", "32"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("NearSingular"), std::string::npos);
}
