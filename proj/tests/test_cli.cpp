#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "invforge/cli.hpp"

using namespace invforge;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "invforge");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream f(path);
  return nlohmann::json::parse(f);
}

}  // namespace

TEST(Cli, ListKinds) {
  EXPECT_NE(run({"list", "algebras"}).out.find("AG2_II"), std::string::npos);
  EXPECT_NE(run({"list", "bases"}).out.find("AP(1,n) m-field basis"), std::string::npos);
  EXPECT_NE(run({"list", "equations"}).out.find("born-infeld"), std::string::npos);
  EXPECT_NE(run({"list", "tensors"}).out.find("theta"), std::string::npos);
  EXPECT_EQ(run({"list", "things"}).code, cli::config_error);
}

TEST(Cli, VerifyBasis) {
  const auto r = run({"verify", "--algebra", "AE", "--n", "3"});
  EXPECT_EQ(r.code, cli::pass);
  EXPECT_NE(r.out.find("7/7 invariants PASS"), std::string::npos);
}

TEST(Cli, VerifyEquationAndExpression) {
  EXPECT_EQ(run({"verify", "--equation", "heat", "--n", "3", "--mu", "1", "--samples", "10"}).code, cli::pass);
  EXPECT_EQ(run({"verify", "heat", "n=3", "samples=10"}).code, cli::pass);
  EXPECT_EQ(run({"verify", "--algebra", "AE", "--expr", "u_x1", "--samples", "5"}).code, cli::fail);
  EXPECT_EQ(run({"verify", "--algebra", "AP_BornInfeld", "--manifold", "--expr", "(1 - R(1))*S(1) - R(2)",
                 "--samples", "10"})
                .code,
            cli::fail);
}

TEST(Cli, RankAndCompleteness) {
  const auto r = run({"rank", "AO", "n=4"});
  EXPECT_EQ(r.code, cli::pass);
  EXPECT_EQ(r.out.substr(0, 2), "6\n");
  const auto c = run({"completeness", "AE", "n=3"});
  EXPECT_EQ(c.code, cli::pass);
  EXPECT_NE(c.out.find("10 - 3 = 7, family 7, PASS"), std::string::npos);
  const auto t = run({"completeness", "AE", "n=3", "--limit", "5"});
  EXPECT_EQ(t.code, cli::fail);
  EXPECT_NE(t.out.find("family 5, FAIL"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({}).code, cli::config_error);
  EXPECT_EQ(run({"verify", "--n", "x"}).code, cli::config_error);
  EXPECT_EQ(run({"verify", "--algebra", "AE", "--lambda", "2"}).code, cli::config_error);
  EXPECT_EQ(run({"verify", "--algebra", "AE", "--expr", "S(2"}).code, cli::config_error);
  EXPECT_EQ(run({"verify", "--algebra", "AE", "--expr", "u1_x9"}).code, cli::config_error);
  EXPECT_EQ(run({"verify", "--equation", "nothing"}).code, cli::config_error);
  EXPECT_EQ(run({"verify", "--config", "/nonexistent/cfg"}).code, cli::config_error);
  EXPECT_EQ(run({"verify", "stray"}).code, cli::config_error);
  EXPECT_EQ(run({"verify", "--algebra", "AE", "--expr", "log(0*u)", "--samples", "2"}).code, cli::internal_error);
}

TEST(Cli, EvalPrintsValue) {
  const auto r = run({"eval", "--algebra", "AE", "--expr", "2+3*4^2"});
  EXPECT_EQ(r.code, cli::pass);
  EXPECT_EQ(r.out, "50\n");
  EXPECT_EQ(run({"eval", "--algebra", "AE"}).code, cli::config_error);
}

TEST(Cli, ReportIsDeterministicAndReloadable) {
  const std::string a = testing::TempDir() + "invforge_a.json";
  const std::string b = testing::TempDir() + "invforge_b.json";
  ASSERT_EQ(run({"verify", "--algebra", "AE", "--n", "3", "--seed", "42", "--out", a}).code, cli::pass);
  ASSERT_EQ(run({"verify", "--algebra", "AE", "--n", "3", "--seed", "42", "--out", b}).code, cli::pass);
  auto ja = read_json(a), jb = read_json(b);
  ja["header"].erase("timestamp");
  jb["header"].erase("timestamp");
  EXPECT_EQ(ja.dump(), jb.dump());
  EXPECT_EQ(ja["verdict"], "PASS");
  EXPECT_EQ(ja["config"]["seed"], 42);
  const auto& checks = ja["checks"];
  ASSERT_EQ(checks.size(), 7u);
  for (std::size_t i = 1; i < checks.size(); ++i)
    EXPECT_LT(checks[i - 1]["name"].get<std::string>(), checks[i]["name"].get<std::string>());
  const auto doc = ReportDocument::from_json(read_json(a));
  EXPECT_EQ(doc.to_json(), read_json(a));
}

TEST(Cli, SeedFromEnvironment) {
  const std::string a = testing::TempDir() + "invforge_env.json";
  setenv("INVFORGE_SEED", "1234", 1);
  const auto r = run({"verify", "--algebra", "AE", "--n", "2", "--samples", "3", "--out", a});
  unsetenv("INVFORGE_SEED");
  ASSERT_EQ(r.code, cli::pass);
  EXPECT_EQ(read_json(a)["config"]["seed"], 1234);
}

TEST(Cli, ConfigFileWithOverrides) {
  const std::string cfg = testing::TempDir() + "invforge_run.cfg";
  const std::string out = testing::TempDir() + "invforge_cfg.json";
  {
    std::ofstream f(cfg);
    f << "algebra = AC\nn = 3\nlambda = 2\nsamples = 5\n";
  }
  ASSERT_EQ(run({"verify", "--config", cfg, "--lambda", "1", "--out", out}).code, cli::pass);
  const auto j = read_json(out);
  EXPECT_EQ(j["config"]["algebra"], "AC");
  EXPECT_EQ(j["config"]["lambda"], 1.0);
}
