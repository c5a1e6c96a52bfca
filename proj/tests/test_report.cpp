#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "invforge/report.hpp"

using namespace invforge;

TEST(RunConfig, SetAndValidate) {
  RunConfig c;
  c.set("algebra", "AC");
  c.set("--n", " 4 ");
  c.set("lambda", "2");
  c.set("field", "real");
  const auto s = c.spec();
  EXPECT_EQ(s.name, AlgebraName::AC);
  EXPECT_EQ(s.n, 4);
  EXPECT_EQ(*s.lambda, 2.0);
  EXPECT_THROW(c.set("n", "four"), ConfigError);
  EXPECT_THROW(c.set("colour", "red"), ConfigError);
  EXPECT_THROW(c.set("field", "quaternion"), ConfigError);
  c.set("field", "complex");
  EXPECT_THROW(c.spec(), ConfigError);
}

TEST(RunConfig, InvalidAlgebraParameters) {
  RunConfig c;
  c.algebra = "AE";
  c.lambda = 1.0;
  EXPECT_THROW(c.spec(), ConfigError);
  c.lambda.reset();
  c.samples = 0;
  EXPECT_THROW(c.spec(), ConfigError);
  c.samples = 5;
  c.algebra = "nope";
  EXPECT_THROW(c.spec(), ConfigError);
}

TEST(RunConfig, LoadsKeyValueFile) {
  const std::string path = testing::TempDir() + "invforge_cfg.txt";
  {
    std::ofstream f(path);
    f << "# run settings\nalgebra = AE1\nn=4\n\nlambda = 0.5  # weight\nseed=17\n";
  }
  RunConfig c;
  c.load_file(path);
  EXPECT_EQ(c.algebra, "AE1");
  EXPECT_EQ(c.n, 4);
  EXPECT_EQ(*c.lambda, 0.5);
  EXPECT_EQ(c.seed, 17u);
  {
    std::ofstream f(path);
    f << "n 4\n";
  }
  EXPECT_THROW(c.load_file(path), ConfigError);
  std::remove(path.c_str());
  EXPECT_THROW(c.load_file(path), ConfigError);
}

TEST(RunConfig, JsonRoundTrip) {
  RunConfig c;
  c.algebra = "AG2_I";
  c.lambda = -1.5;
  c.limit = 3;
  c.expr = "S(1)";
  const auto back = RunConfig::from_json(c.to_json());
  EXPECT_EQ(back.to_json(), c.to_json());
}

TEST(ReportDocument, JsonRoundTripAndOrdering) {
  ReportDocument d;
  d.version = "1.2.3";
  d.timestamp = "2026-01-01T00:00:00Z";
  d.config = RunConfig{}.to_json();
  d.checks.push_back({"b-check", "Theorem 1", 1e-15, 7, 7, true});
  d.checks.push_back({"a-check", "", 0.25, {}, {}, false});
  d.canonicalize();
  EXPECT_EQ(d.checks[0].name, "a-check");
  EXPECT_FALSE(d.pass());
  const auto j = d.to_json();
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["verdict"], "FAIL");
  EXPECT_EQ(j["checks"][1]["rank"], 7);
  EXPECT_FALSE(j["checks"][0].contains("rank"));
  const auto back = ReportDocument::from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(back.checks, d.checks);
  EXPECT_EQ(back.to_json(), j);
}

TEST(ReportDocument, RejectsOtherSchema) {
  ReportDocument d;
  auto j = d.to_json();
  j["schema"] = 2;
  EXPECT_THROW(ReportDocument::from_json(j), std::runtime_error);
}

TEST(Timestamp, Iso8601Utc) {
  const auto t = utc_timestamp();
  ASSERT_EQ(t.size(), 20u);
  EXPECT_EQ(t[10], 'T');
  EXPECT_EQ(t.back(), 'Z');
}
