// Copyright 2026 The cvrealign Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cvrealign/cli.hpp"

namespace cvrealign::cli {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "cvrealign");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

TEST(ParseComplex, Forms) {
  EXPECT_EQ(parse_complex("1.5"), Complex(1.5, 0));
  EXPECT_EQ(parse_complex("-2j"), Complex(0, -2));
  EXPECT_EQ(parse_complex("0.3+0.4j"), Complex(0.3, 0.4));
  EXPECT_EQ(parse_complex("1e-3-2e-1j"), Complex(1e-3, -0.2));
  EXPECT_EQ(parse_complex("j"), Complex(0, 1));
  EXPECT_EQ(parse_complex(" 2 - i "), Complex(2, -1));
  EXPECT_THROW(parse_complex("abc"), UsageError);
  EXPECT_THROW(parse_complex(""), UsageError);
}

TEST(Cli, GaussianJson) {
  const Result r = run_cli({"gaussian", "--N", "0", "--r", "0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["verdict"]["lhs"].get<double>(), std::exp(1.0), 1e-12);
  EXPECT_EQ(j["verdict"]["status"], "entangled");
  EXPECT_TRUE(j["verdict"]["detected"].get<bool>());
  EXPECT_FALSE(j.contains("metadata"));
}

TEST(Cli, OutputIsDeterministic) {
  const std::vector<std::string> args{"subtract", "tmst", "--N", "0.2", "--r", "0.4", "--coeffs", "1,0.5+0.5j"};
  EXPECT_EQ(run_cli(args).out, run_cli(args).out);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli({"subtract", "tmst", "--coeffs", "1,zz"}).code, 1);
  EXPECT_EQ(run_cli({"nonsense"}).code, 1);
  const Result pre = run_cli({"gaussian", "--b0", "0.1", "--c1", "-1"});
  EXPECT_EQ(pre.code, 3);
  EXPECT_NE(pre.err.find("b0"), std::string::npos);
  EXPECT_EQ(run_cli({"gaussian", "--b0", "1", "--c1", "0.3"}).code, 0);
  EXPECT_EQ(run_cli({"evolve", "general", "--b0", "1", "--c1", "0.3", "--time", "1"}).code, 3);
  EXPECT_EQ(run_cli({"subtract", "boundary", "--c1", "-0.3", "--c2", "0.4", "--b0", "2"}).code, 3);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST(Cli, DegenerateKernelIsRejectedBeforeInversion) {
  EXPECT_EQ(run_cli({"gaussian", "--b0", "0.5", "--c1", "-1"}).code, 3);
}

TEST(Cli, EvolveBellRenormalizes) {
  const Result r = run_cli({"evolve", "bell", "--c0", "1", "--c1", "1", "--noise", "0.1", "--time", "0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["inputs"]["input_norm"].get<double>(), std::sqrt(2.0), 1e-15);
}

TEST(Cli, OracleComparisonAgrees) {
  const Result r = run_cli({"oracle", "evolve", "bell", "--c0", "0.6", "--c1", "0.8j", "--noise", "0.1", "--time",
                            "0.4", "--cutoff", "12"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_TRUE(j["comparison"]["agreement"].get<bool>());
  EXPECT_EQ(j["cutoff"], 12);
}

TEST(Cli, ConfigFileSuppliesDefaults) {
  const std::string path = testing::TempDir() + "/cvrealign_cfg.json";
  std::ofstream(path) << R"({"N": 0.0, "r": 0.5, "coeffs": [1, [0, 1], "0.5-0.5j"]})";
  const Result r = run_cli({"--config", path, "subtract", "tmst"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_TRUE(j["coherent"].get<bool>());
  // Explicit flags override the config.
  const Result over = run_cli({"--config", path, "subtract", "tmst", "--r", "0.01", "--N", "1"});
  EXPECT_EQ(json::parse(over.out)["verdict"]["status"], "separable");
  EXPECT_EQ(run_cli({"--config", "/nonexistent.json", "selftest"}).code, 1);
}

TEST(Cli, CutoffFromEnvironment) {
  setenv(kCutoffEnv, "9", 1);
  const Result r = run_cli({"oracle", "gaussian", "--N", "0", "--r", "0.2"});
  unsetenv(kCutoffEnv);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["cutoff"], 9);
}

TEST(Cli, CriticalTimeAndFig1a) {
  const Result c = run_cli({"critical-time", "tmc", "--lambda", "1", "--noise", "0.01"});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(json::parse(c.out)["flag"], "found");
  const Result f = run_cli({"fig1a", "--noise", "0.1", "--lambda-min", "1", "--lambda-max", "1.2"});
  ASSERT_EQ(f.code, 0) << f.err;
  EXPECT_EQ(std::count(f.out.begin(), f.out.end(), '\n'), 4);
}

TEST(Cli, Metadata) {
  const Result r = run_cli({"--with-metadata", "gaussian", "--N", "0", "--r", "0.1"});
  EXPECT_TRUE(json::parse(r.out).contains("metadata"));
}

TEST(Cli, Selftest) {
  const Result r = run_cli({"selftest"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(json::parse(r.out)["passed"].get<bool>());
}

}  // namespace
}  // namespace cvrealign::cli
