#include "passivity/cli.h"

#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "passivity/model_io.h"

namespace passivity {
namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun Invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "passivity_cli");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

const std::string kM0 = std::string(TEST_DATA_DIR) + "/m0.json";
const std::string kMnp = std::string(TEST_DATA_DIR) + "/mnp.json";

TEST(ModelIo, RoundTrip) {
  const StateSpaceModel m = StateSpaceModel::Scalar(0.5, 1, 1, 1);
  const ModelFile f = parse_model_text(write_model_text(m));
  EXPECT_EQ(f.model.A(0, 0), Complex(0.5, 0));
  EXPECT_FALSE(f.X.has_value());
}

TEST(ModelIo, ReportsFieldPath) {
  const std::string text = R"({"schema_version":"1.0","n":1,"m":1,
    "A":[[[0.5,0]]],"B":[[[1,0]]],"C":[[[1,0]]],"D":[[["x",0]]]})";
  try {
    parse_model_text(text);
    FAIL();
  } catch (const PassivityError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    EXPECT_NE(std::string(e.what()).find("D[0][0]"), std::string::npos);
  }
}

TEST(ModelIo, RejectsWrongSchema) {
  EXPECT_THROW(parse_model_text(R"({"schema_version":"2.0"})"), PassivityError);
  EXPECT_THROW(parse_model_text("{"), PassivityError);
}

TEST(Cli, AnalyzeReport) {
  const CliRun r = Invoke({"analyze", "--model", kM0});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["command"], "analyze");
  EXPECT_TRUE(j["results"]["strictly_passive"].get<bool>());
  EXPECT_EQ(j["input_digest"].get<std::string>().size(), 16u);
}

TEST(Cli, DigestIsStable) {
  EXPECT_EQ(Invoke({"analyze", "--model", kM0}).out,
            Invoke({"analyze", "--model", kM0}).out);
}

TEST(Cli, RadiusWithScalarCertificate) {
  const CliRun r = Invoke({"radius", "--model", kM0, "--x", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["results"]["rho"].get<double>(), 0.2192235936, 1e-8);
}

TEST(Cli, DomainErrorExitCode) {
  EXPECT_EQ(Invoke({"radius", "--model", kMnp, "--x", "1"}).code, kExitDomain);
}

TEST(Cli, UsageErrorExitCode) {
  EXPECT_EQ(Invoke({"analyze", "--bogus"}).code, kExitUsage);
  EXPECT_EQ(Invoke({}).code, kExitUsage);
}

TEST(Cli, MissingFileIsIoError) {
  EXPECT_EQ(Invoke({"analyze", "--model", "/nonexistent.json"}).code, kExitInternal);
}

TEST(Cli, ScalarExperimentWritesCsv) {
  const CliRun r = Invoke({"experiment", "scalar", "--grid", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("t,", 0), 0u);
}

TEST(Cli, PassifyFrobenius) {
  const CliRun r = Invoke({"passify", "--model", kMnp, "--norm", "fro"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["results"]["xi_big"].get<double>(), 0.6624404748, 1e-6);
}

}  // namespace
}  // namespace passivity
