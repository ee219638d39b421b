#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "filterint/cli.hpp"
#include "filterint/io.hpp"

using namespace filterint;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "filterint");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    CliResult r;
    r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("filterint_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write(const std::string& name, const std::string& text) const {
        const auto path = dir_ / name;
        std::ofstream(path, std::ios::binary) << text;
        return path.string();
    }

    static std::string slurp(const fs::path& path) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream buffer;
        buffer << in.rdbuf();
        return buffer.str();
    }

    fs::path dir_;
};

const char* kHalves = R"({"domain":["0","1"],"breakpoints":["0","1/2","1"],"tags":["1/4","3/4"]})";

}  // namespace

TEST_F(CliTest, RhoOfAPartitionWithItselfIsZero) {
    const auto a = write("a.json", kHalves);
    const auto r = run_cli({"rho", a, a});
    EXPECT_EQ(r.code, cli::exit_pass);
    EXPECT_EQ(r.out, "0\n");
}

TEST_F(CliTest, RhoPrintsExactRationals) {
    const auto a = write("a.json", kHalves);
    const auto b = write("b.json", R"({"domain":["0","1"],"breakpoints":["0","1"],"tags":["1/2"]})");
    EXPECT_EQ(run_cli({"rho", a, b}).out, "2\n");
}

TEST_F(CliTest, IntegrateIdentityOverGeometricMesh) {
    const auto r = run_cli({"integrate", "--function", "identity", "--base", "mesh:1/2^k", "--depth", "12", "--tol",
                            "1/1000", "--seed", "1", "--out", (dir_ / "run").string()});
    ASSERT_EQ(r.code, cli::exit_pass) << r.err;
    const auto report = nlohmann::json::parse(r.out);
    EXPECT_EQ(report["command"], "integrate");
    EXPECT_EQ(report["result"]["verdict"], "converged");
    const auto estimate = Rational::parse(report["result"]["estimate"].get<std::string>());
    EXPECT_LT(abs(estimate - Rational(1, 2)), Rational(1, 1000));
    EXPECT_EQ(slurp(dir_ / "run" / "report.json"), r.out);
    EXPECT_TRUE(fs::exists(dir_ / "run" / "tables" / "indices.csv"));
}

TEST_F(CliTest, OutputDoesNotDependOnJobs) {
    std::vector<std::string> args{"integrate", "--function", "polynomial:0,0,1", "--base", "mesh:1/2^k", "--depth",
                                  "6",         "--samples",  "10",               "--tol",  "1/100",      "--seed",
                                  "3"};
    auto one = args;
    one.insert(one.end(), {"--jobs", "1", "--out", (dir_ / "one").string()});
    auto four = args;
    four.insert(four.end(), {"--jobs", "4", "--out", (dir_ / "four").string()});
    const auto a = run_cli(one);
    const auto b = run_cli(four);
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(slurp(dir_ / "one" / "report.json"), slurp(dir_ / "four" / "report.json"));
    EXPECT_EQ(slurp(dir_ / "one" / "tables" / "indices.csv"), slurp(dir_ / "four" / "tables" / "indices.csv"));
}

TEST_F(CliTest, ExitCodesFollowTheVerdict) {
    const std::vector<std::string> common{"--base", "mesh:1/2^k", "--samples", "10", "--seed", "1"};
    auto dirichlet = std::vector<std::string>{"integrate", "--function", "dirichlet", "--depth", "6"};
    dirichlet.insert(dirichlet.end(), common.begin(), common.end());
    EXPECT_EQ(run_cli(dirichlet).code, cli::exit_fail);

    auto shallow = std::vector<std::string>{"integrate", "--function", "identity", "--depth", "3", "--tol", "1/1000"};
    shallow.insert(shallow.end(), common.begin(), common.end());
    EXPECT_EQ(run_cli(shallow).code, cli::exit_unknown);
}

TEST_F(CliTest, MissingSeedIsAUsageErrorAndStillWritesAReport) {
    const auto r = run_cli({"integrate", "--function", "identity", "--base", "mesh:1/k", "--out",
                            (dir_ / "err").string()});
    EXPECT_EQ(r.code, cli::exit_usage);
    EXPECT_NE(r.err.find("--seed"), std::string::npos);
    const auto report = nlohmann::json::parse(slurp(dir_ / "err" / "report.json"));
    EXPECT_EQ(report["exit_code"], cli::exit_usage);
    EXPECT_TRUE(report.contains("error"));
}

TEST_F(CliTest, ConfigErrorsNameTheLineAndField) {
    const auto unknown = write("unknown.json", "{\n  \"seed\": 1,\n  \"dept\": 4\n}\n");
    auto r = run_cli({"integrate", "--config", unknown, "--function", "identity", "--base", "mesh:1/k"});
    EXPECT_EQ(r.code, cli::exit_usage);
    EXPECT_NE(r.err.find(":3"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("dept"), std::string::npos) << r.err;

    const auto bad_value = write("bad.json", "{\n  \"seed\": 1,\n  \"function\": \"identity\",\n  \"tol\": \"x\"\n}\n");
    r = run_cli({"integrate", "--config", bad_value, "--base", "mesh:1/k"});
    EXPECT_EQ(r.code, cli::exit_usage);
    EXPECT_NE(r.err.find(":4"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("tol"), std::string::npos) << r.err;

    const auto broken = write("broken.json", "{\n  \"seed\": 1,\n  oops\n}\n");
    r = run_cli({"integrate", "--config", broken});
    EXPECT_EQ(r.code, cli::exit_usage);
    EXPECT_NE(r.err.find(":3"), std::string::npos) << r.err;
}

TEST_F(CliTest, FlagsOverrideConfig) {
    const auto config = write("c.json", R"({"seed": 1, "function": "dirichlet", "base": "mesh:1/2^k", "depth": 4,
                                            "samples": 5, "tol": "1/10"})");
    EXPECT_EQ(run_cli({"integrate", "--config", config}).code, cli::exit_fail);
    const auto r = run_cli({"integrate", "--config", config, "--function", "constant:2"});
    EXPECT_EQ(r.code, cli::exit_pass);
    EXPECT_EQ(nlohmann::json::parse(r.out)["result"]["estimate"], "2");
}

TEST_F(CliTest, BadFlagValuesAreUsageErrors) {
    EXPECT_EQ(run_cli({"integrate", "--function", "sin", "--base", "mesh:1/k", "--seed", "1"}).code, cli::exit_usage);
    EXPECT_EQ(run_cli({"integrate", "--function", "identity", "--base", "grid", "--seed", "1"}).code, cli::exit_usage);
    EXPECT_EQ(run_cli({"integrate", "--function", "identity", "--base", "mesh:1/k", "--seed", "1", "--tol", "-1/2"})
                  .code,
              cli::exit_usage);
    EXPECT_EQ(run_cli({"frobnicate"}).code, cli::exit_usage);
    EXPECT_EQ(run_cli({}).code, cli::exit_usage);
}

TEST_F(CliTest, RestrictPrintsPartitionAndTrace) {
    const auto p = write("p.json", kHalves);
    const auto r = run_cli({"restrict", "--partition", p, "--alpha", "3/8", "--beta", "7/8"});
    ASSERT_EQ(r.code, cli::exit_pass) << r.err;
    const auto result = Json::parse(r.out)["result"];
    EXPECT_EQ(result["partition"].dump(), R"({"domain":["3/8","7/8"],"breakpoints":["3/8","7/8"],"tags":["3/4"]})");
    EXPECT_EQ(result["trace"]["case"], 3);

    const auto empty = run_cli({"restrict", "--partition", p, "--alpha", "3/8", "--beta", "5/8"});
    EXPECT_EQ(empty.code, cli::exit_fail);
}

TEST_F(CliTest, CheckMetricOnFilesAndRandomSamples) {
    const auto a = write("a.json", kHalves);
    const auto b = write("b.json", R"({"domain":["0","1"],"breakpoints":["0","1"],"tags":["1/2"]})");
    auto r = run_cli({"check-metric", "--partitions", a, b});
    EXPECT_EQ(r.code, cli::exit_pass) << r.err;
    r = run_cli({"check-metric", "--count", "12", "--cells", "8", "--seed", "5"});
    EXPECT_EQ(r.code, cli::exit_pass) << r.err;
    EXPECT_EQ(nlohmann::json::parse(r.out)["result"]["pairs_checked"], 144);
}

TEST_F(CliTest, SubsetAndDominance) {
    auto r = run_cli({"subset", "--coarser", "mesh:1/k", "--finer", "exact_tagged:1/n:1/k", "--depth", "3",
                      "--samples", "20", "--seed", "1"});
    EXPECT_EQ(r.code, cli::exit_pass) << r.err;
    r = run_cli({"subset", "--coarser", "exact_tagged:1/n:1/k", "--finer", "mesh:1/k", "--depth", "1", "--samples",
                 "100", "--seed", "1"});
    EXPECT_EQ(r.code, cli::exit_unknown);
    r = run_cli({"dominance", "--dominated", "mesh:1/k", "--dominating", "exact_tagged:1/n:1/k", "--epsilon",
                 "1/100", "--projector", "perturb", "--depth", "3", "--samples", "20", "--seed", "1"});
    EXPECT_EQ(r.code, cli::exit_pass) << r.err;
    r = run_cli({"dominance", "--dominated", "mesh:1/k", "--dominating", "mesh:1/k", "--epsilon", "0", "--seed",
                 "1"});
    EXPECT_EQ(r.code, cli::exit_usage);
}

TEST_F(CliTest, SubsegmentIntegrateConstant) {
    const auto r = run_cli({"subsegment-integrate", "--function", "constant:3", "--base", "mesh:1/k", "--alpha", "1/4",
                            "--beta", "1/2", "--depth", "4", "--samples", "5", "--pairs", "5", "--seed", "2", "--out",
                            (dir_ / "sub").string()});
    ASSERT_EQ(r.code, cli::exit_pass) << r.err;
    const auto result = nlohmann::json::parse(r.out)["result"];
    EXPECT_EQ(result["restricted"]["estimate"], "3/4");
    EXPECT_TRUE(fs::exists(dir_ / "sub" / "tables" / "full.csv"));
    EXPECT_TRUE(fs::exists(dir_ / "sub" / "tables" / "restricted.csv"));
}
