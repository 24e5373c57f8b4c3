#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "pathvar/json_io.hpp"

namespace pathvar {
namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("pathvar_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string file(const std::string& name) const { return (dir_ / name).string(); }

    int run(std::vector<std::string> args) {
        out_.str("");
        err_.str("");
        return cli::run(args, out_, err_);
    }

    static Json load(const std::string& path) {
        std::ifstream in(path);
        return Json::parse(in);
    }

    static std::size_t count_lines(const std::string& path) {
        std::ifstream in(path);
        std::size_t n = 0;
        for (std::string line; std::getline(in, line);) ++n;
        return n;
    }

    fs::path dir_;
    std::ostringstream out_;
    std::ostringstream err_;
};

TEST_F(Cli, FbmWritesOneRowPerSample) {
    const std::string b = file("b.csv");
    ASSERT_EQ(run({"fbm", "--hurst", "0.25", "--steps", "65536", "--seed", "7", "--out", b}), 0) << err_.str();
    EXPECT_EQ(count_lines(b), 65537u + 1u);
}

TEST_F(Cli, VariationReportHasPerLevelSums) {
    const std::string b = file("b.csv"), v = file("v.json");
    ASSERT_EQ(run({"fbm", "--hurst", "0.25", "--steps", "65536", "--seed", "7", "--out", b}), 0);
    ASSERT_EQ(run({"variation", "--path", b, "--p", "4", "--scheme", "uniform", "--levels", "6:14", "--out", v}), 0)
        << err_.str();
    const Json j = load(v);
    EXPECT_EQ(j["tool"], "pathvar");
    EXPECT_EQ(j["command"], "variation");
    EXPECT_EQ(j["config"]["levels"], "6:14");
    const Json& levels = j["result"]["profile"]["levels"];
    ASSERT_EQ(levels.size(), 9u);
    EXPECT_EQ(levels[0]["n"], 6);
    EXPECT_EQ(levels[8]["n"], 14);
    EXPECT_NEAR(levels[8]["values"][0].get<double>(), 3.0, 0.6);
    EXPECT_TRUE(j["result"].contains("convergence"));
}

TEST_F(Cli, TanakaResidualOfRampIsMachineZero) {
    const std::string b = file("b.csv");
    ASSERT_EQ(run({"fbm", "--hurst", "0.25", "--steps", "65536", "--seed", "7", "--out", b}), 0);
    ASSERT_EQ(run({"tanaka", "--path", b, "--p", "4", "--f", "ramp:a=0", "--level", "10"}), 0) << err_.str();
    std::istringstream lines(out_.str());
    std::string word;
    int n = -1;
    double t = 0.0, residual = 1.0;
    lines >> word >> n >> word >> t >> word >> residual;
    EXPECT_EQ(n, 10);
    EXPECT_LT(std::abs(residual), 1e-9);
}

TEST_F(Cli, RepeatedRunsHaveIdenticalBodies) {
    const std::vector<std::vector<std::string>> commands{
        {"variation", "--gen", "fbm:hurst=0.5,steps=4096", "--seed", "3", "--levels", "4:10"},
        {"integrate", "--gen", "fbm:hurst=0.5,steps=4096", "--f", "cos", "--levels", "4:8"},
        {"localtime", "--gen", "fbm:hurst=0.5,steps=4096,horizon=0.0009765625", "--level", "5"},
        {"roughpath-chen", "--gen", "fbm:hurst=0.25,steps=2048", "--p", "4", "--triples", "50"},
        {"variation", "--gen", "fbm:hurst=0.5,steps=1024", "--ensemble", "6", "--seed", "9", "--threads", "1"},
    };
    for (auto args : commands) {
        args.push_back("--out");
        args.push_back(file("a.json"));
        ASSERT_EQ(run(args), 0) << err_.str();
        args.back() = file("b.json");
        const auto th = std::find(args.begin(), args.end(), "--threads");
        if (th != args.end()) *(th + 1) = "3";  // more threads, same output
        ASSERT_EQ(run(args), 0) << err_.str();
        EXPECT_EQ(hashable_body(load(file("a.json"))).dump(), hashable_body(load(file("b.json"))).dump()) << args[0];
    }
}

TEST_F(Cli, EnsembleReportsEveryPath) {
    ASSERT_EQ(run({"oddp", "--gen", "fbm:hurst=0.5,steps=4096,horizon=0.0009765625", "--ensemble", "4", "--levels",
                   "3:5", "--out", file("o.json")}),
              0)
        << err_.str();
    const Json j = load(file("o.json"));
    EXPECT_EQ(j["result"]["paths"], 4);
    EXPECT_EQ(j["result"]["results"].size(), 4u);
}

TEST_F(Cli, EverySubcommandRuns) {
    const std::string small = "fbm:hurst=0.5,steps=4096,horizon=0.0009765625";
    const std::vector<std::vector<std::string>> commands{
        {"oddp", "--gen", small, "--levels", "3:5"},
        {"integrate", "--gen", "sine", "--f", "monomial:m=3", "--p", "4"},
        {"functional", "--gen", "fbm:steps=2048", "--functional", "square"},
        {"isometry", "--gen", "fbm:steps=2048", "--functional", "time_value"},
        {"decompose", "--gen", "fbm:steps=2048", "--functional", "fn:cos", "--times", "0.5,1"},
        {"conjecture", "--hurst", "0.5", "--ensemble", "3", "--steps", "2048", "--levels", "3:4"},
        {"roughpath-integrate", "--gen", "fbm:steps=2048", "--f", "cos", "--depth", "8", "--pairs", "20"},
        {"equivalence", "--gen", "fbm:hurst=0.25,steps=2048", "--p", "4", "--f", "cos", "--levels", "3:8"},
        {"localtime", "--gen", small, "--level", "4", "--csv", file("lt.csv"), "--flavor", "upcrossing"},
    };
    for (const auto& args : commands) {
        ASSERT_EQ(run(args), 0) << args[0] << ": " << err_.str();
        const Json j = Json::parse(out_.str());
        EXPECT_EQ(j["command"], args[0]);
    }
    EXPECT_GT(count_lines(file("lt.csv")), 10u);
}

TEST_F(Cli, ChenNegativeControl) {
    ASSERT_EQ(run({"roughpath-chen", "--gen", "fbm:steps=1024", "--triples", "40"}), 0);
    EXPECT_TRUE(Json::parse(out_.str())["result"]["passed"].get<bool>());
    ASSERT_EQ(run({"roughpath-chen", "--gen", "fbm:steps=1024", "--triples", "40", "--corrupt", "0.1"}), 0);
    EXPECT_FALSE(Json::parse(out_.str())["result"]["passed"].get<bool>());
}

TEST_F(Cli, ValidationErrorsExitTwo) {
    EXPECT_EQ(run({}), 2);
    EXPECT_EQ(run({"bogus"}), 2);
    EXPECT_EQ(run({"variation", "--gen", "fbm", "--no-such-flag"}), 2);
    EXPECT_EQ(run({"variation", "--gen", "fbm", "--p", "3"}), 2);
    EXPECT_EQ(run({"variation", "--gen", "fbm", "--levels", "9:2"}), 2);
    EXPECT_EQ(run({"variation"}), 2);
    EXPECT_EQ(run({"variation", "--gen", "fbm:hurst=1.5"}), 2);
    EXPECT_EQ(run({"variation", "--gen", "nosuchpath"}), 2);
    std::ofstream(file("bad.csv")) << "t,x1\n0,0\n0.5,1\n1.7,2\n";
    EXPECT_EQ(run({"variation", "--path", file("bad.csv")}), 2);
    EXPECT_FALSE(err_.str().empty());
}

TEST_F(Cli, ResolutionGuardExitsOne) {
    EXPECT_EQ(run({"oddp", "--gen", "fbm:hurst=0.5,steps=1024", "--levels", "8:10"}), 1);
    EXPECT_NE(err_.str().find("resolv"), std::string::npos);
}

TEST_F(Cli, HelpAndVersion) {
    EXPECT_EQ(run({"--help"}), 0);
    EXPECT_NE(out_.str().find("roughpath-chen"), std::string::npos);
    EXPECT_EQ(run({"--version"}), 0);
    EXPECT_EQ(out_.str().rfind("v", 0), 0u);
}

}  // namespace
}  // namespace pathvar
