// End-to-end tests of the mrwbandit executable.

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "mrwbandit/experiment.hpp"
#include "mrwbandit/io.hpp"

namespace fs = std::filesystem;
using namespace mrwb;

namespace {

struct Run {
    int code = -1;
    std::string output;
};

Run run(const std::string& args, const std::string& env = {}) {
    const std::string cmd = env + (env.empty() ? "" : " ") + MRWBANDIT_CLI + std::string(" ") + args + " 2>&1";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    while (std::fgets(buf.data(), buf.size(), pipe)) r.output += buf.data();
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& p) { return read_text(p); }

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("mrwbandit_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    void write(const std::string& name, const std::string& text) const { write_text(dir_ / name, text); }

    fs::path dir_;
};

double field(const std::string& output, const std::string& key) {
    std::istringstream in(output);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind(key + " ", 0) == 0) return std::stod(line.substr(key.size()));
    }
    ADD_FAILURE() << "no '" << key << "' in output:\n" << output;
    return 0.0;
}

}  // namespace

TEST_F(Cli, GenerateIsDeterministic) {
    ASSERT_EQ(run("generate --T 1024 --k 2 --seed 7 --out " + path("a")).code, 0);
    ASSERT_EQ(run("generate --T 1024 --k 2 --seed 7 --out " + path("b")).code, 0);
    for (const char* f : {"losses.csv", "losses.meta.json", "trajectory.csv", "trajectory.meta.json"})
        EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;

    const auto text = slurp(dir_ / "a" / "losses.csv");
    std::size_t rows = 0;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) rows += line.empty() || line[0] == '#' ? 0 : 1;
    EXPECT_EQ(rows, 1024u * 2 + 1);

    const auto meta = Json::parse(slurp(dir_ / "a" / "losses.meta.json"));
    EXPECT_EQ(meta["T"], 1024);
    EXPECT_EQ(meta["seed"], 7);
}

TEST_F(Cli, GenerateRejectsShortHorizon) {
    const auto r = run("generate --T 1 --k 2 --seed 1 --out " + path("x"));
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.output.find("at least 2"), std::string::npos);
}

TEST_F(Cli, UsageErrors) {
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
    EXPECT_EQ(run("generate --T abc").code, 2);
    EXPECT_EQ(run("--version").code, 0);
}

TEST_F(Cli, OutputDirectoryFromEnvironment) {
    ASSERT_EQ(run("generate --T 16 --k 2 --seed 1", "MRWBANDIT_OUT=" + path("env")).code, 0);
    EXPECT_TRUE(fs::exists(dir_ / "env" / "losses.csv"));
    ASSERT_EQ(run("generate --T 16 --k 2 --seed 1 --out " + path("flag"), "MRWBANDIT_OUT=" + path("env2")).code, 0);
    EXPECT_TRUE(fs::exists(dir_ / "flag" / "losses.csv"));
    EXPECT_FALSE(fs::exists(dir_ / "env2"));
}

TEST_F(Cli, PlayConstantOnFlatSequence) {
    const auto r = run("play --T 10 --k 2 --seed 1 --sigma 0 --epsilon 0.1 --chi 1 --policy const:2 --out " + path("p"));
    ASSERT_EQ(r.code, 0) << r.output;
    EXPECT_NEAR(field(r.output, "R"), 2.0, 1e-12);
    EXPECT_EQ(field(r.output, "M"), 1.0);
    EXPECT_NEAR(field(r.output, "best_fixed_loss"), 4.0, 1e-12);
    const auto rows = parse_results_csv(slurp(dir_ / "p" / "result.csv"));
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_NEAR(rows[0].regret, 2.0, 1e-12);
    EXPECT_EQ(rows[0].plays_of_best_arm, std::size_t{0});
}

TEST_F(Cli, ReplayEqualsInlineGeneration) {
    ASSERT_EQ(run("generate --T 512 --k 3 --seed 5 --out " + path("g")).code, 0);
    const auto inline_run = run("play --T 512 --k 3 --seed 5 --policy exp3:auto --policy-seed 3 --out " + path("i"));
    const auto replay = run("play --losses " + path("g/losses.csv") + " --policy exp3:auto --policy-seed 3 --out " + path("r"));
    ASSERT_EQ(inline_run.code, 0) << inline_run.output;
    ASSERT_EQ(replay.code, 0) << replay.output;
    for (const char* key : {"R", "M", "best_fixed_loss", "cumulative_loss", "N_chi"})
        EXPECT_EQ(field(inline_run.output, key), field(replay.output, key)) << key;
}

TEST_F(Cli, PlayRejectsUnknownPolicy) {
    const auto r = run("play --T 64 --k 2 --seed 1 --policy ucb1 --out " + path("p"));
    EXPECT_EQ(r.code, 2);
    for (const char* p : {"const:<arm>", "etc:rpa=<n>", "exp3:auto", "betc:tau=auto"})
        EXPECT_NE(r.output.find(p), std::string::npos) << p;
}

TEST_F(Cli, PlayRejectsMalformedLossFile) {
    write("bad.csv", "t,x,loss\n1,1,0.5\n1,2,oops\n");
    const auto r = run("play --losses " + path("bad.csv") + " --policy const:1 --out " + path("p"));
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.output.find("line 3"), std::string::npos) << r.output;
}

TEST_F(Cli, PlayWritesActionTrace) {
    ASSERT_EQ(run("play --T 32 --k 2 --seed 1 --policy betc:tau=8 --actions --out " + path("p")).code, 0);
    const auto text = slurp(dir_ / "p" / "actions.csv");
    EXPECT_NE(text.find("trial,T,c,policy,t,action\n"), std::string::npos);
    EXPECT_NE(text.find("0,32,1,betc:tau=8,32,"), std::string::npos);
}

TEST_F(Cli, SweepDeterministicAcrossJobs) {
    write("cfg.json", R"({"adversary": {"T": [64, 128, 256], "k": 2},
                          "policies": ["exp3:auto", "betc:tau=auto"], "trials": 5, "seed": 4,
                          "emit": {"plots": true}})");
    ASSERT_EQ(run("sweep --config " + path("cfg.json") + " --jobs 1 --out " + path("a")).code, 0);
    ASSERT_EQ(run("sweep --config " + path("cfg.json") + " --jobs 4 --out " + path("b")).code, 0);
    for (const char* f : {"results.csv", "summary.json", "regret_vs_T.svg", "switches_vs_T.svg"})
        EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
    EXPECT_EQ(parse_results_csv(slurp(dir_ / "a" / "results.csv")).size(), 30u);
    EXPECT_FALSE(fs::exists(dir_ / "a" / "failures.csv"));
}

TEST_F(Cli, SweepNeedsSeed) {
    write("cfg.json", R"({"adversary": {"T": 64}, "policies": ["exp3:auto"]})");
    EXPECT_EQ(run("sweep --config " + path("cfg.json") + " --out " + path("a")).code, 2);
    EXPECT_EQ(run("sweep --config " + path("cfg.json") + " --seed 3 --out " + path("a")).code, 0);
}

TEST_F(Cli, SweepReportsFailures) {
    write("cfg.json", R"({"adversary": {"T": [16, 256]}, "policies": ["etc:rpa=64"], "trials": 2, "seed": 1})");
    const auto r = run("sweep --config " + path("cfg.json") + " --out " + path("a"));
    EXPECT_EQ(r.code, 1);
    const auto failures = slurp(dir_ / "a" / "failures.csv");
    EXPECT_NE(failures.find("exceeds T"), std::string::npos);
    EXPECT_EQ(parse_results_csv(slurp(dir_ / "a" / "results.csv")).size(), 2u);
}

TEST_F(Cli, SweepRejectsBadConfig) {
    write("cfg.json", R"({"adversary": {"T": 64}, "seed": 1, "policies": ["exp3"], "extra": true})");
    EXPECT_EQ(run("sweep --config " + path("cfg.json") + " --out " + path("a")).code, 2);
    write("broken.json", "{not json");
    EXPECT_EQ(run("sweep --config " + path("broken.json") + " --out " + path("a")).code, 2);
}

TEST_F(Cli, VerifyQuickAndFaultInjection) {
    const auto ok = run("verify --level quick");
    EXPECT_EQ(ok.code, 0) << ok.output;
    EXPECT_EQ(ok.output.find("[FAIL]"), std::string::npos);

    const auto bad = run("verify --level quick --inject-fault");
    EXPECT_EQ(bad.code, 1);
    EXPECT_NE(bad.output.find("[FAIL] ancestors-popcount"), std::string::npos) << bad.output;
    EXPECT_EQ(run("verify --level medium").code, 2);
}

TEST_F(Cli, PlotRegretMatchesSummarySlope) {
    write("cfg.json", R"({"adversary": {"T": [128, 256, 512, 1024], "k": 2},
                          "policies": ["exp3:auto", "betc:tau=auto", "const:1"], "trials": 4, "seed": 2})");
    ASSERT_EQ(run("sweep --config " + path("cfg.json") + " --out " + path("s")).code, 0);
    ASSERT_EQ(run("plot --input " + path("s/results.csv") + " --kind regret-vs-T --out " + path("r.svg")).code, 0);
    const auto svg = slurp(dir_ / "r.svg");
    const auto summary = Json::parse(slurp(dir_ / "s" / "summary.json"));
    std::size_t groups = 0;
    for (auto pos = svg.find("<g class=\"series\""); pos != std::string::npos; pos = svg.find("<g class=\"series\"", pos + 1))
        ++groups;
    EXPECT_EQ(groups, 3u);
    for (const auto& s : summary["series"]) {
        char expected[32];
        std::snprintf(expected, sizeof expected, "data-slope=\"%.3f\"", s["regret_fit"]["slope"].get<double>());
        EXPECT_NE(svg.find(expected), std::string::npos) << expected;
    }
    ASSERT_EQ(run("plot --input " + path("s/results.csv") + " --kind switches-vs-T --out " + path("m.svg")).code, 0);
}

TEST_F(Cli, PlotTrajectoryAndSchemaMismatch) {
    ASSERT_EQ(run("generate --T 64 --k 2 --seed 1 --sigma 0 --out " + path("g")).code, 0);
    EXPECT_EQ(run("plot --input " + path("g/trajectory.csv") + " --kind trajectory --out " + path("t.svg")).code, 0);
    EXPECT_TRUE(fs::exists(dir_ / "t.svg"));
    EXPECT_NE(run("plot --input " + path("g/trajectory.csv") + " --kind regret-vs-T --out " + path("x.svg")).code, 0);
    EXPECT_NE(run("plot --input " + path("g/losses.csv") + " --kind trajectory --out " + path("y.svg")).code, 0);
    EXPECT_EQ(run("plot --input " + path("g/trajectory.csv") + " --kind histogram --out " + path("z.svg")).code, 2);
}
