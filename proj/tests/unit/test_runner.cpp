#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cdde/runner.hpp"

namespace fs = std::filesystem;
using cdde::run_command;

namespace {

class Runner : public ::testing::Test {
protected:
    fs::path dir;

    void SetUp() override {
        dir = fs::temp_directory_path() / ("cdde_runner_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }

    std::string scenario(const std::string& name, const std::string& text) {
        const auto p = dir / name;
        std::ofstream(p) << text;
        return p.string();
    }
    int run(std::vector<std::string> args) {
        out.str("");
        err.str("");
        return run_command(args, out, err);
    }
    static std::string slurp(const fs::path& p) {
        std::ifstream is(p, std::ios::binary);
        std::stringstream ss;
        ss << is.rdbuf();
        return ss.str();
    }
    static std::vector<std::vector<std::string>> csv(const fs::path& p) {
        std::vector<std::vector<std::string>> rows;
        std::istringstream is(slurp(p));
        for (std::string line; std::getline(is, line);) {
            std::vector<std::string> cells;
            std::istringstream ls(line);
            for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
            rows.push_back(cells);
        }
        return rows;
    }

    std::ostringstream out, err;
};

const char* kSec51 = "system: {lambdas: [1, 0.5, 0.25], tau: 0.741005, a: 2.125}\n";

}  // namespace

TEST_F(Runner, A0NearThresholdDelay) {
    const auto cfg = scenario("s.yaml", kSec51);
    ASSERT_EQ(run({"a0", "--config", cfg, "--out", (dir / "o").string()}), 0) << err.str();
    const auto j = nlohmann::json::parse(slurp(dir / "o" / "result.json"));
    EXPECT_NEAR(j["a0"].get<double>(), 2.125, 1e-4);
    EXPECT_NE(out.str().find("a0 = 2.12"), std::string::npos);
}

TEST_F(Runner, SpectrumEmptyRegionIsUsageError) {
    const auto cfg = scenario("s.yaml", kSec51);
    EXPECT_EQ(run({"spectrum", "--config", cfg, "--out", (dir / "o").string(), "--region", "1,0,-1,1"}), 2);
    EXPECT_NE(err.str().find("region"), std::string::npos);
}

TEST_F(Runner, SpectrumWritesRootsAndManifest) {
    const auto cfg = scenario("s.yaml", kSec51);
    ASSERT_EQ(run({"spectrum", "--config", cfg, "--out", (dir / "o").string(), "--region", "-4,1,-10,10"}), 0) << err.str();
    const auto rows = csv(dir / "o" / "roots.csv");
    ASSERT_GE(rows.size(), 2u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"re", "im", "multiplicity", "residual"}));
    const auto m = nlohmann::json::parse(slurp(dir / "o" / "manifest.json"));
    EXPECT_EQ(m["command"], "spectrum");
    EXPECT_EQ(m["version"], cdde::kToolVersion);
    for (const auto& f : m["outputs"]) EXPECT_TRUE(fs::exists(dir / "o" / f.get<std::string>())) << f;
    EXPECT_EQ(m["verdicts"]["count_matches"], "PASS");
}

TEST_F(Runner, ClassifyZeroInitialIsTrivial) {
    const auto cfg = scenario("s.yaml", std::string(kSec51) + "initial: {kind: zero}\n");
    ASSERT_EQ(run({"classify", "--config", cfg, "--out", (dir / "o").string()}), 0) << err.str();
    const auto j = nlohmann::json::parse(slurp(dir / "o" / "result.json"));
    EXPECT_EQ(j["report"]["class"], "eventually_trivial");
}

TEST_F(Runner, ReproduceUnknownCaseAndMissingConfig) {
    EXPECT_EQ(run({"reproduce", "nope", "--out", (dir / "o").string()}), 2);
    EXPECT_EQ(run({"a0", "--out", (dir / "o").string()}), 2);
    EXPECT_EQ(run({"frobnicate"}), 2);
    EXPECT_EQ(run({"a0", "--config", (dir / "missing.yaml").string()}), 2);
}

TEST_F(Runner, ReproduceAllPasses) {
    ASSERT_EQ(run({"reproduce", "all", "--out", (dir / "o").string()}), 0) << err.str() << out.str();
    const auto m = nlohmann::json::parse(slurp(dir / "o" / "manifest.json"));
    for (const auto& [k, v] : m["verdicts"].items()) EXPECT_EQ(v, "PASS") << k;
}

TEST_F(Runner, CsvOutputIsDeterministic) {
    const auto cfg = scenario("s.yaml", std::string(kSec51) + "initial: {kind: random, seed: 3}\nanalysis: {horizon: 8}\n");
    ASSERT_EQ(run({"simulate", "--config", cfg, "--out", (dir / "a").string()}), 0) << err.str();
    ASSERT_EQ(run({"simulate", "--config", cfg, "--out", (dir / "b").string()}), 0) << err.str();
    const auto a = slurp(dir / "a" / "trajectory.csv");
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, slurp(dir / "b" / "trajectory.csv"));
}

TEST_F(Runner, OutputDirFromScenario) {
    const auto target = (dir / "from_cfg").string();
    const auto cfg = scenario("s.yaml", std::string(kSec51) + "output: " + target + "\n");
    ASSERT_EQ(run({"a0", "--config", cfg}), 0) << err.str();
    EXPECT_TRUE(fs::exists(fs::path(target) / "manifest.json"));
}

TEST_F(Runner, SweepDelayFlipsRealRoots) {
    const auto cfg = scenario("s.yaml", std::string(kSec51) + "sweep: {parameter: tau, from: 0.7409, to: 0.7412, steps: 4, analyses: [a0]}\n");
    ASSERT_EQ(run({"sweep", "--config", cfg, "--out", (dir / "o").string()}), 0) << err.str();
    const auto rows = csv(dir / "o" / "sweep.csv");
    ASSERT_EQ(rows.size(), 5u);
    ASSERT_EQ(rows[0][4], "real_roots");
    EXPECT_EQ(rows[1][4], "1");
    EXPECT_EQ(rows[2][4], "1");
    EXPECT_EQ(rows[3][4], "0");
    EXPECT_EQ(rows[4][4], "0");
}

TEST_F(Runner, SweepGainCrossesStabilityBoundary) {
    const auto cfg = scenario("s.yaml", "system: {lambdas: [1, 1], tau: 1, a: 1}\n"
                                        "sweep: {parameter: a, from: 0.5, to: 8, steps: 6, analyses: [stability]}\n");
    ASSERT_EQ(run({"sweep", "--config", cfg, "--out", (dir / "o").string()}), 0) << err.str();
    const auto rows = csv(dir / "o" / "sweep.csv");
    ASSERT_EQ(rows.size(), 7u);
    ASSERT_EQ(rows[0][6], "stability");
    EXPECT_EQ(rows[1][6], "asymptotically_stable");
    EXPECT_EQ(rows[6][6], "unstable");
}
