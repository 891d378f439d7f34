#include <gtest/gtest.h>

#include <string>

#include "cdde/scenario.hpp"

using namespace cdde;

namespace {

const char* kFull = R"(name: three-stage
system:
  lambdas: [1, 0.5, 0.25]
  delays: [0.1, 0.1, 0.3]
  nonlinearities:
    - {kind: tanh, slope: 1}
    - {kind: hill_odd, slope: 1, exponent: 3}
    - {kind: tanh, slope: -2.125}
analysis:
  region: [-5, 1, -20, 20]
  kmax: 4
  window: 6
  seeds: 8
initial:
  kind: eigen
  eigen_amplitude: 1.0e-5
sweep:
  parameter: tau
  from: 0.3
  to: 1.0
  steps: 8
  analyses: [a0, stability]
output: out/three
)";

std::string message_of(const std::string& text) {
    try {
        parse_scenario(text, "s.yaml");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST(Scenario, ParsesFullDocument) {
    const auto cfg = parse_scenario(kFull);
    EXPECT_EQ(cfg.name, "three-stage");
    EXPECT_EQ(cfg.system.n(), 3);
    EXPECT_NEAR(cfg.system.total_delay(), 0.5, 1e-15);
    EXPECT_NEAR(cfg.spectral().a, 2.125, 1e-15);
    EXPECT_NEAR(cfg.spectral().tau, 0.5, 1e-15);
    ASSERT_TRUE(cfg.analysis.region);
    EXPECT_DOUBLE_EQ(cfg.analysis.region->im_max, 20.0);
    EXPECT_EQ(cfg.analysis.kmax, 4);
    EXPECT_EQ(cfg.analysis.seeds, 8);
    EXPECT_EQ(cfg.analysis.step_div, 128);
    EXPECT_EQ(cfg.initial.kind, InitialKind::eigen);
    EXPECT_DOUBLE_EQ(*cfg.initial.eigen_amplitude, 1e-5);
    ASSERT_TRUE(cfg.sweep);
    EXPECT_EQ(cfg.sweep->parameter, "tau");
    EXPECT_EQ(cfg.sweep->analyses, (std::vector<std::string>{"a0", "stability"}));
    EXPECT_EQ(*cfg.output_dir, "out/three");
    EXPECT_EQ(cfg.text, kFull);
}

TEST(Scenario, ShorthandLinearSystem) {
    const auto cfg = parse_scenario("system: {lambdas: [1, 2], tau: 0.7, a: 3}\n");
    EXPECT_TRUE(cfg.system.is_standard_form());
    EXPECT_DOUBLE_EQ(cfg.spectral().a, 3.0);
    EXPECT_DOUBLE_EQ(cfg.system.delays[0], 0.0);
    EXPECT_FALSE(cfg.sweep);
}

TEST(Scenario, UnknownKeyReportsLine) {
    const std::string text = "system:\n  lambdas: [1]\n  tau: 1\n  a: 2\n  gain: 4\n";
    try {
        parse_scenario(text, "s.yaml");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.line(), 5);
        EXPECT_NE(std::string(e.what()).find("s.yaml:5:"), std::string::npos) << e.what();
        EXPECT_NE(std::string(e.what()).find("gain"), std::string::npos);
    }
    EXPECT_NE(message_of("sytem: {}\n").find("s.yaml:1:"), std::string::npos);
}

TEST(Scenario, RejectsInvalidContent) {
    EXPECT_FALSE(message_of("system: {lambdas: [1, 2], tau: 1}\n").empty());
    EXPECT_FALSE(message_of("system: {lambdas: [1, 2], tau: 1, a: -1}\n").empty());
    EXPECT_FALSE(message_of("system: {lambdas: [1, -2], tau: 1, a: 1}\n").empty());
    EXPECT_FALSE(message_of("system: {lambdas: [1, 2], delays: [1], a: 1}\n").empty());
    EXPECT_FALSE(message_of("system: {lambdas: [1], tau: 1, a: 1}\nanalysis: {step_div: 32}\n").empty());
    EXPECT_FALSE(message_of("system: {lambdas: [1], tau: 1, a: 1}\nanalysis: {region: [1, 0, -1, 1]}\n").empty());
    EXPECT_FALSE(message_of("system: {lambdas: [1], tau: 1, a: 1}\nsweep: {parameter: b, from: 1, to: 2, steps: 3}\n").empty());
    EXPECT_FALSE(message_of("system: {lambdas: [1], tau: one, a: 1}\n").empty());
    EXPECT_FALSE(message_of("system: {lambdas: [1], tau: 1, a: 1\n").empty());
    // both loops negative: overall positive feedback
    EXPECT_FALSE(message_of("system:\n  lambdas: [1, 1]\n  tau: 1\n  nonlinearities: [{kind: tanh, slope: -1}, {kind: tanh, slope: -1}]\n").empty());
}

TEST(Scenario, HashIsFnv1a) {
    EXPECT_EQ(scenario_hash(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(scenario_hash("a"), 0xaf63dc4c8601ec8cULL);
    EXPECT_NE(scenario_hash(kFull), scenario_hash(std::string(kFull) + " "));
}

TEST(Scenario, RegionParsing) {
    const auto r = parse_region("-3,1,-10,10");
    EXPECT_DOUBLE_EQ(r.re_min, -3);
    EXPECT_DOUBLE_EQ(r.im_max, 10);
    EXPECT_THROW(parse_region("1,0,-1,1"), ConfigError);
    EXPECT_THROW(parse_region("1,2,3"), ConfigError);
    EXPECT_THROW(parse_region("a,2,3,4"), ConfigError);
}
