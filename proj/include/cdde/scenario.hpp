#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdde/char_spectrum.hpp"
#include "cdde/cyclic_system.hpp"

namespace cdde {

/// Malformed scenario; what() carries "<source>:<line>: message" when the location is known.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& msg, int line = 0) : std::runtime_error(msg), line_(line) {}
    [[nodiscard]] int line() const { return line_; }

private:
    int line_;
};

enum class InitialKind { zero, constant, random, eigen };

struct InitialSpec {
    InitialKind kind{InitialKind::random};
    double value{0.0};       ///< constant history
    double amplitude{1.0};   ///< random amplitude
    std::optional<double> eigen_amplitude;  ///< eps for eigenfunction seeding
    std::uint64_t seed{1};
};

struct AnalysisSpec {
    std::optional<Rectangle> region;
    int kmax{10};
    std::optional<double> horizon;    ///< absolute time; default 40 tau
    int step_div{128};
    std::optional<double> window;     ///< default 10 tau
    std::optional<double> transient;  ///< default 5 tau
    int seeds{50};
    std::uint64_t ensemble_seed{20240917};
    SpectrumOptions spectrum;
};

struct SweepSpec {
    std::string parameter{"a"};
    double from{0.0};
    double to{0.0};
    int steps{0};
    std::vector<std::string> analyses;
};

struct ScenarioConfig {
    std::string name;
    CyclicSystem system;
    AnalysisSpec analysis;
    InitialSpec initial;
    std::optional<SweepSpec> sweep;
    std::optional<std::string> output_dir;
    std::string text;  ///< raw scenario text, hashed into the manifest

    /// Standard-form counterpart of the system.
    [[nodiscard]] Normalization normalized() const { return normalize_system(system); }
    /// Linearization of the standard form.
    [[nodiscard]] SpectralParams spectral() const { return linearize(normalized().standard); }
};

/// Parses YAML text.  Unknown keys, wrong types and violated module invariants raise ConfigError.
ScenarioConfig parse_scenario(const std::string& text, const std::string& source = "<scenario>");
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// 64-bit FNV-1a of the scenario text.
std::uint64_t scenario_hash(const std::string& text);

/// "re_min,re_max,im_min,im_max"; throws ConfigError unless the rectangle is non-empty.
Rectangle parse_region(const std::string& s);

}  // namespace cdde
