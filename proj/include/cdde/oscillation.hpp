#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cdde/char_spectrum.hpp"
#include "cdde/integrator.hpp"

namespace cdde {

inline constexpr double kNoiseFloor = 1e-14;
inline constexpr double kTrivialFloor = 1e-12;

/// Per-component ordered sign-change times.
struct CrossingList {
    std::vector<std::vector<double>> times;

    [[nodiscard]] std::size_t components() const { return times.size(); }
    [[nodiscard]] std::size_t min_count() const;
    [[nodiscard]] std::size_t total() const;
};

/// Linear-interpolated zeros of x(t); |x| < noise counts as zero and a run of
/// zeros between opposite signs yields a single crossing at the run's midpoint.
std::vector<double> detect_zero_crossings(std::span<const double> t, std::span<const double> x, double noise = kNoiseFloor);
std::vector<double> detect_zero_crossings(const Trajectory& traj, Eigen::Index component, double t_from, double t_to,
                                          double noise = kNoiseFloor);
std::vector<double> detect_zero_crossings(const Trajectory& traj, Eigen::Index component);

enum class OscillationClass { oscillatory, non_oscillatory_decaying, eventually_trivial, undecided };

std::string to_string(OscillationClass c);

struct ClassifyOptions {
    std::optional<double> window;     ///< default 10 tau
    std::optional<double> transient;  ///< default 5 tau
    double noise_floor = kNoiseFloor;
    double trivial_floor = kTrivialFloor;
    double min_active_delays = 2.0;  ///< shortest span above the trivial floor that supports a non-oscillatory verdict
};

struct OscillationReport {
    OscillationClass cls{OscillationClass::undecided};
    CrossingList crossings;
    std::optional<double> decay_rate;
    std::optional<bool> slow;
    double tau{0};
    double window_start{0};
    double window_end{0};
    double active_end{0};  ///< last time in the window with norm at or above the trivial floor
    double start_norm{0};
    double end_norm{0};
    std::string reason;
};

/// Examines the final window (after the transient) of a trajectory.  Only the
/// part of the window where the norm stays above the trivial floor is used as evidence.
OscillationReport classify(const Trajectory& traj, const ClassifyOptions& opt = {});

struct SlowOscillationResult {
    bool slow{false};
    std::vector<std::string> violations;
};

/// n >= 2: every pair of consecutive zeros of a component encloses exactly one zero
/// of every other component.  n == 1: consecutive zeros are more than tau apart.
SlowOscillationResult slow_oscillation_check(const CrossingList& crossings, double tau);
SlowOscillationResult slow_oscillation_check(const OscillationReport& report);

struct DecayFit {
    double rate{0};
    double residual{0};  ///< RMS deviation of log|x_1| from the fitted line
    double t_from{0};
    double t_to{0};
    std::size_t samples{0};
};

/// Least-squares slope of log|x_1| on [t_from, t_to].
DecayFit decay_rate_estimate(const Trajectory& traj, double t_from, double t_to);
/// Fit over the active part of the report's window; oscillatory reports are rejected.
DecayFit decay_rate_estimate(const Trajectory& traj, const OscillationReport& report);

/// Random smooth history on [-tau, 0] plus random x_2(0)..x_n(0), amplitude up to `amplitude`.
PhasePoint random_initial(Eigen::Index n, double tau, std::uint64_t seed, double amplitude = 1.0, int grid = 256);

struct EnsembleOptions {
    int members = 50;
    std::uint64_t seed = 20240917;
    double horizon_delays = 40.0;
    int steps_per_delay = 128;
    double amplitude = 1.0;
    ClassifyOptions classify;
    unsigned threads = 0;  ///< 0 picks hardware concurrency
};

/// Integrates and classifies `members` random initial data concurrently; results are in member order.
std::vector<OscillationReport> run_ensemble(const CyclicSystem& sys, const EnsembleOptions& opt = {});

enum class Verdict { pass, fail, inconclusive };

std::string to_string(Verdict v);

struct ConsistencyVerdict {
    Verdict verdict{Verdict::inconclusive};
    bool real_roots{false};
    std::vector<std::string> counterexamples;
    std::vector<std::string> notes;
};

/// No real roots: every ensemble member oscillates or is eventually trivial.
/// Real roots: the eigenfunction-seeded run is non-oscillatory.  Undecided evidence never passes.
ConsistencyVerdict theorem_consistency(const SpectralParams& p, const std::vector<OscillationReport>& ensemble,
                                       const std::optional<OscillationReport>& seeded);

}  // namespace cdde
