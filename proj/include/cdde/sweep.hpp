#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cdde/export.hpp"
#include "cdde/oscillation.hpp"
#include "cdde/scenario.hpp"

namespace cdde {

struct SweepPoint {
    double value{0};
    double a{0};
    double tau{0};
    std::optional<double> a0;
    std::optional<bool> real_roots;
    std::optional<int> strip_count;
    std::optional<Stability> stability;
    std::optional<std::array<int, 4>> ensemble;  ///< oscillatory, non-oscillatory, trivial, undecided
    std::string error;
};

/// Copy of a standard-form system with the linearized gain a (scales f_n) or total delay tau replaced.
CyclicSystem with_parameter(const CyclicSystem& standard, const std::string& parameter, double value);

/// Evaluates each grid point independently on a worker pool; results come back in grid order.
/// Failures at a point are recorded in its error column and the sweep carries on.
std::vector<SweepPoint> run_sweep(const CyclicSystem& sys, const SweepSpec& spec, const AnalysisSpec& analysis, unsigned threads = 0);

CsvTable sweep_table(const std::vector<SweepPoint>& points, const std::string& parameter);

}  // namespace cdde
