#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cdde/cyclic_system.hpp"

namespace cdde {

/// Composite one-dimensional map g_k o g_{k+1} o ... o g_{k-1} (indices mod n),
/// with stages g_j = f_j / lambda_j.  start == 0 gives F = g_1 o ... o g_n.
class ScalarMap {
public:
    using Stage = std::function<double(double)>;

    ScalarMap() = default;
    explicit ScalarMap(std::vector<Stage> stages, int start = 0);

    static ScalarMap from_system(const CyclicSystem& sys);

    [[nodiscard]] double operator()(double x) const;
    /// The cyclic shift starting at stage k (0-based).
    [[nodiscard]] ScalarMap shifted(int k) const { return ScalarMap(stages_, k); }
    [[nodiscard]] double stage(int j, double x) const { return stages_.at(static_cast<std::size_t>(j))(x); }
    [[nodiscard]] int size() const { return static_cast<int>(stages_.size()); }
    [[nodiscard]] int start() const { return start_; }

private:
    std::vector<Stage> stages_;
    int start_{0};
};

/// Closed interval [lo, hi]; when certified the true set lies within [lo - tolerance, hi + tolerance].
struct IntervalEnclosure {
    double lo{0};
    double hi{0};
    bool certified{true};
    double tolerance{0};

    [[nodiscard]] double width() const { return hi - lo; }
    [[nodiscard]] bool contains(double x, double tol = 0.0) const { return x >= lo - tol && x <= hi + tol; }
    [[nodiscard]] double magnitude() const { return std::max(std::abs(lo), std::abs(hi)); }
};

/// True when inner (with its tolerance) lies inside outer up to tol.
bool included(const IntervalEnclosure& inner, const IntervalEnclosure& outer, double tol);

struct EnclosureOptions {
    int grid = 4096;
    int refine_levels = 6;
    double tolerance = 1e-10;    ///< target outward margin, relative to 1 + |range|
    double certify_cap = 1e-7;   ///< margins above this (relative) leave the enclosure uncertified
};

/// Range of a continuous scalar function on an interval.  lo/hi are attained
/// sample values; tolerance is twice the observed local slope times the final spacing.
IntervalEnclosure image_enclosure(const ScalarMap::Stage& f, const IntervalEnclosure& iv, const EnclosureOptions& opt = {});
IntervalEnclosure image_enclosure(const ScalarMap& map, const IntervalEnclosure& iv, const EnclosureOptions& opt = {});

/// sup F over R for a standard-form system with f_n bounded above (stages are monotone).
double composite_upper_bound(const CyclicSystem& sys);

struct InvariantInterval {
    IntervalEnclosure interval;  ///< I0 = [alpha, M1]
    IntervalEnclosure image;     ///< enclosure of F(I0)
    int widenings{0};
    bool verified{false};
};

InvariantInterval invariant_interval_I0(const ScalarMap& map, double upper_bound_m1, const EnclosureOptions& opt = {});

/// I0 followed by I_n = g_n(I0), I_{n-1} = g_{n-1}(I_n), ..., I_2; the bound for x_k is intervals[k].
struct IntervalChain {
    std::vector<IntervalEnclosure> intervals;
    IntervalEnclosure closing_image;  ///< g_1(I_2), must sit inside I0
    bool closes{false};

    /// Componentwise sup-norm bound K over the chain.
    [[nodiscard]] double bound() const;
};

IntervalChain interval_chain(const ScalarMap& map, const IntervalEnclosure& i0, const EnclosureOptions& opt = {});

struct MinimalInterval {
    IntervalEnclosure enclosure;
    int iterations{0};
    bool converged{false};
    bool contraction{false};  ///< |F(F(x))| < |x| observed on the interval, so I* = {0}
    std::vector<double> widths;
};

MinimalInterval minimal_invariant_interval(const ScalarMap& map, const IntervalEnclosure& i0, int max_iter = 100000,
                                           const EnclosureOptions& opt = {});

}  // namespace cdde
