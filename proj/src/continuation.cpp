#include <algorithm>
#include <cmath>

#include "cdde/char_spectrum.hpp"

namespace cdde {

Complex root_velocity(const SpectralParams& p, Complex z) {
    const Complex pz = eval_poly(z, p);
    return pz / (p.a * (eval_poly_derivative(z, p) + p.tau * pz));
}

namespace {

RootPath continue_real_branch(const SpectralParams& p, const CharRoot& start, const std::vector<double>& grid,
                              const SpectrumOptions& opt) {
    RootPath path;
    path.samples.emplace_back(grid.front(), start);
    const auto a0 = compute_a0_info(p);
    double x = start.re;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double a = grid[i];
        if (a0 && a >= a0->a0) {
            double zm = a0->minimizers.empty() ? x : a0->minimizers.front();
            for (double m : a0->minimizers)
                if (std::abs(m - x) < std::abs(zm - x)) zm = m;
            path.merge = MergeEvent{a0->a0, Complex(zm, 0.0), "real branch merges with its neighbour at a0"};
            break;
        }
        const auto roots = real_roots(p.with_gain(a), opt);
        if (roots.empty()) break;
        const auto nearest = std::min_element(roots.begin(), roots.end(), [&](const CharRoot& l, const CharRoot& r) {
            return std::abs(l.re - x) < std::abs(r.re - x);
        });
        x = nearest->re;
        path.samples.emplace_back(a, *nearest);
    }
    return path;
}

}  // namespace

RootPath continue_root(const SpectralParams& p, const CharRoot& start, double a_from, double a_to, int steps,
                       const SpectrumOptions& opt) {
    p.validate();
    if (!(a_from > 0.0) || !(a_to > a_from)) throw PreconditionError("continue_root: need a_to > a_from > 0");
    if (steps < 1) throw PreconditionError("continue_root: steps must be >= 1");
    const SpectralParams p_from = p.with_gain(a_from);
    if (relative_residual(start.z(), p_from) > opt.certify_tol)
        throw PreconditionError("continue_root: start is not a certified root at a_from");

    // Geometric spacing keeps the step relative to a, so sweeps over decades stay cheap.
    std::vector<double> grid(static_cast<std::size_t>(steps) + 1);
    const double ratio = a_to / a_from;
    for (int i = 0; i <= steps; ++i) grid[static_cast<std::size_t>(i)] = a_from * std::pow(ratio, static_cast<double>(i) / steps);
    grid.back() = a_to;

    if (start.im == 0.0) return continue_real_branch(p, start, grid, opt);

    RootPath path;
    for (int k = 1; k <= 64; ++k) {
        const auto b = bifurcation_point(p, k);
        if (std::abs(start.re) < 1e-8 && std::abs(std::abs(start.im) - b.omega) < 1e-6 * (1.0 + b.omega)) {
            path.k_index = k;
            break;
        }
        if (b.omega > std::abs(start.im) + 1.0) break;
    }
    path.samples.emplace_back(a_from, make_root(start.z(), p_from));

    Complex z = start.z();
    double a = a_from;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double target = grid[i];
        double h = target - a;
        int halvings = 0;
        while (a < target) {
            h = std::min(h, target - a);
            // RK4 predictor on dz/da, Newton corrector on char at the new gain.
            auto vel = [&](double aa, Complex zz) { return root_velocity(p.with_gain(aa), zz); };
            const Complex k1 = vel(a, z);
            const Complex k2 = vel(a + 0.5 * h, z + 0.5 * h * k1);
            const Complex k3 = vel(a + 0.5 * h, z + 0.5 * h * k2);
            const Complex k4 = vel(a + h, z + h * k3);
            const Complex predicted = z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            const double a_new = (a + h >= target) ? target : a + h;
            auto corrected = newton_refine(p.with_gain(a_new), predicted, opt);
            const double move = std::abs(predicted - z);
            const bool ok = corrected && std::isfinite(move) &&
                            std::abs(*corrected - predicted) <= 0.1 * move + 1e-10 * (1.0 + std::abs(z));
            if (!ok) {
                if (++halvings > 40) throw NumericalError("continue_root: step halving exhausted");
                h *= 0.5;
                continue;
            }
            if (std::abs(corrected->imag()) < 1e-8 * (1.0 + std::abs(*corrected))) {
                path.merge = MergeEvent{a_new, *corrected, "complex branch reached the real axis"};
                path.samples.emplace_back(a_new, make_root({corrected->real(), 0.0}, p.with_gain(a_new)));
                return path;
            }
            z = *corrected;
            a = a_new;
            halvings = 0;
            h *= 2.0;
        }
        path.samples.emplace_back(target, make_root(z, p.with_gain(target)));
    }
    return path;
}

}  // namespace cdde
