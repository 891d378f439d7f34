#include <algorithm>
#include <cmath>

#include "cdde/char_spectrum.hpp"

namespace cdde {

BifurcationPoint bifurcation_point(const SpectralParams& p, int k) {
    p.validate();
    if (k < 1) throw PreconditionError("bifurcation_point: k must be >= 1");
    const double n = static_cast<double>(p.n());
    const double target = (2.0 * k - 1.0) * kPi;
    // Theta0 is increasing with range [0, n pi/2), so the crossing of
    // Theta0(w) + w tau = target lies in this bracket.
    double lo = std::max(0.0, (target - n * kPi / 2.0) / p.tau);
    double hi = target / p.tau;
    auto g = [&](double w) { return phase_theta0(w, p) + w * p.tau - target; };
    for (int it = 0; it < 2000; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (g(mid) < 0.0) lo = mid; else hi = mid;
    }
    const double omega = std::abs(g(lo)) <= std::abs(g(hi)) ? lo : hi;
    double prod = 1.0;
    for (Eigen::Index j = 0; j < p.lambdas.size(); ++j) prod *= omega * omega + p.lambdas[j] * p.lambdas[j];
    return {k, omega, std::sqrt(prod)};
}

std::vector<BifurcationPoint> bifurcation_sequence(const SpectralParams& p, int k_max) {
    if (k_max < 1) throw PreconditionError("bifurcation_sequence: k_max must be >= 1");
    std::vector<BifurcationPoint> out;
    out.reserve(static_cast<std::size_t>(k_max));
    for (int k = 1; k <= k_max; ++k) out.push_back(bifurcation_point(p, k));
    return out;
}

}  // namespace cdde
