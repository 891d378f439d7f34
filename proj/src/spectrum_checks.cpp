#include <algorithm>
#include <cmath>

#include "cdde/char_spectrum.hpp"

namespace cdde {

namespace {

double padded_radius(const SpectralParams& p) { return right_half_plane_radius(p) * (1.0 + 1e-3) + 1e-3; }

}  // namespace

CharRoot leading_root(const SpectralParams& p, const SpectrumOptions& opt) {
    p.validate();
    const auto first = bifurcation_point(p, 1);
    if (!(p.a > first.a)) throw PreconditionError("leading_root: requires a > a_1 = " + std::to_string(first.a));
    const double strip_top = kPi / p.tau;
    const auto roots = find_roots_in_rectangle(p, {0.0, padded_radius(p), 0.0, strip_top}, opt);
    const CharRoot* best = nullptr;
    for (const auto& r : roots)
        if (r.im > 0.0 && (!best || r.re > best->re)) best = &r;
    if (!best) throw NumericalError("leading_root: no complex root with Re >= 0 in the strip 0 < Im < pi/tau");
    return *best;
}

int count_strip_roots(const SpectralParams& p, std::optional<double> delta) {
    p.validate();
    if (!(p.a > 0.0)) throw PreconditionError("count_strip_roots: gain a must be positive");
    const double top = kPi / p.tau;
    const double d = delta.value_or(1e-6 * top);
    if (!(d > 0.0) || !(2.0 * d < top)) throw PreconditionError("count_strip_roots: strip margin out of range");
    const double radius = padded_radius(p);
    const Rectangle inner{d, radius, d, top - d};
    const Rectangle outer{-d, radius, -d, top + d};
    const auto n_inner = winding_count(p, inner);
    const auto n_outer = winding_count(p, outer);
    if (!n_inner || !n_outer || *n_inner != *n_outer)
        throw StripAmbiguityError("count_strip_roots: a root lies within " + std::to_string(d) +
                                      " of the strip boundary; retry with a smaller margin",
                                  d / 100.0);
    return *n_inner;
}

std::vector<CharRoot> strip_roots(const SpectralParams& p, const SpectrumOptions& opt) {
    p.validate();
    if (!(p.a > 0.0)) return {};
    const double top = kPi / p.tau;
    const double d = 1e-6 * top;
    auto roots = find_roots_in_rectangle(p, {d, padded_radius(p), d, top - d}, opt);
    std::sort(roots.begin(), roots.end(), [](const CharRoot& l, const CharRoot& r) { return l.re > r.re; });
    return roots;
}

ValidationReport validate_spectrum(const std::vector<CharRoot>& roots, const SpectralParams& p) {
    p.validate();
    ValidationReport report;
    auto close = [](double x, double y) { return std::abs(x - y) <= 1e-9 * (1.0 + std::max(std::abs(x), std::abs(y))); };
    for (std::size_t i = 0; i < roots.size(); ++i) {
        const auto& r = roots[i];
        if (r.im == 0.0) continue;
        const Complex z = r.z();
        const double slope = std::abs(eval_char_derivative(z, p)) * (1.0 + std::abs(z)) / char_scale(z, p);
        if (slope < 1e-8 || r.multiplicity != 1) {
            report.simplicity.passed = false;
            report.simplicity.offending.emplace_back(i, i);
        }
    }
    for (std::size_t i = 0; i < roots.size(); ++i) {
        for (std::size_t j = i + 1; j < roots.size(); ++j) {
            const auto& u = roots[i];
            const auto& v = roots[j];
            if (u.im > 0.0 && v.im > 0.0 && close(u.re, v.re) && !close(u.im, v.im)) {
                report.vertical.passed = false;
                report.vertical.offending.emplace_back(i, j);
            }
            if (u.re > 0.0 && v.re > 0.0 && close(u.im, v.im) && !close(u.re, v.re)) {
                report.horizontal.passed = false;
                report.horizontal.offending.emplace_back(i, j);
            }
        }
    }
    return report;
}

std::string to_string(Stability s) {
    switch (s) {
        case Stability::asymptotically_stable: return "asymptotically_stable";
        case Stability::critical: return "critical";
        case Stability::unstable: return "unstable";
    }
    return "unknown";
}

StabilityAssessment stability_assessment(const SpectralParams& p, double rel_tol) {
    p.validate();
    StabilityAssessment out;
    if (p.a == 0.0) {
        out.contour_pairs = 0;
        return out;
    }
    int below = 0;
    for (int k = 1;; ++k) {
        const auto b = bifurcation_point(p, k);
        if (std::abs(p.a - b.a) <= rel_tol * b.a) {
            out.verdict = Stability::critical;
            out.critical_index = k;
            out.unstable_pairs = below;
            // the crossing pair sits on the imaginary axis; no contour cross-check there
            return out;
        }
        if (b.a >= p.a) break;
        ++below;
    }
    out.unstable_pairs = below;
    out.verdict = below == 0 ? Stability::asymptotically_stable : Stability::unstable;
    const double radius = padded_radius(p);
    const int rhp = count_roots_in_rectangle(p, {0.0, radius, -radius, radius});
    out.contour_pairs = rhp / 2;
    out.cross_validated = rhp == 2 * below;
    return out;
}

}  // namespace cdde
