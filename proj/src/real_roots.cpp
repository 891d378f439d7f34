#include <algorithm>
#include <cmath>
#include <limits>

#include "cdde/char_spectrum.hpp"
#include "cdde/polynomial.hpp"

namespace cdde {

namespace {

// Coefficients of P_n' + tau P_n, whose real roots are the critical points of H.
VectorXd critical_polynomial(const SpectralParams& p) {
    const VectorXd c = poly::from_shifts(p.lambdas);
    const VectorXd dc = poly::derivative(c);
    VectorXd q = p.tau * c;
    q.head(dc.size()) += dc;
    return q;
}

double g_value(double x, const SpectralParams& p) { return eval_H(x, p) + p.a; }

// Bisection on a bracket with g(lo), g(hi) of opposite strict signs.
double bisect(const SpectralParams& p, double lo, double hi) {
    double glo = g_value(lo, p);
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double gm = g_value(mid, p);
        if (gm == 0.0) return mid;
        if ((gm < 0) == (glo < 0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    const double glo_abs = std::abs(g_value(lo, p));
    const double ghi_abs = std::abs(g_value(hi, p));
    return glo_abs <= ghi_abs ? lo : hi;
}

double char_second_derivative(double x, const SpectralParams& p) {
    const VectorXd c = poly::from_shifts(p.lambdas);
    const VectorXd d2 = poly::derivative(poly::derivative(c));
    return poly::horner(d2, x) + p.a * p.tau * p.tau * std::exp(-p.tau * x);
}

}  // namespace

CharRoot make_root(Complex z, const SpectralParams& p, int multiplicity) {
    CharRoot r;
    r.re = z.real();
    r.im = z.imag();
    r.multiplicity = multiplicity;
    r.residual = relative_residual(z, p);
    return r;
}

std::vector<double> critical_points_H(const SpectralParams& p) {
    p.validate();
    return poly::real_roots(critical_polynomial(p));
}

std::optional<A0Info> compute_a0_info(const SpectralParams& p) {
    p.validate();
    std::vector<double> crit;
    for (double c : critical_points_H(p))
        if (c < 0.0) crit.push_back(c);

    double h_min = std::numeric_limits<double>::infinity();
    for (double c : crit) h_min = std::min(h_min, eval_H(c, p));

    // Every interval of (-inf, 0) on which P_n < 0 must contain a critical
    // point with H < 0; a miss means the companion step lost a real root.
    std::vector<double> nodes(p.lambdas.data(), p.lambdas.data() + p.n());
    for (double& v : nodes) v = -v;
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    auto check_interval = [&](double lo, double hi) {
        const double probe = std::isfinite(lo) ? 0.5 * (lo + hi) : hi - 1.0;
        if (eval_poly(probe, p) >= 0.0) return;
        const bool found = std::any_of(crit.begin(), crit.end(), [&](double c) {
            return c > lo && c < hi && eval_H(c, p) < 0.0;
        });
        if (!found)
            throw NumericalError("compute_a0: no critical point of H found on an interval where H < 0; "
                                 "companion-matrix root extraction failed");
    };
    check_interval(-std::numeric_limits<double>::infinity(), nodes.front());
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) check_interval(nodes[i], nodes[i + 1]);

    if (!(h_min < 0.0)) return std::nullopt;
    A0Info info;
    info.a0 = -h_min;
    for (double c : crit)
        if (std::abs(eval_H(c, p) - h_min) <= 1e-10 * std::abs(h_min)) info.minimizers.push_back(c);
    return info;
}

std::optional<double> compute_a0(const SpectralParams& p) {
    if (auto info = compute_a0_info(p)) return info->a0;
    return std::nullopt;
}

double default_real_window(const SpectralParams& p) {
    p.validate();
    const double lmax = p.lambdas.maxCoeff();
    const double n = static_cast<double>(p.n());
    // For x <= -2 lmax, |P_n(x)| <= |x|^n, so a real root needs
    // n ln|x| >= ln a + tau |x|.  The largest such |x| bounds all real roots.
    double reach = 2.0 * lmax;
    if (p.a > 0.0) {
        auto balance = [&](double x) { return n * std::log(x) - p.tau * x - std::log(p.a); };
        double lo = n / p.tau;
        if (balance(lo) > 0.0) {
            double hi = 2.0 * lo;
            while (balance(hi) > 0.0) hi *= 2.0;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (balance(mid) > 0.0) lo = mid; else hi = mid;
            }
            reach = std::max(reach, hi);
        }
    }
    return reach + 10.0 * lmax;
}

RealRootResult real_roots_detailed(const SpectralParams& p, std::optional<double> x_max,
                                   const SpectrumOptions& opt) {
    p.validate();
    if (!(p.a > 0.0)) throw PreconditionError("real_roots: gain a must be positive");
    const double window = x_max.value_or(default_real_window(p));
    if (!(window > 0.0)) throw PreconditionError("real_roots: window must be positive");

    RealRootResult result;
    std::vector<double> crit;
    for (double c : critical_points_H(p))
        if (c < 0.0 && c > -window) crit.push_back(c);

    std::vector<double> nodes;
    nodes.push_back(-window);
    nodes.insert(nodes.end(), crit.begin(), crit.end());
    nodes.push_back(0.0);

    std::vector<CharRoot> found;
    std::vector<bool> tangent(nodes.size(), false);
    for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
        const double c = nodes[i];
        const double h = eval_H(c, p);
        if (std::abs(h + p.a) <= 1e-12 * std::max(p.a, std::abs(h))) {
            tangent[i] = true;
            const double d2 = char_second_derivative(c, p);
            const double scale = char_scale(Complex(c, 0.0), p);
            const int mult = std::abs(d2) * (1.0 + c * c) <= 1e-8 * scale ? 3 : 2;
            found.push_back(make_root({c, 0.0}, p, mult));
        }
    }
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        if (tangent[i] || tangent[i + 1]) continue;
        const double lo = nodes[i];
        const double hi = nodes[i + 1];
        const double glo = g_value(lo, p);
        const double ghi = g_value(hi, p);
        if (glo == 0.0 && i == 0) {
            found.push_back(make_root({lo, 0.0}, p));
            continue;
        }
        if ((glo < 0.0) != (ghi < 0.0) && glo != 0.0 && ghi != 0.0) found.push_back(make_root({bisect(p, lo, hi), 0.0}, p));
    }

    if (g_value(-window, p) <= 0.0)
        result.warnings.push_back("real_roots: H(-x_max) + a <= 0; a root is suspected beyond the window boundary");

    std::sort(found.begin(), found.end(), [](const CharRoot& l, const CharRoot& r) { return l.re < r.re; });
    for (const auto& r : found) {
        if (!result.roots.empty() && std::abs(r.re - result.roots.back().re) < opt.cluster_radius) {
            auto& prev = result.roots.back();
            const bool keep_prev = prev.multiplicity > 1 || prev.residual <= r.residual;
            const int mult = prev.multiplicity + r.multiplicity;
            if (!keep_prev) prev = r;
            prev.multiplicity = mult;
            continue;
        }
        result.roots.push_back(r);
    }
    for (const auto& r : result.roots)
        if (std::abs(r.re + window) < 1e-6 * window)
            result.warnings.push_back("real_roots: root at the window boundary; enlarge x_max");
    return result;
}

std::vector<CharRoot> real_roots(const SpectralParams& p, const SpectrumOptions& opt) {
    return real_roots_detailed(p, std::nullopt, opt).roots;
}

}  // namespace cdde
