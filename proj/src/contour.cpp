#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

#include "cdde/char_spectrum.hpp"

namespace cdde {

namespace {

constexpr double kPhaseStep = kPi / 4.0;       // per-segment phase budget (below pi/2)
constexpr double kProximityResidual = 1e-11;   // relative |char| treated as "on the boundary"

struct EdgeWalker {
    const SpectralParams& p;
    bool near_root = false;

    Complex f(Complex z) {
        const Complex v = eval_char(z, p);
        if (std::abs(v) <= kProximityResidual * char_scale(z, p)) near_root = true;
        return v;
    }

    // Phase change of char from za to zb, subdividing until every piece turns
    // by less than kPhaseStep and the midpoint agrees with the chord.
    std::optional<double> segment(Complex za, Complex zb, Complex fa, Complex fb, int depth) {
        const Complex zm = 0.5 * (za + zb);
        const Complex fm = f(zm);
        if (near_root) return std::nullopt;
        const double d1 = std::arg(fm / fa);
        const double d2 = std::arg(fb / fm);
        const double d = std::arg(fb / fa);
        if (std::abs(d1) < kPhaseStep && std::abs(d2) < kPhaseStep && std::abs(d1 + d2 - d) < 1e-9) return d1 + d2;
        const double len = std::abs(zb - za);
        if (depth > 60 || len < 1e-13 * std::max(1.0, std::abs(zm))) return std::nullopt;
        auto left = segment(za, zm, fa, fm, depth + 1);
        if (!left) return std::nullopt;
        auto right = segment(zm, zb, fm, fb, depth + 1);
        if (!right) return std::nullopt;
        return *left + *right;
    }

    std::optional<double> edge(Complex za, Complex zb) {
        const double len = std::abs(zb - za);
        const double n = static_cast<double>(p.n());
        const int pieces = static_cast<int>(std::clamp(std::ceil(4.0 * len * (p.tau + n) / kPi), 16.0, 8192.0));
        double total = 0.0;
        Complex z_prev = za;
        Complex f_prev = f(za);
        for (int i = 1; i <= pieces; ++i) {
            const Complex z_next = za + (zb - za) * (static_cast<double>(i) / pieces);
            const Complex f_next = f(z_next);
            if (near_root) return std::nullopt;
            auto d = segment(z_prev, z_next, f_prev, f_next, 0);
            if (!d) return std::nullopt;
            total += *d;
            z_prev = z_next;
            f_prev = f_next;
        }
        return total;
    }
};

Rectangle perturbed(const Rectangle& r, int attempt, const SpectrumOptions& opt) {
    if (attempt == 0) return r;
    const double scale = std::max({1.0, std::abs(r.re_min), std::abs(r.re_max), std::abs(r.im_min), std::abs(r.im_max)});
    return r.expanded(opt.boundary_epsilon * scale * std::pow(4.0, attempt - 1));
}

std::optional<Complex> newton_real(const SpectralParams& p, double x0, const SpectrumOptions& opt) {
    double x = x0;
    for (int it = 0; it < opt.newton_max_iter; ++it) {
        const double f = eval_char(x, p);
        const double df = eval_char_derivative(x, p);
        if (df == 0.0 || !std::isfinite(df)) return std::nullopt;
        const double step = f / df;
        x -= step;
        if (!std::isfinite(x)) return std::nullopt;
        if (relative_residual(Complex(x, 0.0), p) <= opt.newton_tol ||
            std::abs(step) <= 4e-16 * (1.0 + std::abs(x)))
            break;
    }
    if (relative_residual(Complex(x, 0.0), p) > opt.certify_tol) return std::nullopt;
    return Complex(x, 0.0);
}

class Isolator {
public:
    Isolator(const SpectralParams& p, const SpectrumOptions& opt) : p_(p), opt_(opt) {}

    void run(const Rectangle& cell, int count, int depth) {
        if (count <= 0) return;
        const double size = std::max(cell.width(), cell.height());
        if (count == 1) {
            if (auto z = try_newton(cell)) {
                accept(*z, 1);
                return;
            }
        } else if (size < opt_.cluster_radius) {
            cluster(cell, count);
            return;
        }
        if (depth > opt_.max_depth) throw NumericalError("find_roots_in_rectangle: depth limit reached while isolating roots");
        split(cell, count, depth);
    }

    std::vector<CharRoot> take() { return std::move(roots_); }

private:
    std::optional<Complex> try_newton(const Rectangle& cell) {
        const Complex center(0.5 * (cell.re_min + cell.re_max), 0.5 * (cell.im_min + cell.im_max));
        const double margin = 1e-9 * std::max(1.0, std::max(cell.width(), cell.height()));
        auto z = newton_refine(p_, center, opt_);
        if (!z || !cell.expanded(margin).contains(*z)) return std::nullopt;
        // A lone root this close to the real axis is real: a complex one would bring its conjugate into the cell.
        if (std::abs(z->imag()) <= 1e-9 * (1.0 + std::abs(*z)) && cell.im_min <= 0.0 && cell.im_max >= 0.0) {
            if (auto x = newton_real(p_, z->real(), opt_)) z = *x;
        }
        for (const auto& r : roots_)
            if (std::abs(r.z() - *z) <= 1e-10 * (1.0 + std::abs(*z))) return std::nullopt;
        return z;
    }

    void cluster(const Rectangle& cell, int count) {
        const Complex center(0.5 * (cell.re_min + cell.re_max), 0.5 * (cell.im_min + cell.im_max));
        if (cell.im_min > opt_.cluster_radius || cell.im_max < -opt_.cluster_radius)
            throw NumericalError("find_roots_in_rectangle: unresolved complex root cluster (complex roots are simple)");
        // A multiple real root is a critical point of H.
        double best = center.real();
        double best_dist = std::numeric_limits<double>::infinity();
        for (double c : critical_points_H(p_)) {
            const double d = std::abs(c - center.real());
            if (d < best_dist) {
                best_dist = d;
                best = c;
            }
        }
        if (best_dist > 4.0 * opt_.cluster_radius) best = center.real();
        accept({best, 0.0}, count);
    }

    void accept(Complex z, int mult) { roots_.push_back(make_root(z, p_, mult)); }

    void split(const Rectangle& cell, int count, int depth) {
        static constexpr std::array<double, 7> fractions{0.5, 0.4871, 0.5137, 0.4613, 0.5391, 0.4217, 0.5783};
        const bool vertical_cut = cell.width() >= cell.height();
        for (double frac : fractions) {
            Rectangle a = cell;
            Rectangle b = cell;
            if (vertical_cut) {
                const double cut = cell.re_min + frac * cell.width();
                a.re_max = cut;
                b.re_min = cut;
            } else {
                const double cut = cell.im_min + frac * cell.height();
                a.im_max = cut;
                b.im_min = cut;
            }
            auto ca = winding_count(p_, a);
            if (!ca) continue;
            auto cb = winding_count(p_, b);
            if (!cb || *ca + *cb != count) continue;
            run(a, *ca, depth + 1);
            run(b, *cb, depth + 1);
            return;
        }
        throw NumericalError("find_roots_in_rectangle: no admissible subdivision (roots on every trial cut)");
    }

    const SpectralParams& p_;
    const SpectrumOptions& opt_;
    std::vector<CharRoot> roots_;
};

}  // namespace

std::optional<int> winding_count(const SpectralParams& p, const Rectangle& r) {
    if (!r.valid()) throw PreconditionError("winding_count: empty rectangle");
    EdgeWalker walker{p};
    const std::array<Complex, 4> corners{Complex(r.re_min, r.im_min), Complex(r.re_max, r.im_min),
                                         Complex(r.re_max, r.im_max), Complex(r.re_min, r.im_max)};
    double total = 0.0;
    for (int e = 0; e < 4; ++e) {
        auto d = walker.edge(corners[e], corners[(e + 1) % 4]);
        if (!d) return std::nullopt;
        total += *d;
    }
    const double winding = total / (2.0 * kPi);
    const double rounded = std::round(winding);
    if (std::abs(winding - rounded) > 0.1 || rounded < 0) return std::nullopt;
    return static_cast<int>(rounded);
}

CountResult count_roots_certified(const SpectralParams& p, const Rectangle& r, const SpectrumOptions& opt) {
    p.validate();
    if (!r.valid()) throw PreconditionError("count_roots_in_rectangle: rectangle must satisfy re_min < re_max and im_min < im_max");
    for (int attempt = 0; attempt <= opt.boundary_attempts; ++attempt) {
        const Rectangle rect = perturbed(r, attempt, opt);
        if (auto c = winding_count(p, rect)) return {*c, rect, attempt};
    }
    throw BoundaryProximityError("count_roots_in_rectangle: a root stays on the boundary after all perturbation attempts");
}

int count_roots_in_rectangle(const SpectralParams& p, const Rectangle& r, const SpectrumOptions& opt) {
    return count_roots_certified(p, r, opt).count;
}

std::optional<Complex> newton_refine(const SpectralParams& p, Complex z0, const SpectrumOptions& opt) {
    Complex z = z0;
    for (int it = 0; it < opt.newton_max_iter; ++it) {
        const Complex f = eval_char(z, p);
        const Complex df = eval_char_derivative(z, p);
        if (std::abs(df) == 0.0 || !std::isfinite(std::abs(df))) return std::nullopt;
        const Complex step = f / df;
        z -= step;
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return std::nullopt;
        if (relative_residual(z, p) <= opt.newton_tol) {
            // one extra step tightens the last digits at no risk
            const Complex extra = eval_char(z, p) / eval_char_derivative(z, p);
            if (std::isfinite(std::abs(extra)) && std::abs(extra) < 1e-8 * (1.0 + std::abs(z))) z -= extra;
            break;
        }
        if (std::abs(step) <= 4e-16 * (1.0 + std::abs(z))) break;
    }
    if (relative_residual(z, p) > opt.certify_tol) return std::nullopt;
    return z;
}

std::vector<CharRoot> find_roots_in_rectangle(const SpectralParams& p, const Rectangle& r, const SpectrumOptions& opt) {
    const CountResult total = count_roots_certified(p, r, opt);
    Isolator iso(p, opt);
    iso.run(total.certified, total.count, 0);
    auto roots = iso.take();
    int found = 0;
    for (const auto& root : roots) found += root.multiplicity;
    if (found != total.count)
        throw NumericalError("find_roots_in_rectangle: isolated " + std::to_string(found) + " roots but the contour counts " +
                             std::to_string(total.count));
    std::sort(roots.begin(), roots.end(), [](const CharRoot& l, const CharRoot& rr) {
        return l.re != rr.re ? l.re < rr.re : l.im < rr.im;
    });
    return roots;
}

double right_half_plane_radius(const SpectralParams& p) {
    p.validate();
    if (p.a == 0.0) return 0.0;
    return std::pow(p.a, 1.0 / static_cast<double>(p.n()));
}

}  // namespace cdde
