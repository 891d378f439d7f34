#include "cdde/scalar_map.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace cdde {

ScalarMap::ScalarMap(std::vector<Stage> stages, int start) : stages_(std::move(stages)) {
    const int n = static_cast<int>(stages_.size());
    if (n == 0) throw PreconditionError("scalar map: needs at least one stage");
    start_ = ((start % n) + n) % n;
}

ScalarMap ScalarMap::from_system(const CyclicSystem& sys) {
    sys.validate();
    if (!sys.is_standard_form()) throw PreconditionError("compose_F: system must be in standard form");
    std::vector<Stage> stages;
    for (Eigen::Index j = 0; j < sys.n(); ++j) {
        const auto f = sys.nonlinearities[static_cast<std::size_t>(j)];
        const double lambda = sys.lambdas[j];
        stages.emplace_back([f, lambda](double x) { return f(x) / lambda; });
    }
    return ScalarMap(std::move(stages));
}

double ScalarMap::operator()(double x) const {
    const int n = size();
    // innermost stage is start - 1 (mod n), outermost is start
    for (int i = n - 1; i >= 0; --i) x = stages_[static_cast<std::size_t>((start_ + i) % n)](x);
    return x;
}

bool included(const IntervalEnclosure& inner, const IntervalEnclosure& outer, double tol) {
    return inner.lo - inner.tolerance >= outer.lo - outer.tolerance - tol &&
           inner.hi + inner.tolerance <= outer.hi + outer.tolerance + tol;
}

namespace {

struct Cell {
    double a, b, fa, fb, slope;
    int level;
};

}  // namespace

IntervalEnclosure image_enclosure(const ScalarMap::Stage& f, const IntervalEnclosure& iv, const EnclosureOptions& opt) {
    if (!(iv.lo <= iv.hi) || !std::isfinite(iv.lo) || !std::isfinite(iv.hi))
        throw PreconditionError("image_enclosure: interval must be finite with lo <= hi");
    if (iv.lo == iv.hi) {
        const double v = f(iv.lo);
        return {v, v, iv.certified, 0.0};
    }
    const int g = std::max(opt.grid, 8);
    const double h = (iv.hi - iv.lo) / g;
    std::vector<double> xs(static_cast<std::size_t>(g) + 1), fs(xs.size());
    for (int i = 0; i <= g; ++i) {
        xs[static_cast<std::size_t>(i)] = (i == g) ? iv.hi : iv.lo + i * h;
        fs[static_cast<std::size_t>(i)] = f(xs[static_cast<std::size_t>(i)]);
    }
    double best_lo = *std::min_element(fs.begin(), fs.end());
    double best_hi = *std::max_element(fs.begin(), fs.end());
    double max_slope = 0.0;
    std::deque<Cell> work;
    for (int i = 0; i < g; ++i) {
        auto slope_of = [&](int j) {
            if (j < 0 || j >= g) return 0.0;
            return std::abs(fs[static_cast<std::size_t>(j) + 1] - fs[static_cast<std::size_t>(j)]) / h;
        };
        const double s = std::max({slope_of(i - 1), slope_of(i), slope_of(i + 1)});
        max_slope = std::max(max_slope, s);
        work.push_back({xs[static_cast<std::size_t>(i)], xs[static_cast<std::size_t>(i) + 1], fs[static_cast<std::size_t>(i)],
                        fs[static_cast<std::size_t>(i) + 1], s, 0});
    }
    const double target = opt.tolerance * (1.0 + std::max(std::abs(best_lo), std::abs(best_hi)));
    const double cap = opt.certify_cap * (1.0 + std::max(std::abs(best_lo), std::abs(best_hi)));
    double margin_lo = 0.0;
    double margin_hi = 0.0;
    bool exhausted = false;
    constexpr int kSub = 16;
    while (!work.empty()) {
        Cell c = work.front();
        work.pop_front();
        // inflation: twice the observed local slope over half the cell
        const double slack = 2.0 * c.slope * 0.5 * (c.b - c.a);
        const double low_est = std::min(c.fa, c.fb) - slack;
        const double high_est = std::max(c.fa, c.fb) + slack;
        const bool threatens = low_est < best_lo - target || high_est > best_hi + target;
        if (!threatens) continue;
        if (c.level >= opt.refine_levels) {
            exhausted = exhausted || (best_lo - low_est > cap) || (high_est - best_hi > cap);
            margin_lo = std::max(margin_lo, best_lo - low_est);
            margin_hi = std::max(margin_hi, high_est - best_hi);
            continue;
        }
        const double hs = (c.b - c.a) / kSub;
        std::vector<double> sx(kSub + 1), sf(kSub + 1);
        for (int i = 0; i <= kSub; ++i) {
            sx[static_cast<std::size_t>(i)] = (i == kSub) ? c.b : c.a + i * hs;
            sf[static_cast<std::size_t>(i)] = (i == 0) ? c.fa : (i == kSub ? c.fb : f(sx[static_cast<std::size_t>(i)]));
            best_lo = std::min(best_lo, sf[static_cast<std::size_t>(i)]);
            best_hi = std::max(best_hi, sf[static_cast<std::size_t>(i)]);
        }
        double local = 0.0;
        for (int i = 0; i < kSub; ++i) local = std::max(local, std::abs(sf[static_cast<std::size_t>(i) + 1] - sf[static_cast<std::size_t>(i)]) / hs);
        for (int i = 0; i < kSub; ++i)
            work.push_back({sx[static_cast<std::size_t>(i)], sx[static_cast<std::size_t>(i) + 1], sf[static_cast<std::size_t>(i)],
                            sf[static_cast<std::size_t>(i) + 1], local, c.level + 1});
    }
    IntervalEnclosure out;
    out.lo = best_lo;
    out.hi = best_hi;
    out.tolerance = std::max({margin_lo, margin_hi, 0.0}) + max_slope * iv.tolerance;
    out.certified = iv.certified && !exhausted;
    return out;
}

IntervalEnclosure image_enclosure(const ScalarMap& map, const IntervalEnclosure& iv, const EnclosureOptions& opt) {
    return image_enclosure([&map](double x) { return map(x); }, iv, opt);
}

double composite_upper_bound(const CyclicSystem& sys) {
    sys.validate();
    if (!sys.is_standard_form()) throw PreconditionError("composite_upper_bound: system must be in standard form");
    if (!sys.last_one_sided_bounded()) throw PreconditionError("composite_upper_bound: f_n must be bounded above");
    const Eigen::Index n = sys.n();
    double value = sys.nonlinearities.back().sup() / sys.lambdas[n - 1];
    // positive-feedback catalogue stages are increasing, so the sup propagates through them
    for (Eigen::Index k = n - 2; k >= 0; --k) value = sys.nonlinearities[static_cast<std::size_t>(k)](value) / sys.lambdas[k];
    return value;
}

InvariantInterval invariant_interval_I0(const ScalarMap& map, double upper_bound_m1, const EnclosureOptions& opt) {
    if (!(upper_bound_m1 > 0.0)) throw PreconditionError("invariant_interval_I0: M1 must be positive");
    InvariantInterval out;
    const IntervalEnclosure positive{0.0, upper_bound_m1, true, 0.0};
    const IntervalEnclosure img0 = image_enclosure(map, positive, opt);
    // I0 is a chosen set, so it carries no tolerance; alpha moves out by the estimation margin instead
    out.interval = {std::min(img0.lo - img0.tolerance, 0.0), upper_bound_m1, img0.certified, 0.0};
    const double check_tol = 1e-9 * (1.0 + upper_bound_m1);
    for (int attempt = 0; attempt < 8; ++attempt) {
        out.image = image_enclosure(map, out.interval, opt);
        if (included(out.image, out.interval, check_tol)) {
            out.verified = out.image.certified;
            out.interval.certified = out.verified;
            return out;
        }
        // widen toward the observed image and try again
        ++out.widenings;
        out.interval.lo = std::min(out.interval.lo, out.image.lo - out.image.tolerance);
        out.interval.hi = std::max(out.interval.hi, out.image.hi + out.image.tolerance);
    }
    out.verified = false;
    out.interval.certified = false;
    return out;
}

double IntervalChain::bound() const {
    double k = 0.0;
    for (const auto& iv : intervals) k = std::max(k, iv.magnitude() + iv.tolerance);
    return k;
}

IntervalChain interval_chain(const ScalarMap& map, const IntervalEnclosure& i0, const EnclosureOptions& opt) {
    const int n = map.size();
    IntervalChain chain;
    chain.intervals.resize(static_cast<std::size_t>(n));
    chain.intervals[0] = i0;
    IntervalEnclosure current = i0;
    for (int k = n - 1; k >= 1; --k) {
        current = image_enclosure([&map, k](double x) { return map.stage(k, x); }, current, opt);
        chain.intervals[static_cast<std::size_t>(k)] = current;
    }
    chain.closing_image = image_enclosure([&map](double x) { return map.stage(0, x); }, current, opt);
    chain.closes = included(chain.closing_image, i0, 1e-9 * (1.0 + i0.magnitude()));
    return chain;
}

MinimalInterval minimal_invariant_interval(const ScalarMap& map, const IntervalEnclosure& i0, int max_iter,
                                           const EnclosureOptions& opt) {
    MinimalInterval out;
    IntervalEnclosure current = i0;
    out.widths.push_back(current.width());
    auto contracts = [&](const IntervalEnclosure& iv) {
        if (!iv.contains(0.0)) return false;
        const int g = std::max(opt.grid, 8);
        const double floor = 1e-6 * (1.0 + iv.magnitude());
        for (int i = 0; i <= g; ++i) {
            const double x = iv.lo + (iv.hi - iv.lo) * i / g;
            if (std::abs(x) < floor) continue;
            if (!(std::abs(map(map(x))) < std::abs(x))) return false;
        }
        return true;
    };
    for (int it = 0; it < max_iter; ++it) {
        if (contracts(current)) {
            out.contraction = true;
            out.converged = true;
            out.iterations = it;
            out.enclosure = {0.0, 0.0, current.certified, 0.0};
            out.widths.push_back(0.0);
            return out;
        }
        const IntervalEnclosure img = image_enclosure(map, current, opt);
        IntervalEnclosure next{std::max(img.lo, current.lo), std::min(img.hi, current.hi), img.certified && current.certified,
                               img.tolerance};
        if (next.lo > next.hi) next.lo = next.hi = 0.5 * (next.lo + next.hi);
        const double hausdorff = std::max(std::abs(next.lo - current.lo), std::abs(next.hi - current.hi));
        const double rel_change = current.width() > 0.0 ? std::abs(current.width() - next.width()) / current.width() : 0.0;
        current = next;
        out.widths.push_back(current.width());
        out.iterations = it + 1;
        if (hausdorff < 1e-9 || rel_change < 1e-12) {
            out.converged = true;
            break;
        }
    }
    out.enclosure = current;
    return out;
}

}  // namespace cdde
