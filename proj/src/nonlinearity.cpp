#include "cdde/nonlinearity.hpp"

#include <algorithm>
#include <cmath>

#include "cdde/common.hpp"

namespace cdde {

std::string to_string(NonlinearityKind k) {
    switch (k) {
        case NonlinearityKind::linear: return "linear";
        case NonlinearityKind::tanh_saturating: return "tanh_saturating";
        case NonlinearityKind::hill_odd: return "hill_odd";
        case NonlinearityKind::piecewise_linear: return "piecewise_linear";
    }
    return "unknown";
}

std::string to_string(FeedbackSign s) { return s == FeedbackSign::positive ? "positive" : "negative"; }

NonlinearityKind parse_nonlinearity_kind(const std::string& s) {
    if (s == "linear") return NonlinearityKind::linear;
    if (s == "tanh_saturating" || s == "tanh") return NonlinearityKind::tanh_saturating;
    if (s == "hill_odd" || s == "hill") return NonlinearityKind::hill_odd;
    if (s == "piecewise_linear" || s == "pwl") return NonlinearityKind::piecewise_linear;
    throw PreconditionError("unknown nonlinearity kind '" + s + "'");
}

NonlinearitySpec NonlinearitySpec::linear(double slope) {
    NonlinearitySpec f;
    f.kind = NonlinearityKind::linear;
    f.slope = slope;
    return f;
}

NonlinearitySpec NonlinearitySpec::tanh(double slope, double scale) {
    NonlinearitySpec f;
    f.kind = NonlinearityKind::tanh_saturating;
    f.slope = slope;
    f.scale = scale;
    return f;
}

NonlinearitySpec NonlinearitySpec::hill(double slope, double scale, double exponent) {
    NonlinearitySpec f;
    f.kind = NonlinearityKind::hill_odd;
    f.slope = slope;
    f.scale = scale;
    f.exponent = exponent;
    return f;
}

NonlinearitySpec NonlinearitySpec::piecewise(double slope, double lower, double upper) {
    NonlinearitySpec f;
    f.kind = NonlinearityKind::piecewise_linear;
    f.slope = slope;
    f.lower = lower;
    f.upper = upper;
    return f;
}

double NonlinearitySpec::operator()(double x) const {
    const double u = in_sign * x;
    double v = 0.0;
    switch (kind) {
        case NonlinearityKind::linear: v = slope * u; break;
        case NonlinearityKind::tanh_saturating: v = slope * scale * std::tanh(u / scale); break;
        case NonlinearityKind::hill_odd: v = slope * u / std::pow(1.0 + std::pow(std::abs(u / scale), exponent), 1.0 / exponent); break;
        case NonlinearityKind::piecewise_linear: v = slope * std::clamp(u, lower, upper); break;
    }
    return out_sign * v;
}

namespace {

// Range of the unsigned base shape as [lo, hi].
std::pair<double, double> base_range(const NonlinearitySpec& f) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    switch (f.kind) {
        case NonlinearityKind::linear: return {-inf, inf};
        case NonlinearityKind::tanh_saturating:
        case NonlinearityKind::hill_odd: {
            const double m = std::abs(f.slope) * f.scale;
            return {-m, m};
        }
        case NonlinearityKind::piecewise_linear: {
            const double a = f.slope * f.lower;
            const double b = f.slope * f.upper;
            return {std::min(a, b), std::max(a, b)};
        }
    }
    return {-inf, inf};
}

}  // namespace

double NonlinearitySpec::sup() const {
    auto [lo, hi] = base_range(*this);
    double s = out_sign > 0 ? hi : -lo;
    if (one_sided_bound) s = std::min(s, *one_sided_bound);
    return s;
}

double NonlinearitySpec::inf() const {
    auto [lo, hi] = base_range(*this);
    return out_sign > 0 ? lo : -hi;
}

NonlinearitySpec NonlinearitySpec::flipped(double new_in, double new_out) const {
    NonlinearitySpec g = *this;
    g.in_sign = in_sign * new_in;
    g.out_sign = out_sign * new_out;
    if (one_sided_bound && new_out < 0) g.one_sided_bound.reset();  // an upper bound turns into a lower one
    return g;
}

void NonlinearitySpec::validate() const {
    if (!(slope != 0.0) || !std::isfinite(slope)) throw PreconditionError("nonlinearity: slope at zero must be nonzero and finite");
    if ((kind == NonlinearityKind::tanh_saturating || kind == NonlinearityKind::hill_odd) && !(scale > 0.0))
        throw PreconditionError("nonlinearity: saturation scale must be positive");
    if (kind == NonlinearityKind::hill_odd && !(exponent >= 1.0)) throw PreconditionError("nonlinearity: hill exponent must be >= 1");
    if (kind == NonlinearityKind::piecewise_linear && !(lower < 0.0 && upper > 0.0))
        throw PreconditionError("nonlinearity: piecewise_linear needs lower < 0 < upper");
    if (std::abs(in_sign) != 1.0 || std::abs(out_sign) != 1.0) throw PreconditionError("nonlinearity: sign flags must be +-1");
    const bool positive = feedback_sign() == FeedbackSign::positive;
    for (int i = -400; i <= 400; ++i) {
        if (i == 0) continue;
        const double x = std::copysign(std::pow(10.0, std::abs(i) / 50.0 - 4.0), static_cast<double>(i));
        const double v = (*this)(x);
        if (positive ? !(x * v > 0.0) : !(x * v < 0.0))
            throw PreconditionError("nonlinearity: feedback sign violated at x = " + std::to_string(x));
        if (one_sided_bound && v > *one_sided_bound * (1.0 + 1e-12))
            throw PreconditionError("nonlinearity: declared bound M violated at x = " + std::to_string(x));
    }
}

}  // namespace cdde
