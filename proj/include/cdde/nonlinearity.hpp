#pragma once

#include <limits>
#include <optional>
#include <string>

namespace cdde {

enum class NonlinearityKind { linear, tanh_saturating, hill_odd, piecewise_linear };
enum class FeedbackSign { positive, negative };

std::string to_string(NonlinearityKind k);
std::string to_string(FeedbackSign s);
NonlinearityKind parse_nonlinearity_kind(const std::string& s);

/**
 * @brief Closed-form scalar nonlinearity f with f(0) = 0 and f'(0) = slope.
 *
 * Base shapes, with saturation scale s > 0:
 *   linear            A x
 *   tanh_saturating   A s tanh(x / s)
 *   hill_odd          A x / (1 + |x/s|^m)^(1/m)
 *   piecewise_linear  A clamp(x, lower, upper),  lower < 0 < upper (either may be infinite)
 *
 * All shapes are monotone.  The stored value is out_sign * base(in_sign * x);
 * the sign pair records the variable flips applied by normalization.
 */
struct NonlinearitySpec {
    NonlinearityKind kind{NonlinearityKind::linear};
    double slope{1.0};
    double scale{1.0};
    double exponent{2.0};
    double lower{-std::numeric_limits<double>::infinity()};
    double upper{std::numeric_limits<double>::infinity()};
    std::optional<double> one_sided_bound;  ///< declared M with f(x) <= M
    double in_sign{1.0};
    double out_sign{1.0};

    static NonlinearitySpec linear(double slope);
    static NonlinearitySpec tanh(double slope, double scale = 1.0);
    static NonlinearitySpec hill(double slope, double scale = 1.0, double exponent = 2.0);
    static NonlinearitySpec piecewise(double slope, double lower, double upper);

    [[nodiscard]] double operator()(double x) const;
    [[nodiscard]] double slope_at_zero() const { return in_sign * out_sign * slope; }
    [[nodiscard]] FeedbackSign feedback_sign() const {
        return slope_at_zero() > 0.0 ? FeedbackSign::positive : FeedbackSign::negative;
    }
    /// Supremum / infimum of f over the real line (may be infinite); includes the declared bound.
    [[nodiscard]] double sup() const;
    [[nodiscard]] double inf() const;

    /// f(s_out * f(s_in x)) bookkeeping for sign flips: returns x -> out * f(in * x).
    [[nodiscard]] NonlinearitySpec flipped(double new_in, double new_out) const;

    /// Throws PreconditionError on zero slope, sign violations on a probe grid, or a violated declared bound.
    void validate() const;
};

}  // namespace cdde
