#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cdde/common.hpp"
#include "cdde/quasi_polynomial.hpp"

namespace cdde {

/// One located root of the characteristic quasi-polynomial.
///
/// Roots found by half-plane searches (rectangles with im_min >= 0) carry
/// im >= 0 and stand for the conjugate pair when im > 0.  Rectangle searches
/// that straddle the real axis report both members of a pair explicitly.
struct CharRoot {
    double re{0};
    double im{0};
    int multiplicity{1};
    double residual{0};  ///< |char(z)| / max(1, |P_n(z)|, a exp(-tau Re z))

    [[nodiscard]] Complex z() const { return {re, im}; }
    [[nodiscard]] bool is_real() const { return im == 0.0; }
};

/// Build a certified CharRoot at z; residual is recomputed from p.
CharRoot make_root(Complex z, const SpectralParams& p, int multiplicity = 1);

/// Purely imaginary crossing i*omega_k at gain a_k.
struct BifurcationPoint {
    int k{1};
    double omega{0};
    double a{0};
};

struct Rectangle {
    double re_min{0};
    double re_max{0};
    double im_min{0};
    double im_max{0};

    [[nodiscard]] bool valid() const { return re_min < re_max && im_min < im_max; }
    [[nodiscard]] bool contains(Complex z) const {
        return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min && z.imag() <= im_max;
    }
    [[nodiscard]] double width() const { return re_max - re_min; }
    [[nodiscard]] double height() const { return im_max - im_min; }
    [[nodiscard]] Rectangle expanded(double by) const {
        return {re_min - by, re_max + by, im_min - by, im_max + by};
    }
};

/// Merge of a continued real branch with a neighbouring real root.
struct MergeEvent {
    double a{0};
    Complex z;
    std::string note;
};

struct RootPath {
    std::vector<std::pair<double, CharRoot>> samples;
    std::optional<int> k_index;
    std::optional<MergeEvent> merge;
};

/// Tolerances shared by the spectral routines.
struct SpectrumOptions {
    double certify_tol = 1e-8;        ///< maximum relative residual of a reported root
    double newton_tol = 1e-12;        ///< Newton stopping threshold (relative residual)
    int newton_max_iter = 50;
    double cluster_radius = 1e-6;     ///< real roots closer than this are one multiple root
    double boundary_epsilon = 1e-7;   ///< relative outward perturbation of a contour on proximity
    int boundary_attempts = 6;
    int max_depth = 48;               ///< quadtree depth limit for root isolation
};

// --- real axis -----------------------------------------------------------

/// a0 together with every global minimiser of H on (-inf, 0).
struct A0Info {
    double a0{0};
    std::vector<double> minimizers;
};

/// Largest gain admitting a real root, or nullopt when H >= 0 on (-inf, 0).
std::optional<A0Info> compute_a0_info(const SpectralParams& p);
std::optional<double> compute_a0(const SpectralParams& p);

/// Real critical points of H (roots of P_n' + tau P_n), ascending.
std::vector<double> critical_points_H(const SpectralParams& p);

/// Default search window [-x_max, 0] for real roots.
double default_real_window(const SpectralParams& p);

struct RealRootResult {
    std::vector<CharRoot> roots;  ///< ascending by value
    std::vector<std::string> warnings;
};

RealRootResult real_roots_detailed(const SpectralParams& p, std::optional<double> x_max = std::nullopt,
                                   const SpectrumOptions& opt = {});
std::vector<CharRoot> real_roots(const SpectralParams& p, const SpectrumOptions& opt = {});

// --- imaginary-axis crossings ----------------------------------------------

std::vector<BifurcationPoint> bifurcation_sequence(const SpectralParams& p, int k_max);
BifurcationPoint bifurcation_point(const SpectralParams& p, int k);

// --- contour counting and isolation ---------------------------------------

/// Rectangle actually used after boundary perturbation, plus the winding count.
struct CountResult {
    int count{0};
    Rectangle certified;
    int perturbations{0};
};

CountResult count_roots_certified(const SpectralParams& p, const Rectangle& r, const SpectrumOptions& opt = {});
int count_roots_in_rectangle(const SpectralParams& p, const Rectangle& r, const SpectrumOptions& opt = {});

/// Winding count on exactly r; nullopt when a root sits (numerically) on the boundary.
std::optional<int> winding_count(const SpectralParams& p, const Rectangle& r);

/// Newton on char from z0; nullopt on divergence or non-convergence.
std::optional<Complex> newton_refine(const SpectralParams& p, Complex z0, const SpectrumOptions& opt = {});

std::vector<CharRoot> find_roots_in_rectangle(const SpectralParams& p, const Rectangle& r,
                                              const SpectrumOptions& opt = {});

/// Modulus bound: every root with Re z >= 0 satisfies |z| <= a^(1/n).
double right_half_plane_radius(const SpectralParams& p);

// --- continuation in a -------------------------------------------------------

/// dz/da = P_n(z) / (a (P_n'(z) + tau P_n(z))) along a root branch.
Complex root_velocity(const SpectralParams& p, Complex z);

RootPath continue_root(const SpectralParams& p, const CharRoot& start, double a_from, double a_to,
                       int steps = 64, const SpectrumOptions& opt = {});

// --- spectrum-level checks ---------------------------------------------------

CharRoot leading_root(const SpectralParams& p, const SpectrumOptions& opt = {});

/// Thrown when a root lies within the strip margin of a strip boundary.
class StripAmbiguityError : public NumericalError {
public:
    StripAmbiguityError(const std::string& what, double suggested)
        : NumericalError(what), suggested_delta(suggested) {}
    double suggested_delta;
};

/// Roots with Re > 0 and 0 < Im < pi/tau; delta defaults to 1e-6 pi/tau.
int count_strip_roots(const SpectralParams& p, std::optional<double> delta = std::nullopt);

/// Roots in the strip, ordered by decreasing real part.
std::vector<CharRoot> strip_roots(const SpectralParams& p, const SpectrumOptions& opt = {});

struct ValidationCheck {
    std::string name;
    bool passed{true};
    std::vector<std::pair<std::size_t, std::size_t>> offending;  ///< index pairs (i, i) for single-root failures
};

struct ValidationReport {
    ValidationCheck simplicity{"complex roots simple", true, {}};
    ValidationCheck vertical{"distinct real parts among upper roots", true, {}};
    ValidationCheck horizontal{"distinct imaginary parts among right-half-plane roots", true, {}};
    [[nodiscard]] bool passed() const { return simplicity.passed && vertical.passed && horizontal.passed; }
};

ValidationReport validate_spectrum(const std::vector<CharRoot>& roots, const SpectralParams& p);

enum class Stability { asymptotically_stable, critical, unstable };

std::string to_string(Stability s);

struct StabilityAssessment {
    Stability verdict{Stability::asymptotically_stable};
    int unstable_pairs{0};        ///< conjugate pairs with Re > 0
    int critical_index{0};        ///< k with a == a_k when critical
    std::optional<int> contour_pairs;  ///< independent count from the winding number
    bool cross_validated{true};
};

StabilityAssessment stability_assessment(const SpectralParams& p, double rel_tol = 1e-9);

}  // namespace cdde
