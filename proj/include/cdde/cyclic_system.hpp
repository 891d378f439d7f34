#pragma once

#include <vector>

#include "cdde/common.hpp"
#include "cdde/nonlinearity.hpp"
#include "cdde/quasi_polynomial.hpp"

namespace cdde {

/**
 * @brief Cyclic delay system
 *
 *   x_k' + lambda_k x_k = f_k(x_{k+1}(t - delays[k])),   k = 1..n  (x_{n+1} := x_1)
 *
 * Standard form has all delays zero except the last one, positive feedback in
 * f_1..f_{n-1} and negative feedback in f_n.
 */
struct CyclicSystem {
    VectorXd lambdas;
    std::vector<double> delays;
    std::vector<NonlinearitySpec> nonlinearities;

    /// Standard-form system with total delay tau on the last equation.
    static CyclicSystem standard(VectorXd lambdas, double tau, std::vector<NonlinearitySpec> f);

    [[nodiscard]] Eigen::Index n() const { return lambdas.size(); }
    [[nodiscard]] double total_delay() const;
    /// Product of the feedback signs: -1 for overall negative feedback.
    [[nodiscard]] int overall_sign() const;
    [[nodiscard]] bool is_standard_form() const;
    /// f_n bounded above (closed form or declared M).
    [[nodiscard]] bool last_one_sided_bounded() const;

    /// Sizes, rates, delays, nonlinearities and overall negative feedback.
    void validate() const;
};

/// Standard form plus the change of variables back to the original system:
///   x_k(t) = signs[k] * z_k(t + shifts[k]).
struct Normalization {
    CyclicSystem standard;
    std::vector<int> signs;
    std::vector<double> shifts;

    [[nodiscard]] bool is_identity() const;
};

Normalization normalize_system(const CyclicSystem& sys);

/// Linearization at zero: a = -prod f_k'(0).
SpectralParams linearize(const CyclicSystem& sys);

}  // namespace cdde
