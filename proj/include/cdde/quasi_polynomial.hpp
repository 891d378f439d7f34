#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <string>

#include "cdde/common.hpp"

namespace cdde {

/// Parameters of the characteristic quasi-polynomial
///   char(z) = (z + lambda_1) ... (z + lambda_n) + a exp(-tau z).
template <typename Scalar>
struct SpectralParamsT {
    VecX<Scalar> lambdas;
    Scalar tau{1};
    Scalar a{0};

    SpectralParamsT() = default;
    SpectralParamsT(VecX<Scalar> lambdas_, Scalar tau_, Scalar a_ = Scalar(0))
        : lambdas(std::move(lambdas_)), tau(tau_), a(a_) {}
    SpectralParamsT(std::initializer_list<Scalar> lambdas_, Scalar tau_, Scalar a_ = Scalar(0))
        : lambdas(static_cast<Eigen::Index>(lambdas_.size())), tau(tau_), a(a_) {
        std::copy(lambdas_.begin(), lambdas_.end(), lambdas.begin());
    }

    [[nodiscard]] Eigen::Index n() const { return lambdas.size(); }

    [[nodiscard]] SpectralParamsT with_gain(Scalar gain) const { return {lambdas, tau, gain}; }
    [[nodiscard]] SpectralParamsT with_delay(Scalar delay) const { return {lambdas, delay, a}; }

    /// Throws PreconditionError unless n >= 1, lambda_j > 0, tau > 0, a >= 0.
    void validate() const {
        if (lambdas.size() < 1) throw PreconditionError("spectral params: need at least one decay rate");
        for (Eigen::Index j = 0; j < lambdas.size(); ++j)
            if (!(lambdas[j] > Scalar(0)) || !std::isfinite(lambdas[j]))
                throw PreconditionError("spectral params: decay rate lambda_" + std::to_string(j + 1) + " must be positive");
        if (!(tau > Scalar(0)) || !std::isfinite(tau)) throw PreconditionError("spectral params: tau must be positive");
        if (!(a >= Scalar(0)) || !std::isfinite(a)) throw PreconditionError("spectral params: gain a must be non-negative");
    }
};

using SpectralParams = SpectralParamsT<double>;

/// P_n(z) = prod (z + lambda_j).
template <typename Scalar, typename T>
T eval_poly(const T& z, const SpectralParamsT<Scalar>& p) {
    T acc(1);
    for (Eigen::Index j = 0; j < p.lambdas.size(); ++j) acc *= (z + T(p.lambdas[j]));
    return acc;
}

/// P_n'(z) / P_n(z) = sum 1/(z + lambda_j); valid away from -lambda_j.
template <typename Scalar, typename T>
T log_derivative_poly(const T& z, const SpectralParamsT<Scalar>& p) {
    T acc(0);
    for (Eigen::Index j = 0; j < p.lambdas.size(); ++j) acc += T(1) / (z + T(p.lambdas[j]));
    return acc;
}

/// P_n'(z) evaluated by the product rule (no division, safe at -lambda_j).
template <typename Scalar, typename T>
T eval_poly_derivative(const T& z, const SpectralParamsT<Scalar>& p) {
    T value(1);
    T deriv(0);
    for (Eigen::Index j = 0; j < p.lambdas.size(); ++j) {
        const T factor = z + T(p.lambdas[j]);
        deriv = deriv * factor + value;
        value *= factor;
    }
    return deriv;
}

/// char(z) = P_n(z) + a exp(-tau z).
template <typename Scalar>
std::complex<Scalar> eval_char(const std::complex<Scalar>& z, const SpectralParamsT<Scalar>& p) {
    return eval_poly(z, p) + p.a * std::exp(-p.tau * z);
}

template <typename Scalar>
Scalar eval_char(Scalar x, const SpectralParamsT<Scalar>& p) {
    return eval_poly(x, p) + p.a * std::exp(-p.tau * x);
}

/// d/dz char(z) = P_n'(z) - a tau exp(-tau z).
template <typename Scalar>
std::complex<Scalar> eval_char_derivative(const std::complex<Scalar>& z, const SpectralParamsT<Scalar>& p) {
    return eval_poly_derivative(z, p) - p.a * p.tau * std::exp(-p.tau * z);
}

template <typename Scalar>
Scalar eval_char_derivative(Scalar x, const SpectralParamsT<Scalar>& p) {
    return eval_poly_derivative(x, p) - p.a * p.tau * std::exp(-p.tau * x);
}

/// Magnitude scale max(1, |P_n(z)|, a exp(-tau Re z)) used to make residuals relative.
template <typename Scalar>
Scalar char_scale(const std::complex<Scalar>& z, const SpectralParamsT<Scalar>& p) {
    return std::max({Scalar(1), std::abs(eval_poly(z, p)), p.a * std::exp(-p.tau * z.real())});
}

template <typename Scalar>
Scalar relative_residual(const std::complex<Scalar>& z, const SpectralParamsT<Scalar>& p) {
    return std::abs(eval_char(z, p)) / char_scale(z, p);
}

/// H(x) = P_n(x) exp(tau x); real roots of char solve H(x) = -a.
template <typename Scalar>
Scalar eval_H(Scalar x, const SpectralParamsT<Scalar>& p) {
    return eval_poly(x, p) * std::exp(p.tau * x);
}

/// H'(x) = (P_n'(x) + tau P_n(x)) exp(tau x).
template <typename Scalar>
Scalar eval_H_derivative(Scalar x, const SpectralParamsT<Scalar>& p) {
    return (eval_poly_derivative(x, p) + p.tau * eval_poly(x, p)) * std::exp(p.tau * x);
}

/// Sum of arctan(omega / lambda_j): the phase of P_n(i omega).
template <typename Scalar>
Scalar phase_theta0(Scalar omega, const SpectralParamsT<Scalar>& p) {
    Scalar acc(0);
    for (Eigen::Index j = 0; j < p.lambdas.size(); ++j) acc += std::atan(omega / p.lambdas[j]);
    return acc;
}

}  // namespace cdde
