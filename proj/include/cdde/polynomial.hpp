#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Eigenvalues>

#include "cdde/common.hpp"

namespace cdde::poly {

// Coefficients are stored lowest degree first: c[0] + c[1] x + ... + c[n] x^n.

/// Monic polynomial (x + shifts[0]) * ... * (x + shifts[n-1]).
template <typename Scalar>
VecX<Scalar> from_shifts(const VecX<Scalar>& shifts) {
    VecX<Scalar> c = VecX<Scalar>::Zero(shifts.size() + 1);
    c[0] = Scalar(1);
    for (Eigen::Index j = 0; j < shifts.size(); ++j) {
        for (Eigen::Index i = j + 1; i > 0; --i) c[i] = c[i - 1] + shifts[j] * c[i];
        c[0] *= shifts[j];
    }
    return c;
}

template <typename Scalar>
VecX<Scalar> derivative(const VecX<Scalar>& c) {
    if (c.size() <= 1) return VecX<Scalar>::Zero(1);
    VecX<Scalar> d(c.size() - 1);
    for (Eigen::Index i = 1; i < c.size(); ++i) d[i - 1] = Scalar(i) * c[i];
    return d;
}

template <typename Scalar, typename T>
T horner(const VecX<Scalar>& c, const T& x) {
    T acc = T(c[c.size() - 1]);
    for (Eigen::Index i = c.size() - 2; i >= 0; --i) acc = acc * x + T(c[i]);
    return acc;
}

/// All complex roots via eigenvalues of the companion matrix.
template <typename Scalar>
std::vector<std::complex<Scalar>> roots(const VecX<Scalar>& c) {
    Eigen::Index deg = c.size() - 1;
    while (deg > 0 && c[deg] == Scalar(0)) --deg;
    if (deg < 1) return {};
    MatX<Scalar> companion = MatX<Scalar>::Zero(deg, deg);
    for (Eigen::Index i = 1; i < deg; ++i) companion(i, i - 1) = Scalar(1);
    for (Eigen::Index i = 0; i < deg; ++i) companion(i, deg - 1) = -c[i] / c[deg];
    Eigen::EigenSolver<MatX<Scalar>> solver(companion, false);
    if (solver.info() != Eigen::Success) throw NumericalError("companion eigenvalue solver did not converge");
    std::vector<std::complex<Scalar>> out;
    out.reserve(static_cast<std::size_t>(deg));
    for (Eigen::Index i = 0; i < deg; ++i) out.push_back(solver.eigenvalues()[i]);
    return out;
}

/// Real roots, polished by Newton on the polynomial and sorted ascending.
///
/// Eigenvalues of the companion matrix near a multiple real root split into
/// complex pairs of size ~sqrt(eps); `imag_tol` (relative to 1+|re|) decides
/// which eigenvalues are treated as real.
template <typename Scalar>
std::vector<Scalar> real_roots(const VecX<Scalar>& c, Scalar imag_tol = Scalar(1e-6)) {
    const VecX<Scalar> dc = derivative(c);
    std::vector<Scalar> out;
    for (const auto& z : roots(c)) {
        if (std::abs(z.imag()) > imag_tol * (Scalar(1) + std::abs(z.real()))) continue;
        Scalar x = z.real();
        for (int it = 0; it < 8; ++it) {
            const Scalar f = horner(c, x);
            const Scalar df = horner(dc, x);
            if (df == Scalar(0)) break;
            const Scalar step = f / df;
            if (!std::isfinite(step) || std::abs(step) > Scalar(1e-3) * (Scalar(1) + std::abs(x))) break;
            x -= step;
            if (std::abs(step) <= Scalar(4) * std::numeric_limits<Scalar>::epsilon() * (Scalar(1) + std::abs(x))) break;
        }
        out.push_back(x);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace cdde::poly
