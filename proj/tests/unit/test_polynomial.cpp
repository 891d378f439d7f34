#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cdde/polynomial.hpp"
#include "cdde/quasi_polynomial.hpp"

using namespace cdde;

TEST(Polynomial, FromShiftsExpandsProduct) {
    // (x+1)(x+2) = 2 + 3x + x^2
    const VectorXd c = poly::from_shifts(VectorXd((VectorXd(2) << 1.0, 2.0).finished()));
    ASSERT_EQ(c.size(), 3);
    EXPECT_DOUBLE_EQ(c[0], 2.0);
    EXPECT_DOUBLE_EQ(c[1], 3.0);
    EXPECT_DOUBLE_EQ(c[2], 1.0);
    const VectorXd d = poly::derivative(c);
    EXPECT_DOUBLE_EQ(d[0], 3.0);
    EXPECT_DOUBLE_EQ(d[1], 2.0);
}

TEST(Polynomial, RealRootsOfCubic) {
    const VectorXd c = poly::from_shifts(VectorXd((VectorXd(3) << 3.0, -1.0, 0.5).finished()));
    const auto r = poly::real_roots(c);
    ASSERT_EQ(r.size(), 3u);
    EXPECT_NEAR(r[0], -3.0, 1e-12);
    EXPECT_NEAR(r[1], -0.5, 1e-12);
    EXPECT_NEAR(r[2], 1.0, 1e-12);
}

TEST(Polynomial, ComplexRootsAreNotReal) {
    const VectorXd c = (VectorXd(3) << 1.0, 0.0, 1.0).finished();  // x^2 + 1
    EXPECT_TRUE(poly::real_roots(c).empty());
    EXPECT_EQ(poly::roots(c).size(), 2u);
}

TEST(QuasiPolynomial, CharAtZeroIsProductPlusGain) {
    const SpectralParams p({1.0, 0.5, 0.25}, 0.5, 2.125);
    EXPECT_NEAR(eval_char(Complex(0.0, 0.0), p).real(), 2.25, 1e-15);
    EXPECT_NEAR(eval_char(0.0, p), 2.25, 1e-15);
}

TEST(QuasiPolynomial, PublishedRealRootHasSmallResidual) {
    const SpectralParams p({1.0, 0.5, 0.25}, 0.5, 2.125);
    const Complex z(-14.1259, 0.0);
    EXPECT_LE(std::abs(eval_char(z, p)), 1e-2 * std::abs(eval_poly(z, p)));
}

TEST(QuasiPolynomial, HValues) {
    EXPECT_NEAR(eval_H(0.0, SpectralParams({1.0, 1.0}, 1.0)), 1.0, 1e-15);
    EXPECT_NEAR(eval_H(-2.0, SpectralParams({1.0}, 1.0)), -std::exp(-2.0), 1e-15);
    EXPECT_LT(std::abs(eval_H(-50.0, SpectralParams({1.0}, 1.0))), 1e-10);
}

TEST(QuasiPolynomial, DerivativeMatchesFiniteDifference) {
    const SpectralParams p({1.0, 0.5, 0.25}, 0.5, 2.125);
    const Complex z(0.3, 0.7);
    const double h = 1e-6;
    const Complex fd = (eval_char(z + h, p) - eval_char(z - h, p)) / (2 * h);
    EXPECT_LT(std::abs(fd - eval_char_derivative(z, p)), 1e-7);
    const double x = -1.3;
    EXPECT_NEAR((eval_H(x + h, p) - eval_H(x - h, p)) / (2 * h), eval_H_derivative(x, p), 1e-7);
}

TEST(QuasiPolynomial, PositiveRealAxisHasNoRoots) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const int n = 1 + static_cast<int>(U(rng) * 6);
        VectorXd l(n);
        for (int k = 0; k < n; ++k) l[k] = 0.05 + 3 * U(rng);
        const SpectralParams p(l, 0.05 + 3 * U(rng), 1e-3 + 100 * U(rng));
        EXPECT_GT(eval_char(100.0 * U(rng), p), 0.0);
    }
}

TEST(QuasiPolynomial, TemplatedOnScalar) {
    const SpectralParamsT<long double> p({1.0L, 0.5L}, 1.0L, 2.0L);
    const auto v = eval_char(std::complex<long double>(0.0L, 0.0L), p);
    EXPECT_NEAR(static_cast<double>(v.real()), 2.5, 1e-15);
}

TEST(QuasiPolynomial, ValidateRejectsBadParams) {
    EXPECT_THROW(SpectralParams({1.0, -1.0}, 1.0, 1.0).validate(), PreconditionError);
    EXPECT_THROW(SpectralParams({1.0}, 0.0, 1.0).validate(), PreconditionError);
    EXPECT_THROW(SpectralParams({1.0}, 1.0, -1.0).validate(), PreconditionError);
    EXPECT_THROW(SpectralParams(VectorXd(0), 1.0, 1.0).validate(), PreconditionError);
}
