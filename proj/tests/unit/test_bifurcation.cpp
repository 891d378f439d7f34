#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cdde/char_spectrum.hpp"

using namespace cdde;

TEST(Bifurcation, ScalarFirstPoint) {
    // oracle: bisection of arctan(w) + w = pi
    double lo = 0, hi = kPi;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (std::atan(mid) + mid < kPi ? lo : hi) = mid;
    }
    const auto b = bifurcation_point(SpectralParams({1.0}, 1.0), 1);
    EXPECT_NEAR(b.omega, lo, 1e-12);
    EXPECT_NEAR(b.omega, 2.0288, 1e-4);
    EXPECT_NEAR(b.a, 2.2618, 1e-4);
}

TEST(Bifurcation, SequenceIncreasesAndSolvesSystem) {
    const SpectralParams p({1.0, 0.5, 0.25}, 0.5, 2.125);
    const auto seq = bifurcation_sequence(p, 12);
    ASSERT_EQ(seq.size(), 12u);
    EXPECT_LT(seq[0].a, 2.125);
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const auto& b = seq[i];
        EXPECT_EQ(b.k, static_cast<int>(i) + 1);
        EXPECT_LE(std::abs(phase_theta0(b.omega, p) + b.omega * p.tau - (2 * b.k - 1) * kPi), 1e-10);
        double prod = 1;
        for (Eigen::Index j = 0; j < p.n(); ++j) prod *= b.omega * b.omega + p.lambdas[j] * p.lambdas[j];
        EXPECT_LE(std::abs(b.a * b.a - prod), 1e-10 * b.a * b.a);
        if (i > 0) {
            EXPECT_GT(b.omega, seq[i - 1].omega);
            EXPECT_GT(b.a, seq[i - 1].a);
        }
        EXPECT_LE(std::abs(eval_char(Complex(0, b.omega), p.with_gain(b.a))), 1e-8 * b.a);
    }
}

TEST(Bifurcation, IndependentOfGain) {
    const SpectralParams p({1.0, 0.5}, 0.7, 1.0);
    const auto a = bifurcation_sequence(p, 5);
    const auto b = bifurcation_sequence(p.with_gain(123.0), 5);
    for (int i = 0; i < 5; ++i) {
        EXPECT_EQ(a[i].omega, b[i].omega);
        EXPECT_EQ(a[i].a, b[i].a);
    }
}

TEST(Bifurcation, LargeKAsymptote) {
    const SpectralParams p({1.0, 1.0}, 1.0);
    const auto b = bifurcation_point(p, 200);
    const double asym = (kPi / p.tau) * (2.0 * 200 - 1.0 - 1.0);
    EXPECT_NEAR(b.omega / asym, 1.0, 0.02);
}

TEST(Bifurcation, RejectsBadIndex) {
    EXPECT_THROW(bifurcation_sequence(SpectralParams({1.0}, 1.0), 0), PreconditionError);
    EXPECT_THROW(bifurcation_point(SpectralParams({1.0}, 1.0), 0), PreconditionError);
}

TEST(Bifurcation, CorollaryOneOnRandomOddN) {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const int n = 3 + 2 * static_cast<int>(U(rng) * 3);
        VectorXd l(n);
        for (int k = 0; k < n; ++k) l[k] = 0.1 + 2.9 * U(rng);
        const SpectralParams p(l, 0.1 + 1.9 * U(rng));
        const auto a0 = compute_a0(p);
        ASSERT_TRUE(a0) << "draw " << i;
        EXPECT_LT(*a0, bifurcation_point(p, (n + 1) / 2).a) << "draw " << i;
    }
}
