#include <gtest/gtest.h>

#include <cmath>

#include "cdde/char_spectrum.hpp"

using namespace cdde;

TEST(Continuation, ScalarBranchEntersRightHalfPlane) {
    const SpectralParams p({1.0}, 1.0);
    const auto b = bifurcation_point(p, 1);
    const CharRoot start = make_root(Complex(0.0, b.omega), p.with_gain(b.a));
    const RootPath path = continue_root(p.with_gain(b.a), start, b.a, 2 * b.a);
    ASSERT_FALSE(path.samples.empty());
    EXPECT_GT(path.samples.back().second.re, 0.0);
    ASSERT_TRUE(path.k_index);
    EXPECT_EQ(*path.k_index, 1);
    for (std::size_t i = 1; i < path.samples.size(); ++i) {
        EXPECT_GT(path.samples[i].first, path.samples[i - 1].first);
        EXPECT_GE(path.samples[i].second.re, path.samples[i - 1].second.re - 1e-12);
        EXPECT_GE(path.samples[i].second.im, path.samples[i - 1].second.im - 1e-12);
        EXPECT_LE(path.samples[i].second.residual, 1e-8);
    }
}

TEST(Continuation, VelocityMatchesCentralDifferences) {
    const SpectralParams p({1.0, 0.5, 0.25}, 0.5, 2.125);
    const auto z0 = *newton_refine(p, Complex(0.22, 0.94));
    const double h = 1e-5;
    const auto zp = *newton_refine(p.with_gain(p.a + h), z0);
    const auto zm = *newton_refine(p.with_gain(p.a - h), z0);
    const Complex fd = (zp - zm) / (2 * h);
    const Complex v = root_velocity(p, z0);
    EXPECT_LE(std::abs(fd - v), 1e-4 * std::abs(v));
}

TEST(Continuation, MonotoneOnHigherBranch) {
    const SpectralParams p({1.0, 0.5, 0.25}, 0.5);
    const auto b = bifurcation_point(p, 2);
    const auto path = continue_root(p.with_gain(b.a), make_root(Complex(0, b.omega), p.with_gain(b.a)), b.a, 10 * b.a);
    for (std::size_t i = 1; i < path.samples.size(); ++i) {
        EXPECT_GE(path.samples[i].second.re, path.samples[i - 1].second.re - 1e-12);
        EXPECT_GE(path.samples[i].second.im, path.samples[i - 1].second.im - 1e-12);
        EXPECT_LT(path.samples[i].second.im, 3 * kPi / p.tau);
    }
}

TEST(Continuation, ImaginaryPartApproachesLimit) {
    // Im z = pi - arg(z + 1) with Re z ~ ln a, so the approach to pi is only logarithmic:
    // about 7% short at 1e6 a_1 and inside 5% from roughly 1e12 a_1 on.
    const SpectralParams p({1.0}, 1.0);
    const auto b = bifurcation_point(p, 1);
    const auto start = make_root(Complex(0, b.omega), p.with_gain(b.a));
    const auto mid = continue_root(p.with_gain(b.a), start, b.a, 1e6 * b.a, 256).samples.back().second;
    EXPECT_NEAR(mid.im, kPi - std::atan2(mid.im, mid.re + 1.0), 1e-9);
    EXPECT_LT(mid.im, kPi);
    const auto far = continue_root(p.with_gain(b.a), start, b.a, 1e12 * b.a, 512).samples.back().second;
    EXPECT_GT(far.im, mid.im);
    EXPECT_NEAR(far.im, kPi / p.tau, 0.05 * kPi / p.tau);
}

TEST(Continuation, RealBranchMergesAtThreshold) {
    const SpectralParams p({1.0, 0.5, 0.25}, 0.5, 2.125);
    const double a0 = *compute_a0(p);
    const auto start = real_roots(p).back();
    const auto path = continue_root(p, start, p.a, 2 * a0);
    ASSERT_TRUE(path.merge);
    EXPECT_NEAR(path.merge->a, a0, 1e-6 * a0);
}

TEST(Continuation, RejectsBadRange) {
    const SpectralParams p({1.0}, 1.0, 1.0);
    const auto z = make_root(*newton_refine(p, Complex(-0.3, 1.0)), p);
    EXPECT_THROW(continue_root(p, z, 2.0, 1.0), PreconditionError);
}
