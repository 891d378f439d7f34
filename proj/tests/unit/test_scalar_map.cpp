#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cdde/scalar_map.hpp"

using namespace cdde;

namespace {

CyclicSystem tanh_chain(std::vector<double> lambdas, std::vector<double> slopes, double tau = 1.0) {
    VectorXd l(static_cast<Eigen::Index>(lambdas.size()));
    std::vector<NonlinearitySpec> f;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        l[static_cast<Eigen::Index>(i)] = lambdas[i];
        f.push_back(NonlinearitySpec::tanh(slopes[i]));
    }
    return CyclicSystem::standard(l, tau, f);
}

}  // namespace

TEST(ScalarMap, CompositionOrderAndShift) {
    const ScalarMap F({[](double x) { return 2 * x; }, [](double x) { return x + 1; }});
    EXPECT_DOUBLE_EQ(F(3.0), 8.0);
    EXPECT_DOUBLE_EQ(F.shifted(1)(3.0), 7.0);
    EXPECT_DOUBLE_EQ(F.shifted(2)(3.0), 8.0);
    EXPECT_THROW(ScalarMap(std::vector<ScalarMap::Stage>{}), PreconditionError);
}

TEST(ScalarMap, FromSystemDividesByLambda) {
    const auto sys = tanh_chain({2.0, 4.0}, {1.0, -1.0});
    const ScalarMap F = ScalarMap::from_system(sys);
    const double x = 0.8;
    EXPECT_NEAR(F(x), std::tanh(-std::tanh(x) / 4.0) / 2.0, 1e-15);
}

TEST(ImageEnclosure, KnownRanges) {
    const auto s = image_enclosure([](double x) { return std::sin(x); }, {0.0, M_PI, true, 0.0});
    EXPECT_TRUE(s.certified);
    EXPECT_NEAR(s.lo, 0.0, 1e-12);
    EXPECT_NEAR(s.hi, 1.0, 1e-10);
    EXPECT_LE(s.hi, 1.0);
    const auto q = image_enclosure([](double x) { return x * x; }, {-1.0, 2.0, true, 0.0});
    EXPECT_NEAR(q.lo, 0.0, 1e-9);
    EXPECT_NEAR(q.hi, 4.0, 1e-15);
    const auto d = image_enclosure([](double x) { return 3 * x; }, {1.0, 1.0, true, 0.0});
    EXPECT_DOUBLE_EQ(d.lo, 3.0);
    EXPECT_DOUBLE_EQ(d.hi, 3.0);
    EXPECT_THROW(image_enclosure([](double x) { return x; }, {1.0, 0.0, true, 0.0}), PreconditionError);
}

TEST(ImageEnclosure, MonteCarloContainment) {
    const ScalarMap F = ScalarMap::from_system(tanh_chain({1.0, 0.5, 0.25}, {1.0, 1.5, -2.0}));
    const IntervalEnclosure iv{-3.0, 5.0, true, 0.0};
    const auto img = image_enclosure(F, iv);
    ASSERT_TRUE(img.certified);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(iv.lo, iv.hi);
    for (int i = 0; i < 100000; ++i) EXPECT_TRUE(img.contains(F(U(rng)), img.tolerance)) << i;
}

TEST(InvariantInterval, NegativeTanh) {
    const auto sys = tanh_chain({1.0}, {-1.0});
    const ScalarMap F = ScalarMap::from_system(sys);
    const double m1 = composite_upper_bound(sys);
    EXPECT_NEAR(m1, 1.0, 1e-15);
    const auto inv = invariant_interval_I0(F, m1);
    EXPECT_TRUE(inv.verified);
    EXPECT_NEAR(inv.interval.lo, -std::tanh(1.0), 1e-9);
    EXPECT_DOUBLE_EQ(inv.interval.hi, 1.0);
    EXPECT_TRUE(included(inv.image, inv.interval, 1e-9));
}

TEST(InvariantInterval, HalfGainLinear) {
    const ScalarMap F({[](double x) { return -0.5 * x; }});
    const auto inv = invariant_interval_I0(F, 1.0);
    EXPECT_TRUE(inv.verified);
    EXPECT_EQ(inv.widenings, 0);
    EXPECT_NEAR(inv.interval.lo, -0.5, 1e-12);
    EXPECT_NEAR(inv.image.lo, -0.5, 1e-12);
    EXPECT_NEAR(inv.image.hi, 0.25, 1e-12);
    EXPECT_THROW(invariant_interval_I0(F, 0.0), PreconditionError);
}

TEST(InvariantInterval, RequiresBoundedLastStage) {
    const auto sys = CyclicSystem::standard((VectorXd(1) << 1.0).finished(), 1.0, {NonlinearitySpec::linear(-1.0)});
    EXPECT_THROW(composite_upper_bound(sys), PreconditionError);
}

TEST(MinimalInterval, CollapsesForContractions) {
    const ScalarMap half({[](double x) { return -0.5 * x; }});
    const auto a = minimal_invariant_interval(half, invariant_interval_I0(half, 1.0).interval);
    EXPECT_TRUE(a.converged);
    EXPECT_TRUE(a.contraction);
    EXPECT_EQ(a.enclosure.width(), 0.0);

    const auto sys = tanh_chain({1.0}, {-1.0});
    const ScalarMap F = ScalarMap::from_system(sys);
    const auto b = minimal_invariant_interval(F, invariant_interval_I0(F, 1.0).interval);
    EXPECT_TRUE(b.converged);
    EXPECT_TRUE(b.contraction);
    EXPECT_NEAR(b.enclosure.magnitude(), 0.0, 1e-12);
}

TEST(MinimalInterval, NondegenerateForSteepFeedback) {
    const auto sys = tanh_chain({1.0}, {-3.0});
    const ScalarMap F = ScalarMap::from_system(sys);
    const auto inv = invariant_interval_I0(F, composite_upper_bound(sys));
    const auto m = minimal_invariant_interval(F, inv.interval);
    EXPECT_TRUE(m.converged);
    EXPECT_FALSE(m.contraction);
    // the symmetric 2-cycle p = 3 tanh p bounds the attractor
    double p = 3.0;
    for (int i = 0; i < 200; ++i) p = 3 * std::tanh(p);
    EXPECT_NEAR(m.enclosure.lo, -p, 1e-6);
    EXPECT_NEAR(m.enclosure.hi, p, 1e-6);
    const auto img = image_enclosure(F, m.enclosure);
    EXPECT_TRUE(included(m.enclosure, img, 1e-6));
    for (std::size_t i = 1; i < m.widths.size(); ++i) EXPECT_LE(m.widths[i], m.widths[i - 1] + 1e-12);
}

TEST(IntervalChain, ClosesAndBoundsEachComponent) {
    const auto sys = tanh_chain({1.0, 0.5, 0.25}, {1.0, 1.0, -2.125}, 0.5);
    const ScalarMap F = ScalarMap::from_system(sys);
    const auto inv = invariant_interval_I0(F, composite_upper_bound(sys));
    ASSERT_TRUE(inv.verified);
    const auto chain = interval_chain(F, inv.interval);
    EXPECT_TRUE(chain.closes);
    ASSERT_EQ(chain.intervals.size(), 3u);
    // I_3 = g_3(I0) with g_3 = -2.125 tanh / 0.25
    EXPECT_NEAR(chain.intervals[2].lo, -8.5 * std::tanh(inv.interval.hi), 1e-9);
    EXPECT_GE(chain.bound(), chain.intervals[2].magnitude());
}

TEST(ShiftedMaps, KeepNegativeFeedback) {
    const auto sys = tanh_chain({1.0, 0.5, 0.25, 2.0}, {1.0, 0.7, 2.0, -1.5});
    const ScalarMap F = ScalarMap::from_system(sys);
    for (int k = 0; k < F.size(); ++k)
        for (double x = -5; x <= 5; x += 0.31)
            if (std::abs(x) > 1e-9) EXPECT_LT(x * F.shifted(k)(x), 0.0);
}
