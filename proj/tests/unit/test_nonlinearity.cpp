#include <gtest/gtest.h>

#include <cmath>

#include "cdde/common.hpp"
#include "cdde/nonlinearity.hpp"

using namespace cdde;

TEST(Nonlinearity, ShapesAndSlopes) {
    const auto t = NonlinearitySpec::tanh(-2.0, 0.5);
    EXPECT_DOUBLE_EQ(t.slope_at_zero(), -2.0);
    EXPECT_NEAR(t(1.0), -2.0 * 0.5 * std::tanh(2.0), 1e-15);
    EXPECT_EQ(t.feedback_sign(), FeedbackSign::negative);
    EXPECT_NEAR(t.sup(), 1.0, 1e-15);
    EXPECT_NEAR(t.inf(), -1.0, 1e-15);

    const auto h = NonlinearitySpec::hill(3.0, 1.0, 2.0);
    EXPECT_NEAR(h(1.0), 3.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(h.sup(), 3.0, 1e-15);
    const double e = 1e-7;
    EXPECT_NEAR((h(e) - h(-e)) / (2 * e), 3.0, 1e-6);

    const auto pw = NonlinearitySpec::piecewise(2.0, -1.0, 0.5);
    EXPECT_DOUBLE_EQ(pw(0.2), 0.4);
    EXPECT_DOUBLE_EQ(pw(3.0), 1.0);
    EXPECT_DOUBLE_EQ(pw(-3.0), -2.0);
    EXPECT_DOUBLE_EQ(pw.slope_at_zero(), 2.0);

    const auto lin = NonlinearitySpec::linear(-1.5);
    EXPECT_TRUE(std::isinf(lin.sup()));
}

TEST(Nonlinearity, SignInvariantOnSamples) {
    for (const auto& f : {NonlinearitySpec::tanh(1.3), NonlinearitySpec::hill(-0.7, 2.0, 3.0), NonlinearitySpec::piecewise(-2.0, -1.0, 1.0)}) {
        EXPECT_NO_THROW(f.validate());
        const double s = f.feedback_sign() == FeedbackSign::positive ? 1.0 : -1.0;
        for (double x = -20; x <= 20; x += 0.37)
            if (x != 0.0) EXPECT_GT(s * x * f(x), 0.0);
    }
}

TEST(Nonlinearity, ZeroSlopeRejected) { EXPECT_THROW(NonlinearitySpec::linear(0.0).validate(), PreconditionError); }

TEST(Nonlinearity, DeclaredBoundChecked) {
    auto f = NonlinearitySpec::linear(-1.0);
    f.one_sided_bound = 2.0;  // -x exceeds 2 for x < -2
    EXPECT_THROW(f.validate(), PreconditionError);
    auto g = NonlinearitySpec::tanh(-1.0);
    g.one_sided_bound = 1.5;
    EXPECT_NO_THROW(g.validate());
    EXPECT_DOUBLE_EQ(g.sup(), 1.0);
}

TEST(Nonlinearity, FlippedComposesSigns) {
    const auto f = NonlinearitySpec::tanh(-1.0);
    const auto g = f.flipped(-1.0, 1.0);  // x -> f(-x)
    EXPECT_NEAR(g(0.7), f(-0.7), 1e-15);
    EXPECT_EQ(g.feedback_sign(), FeedbackSign::positive);
    const auto h = f.flipped(1.0, -1.0);  // x -> -f(x)
    EXPECT_NEAR(h(0.7), -f(0.7), 1e-15);
    EXPECT_NEAR(h.sup(), -f.inf(), 1e-15);
}

TEST(Nonlinearity, ParseAliases) {
    EXPECT_EQ(parse_nonlinearity_kind("tanh"), NonlinearityKind::tanh_saturating);
    EXPECT_EQ(parse_nonlinearity_kind("hill_odd"), NonlinearityKind::hill_odd);
    EXPECT_EQ(parse_nonlinearity_kind("pwl"), NonlinearityKind::piecewise_linear);
    EXPECT_THROW(parse_nonlinearity_kind("sigmoid"), PreconditionError);
}
