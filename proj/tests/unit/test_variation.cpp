#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "orlicz/orlicz.hpp"

using namespace orlicz;

namespace {

const WeightFunction one1 = WeightFunction::constant(1);
const Grid fine1(1, 8.0, 4097);

LogConcaveFunction exp1() { return LogConcaveFunction(Prototype::exponential_cone(1)); }
LogConcaveFunction gauss1() { return LogConcaveFunction(Prototype::gaussian(1)); }
LogConcaveFunction ind(double lo, double hi) { return LogConcaveFunction(Prototype::indicator(ConvexBody::interval(lo, hi))); }

} // namespace

TEST(Regularity, Examples) {
    EXPECT_TRUE(check_origin_regularity(gauss1(), 0.5).pass);
    EXPECT_FALSE(check_origin_regularity(exp1(), 0.5).pass);
    EXPECT_TRUE(check_origin_regularity(LogConcaveFunction(Prototype::radial_power(1, 1.0, 1.9)), 0.8).pass);
    EXPECT_THROW(check_origin_regularity(gauss1(), 1.5), Error);
}

TEST(Regularity, ShellsDoubling) {
    const auto r = check_origin_regularity(gauss1(), 0.5, 0.01);
    ASSERT_EQ(r.shells.size(), 4u);
    EXPECT_DOUBLE_EQ(r.shells[3], 0.08);
}

TEST(Numeric, ExpConeAndInterval) {
    const auto r = variation_numeric(exp1(), ind(-1, 1), one1, default_ladder(), fine1);
    EXPECT_NEAR(r.numeric_derivative, 2.0, 1e-3);
    ASSERT_EQ(r.ladder.size(), 4u);
    // V(t) = 2 + 2t exactly, so every quotient is 2
    for (const auto& p : r.ladder) EXPECT_NEAR(p.quotient, 2.0, 1e-3);
    EXPECT_EQ(r.richardson.size(), 3u);
}

TEST(Numeric, GaussianAndInterval) {
    const auto r = variation_numeric(gauss1(), ind(-1, 1), one1, default_ladder(), fine1);
    EXPECT_NEAR(r.base_value, std::sqrt(2 * std::numbers::pi), 1e-4);
    EXPECT_NEAR(r.numeric_derivative, 2.0, 2e-2);
}

TEST(Numeric, IntervalAndInterval) {
    const auto r = variation_numeric(ind(-1, 1), ind(-1, 1), one1, default_ladder(), fine1);
    EXPECT_NEAR(r.numeric_derivative, 2.0, 1e-6);
}

TEST(Numeric, RequiresCompactPerturbation) {
    EXPECT_THROW(variation_numeric(gauss1(), exp1(), one1, default_ladder(), fine1), Error);
    EXPECT_THROW(variation_closed_form(gauss1(), exp1(), one1), Error);
}

TEST(ClosedForm, Examples) {
    EXPECT_NEAR(variation_closed_form(exp1(), ind(-1, 1), one1), 2.0, 1e-6);
    const auto scaled = LogConcaveFunction(Prototype::scaled_indicator(std::exp(1.0), ConvexBody::interval(-1, 1)));
    EXPECT_NEAR(variation_closed_form(ind(-1, 1), scaled, one1), 4.0, 1e-9);
    const auto point = LogConcaveFunction(Prototype::indicator(ConvexBody::singleton(1)));
    EXPECT_NEAR(variation_closed_form(gauss1(), point, one1), 0.0, 1e-12);
}

TEST(ClosedForm, ScaledIndicatorAgreesWithNumeric) {
    const auto scaled = LogConcaveFunction(Prototype::scaled_indicator(std::exp(1.0), ConvexBody::interval(-1, 1)));
    const auto r = variation_check(ind(-1, 1), scaled, one1, default_ladder(), fine1);
    EXPECT_NEAR(r.closed_form, 4.0, 1e-9);
    EXPECT_LE(r.relative_gap, 0.02);
}

TEST(ClosedForm, LogScalingTerm) {
    const auto w = WeightFunction::gaussian_density(1);
    const auto l = ConvexBody::interval(-0.5, 1);
    const double c = 2.5;
    const double plain = variation_closed_form(gauss1(), LogConcaveFunction(Prototype::indicator(l)), w);
    const double scaled = variation_closed_form(gauss1(), LogConcaveFunction(Prototype::scaled_indicator(c, l)), w);
    EXPECT_NEAR(scaled - plain, std::log(c) * moment(gauss1(), w).value, 1e-9);
}

TEST(ClosedForm, AdditiveInPerturbationBody) {
    const auto w = WeightFunction::power(2, 1.5);
    const LogConcaveFunction f(Prototype::gaussian(2));
    const auto l1 = ConvexBody::box(1, 0.5);
    const auto l2 = ConvexBody::regular_polygon(0.7, 3, 0.1);
    const double a = variation_closed_form(f, LogConcaveFunction(Prototype::indicator(l1)), w);
    const double b = variation_closed_form(f, LogConcaveFunction(Prototype::indicator(l2)), w);
    const double ab = variation_closed_form(f, LogConcaveFunction(Prototype::indicator(minkowski_sum(l1, 1, l2))), w);
    EXPECT_NEAR(ab, a + b, 1e-9 * std::abs(ab));
}

TEST(Numeric, AdditiveInPerturbationBody) {
    const auto a = variation_numeric(gauss1(), ind(-1, 1), one1, default_ladder(), fine1).numeric_derivative;
    const auto b = variation_numeric(gauss1(), ind(-0.5, 2), one1, default_ladder(), fine1).numeric_derivative;
    const auto ab = variation_numeric(gauss1(), ind(-1.5, 3), one1, default_ladder(), fine1).numeric_derivative;
    EXPECT_NEAR(ab, a + b, 0.04);
}

TEST(Check, IndicatorPairMatchesMixedVolume) {
    const auto r = variation_check(ind(-1, 1), ind(-2, 2), one1, default_ladder(), fine1);
    const double v1 = mixed_volume_V1(ConvexBody::interval(-1, 1), ConvexBody::interval(-2, 2), one1);
    EXPECT_NEAR(v1, 4.0, 1e-12);
    EXPECT_NEAR(r.closed_form, v1, 1e-9);
    EXPECT_NEAR(r.numeric_derivative, v1, 1e-6);
}

TEST(Check, IrregularPairFlagged) {
    const auto r = variation_check(exp1(), ind(-1, 1), one1, default_ladder(), fine1);
    EXPECT_FALSE(r.regularity_pass);
    EXPECT_FALSE(r.note.empty());
    EXPECT_LE(r.relative_gap, 0.02);
    const auto g = variation_check(gauss1(), ind(-1, 1), one1, default_ladder(), fine1);
    EXPECT_TRUE(g.regularity_pass);
    EXPECT_TRUE(g.note.empty());
}

TEST(Check, WeightedPowerPair) {
    const auto w = WeightFunction::power(1, 2);
    const auto r = variation_check(gauss1(), ind(-1, 2), w, default_ladder(), fine1);
    EXPECT_LE(r.relative_gap, 0.02);
}

TEST(Pointwise, GaussianAndInterval) {
    const auto r = pointwise_variation_check(gauss1(), ind(-1, 1), Grid(1, 8.0, 1025));
    EXPECT_GT(r.checked, 50);
    EXPECT_LE(r.max_relative_error, 0.05);
}

TEST(Pointwise, Deterministic) {
    const auto a = pointwise_variation_check(gauss1(), ind(-1, 2), Grid(1, 8.0, 1025));
    const auto b = pointwise_variation_check(gauss1(), ind(-1, 2), Grid(1, 8.0, 1025));
    EXPECT_EQ(a.checked, b.checked);
    EXPECT_EQ(a.max_relative_error, b.max_relative_error);
}

TEST(Geometric, SquareWithConstantPerturbation) {
    const auto r = geometric_variation(ConvexBody::box(1, 1), [](const Vec&) { return 1.0; }, WeightFunction::constant(2));
    EXPECT_NEAR(r.closed_form, 8.0, 1e-9);
    EXPECT_NEAR(r.numeric_derivative, 8.0, 0.08);
}

TEST(Geometric, DilationFamily) {
    const auto sq = ConvexBody::box(1, 1);
    const auto r = geometric_variation(sq, [&](const Vec& v) { return sq.support(v); }, WeightFunction::constant(2));
    EXPECT_NEAR(r.closed_form, 8.0, 1e-9);
    EXPECT_NEAR(r.numeric_derivative, 8.0, 0.08);
}

TEST(Geometric, OneSidedGrowth) {
    const auto r = geometric_variation(ConvexBody::interval(-1, 1), [](const Vec& v) { return v[0] > 0 ? 2.0 : 0.0; },
                                       one1);
    EXPECT_NEAR(r.closed_form, 2.0, 1e-12);
    EXPECT_NEAR(r.numeric_derivative, 2.0, 1e-9);
}

TEST(Geometric, DegenerateWulffRejected) {
    EXPECT_THROW(geometric_variation(ConvexBody::interval(-1, 1), [](const Vec&) { return -20.0; }, one1), Error);
}
