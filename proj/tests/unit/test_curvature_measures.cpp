#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "orlicz/orlicz.hpp"

using namespace orlicz;

namespace {

const WeightFunction one1 = WeightFunction::constant(1);
const WeightFunction one2 = WeightFunction::constant(2);

LogConcaveFunction exp1() { return LogConcaveFunction(Prototype::exponential_cone(1)); }
LogConcaveFunction gauss1() { return LogConcaveFunction(Prototype::gaussian(1)); }
LogConcaveFunction interval() { return LogConcaveFunction(Prototype::indicator(ConvexBody::interval(-1, 1))); }

// Fine midpoint discretization of the density e^{-y^2/2} on [-10, 10].
DiscreteMeasure gaussian_reference() {
    DiscreteMeasure m(Ambient::Euclidean, 1);
    const int n = 40000;
    const double h = 20.0 / n;
    for (int i = 0; i < n; ++i) {
        const double y = -10 + (i + 0.5) * h;
        m.add(Vec{y, 0}, h * std::exp(-y * y / 2));
    }
    return m;
}

} // namespace

TEST(Euclidean, ExpConeGivesTwoAtoms) {
    const auto c = euclidean_curvature_measure(exp1(), one1);
    EXPECT_NEAR(c.measure.mass_near(Vec{1, 0}, 1e-6), 1.0, 1e-3);
    EXPECT_NEAR(c.measure.mass_near(Vec{-1, 0}, 1e-6), 1.0, 1e-3);
    EXPECT_NEAR(c.measure.total_mass(), 2.0, 1e-3);
}

TEST(Euclidean, ExpConeOnGrid) {
    const Grid g(1, 8.0, 257);
    const auto c = euclidean_curvature_measure(LogConcaveFunction(exp1().to_grid(g)), one1);
    EXPECT_NEAR(c.measure.mass_near(Vec{1, 0}, 1e-9), 1.0, 1e-3);
    EXPECT_NEAR(c.measure.mass_near(Vec{-1, 0}, 1e-9), 1.0, 1e-3);
}

TEST(Euclidean, GaussianPushforwardIsIdentity) {
    const Grid g(1, 8.0, 257);
    const auto c = euclidean_curvature_measure(LogConcaveFunction(gauss1().to_grid(g)), one1);
    const auto cmp = compare_measures(c.measure, gaussian_reference());
    EXPECT_LE(cmp.w1_distance, 2 * g.spacing());
}

TEST(Euclidean, IndicatorGivesAtomAtOrigin) {
    const auto c = euclidean_curvature_measure(interval(), one1);
    ASSERT_EQ(c.measure.size(), 1u);
    EXPECT_NEAR(c.measure.atoms()[0].x[0], 0.0, 1e-12);
    EXPECT_NEAR(c.measure.atoms()[0].mass, 2.0, 1e-12);
}

TEST(Euclidean, MassIdentityAcrossPrototypes) {
    const std::vector<std::pair<LogConcaveFunction, WeightFunction>> cases{
        {exp1(), one1},
        {gauss1(), WeightFunction::gaussian_density(1)},
        {LogConcaveFunction(Prototype::gaussian(2)), WeightFunction::power(2, 1)},
        {LogConcaveFunction(Prototype::exponential_cone(2)), WeightFunction::stretched_exp(2, 0.5)},
        {LogConcaveFunction(Prototype::max_affine(2, {{1, 0}, {-1, 0}, {0, 1}, {0, -1}}, {0, 0, 0, 0})), one2},
    };
    for (const auto& [f, w] : cases) {
        const double m = moment(f, w).value;
        EXPECT_NEAR(euclidean_curvature_measure(f, w).measure.total_mass(), m, 5e-3 * m) << f.description();
    }
}

TEST(Euclidean, EvenInputsGiveEvenMeasure) {
    const Grid g(2, 8.0, 65);
    const LogConcaveFunction f(LogConcaveFunction(Prototype::max_affine(2, {{1, 1}, {-1, -1}, {2, -1}, {-2, 1}},
                                                                        {0, 0, 0.5, 0.5}))
                                   .to_grid(g));
    EXPECT_TRUE(euclidean_curvature_measure(f, WeightFunction::gaussian_density(2)).measure.even(1e-6));
}

TEST(Euclidean, PointwiseScalingIsHomogeneous) {
    const Grid g(1, 8.0, 257);
    const auto phi = gauss1().to_grid(g);
    const double c = 3.0;
    // PL slopes of sampled data sit on the default bin edges (k + 1/2) h, where rounding can flip
    // the cell; a fine incommensurate bin keeps every slope in its own cell
    const double bin = 1e-6 / std::numbers::pi;
    const auto a = euclidean_curvature_measure(LogConcaveFunction(phi), one1, bin).measure;
    const auto b = euclidean_curvature_measure(LogConcaveFunction(phi.shifted(-std::log(c))), one1, bin).measure;
    EXPECT_NEAR(b.total_mass(), c * a.total_mass(), 1e-12 * b.total_mass());
    EXPECT_LE(compare_measures(b, a.scaled(c)).w1_distance, 1e-10);
}

TEST(Spherical, Examples) {
    const auto a = spherical_curvature_measure(interval(), one1).measure;
    EXPECT_NEAR(a.mass_near(Vec{1, 0}, 1e-9), 1.0, 1e-12);
    EXPECT_NEAR(a.mass_near(Vec{-1, 0}, 1e-9), 1.0, 1e-12);
    const auto sq = spherical_curvature_measure(LogConcaveFunction(Prototype::indicator(ConvexBody::box(1, 1))), one2);
    EXPECT_EQ(sq.measure.size(), 4u);
    for (const auto& at : sq.measure.atoms()) EXPECT_NEAR(at.mass, 2.0, 1e-12);
    const auto r = spherical_curvature_measure(
        LogConcaveFunction(Prototype::exponential_cone(1).restricted_to(ConvexBody::interval(-1, 1))), one1);
    EXPECT_NEAR(r.measure.mass_near(Vec{1, 0}, 1e-9), std::exp(-1.0), 1e-12);
    EXPECT_NEAR(r.measure.mass_near(Vec{-1, 0}, 1e-9), std::exp(-1.0), 1e-12);
}

TEST(Spherical, FullSupportGivesEmptyMeasure) {
    const auto s = spherical_curvature_measure(exp1(), one1);
    EXPECT_TRUE(s.measure.empty());
    EXPECT_EQ(s.note, "UnboundedSupport");
}

TEST(Body, SquareMeasure) {
    const auto c = body_curvature_measure(ConvexBody::box(1, 1), one2);
    EXPECT_EQ(c.size(), 4u);
    EXPECT_NEAR(c.total_mass(), 8.0, 1e-12);
    const auto i = body_curvature_measure(ConvexBody::interval(-1, 1), one1);
    EXPECT_NEAR(i.mass_near(Vec{1, 0}, 1e-9), 1.0, 1e-12);
}

TEST(Body, SingularWeightFacetIntegral) {
    const double want = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [](double s) { return 1.0 / std::sqrt(1 + s * s); }, -1.0, 1.0);
    EXPECT_NEAR(want, 2 * std::asinh(1.0), 1e-12);
    const auto c = body_curvature_measure(ConvexBody::box(1, 1), WeightFunction::power(2, 1));
    for (const auto& at : c.atoms()) EXPECT_NEAR(at.mass, want, 1e-9);
}

TEST(Body, ConsistentWithSpherical) {
    const auto k = ConvexBody::regular_polygon(2.0, 5, 0.3);
    const auto w = WeightFunction::gaussian_density(2);
    const auto s = spherical_curvature_measure(LogConcaveFunction(Prototype::indicator(k)), w).measure;
    const auto b = body_curvature_measure(k, w);
    ASSERT_EQ(s.size(), b.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        EXPECT_NEAR(b.atoms()[i].mass, k.support(s.atoms()[i].x) * s.atoms()[i].mass, 1e-12);
}

TEST(Body, OriginRequired) { EXPECT_THROW(body_curvature_measure(ConvexBody::interval(0.2, 1), one1), Error); }

TEST(MixedVolume, Examples) {
    EXPECT_NEAR(mixed_volume_V1(ConvexBody::box(1, 1), ConvexBody::box(1, 1), one2), 8.0, 1e-12);
    EXPECT_NEAR(mixed_volume_V1(ConvexBody::box(1, 1), ConvexBody::singleton(2), one2), 0.0, 1e-12);
    EXPECT_NEAR(mixed_volume_V1(ConvexBody::interval(-1, 1), ConvexBody::interval(-2, 2), one1), 4.0, 1e-12);
}

TEST(TotalVariation, Examples) {
    const auto l = ConvexBody::interval(-1, 1);
    EXPECT_NEAR(weighted_total_variation(exp1(), l, one1), 2.0, 1e-4);
    EXPECT_NEAR(weighted_total_variation(interval(), l, one1), 2.0, 1e-12);
    EXPECT_NEAR(weighted_total_variation(gauss1(), l, one1), 2.0, 1e-4);
}

TEST(Coarea, Prototypes) {
    const auto l = ConvexBody::interval(-1, 1);
    for (const auto& f : {exp1(), gauss1(), interval()}) {
        const auto r = coarea_check(f, l, one1);
        EXPECT_LE(r.relative_gap, 0.02) << f.description();
        EXPECT_NEAR(r.total_variation, 2.0, 1e-3);
    }
    const auto r2 = coarea_check(LogConcaveFunction(Prototype::gaussian(2)), ConvexBody::box(1, 1), one2);
    EXPECT_LE(r2.relative_gap, 0.02);
}

TEST(Compare, ExactOneDimensionalTransport) {
    DiscreteMeasure a(Ambient::Euclidean, 1), b(Ambient::Euclidean, 1);
    a.add(Vec{0, 0}, 1);
    b.add(Vec{0.5, 0}, 1);
    EXPECT_NEAR(compare_measures(a, b).w1_distance, 0.5, 1e-15);
    EXPECT_NEAR(compare_measures(a, a).w1_distance, 0.0, 1e-15);
    b.add(Vec{1, 0}, 0.25);
    EXPECT_NEAR(compare_measures(a, b).mass_gap, 0.25, 1e-15);
}

TEST(Compare, SlicedTwoDimensional) {
    DiscreteMeasure a(Ambient::Euclidean, 2), b(Ambient::Euclidean, 2);
    a.add(Vec{0, 0}, 1);
    b.add(Vec{1, 0}, 1);
    // mean of |cos| over equispaced angles is 2/pi
    EXPECT_NEAR(compare_measures(a, b).w1_distance, 2 / std::numbers::pi, 1e-2);
}

TEST(Measure, BinningAndEvenness) {
    DiscreteMeasure m(Ambient::Euclidean, 1);
    m.add(Vec{1.0, 0}, 0.5);
    m.add(Vec{1.0 + 1e-12, 0}, 0.5);
    m.add(Vec{-1.0, 0}, 1.0);
    const auto b = m.binned(1e-6);
    EXPECT_EQ(b.size(), 2u);
    EXPECT_TRUE(m.even(1e-9));
    m.add(Vec{3, 0}, 1);
    EXPECT_FALSE(m.even(1e-9));
    EXPECT_THROW(DiscreteMeasure(Ambient::Euclidean, 1, {{Vec{0, 0}, -1.0}}), Error);
}
