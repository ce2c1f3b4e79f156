#include <gtest/gtest.h>

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "supou/lift.hpp"
#include "supou/presets.hpp"

using namespace supou;

TEST(Lift, MatchesAdaptiveQuadrature) {
    const MixingParams m{1.0, 3.0};
    const auto L = build_lift(m, 2, 0.5, 1.0);
    for (int i = 0; i < 2; ++i) {
        const double a = L.mesh[i], b = L.mesh[i + 1];
        double err;
        const double ci = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            [&](double l) { return m.density(l); }, a, b, 15, 1e-14, &err);
        const double first = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            [&](double l) { return l * m.density(l); }, a, b, 15, 1e-14, &err);
        EXPECT_NEAR(L.c[i], ci, 1e-10);
        EXPECT_NEAR(L.lambda[i], first / ci, 1e-10);
    }
}

TEST(Lift, MeshAndMass) {
    const auto m = presets::station_y().mixing;
    for (int n : {1, 10, 80}) {
        const auto L = build_lift(m, n, 0.5, 0.02);
        EXPECT_NEAR(L.weight_sum() + L.tail_weight, 1.0, 1e-13);
        for (int i = 0; i <= n; ++i) EXPECT_NEAR(L.mesh[i], 0.02 * i / std::sqrt(double(n)), 1e-15);
        for (int i = 0; i < n; ++i) {
            EXPECT_GT(L.lambda[i], L.mesh[i]);
            EXPECT_LT(L.lambda[i], L.mesh[i + 1]);
        }
    }
}

TEST(Lift, GbarShrinks) {
    const auto m = presets::station_y().mixing;
    double prev = HUGE_VAL;
    for (int n : {10, 20, 40, 80}) {
        const double g = gbar(build_lift(m, n, 0.5, 0.02), m);
        EXPECT_LT(g, prev);
        prev = g;
    }
}

TEST(Lift, RejectsBadInput) {
    const MixingParams m{0.0344, 2.17};
    EXPECT_THROW(build_lift(m, 0, 0.5, 0.02), domain_error);
    EXPECT_THROW(build_lift(m, 10, 1.0, 0.02), domain_error);
    EXPECT_THROW(build_lift(m, 10, 0.5, 0.0), domain_error);
    EXPECT_THROW(point_mass_lift(0.0), domain_error);
}

TEST(Lift, PointMass) {
    const auto L = point_mass_lift(2.0);
    EXPECT_EQ(L.n, 1);
    EXPECT_DOUBLE_EQ(L.reciprocal_sum(), 0.5);
}
