#include <gtest/gtest.h>

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "supou/charfn.hpp"
#include "supou/lift.hpp"
#include "supou/presets.hpp"

using namespace supou;

TEST(Charfn, ReciprocalMomentQuadrature) {
    const MixingParams m{0.0344, 2.1655};
    EXPECT_NEAR(reciprocal_moment_quadrature(m) / reciprocal_moment(m), 1.0, 1e-8);
}

// p = 1 has the closed Levy exponent psi(s) = a Gamma(-alpha) ((b - i s)^alpha - b^alpha), and
// K(u) = int_0^1 psi(u v) / v dv
TEST(Charfn, KernelMatchesClosedExponent) {
    const auto j = presets::station_y_tempered().jump;
    const double g = boost::math::tgamma(-j.alpha_nu);
    for (double u : {-1.0, 0.3, 2.0, 20.0}) {
        auto psi_over_v = [&](double v, bool imag) {
            const std::complex<double> z(j.b_nu, -u * v);
            const auto r = j.a_nu * g * (std::pow(z, j.alpha_nu) - std::pow(j.b_nu, j.alpha_nu)) / v;
            return imag ? r.imag() : r.real();
        };
        using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
        const double re = GK::integrate([&](double v) { return psi_over_v(v, false); }, 0.0, 1.0, 20, 1e-14);
        const double im = GK::integrate([&](double v) { return psi_over_v(v, true); }, 0.0, 1.0, 20, 1e-14);
        const auto K = jump_kernel(j, u).value;
        EXPECT_NEAR(K.real(), re, 1e-9 * std::abs(K)) << u;
        EXPECT_NEAR(K.imag(), im, 1e-9 * std::abs(K)) << u;
    }
}

// first cumulant: d/du Im log phi at 0 equals R M1
TEST(Charfn, SmallArgumentGivesMean) {
    const auto m = presets::station_d_tempered();
    const double u = 1e-4;
    const auto lp = log_charfn_exact(m, u);
    EXPECT_NEAR(lp.imag() / u / (reciprocal_moment(m.mixing) * levy_moment(m.jump, 1)), 1.0, 1e-3);
    EXPECT_LT(lp.real(), 0.0);
}

// the rate integral factorizes, so the gap is |R - R_n| |K(u)|
TEST(Charfn, GapFactorizes) {
    const auto m = presets::station_y();
    const auto L = build_lift(m.mixing, 20, 0.5, 0.02);
    for (double u : {0.5, 1.0, 2.0}) {
        const double K = std::abs(jump_kernel(m.jump, u).value);
        const double expect = std::fabs(reciprocal_moment_quadrature(m.mixing) - L.reciprocal_sum()) * K;
        EXPECT_NEAR(consistency_gap(m, L, u) / expect, 1.0, 1e-7);
    }
}

TEST(Charfn, GapDecreasesWithN) {
    const auto m = presets::station_y();
    double prev = HUGE_VAL;
    for (int n : {10, 20, 40, 80}) {
        const double g = consistency_gap(m, build_lift(m.mixing, n, 0.5, 0.02), 1.0);
        EXPECT_LT(g, prev);
        prev = g;
    }
}

TEST(Charfn, HeavyMixingTailRejected) {
    auto m = presets::station_y();
    m.mixing.alpha_pi = 1.9;
    EXPECT_THROW(consistency_gap(m, build_lift(m.mixing, 10, 0.5, 0.02), 1.0), domain_error);
}
