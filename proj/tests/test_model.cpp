#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "supou/model.hpp"
#include "supou/presets.hpp"
#include "supou/units.hpp"

using namespace supou;

namespace {
// int_0^inf z^k nu(dz) by quadrature in t = ln z
double moment_by_quadrature(const JumpMeasureParams& j, int k) {
    boost::math::quadrature::exp_sinh<double> es;
    auto f = [&](double z) { return j.a_nu * std::pow(z, k - 1 - j.alpha_nu) * std::exp(-j.b_nu * std::pow(z, j.p_nu)); };
    return es.integrate(f, 0.0, std::numeric_limits<double>::infinity());
}
}  // namespace

TEST(LevyMoment, UnitCases) {
    JumpMeasureParams j{1.0, 1.0, 1.0, 0.0};
    EXPECT_NEAR(levy_moment(j, 1), 1.0, 1e-14);
    EXPECT_NEAR(levy_moment(j, 2), 1.0, 1e-14);
    // (k - alpha)/p = 1 with a/p = 1
    JumpMeasureParams j2{2.0, 1.0, 2.0, -1.0};
    EXPECT_NEAR(levy_moment(j2, 1), 1.0, 1e-14);
}

TEST(LevyMoment, MatchesQuadrature) {
    for (const auto& m : {presets::station_d_tempered(), presets::station_u_tempered()}) {
        for (int k = 1; k <= 3; ++k) {
            const double exact = levy_moment(m.jump, k);
            EXPECT_NEAR(moment_by_quadrature(m.jump, k) / exact, 1.0, 1e-7) << m.name << " k=" << k;
        }
    }
}

TEST(LevyMoment, RejectsBadInput) {
    EXPECT_THROW(levy_moment({1.0, 1.0, 1.0, 0.0}, 0), domain_error);
    EXPECT_THROW(levy_moment({1.0, -1.0, 1.0, 0.0}, 1), domain_error);
    EXPECT_THROW(levy_moment({1.0, 1.0, 1.0, 1.0}, 1), domain_error);
}

TEST(Mixing, ReciprocalMoment) {
    EXPECT_NEAR(reciprocal_moment({0.0344, 2.17}), 24.84, 0.01);
    EXPECT_THROW(reciprocal_moment({0.0344, 1.0}), domain_error);
}

TEST(Mixing, Acf) {
    EXPECT_NEAR(acf({1.0, 2.17}, 1.0), std::pow(2.0, -1.17), 1e-15);
    EXPECT_DOUBLE_EQ(acf({0.0344, 2.17}, 0.0), 1.0);
    EXPECT_THROW(acf({1.0, 2.17}, -1.0), domain_error);
}

// Model columns of the published statistics table
TEST(StationaryStats, StationTables) {
    struct Row {
        SupOUModel m;
        double ave, std, skew, kurt;
    };
    // printed to three significant figures from parameters that are themselves rounded
    const Row rows[] = {{presets::station_y(), 12.1, 22.7, 12.2, 248.0},
                        {presets::station_d(), 5.11, 15.5, 11.3, 199.0},
                        {presets::station_u(), 5.39, 16.6, 12.6, 255.0}};
    for (const auto& r : rows) {
        const auto s = stationary_stats(r.m);
        EXPECT_NEAR(s.ave / r.ave, 1.0, 5e-3) << r.m.name;
        EXPECT_NEAR(s.std_dev() / r.std, 1.0, 5e-3) << r.m.name;
        EXPECT_NEAR(s.skew / r.skew, 1.0, 5e-3) << r.m.name;
        EXPECT_NEAR(s.kurt / r.kurt, 1.0, 5e-3) << r.m.name;
    }
}

TEST(StationaryStats, ZeroJumpsIsDegenerate) {
    SupOUModel m = presets::station_y();
    m.jump.a_nu = 0.0;
    const auto s = stationary_stats(m);
    EXPECT_TRUE(s.degenerate);
    EXPECT_DOUBLE_EQ(s.ave, m.x_floor);
}

TEST(Units, Conversions) {
    EXPECT_DOUBLE_EQ(365.25 * units::duration_to_hours("day"), 8766.0);
    EXPECT_DOUBLE_EQ(0.0344 * units::rate_to_per_hour("1/h"), 0.0344);
    EXPECT_DOUBLE_EQ(24.0 * units::rate_to_per_hour("1/day"), 1.0);
    EXPECT_THROW(units::duration_to_hours("fortnight"), config_error);
    EXPECT_THROW(units::rate_to_per_hour("h"), config_error);
}

TEST(Presets, UnknownName) { EXPECT_THROW(presets::by_name("Q"), config_error); }
