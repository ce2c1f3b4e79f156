#include <gtest/gtest.h>

#include <cmath>

#include "supou/oracle_d.hpp"
#include "supou/presets.hpp"

using namespace supou;

TEST(AnalyticD, UnitCase) {
    const auto s = analytic_stationary(1.0, 0.0, 1.0, 1.0);
    EXPECT_NEAR(s.I, std::sqrt(2.0) - 1.0, 1e-15);
    EXPECT_NEAR(s.gamma_avg, -1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(s.X_inf, 0.5, 1e-15);
    EXPECT_NEAR(s.H, 0.25, 1e-15);
}

TEST(AnalyticD, RootAndLimits) {
    for (double w : {1e-6, 0.3, 1.0, 50.0, 1e6}) {
        const double R = 24.8, I = analytic_I(w, R);
        EXPECT_NEAR((I * I + 2.0 * w * I) / (w * R * R), 1.0, 1e-12);
    }
    // cheap control drives X to the target, expensive control leaves it at the floor
    EXPECT_NEAR(analytic_stationary(24.8, 1.28, 1e-10, 20.0).X_inf, 20.0, 1e-3);
    EXPECT_NEAR(analytic_stationary(24.8, 1.28, 1e10, 20.0).X_inf, 1.28, 1e-3);
    double prev = HUGE_VAL;
    for (double w : {0.01, 0.1, 1.0, 10.0, 100.0}) {
        const double X = analytic_stationary(24.8, 1.28, w, 20.0).X_inf;
        EXPECT_LT(X, prev);
        prev = X;
    }
    EXPECT_THROW(analytic_I(0.0, 1.0), domain_error);
    EXPECT_THROW(analytic_stationary(1.0, 2.0, 1.0, 1.0), domain_error);
}

namespace {
SupOUModel quiet(SupOUModel m) {
    m.jump.a_nu = 0.0;
    return m;
}
}  // namespace

// one component of rate 1 holds the whole mixing mass, so the lift is exact
TEST(OracleD, PointMassIsExact) {
    const SupOUModel m = quiet({0.0, {}, {0.5, 3.0}, ""});  // R = 1
    OracleOptions o;
    o.period = 10.0;
    o.dt = 0.01;
    const auto r = oracle_check(m, point_mass_lift(1.0), 1.0, 1.0, o);
    EXPECT_LT(r.max_rel_dev, 1e-12);
    EXPECT_TRUE(r.pass);
}

TEST(OracleD, StationYMixingConverges) {
    const auto m = quiet(presets::station_y());
    const double x_hat = m.x_floor + 1.0;
    const auto a = oracle_check(m, build_lift(m.mixing, 20, 0.5, 0.02), 1.0, x_hat);
    const auto b = oracle_check(m, build_lift(m.mixing, 40, 0.5, 0.02), 1.0, x_hat);
    EXPECT_LT(b.max_rel_dev, a.max_rel_dev);
    EXPECT_LT(a.identity_dev, 1e-10);
    EXPECT_LT(b.identity_dev, 1e-10);
    EXPECT_THROW(oracle_check(presets::station_y(), build_lift(m.mixing, 5, 0.5, 0.02), 1.0, x_hat), domain_error);
}
