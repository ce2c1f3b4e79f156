#include <gtest/gtest.h>

#include <cmath>

#include "supou/kbe.hpp"
#include "supou/presets.hpp"

using namespace supou;

namespace {
ControlProblem point_mass_problem() {
    ControlProblem p;
    p.period = 10.0;
    p.target = PeriodicSignal::constant(1.0);
    p.model = SupOUModel{0.0, {0.0, 1.0, 1.0, 0.0}, {1.0, 2.0}, ""};
    return p;
}
RiccatiOptions fine() {
    RiccatiOptions o;
    o.dt = 0.01;
    o.tol = 1e-13;
    o.snapshot_every_h = 0.5;
    return o;
}
}  // namespace

// closed loop rate r = 1 + A = sqrt 2, so S = A^2 / (2 r); C = 1/8 and D = H - w C = 1/8
TEST(KBE, PointMassOracle) {
    const auto p = point_mass_problem();
    const auto L = point_mass_lift(1.0);
    const auto ric = solve_periodic_riccati(p, L, fine());
    KBEOptions ko;
    ko.tol = 1e-13;
    const auto k = solve_periodic_kbe(ric, p, L, ko);
    const double A = std::sqrt(2.0) - 1.0;
    EXPECT_NEAR(k.S_at(0)[0], A * A / (2.0 * std::sqrt(2.0)), 1e-10);
    EXPECT_NEAR(k.N[0], -0.25 / std::sqrt(2.0), 1e-10);
    EXPECT_NEAR(k.C, 0.125, 1e-10);
    EXPECT_NEAR(controlling_cost(k, ric, L, p), 0.125, 1e-10);
    EXPECT_NEAR(ric.H - p.w * k.C, 0.125, 1e-10);
}

TEST(KBE, NullControlHasNoCost) {
    const auto m = presets::station_y();
    const auto L = build_lift(m.mixing, 5, 0.5, 0.02);
    const auto p = application_problem(m, 1.0);
    const auto ric = solve_periodic_riccati(p, L);
    KBEOptions ko;
    ko.null_control = true;
    EXPECT_NEAR(solve_periodic_kbe(ric, p, L, ko).C, 0.0, 1e-14);
}

TEST(KBE, MismatchedLift) {
    const auto p = point_mass_problem();
    const auto ric = solve_periodic_riccati(p, point_mass_lift(1.0), fine());
    EXPECT_THROW(solve_periodic_kbe(ric, p, point_mass_lift(2.0)), domain_error);
}

TEST(Frontier, ConvexAndDecreasing) {
    const auto m = presets::station_d();
    const auto L = build_lift(m.mixing, 5, 0.5, 0.02);
    const auto pts = frontier(application_problem(m, 1.0), L, paper_weights(20));
    ASSERT_EQ(pts.size(), 6u);
    for (std::size_t k = 0; k < pts.size(); ++k) {
        EXPECT_TRUE(pts[k].error.empty()) << pts[k].error;
        EXPECT_GE(pts[k].min_rel_eig, -1e-8);
        if (k > 0) {
            EXPECT_LT(pts[k].D, pts[k - 1].D);
        }
    }
    EXPECT_GE(frontier_convexity(pts), -1e-6);
    // large w buys little control
    EXPECT_GT(pts.front().w, pts.back().w);
}

TEST(Frontier, Weights) {
    const auto w = paper_weights();
    ASSERT_EQ(w.size(), 101u);
    EXPECT_DOUBLE_EQ(w.front(), 0.01);
    EXPECT_NEAR(w.back(), 100.0, 1e-12);
    EXPECT_EQ(paper_weights(5).size(), 21u);
}

TEST(Frontier, Crossing) {
    std::vector<FrontierPoint> pts(3);
    const double C[] = {1.0, 10.0, 100.0};
    for (int k = 0; k < 3; ++k) {
        pts[k].w = std::pow(10.0, -k);
        pts[k].C = C[k];
        pts[k].D = 100.0 / C[k];
    }
    const auto c = guarantee_crossing(pts, 1.0, std::sqrt(1000.0));
    EXPECT_NEAR(c.C, std::sqrt(10.0), 1e-12);
    EXPECT_THROW(guarantee_crossing(pts, 1.0, 1000.0), domain_error);
}
