#include <gtest/gtest.h>

#include <cmath>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "supou/presets.hpp"
#include "supou/simulate.hpp"

using namespace supou;

namespace {
// sample mean of `count` increments and its standard error
std::pair<double, double> increment_mean(const TemperedStableParams& p, double dt, int count, std::uint64_t seed) {
    Rng rng = make_stream(seed, 0);
    TemperedStableSampler s(p, dt);
    double m = 0.0, q = 0.0;
    for (int k = 0; k < count; ++k) {
        const double v = s(rng);
        m += v;
        q += v * v;
    }
    m /= count;
    return {m, std::sqrt((q / count - m * m) / count)};
}
}  // namespace

TEST(TemperedStable, MeanRateByQuadrature) {
    boost::math::quadrature::exp_sinh<double> es;
    for (double al : {0.6, 0.0, -0.5}) {
        const TemperedStableParams p{0.8, al, 1.7};
        const double q = es.integrate([&](double y) { return p.a * std::pow(y, -al) * std::exp(-p.b * y); }, 0.0,
                                      std::numeric_limits<double>::infinity());
        EXPECT_NEAR(p.mean_rate() / q, 1.0, 1e-9) << al;
    }
}

TEST(TemperedStable, IncrementMeanAllBranches) {
    for (double al : {0.8, 0.4, 0.0, -0.5}) {
        const TemperedStableParams p{0.8, al, 1.7};
        const double dt = 0.05;
        const auto [m, se] = increment_mean(p, dt, 200000, 11);
        EXPECT_NEAR(m, dt * p.mean_rate(), 4.0 * se) << "alpha " << al;
        EXPECT_GT(se, 0.0);
    }
}

TEST(TemperedStable, Invalid) {
    EXPECT_THROW(TemperedStableSampler({1.0, 1.0, 1.0}, 0.1), domain_error);
    EXPECT_THROW(TemperedStableSampler({1.0, 0.5, 1.0}, 0.0), domain_error);
    Rng rng = make_stream(1, 0);
    EXPECT_EQ(sample_tempered_stable_increment({0.0, 0.5, 1.0}, 0.1, rng), 0.0);
}

TEST(RateClasses, ReproduceReciprocalMoment) {
    const MixingParams m{0.0344, 2.1655};
    const auto rc = rate_classes(m, 64);
    double mass = 0.0, rec = 0.0;
    for (std::size_t k = 0; k < rc.prob.size(); ++k) {
        mass += rc.prob[k];
        rec += rc.prob[k] / rc.rate[k];
    }
    EXPECT_NEAR(mass, 1.0, 1e-12);
    EXPECT_NEAR(rec / reciprocal_moment(m), 1.0, 1e-12);
}

TEST(AliasTable, Frequencies) {
    const std::vector<double> w{0.1, 0.2, 0.3, 0.4};
    detail::AliasTable t(w);
    Rng rng = make_stream(3, 0);
    std::vector<int> hits(4, 0);
    const int N = 400000;
    for (int k = 0; k < N; ++k) ++hits[t(rng)];
    for (int k = 0; k < 4; ++k) {
        const double se = std::sqrt(w[k] * (1.0 - w[k]) / N);
        EXPECT_NEAR(double(hits[k]) / N, w[k], 4.0 * se);
    }
}

TEST(Uncontrolled, DeterministicForSeed) {
    SimConfig c;
    c.dt = 0.01;
    c.horizon = 2000.0;
    c.seed = 42;
    c.threads = 1;
    const auto a = simulate_uncontrolled(presets::station_y(), c);
    const auto b = simulate_uncontrolled(presets::station_y(), c);
    EXPECT_EQ(a.stats.ave, b.stats.ave);
    EXPECT_EQ(a.stats.kurt, b.stats.kurt);
    c.seed = 43;
    EXPECT_NE(simulate_uncontrolled(presets::station_y(), c).stats.ave, a.stats.ave);
    EXPECT_EQ(a.observations, 2000u);
    EXPECT_GE(a.min_value, presets::station_y().x_floor);
}

TEST(Uncontrolled, ZeroJumpsDecayToFloor) {
    auto m = presets::station_y();
    m.jump.a_nu = 0.0;
    for (auto mode : {RateMode::rate_classes, RateMode::shared_rate}) {
        SimConfig c;
        c.dt = 0.1;
        c.horizon = 500.0;
        c.burn_in = 0.0;
        c.x0 = 10.0;
        c.rate_mode = mode;
        c.keep_series = true;
        const auto s = simulate_uncontrolled(m, c);
        ASSERT_EQ(s.series.size(), 500u);
        for (std::size_t k = 1; k < s.series.size(); ++k) EXPECT_LE(s.series[k], s.series[k - 1]);
        EXPECT_GE(s.min_value, m.x_floor);
        EXPECT_LT(s.series.back(), 10.0);
    }
}

TEST(Uncontrolled, BadSteps) {
    SimConfig c;
    c.dt = 0.3;
    EXPECT_THROW(simulate_uncontrolled(presets::station_y(), c), domain_error);
    c.dt = 0.01;
    c.horizon = -1.0;
    EXPECT_THROW(simulate_uncontrolled(presets::station_y(), c), domain_error);
}

TEST(JumpSampler, CutoffKeepsMean) {
    // small-jump drift plus the rate times the mean accepted jump must give M1
    const auto j = presets::station_y().jump;
    const JumpSampler js(j, 1e-6);
    Rng rng = make_stream(5, 0);
    const int N = 400000;
    double s = 0.0, q = 0.0;
    for (int k = 0; k < N; ++k) {
        const double z = js.propose(rng);
        s += z;
        q += z * z;
    }
    const double mean = s / N, se = std::sqrt((q / N - mean * mean) / N);
    EXPECT_NEAR(js.small_drift + js.rate * mean, levy_moment(j, 1), 4.0 * js.rate * se);
}

// deterministic point-mass problem: the closed loop settles at x = u = 1/2
TEST(Controlled, PointMassCosts) {
    ControlProblem p;
    p.period = 10.0;
    p.target = PeriodicSignal::constant(1.0);
    p.model = SupOUModel{0.0, {0.0, 1.0, 1.0, 0.0}, {1.0, 2.0}, ""};
    const auto L = point_mass_lift(1.0);
    RiccatiOptions o;
    o.dt = 0.01;
    o.tol = 1e-13;
    o.snapshot_every_h = 0.01;
    const auto sol = solve_periodic_riccati(p, L, o);
    SimConfig c;
    c.scheme = SimScheme::controlled_lift;
    c.dt = 0.0;
    c.horizon = 100.0;
    c.burn_in = 50.0;
    const auto s = simulate_controlled(p.model, L, sol, p, c);
    EXPECT_NEAR(s.control, 0.125, 1e-9);
    EXPECT_NEAR(s.deviation, 0.125, 1e-9);
    EXPECT_NEAR(s.total, sol.H, 1e-9);
    EXPECT_EQ(s.batches, 10u);
}
