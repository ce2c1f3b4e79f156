#include <gtest/gtest.h>

#include <cmath>

#include "supou/identify.hpp"
#include "supou/nelder_mead.hpp"
#include "supou/presets.hpp"

using namespace supou;

TEST(NelderMead, Rosenbrock) {
    auto f = [](const std::vector<double>& x) {
        return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
    };
    const auto r = nelder_mead(f, {-1.2, 1.0}, {0.5, 1e-12, 100000, 3});
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.x[0], 1.0, 1e-6);
    EXPECT_NEAR(r.x[1], 1.0, 1e-6);
}

TEST(FitAcf, RecoversExactCurve) {
    const MixingParams truth{0.0344, 2.1655};
    std::vector<double> emp(721);
    for (int k = 0; k <= 720; ++k) emp[k] = acf(truth, k);
    const auto fit = fit_acf(emp);
    EXPECT_NEAR(fit.mixing.B_pi / truth.B_pi, 1.0, 1e-5);
    EXPECT_NEAR(fit.mixing.alpha_pi / truth.alpha_pi, 1.0, 1e-5);
    EXPECT_LT(fit.sse, 1e-16);
    EXPECT_FALSE(fit.tail_warning);
}

TEST(FitAcf, FlatAcfIsNotAFit) {
    std::vector<double> emp(100, 1.0);
    EXPECT_THROW(fit_acf(emp), convergence_error);
    EXPECT_THROW(fit_acf(std::vector<double>{0.5, 0.4}), domain_error);
}

TEST(FitLevy, ExactStatisticsAreReached) {
    const auto m = presets::station_y();
    const auto target = stationary_stats(m);
    const auto rep = fit_levy(target, m.mixing, m.x_floor, 2.0);
    EXPECT_LT(rep.moment_objective, 1e-8);
    const auto back = stationary_stats(rep.model);
    EXPECT_NEAR(back.ave / target.ave, 1.0, 1e-4);
    EXPECT_NEAR(back.kurt / target.kurt, 1.0, 1e-4);
}

TEST(FitLevy, TwoIsAtLeastAsGoodAsOne) {
    for (const auto& [m, data] : {std::pair{presets::station_y(), presets::data_stats_y()},
                                  std::pair{presets::station_d(), presets::data_stats_d()}}) {
        const double f2 = fit_levy(data, m.mixing, m.x_floor, 2.0).moment_objective;
        const double f1 = fit_levy(data, m.mixing, m.x_floor, 1.0).moment_objective;
        EXPECT_LE(f2, f1 * (1.0 + 1e-9)) << m.name;
    }
}

TEST(FitLevy, RejectsZeroStatistic) {
    StationaryStats bad{0.0, 1.0, 1.0, 1.0, false};
    EXPECT_THROW(fit_levy(bad, {0.0344, 2.17}, 0.0, 2.0), domain_error);
}

TEST(MomentObjective, ZeroAtData) {
    const auto d = presets::data_stats_u();
    EXPECT_DOUBLE_EQ(moment_objective(d, d), 0.0);
}
