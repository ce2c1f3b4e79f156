#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "supou/data.hpp"

using namespace supou;

namespace {
DischargeSeries parse(const std::string& text, SeriesFormat fmt = {}) {
    std::istringstream in(text);
    return load_series(in, fmt);
}
}  // namespace

TEST(LoadSeries, ValidRows) {
    const auto s = parse("time,discharge\n0,1.5\n1,2.0\n2,0.0\n");
    ASSERT_EQ(s.values.size(), 3u);
    EXPECT_DOUBLE_EQ(s.values[1], 2.0);
    EXPECT_DOUBLE_EQ(s.step, 1.0);
}

TEST(LoadSeries, IsoStamps) {
    const auto s = parse("time,discharge\n2020-01-01T00:00:00,1\n2020-01-01T01:00:00,2\n");
    EXPECT_EQ(s.values.size(), 2u);
}

TEST(LoadSeries, Rejections) {
    EXPECT_THROW(parse("t,q\n0,1\n1,2\n"), io_error);
    EXPECT_THROW(parse("time,discharge\n0,1\n1,-2\n"), io_error);
    EXPECT_THROW(parse("time,discharge\n0,1\n0,2\n"), io_error);
    EXPECT_THROW(parse("time,discharge\n0,1\n1,abc\n"), io_error);
    EXPECT_THROW(parse("time,discharge\n0,1\n3,2\n"), io_error);
    EXPECT_THROW(parse(""), io_error);
    EXPECT_THROW(load_series(std::string("/nonexistent/series.csv")), io_error);
}

TEST(LoadSeries, GapInterpolation) {
    SeriesFormat f;
    f.interpolate_gaps = true;
    const auto s = parse("time,discharge\n0,1\n3,4\n", f);
    ASSERT_EQ(s.values.size(), 4u);
    EXPECT_DOUBLE_EQ(s.values[1], 2.0);
    EXPECT_DOUBLE_EQ(s.values[2], 3.0);
}

TEST(Moments, SmallSample) {
    const auto e = empirical_moments(std::vector<double>{1.0, 2.0, 3.0, 2.0});
    EXPECT_DOUBLE_EQ(e.ave, 2.0);
    EXPECT_DOUBLE_EQ(e.std_dev, std::sqrt(0.5));
    EXPECT_NEAR(e.skew, 0.0, 1e-15);
    // m4 = 0.5, m2^2 = 0.25
    EXPECT_NEAR(e.kurt, -1.0, 1e-14);
}

TEST(Moments, Degenerate) {
    EXPECT_THROW(empirical_moments(std::vector<double>(10, 3.0)), domain_error);
    EXPECT_THROW(empirical_moments(std::vector<double>{1.0, 2.0}), domain_error);
}

TEST(Acf, LagZeroIsOne) {
    std::vector<double> x;
    for (int k = 0; k < 200; ++k) x.push_back(std::sin(0.1 * k) + 0.01 * k);
    const auto r = empirical_acf(x, 20);
    ASSERT_EQ(r.size(), 21u);
    EXPECT_DOUBLE_EQ(r[0], 1.0);
    for (double v : r) EXPECT_LE(std::fabs(v), 1.0 + 1e-12);
}

TEST(Pdf, IntegratesToOne) {
    std::vector<double> x;
    for (int k = 1; k <= 1000; ++k) x.push_back(std::exp(0.01 * k));
    for (bool log_bins : {false, true}) {
        BinConfig c;
        c.bins = 30;
        c.log_bins = log_bins;
        const auto h = empirical_pdf(x, c);
        double s = 0.0;
        for (int k = 0; k < c.bins; ++k) s += h.density[k] * (h.edges[k + 1] - h.edges[k]);
        EXPECT_NEAR(s, 1.0, 1e-12);
    }
}
