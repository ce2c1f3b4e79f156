#include <gtest/gtest.h>

#include <cmath>

#include "supou/io.hpp"

using namespace supou;
using supou::io::json;

TEST(Io, UnitConversionOnRead) {
    const json j = json::parse(R"({"p": {"value": 365.25, "unit": "day"}, "r": {"value": 24, "unit": "1/day"},
                                   "q": {"value": 3, "unit": "m^3/s"}})");
    EXPECT_DOUBLE_EQ(io::read(j, "p", io::Dim::duration, ""), 8766.0);
    EXPECT_DOUBLE_EQ(io::read(j, "r", io::Dim::rate, ""), 1.0);
    EXPECT_DOUBLE_EQ(io::read(j, "q", io::Dim::discharge, ""), 3.0);
    EXPECT_DOUBLE_EQ(io::read(j, "missing", io::Dim::rate, "", 2.0), 2.0);
}

TEST(Io, MissingUnitNamesTheField) {
    const json j = json::parse(R"({"lift": {"eta_bar": 0.02}})");
    try {
        io::parse_config(j);
        FAIL() << "expected config_error";
    } catch (const config_error& e) {
        EXPECT_NE(std::string(e.what()).find("lift.eta_bar"), std::string::npos) << e.what();
    }
    EXPECT_THROW(io::read(json::parse(R"({"p": {"value": 1, "unit": "week"}})"), "p", io::Dim::duration, ""),
                 config_error);
}

TEST(Io, PresetWithOverride) {
    const json j = json::parse(R"({"model": {"preset": "D", "alpha_pi": 3.5,
                                             "B_pi": {"value": 0.48, "unit": "1/day"}}})");
    const auto c = io::parse_config(j);
    EXPECT_EQ(c.model.jump.a_nu, presets::station_d().jump.a_nu);
    EXPECT_DOUBLE_EQ(c.model.mixing.alpha_pi, 3.5);
    EXPECT_DOUBLE_EQ(c.model.mixing.B_pi, 0.02);
}

TEST(Io, NormalizedUsesInternalUnits) {
    const json j = json::parse(R"({"model": {"preset": "Y"}, "problem": {"period": {"value": 1, "unit": "year"}}})");
    const json out = io::normalized(io::parse_config(j));
    const std::string s = out.dump();
    EXPECT_NE(s.find(R"("unit":"h")"), std::string::npos);
    EXPECT_EQ(s.find(R"("unit":"year")"), std::string::npos);
    // round trip
    const auto back = io::parse_config(out);
    EXPECT_DOUBLE_EQ(back.problem.period, 8766.0);
    EXPECT_DOUBLE_EQ(back.model.jump.alpha_nu, presets::station_y().jump.alpha_nu);
}

TEST(Io, FileErrors) {
    EXPECT_THROW(io::load_json("/nonexistent/config.json"), io_error);
    EXPECT_THROW(io::parse_config(json::array()), config_error);
    EXPECT_THROW(io::parse_config(json::parse(R"({"lift": {"beta": 1.5}})")), config_error);
}
