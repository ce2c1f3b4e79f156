#pragma once

#include <string>

#include "supou/error.hpp"

// Everything inside the library runs in hours. These helpers convert declared
// source units on the way in.
namespace supou::units {

inline constexpr double hours_per_day = 24.0;
inline constexpr double hours_per_year = 8766.0;  // 365.25 days

// Factor that turns a duration expressed in `unit` into hours.
inline double duration_to_hours(const std::string& unit) {
    if (unit == "h" || unit == "hour" || unit == "hours") return 1.0;
    if (unit == "day" || unit == "d" || unit == "days") return hours_per_day;
    if (unit == "year" || unit == "yr" || unit == "years") return hours_per_year;
    if (unit == "s") return 1.0 / 3600.0;
    throw config_error("unknown duration unit '" + unit + "'");
}

// Factor that turns a rate expressed in `unit` into 1/h.
inline double rate_to_per_hour(const std::string& unit) {
    if (unit == "1/h" || unit == "h^-1" || unit == "per_hour") return 1.0;
    if (unit == "1/day" || unit == "day^-1" || unit == "per_day") return 1.0 / hours_per_day;
    if (unit == "1/year" || unit == "per_year") return 1.0 / hours_per_year;
    if (unit == "1/s") return 3600.0;
    throw config_error("unknown rate unit '" + unit + "'");
}

}  // namespace supou::units
