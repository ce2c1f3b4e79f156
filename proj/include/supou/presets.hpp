#pragma once

#include <string>

#include "supou/error.hpp"
#include "supou/model.hpp"

// Identified parameter sets for the three gauging stations (hour units).
//
// Station Y: the published table lists a/p and alpha/p for the jump measure; the
// values below are the full a and alpha. alpha_nu and alpha_pi carry digits below
// the printed precision, reconstructed so that the manufactured Hamiltonian is
// 46.2495 and the beta = 0.5 convergence table is reproduced.
//
// The p = 1 sets for Stations D and U have a and b exchanged relative to the
// printed table; only the exchanged order reproduces the published statistics.
namespace supou::presets {

inline SupOUModel station_y() {
    return {1.28, {2.54e-2, 2.33e-6, 2.0, 0.81696}, {0.0344, 2.1655}, "Y"};
}
inline SupOUModel station_d() {
    return {1.00, {5.18e-3, 7.73e-6, 2.0, 0.525}, {0.0201, 2.97}, "D"};
}
inline SupOUModel station_u() {
    return {0.00, {1.34e-2, 4.59e-6, 2.0, 0.705}, {0.0315, 2.53}, "U"};
}

inline SupOUModel station_y_tempered() {
    return {1.28, {2.43e-2, 3.43e-3, 1.0, 0.668}, {0.0344, 2.1655}, "Y-tempered"};
}
inline SupOUModel station_d_tempered() {
    return {1.00, {1.85e-3, 7.49e-3, 1.0, 0.102}, {0.0201, 2.97}, "D-tempered"};
}
inline SupOUModel station_u_tempered() {
    return {0.00, {9.155e-3, 5.176e-3, 1.0, 0.4601}, {0.0315, 2.53}, "U-tempered"};
}

// Empirical statistics of the hourly records (population moments, excess kurtosis).
inline StationaryStats data_stats_y() { return {12.1, 22.6 * 22.6, 12.8, 243.0, false}; }
inline StationaryStats data_stats_d() { return {5.13, 15.4 * 15.4, 11.9, 195.0, false}; }
inline StationaryStats data_stats_u() { return {5.40, 16.6 * 16.6, 12.7, 254.0, false}; }

inline SupOUModel by_name(const std::string& name) {
    if (name == "Y") return station_y();
    if (name == "D") return station_d();
    if (name == "U") return station_u();
    if (name == "Y-tempered") return station_y_tempered();
    if (name == "D-tempered") return station_d_tempered();
    if (name == "U-tempered") return station_u_tempered();
    throw config_error("unknown station preset '" + name + "'");
}

}  // namespace supou::presets
