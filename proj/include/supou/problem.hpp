#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "supou/error.hpp"
#include "supou/model.hpp"
#include "supou/units.hpp"

namespace supou {

// Periodic scalar signal: constant, first harmonic c0 + cc cos(2 pi t/P) + cs sin(2 pi t/P),
// or a table of (t, value) knots interpolated linearly and wrapped with period P.
struct PeriodicSignal {
    enum class Kind { constant, harmonic, table };
    Kind kind = Kind::constant;
    double c0 = 0.0, cc = 0.0, cs = 0.0;
    std::vector<std::pair<double, double>> knots;

    static PeriodicSignal constant(double v) { return {Kind::constant, v, 0.0, 0.0, {}}; }
    static PeriodicSignal harmonic(double c0, double cc, double cs) { return {Kind::harmonic, c0, cc, cs, {}}; }
    static PeriodicSignal table(std::vector<std::pair<double, double>> k) {
        if (k.empty()) throw domain_error("PeriodicSignal: empty table");
        std::sort(k.begin(), k.end());
        return {Kind::table, 0.0, 0.0, 0.0, std::move(k)};
    }

    double operator()(double t, double P) const {
        switch (kind) {
            case Kind::constant:
                return c0;
            case Kind::harmonic: {
                const double th = 2.0 * M_PI * t / P;
                return c0 + cc * std::cos(th) + cs * std::sin(th);
            }
            case Kind::table: {
                double s = std::fmod(t, P);
                if (s < 0.0) s += P;
                if (knots.size() == 1) return knots[0].second;
                auto it = std::upper_bound(knots.begin(), knots.end(), std::make_pair(s, -HUGE_VAL));
                const auto& hi = (it == knots.end()) ? knots.front() : *it;
                const auto& lo = (it == knots.begin()) ? knots.back() : *(it - 1);
                double t0 = lo.first, t1 = hi.first;
                if (it == knots.end()) t1 += P;
                if (it == knots.begin()) t0 -= P;
                const double f = (t1 > t0) ? (s - t0) / (t1 - t0) : 0.0;
                return lo.second + f * (hi.second - lo.second);
            }
        }
        return c0;
    }

    double derivative(double t, double P) const {
        switch (kind) {
            case Kind::constant:
                return 0.0;
            case Kind::harmonic: {
                const double om = 2.0 * M_PI / P, th = om * t;
                return om * (-cc * std::sin(th) + cs * std::cos(th));
            }
            case Kind::table: {
                const double h = 1e-6 * P;
                return ((*this)(t + h, P) - (*this)(t - h, P)) / (2.0 * h);
            }
        }
        return 0.0;
    }

    double min_over_period(double P, int samples = 4096) const {
        double m = HUGE_VAL;
        for (int k = 0; k < samples; ++k) m = std::min(m, (*this)(P * k / samples, P));
        for (const auto& kn : knots) m = std::min(m, kn.second);
        return m;
    }
};

// w'(t) = eps + 4 (Wh - Wl)^{-2} max{(Wh - W)(W - Wl), 0} with a harmonic water temperature W(t).
struct TemperatureWeight {
    double W0 = 14.36, Wc = -7.70, Ws = -4.00;  // deg C
    double W_hi = 25.0, W_lo = 5.0;
    double eps = 1e-4;
    double shift = 0.0;  // scenario offset added to W, deg C

    void validate() const {
        if (!(W_hi > W_lo)) throw domain_error("TemperatureWeight: W_hi must exceed W_lo");
        if (!(eps > 0.0)) throw domain_error("TemperatureWeight: eps must be positive");
    }
    double temperature(double t, double P) const {
        const double th = 2.0 * M_PI * t / P;
        return W0 + shift + Wc * std::cos(th) + Ws * std::sin(th);
    }
    double operator()(double t, double P) const {
        const double W = temperature(t, P);
        const double span = W_hi - W_lo;
        return eps + 4.0 / (span * span) * std::max((W_hi - W) * (W - W_lo), 0.0);
    }
};

struct StateWeight {
    enum class Kind { constant, temperature };
    Kind kind = Kind::constant;
    double value = 1.0;
    TemperatureWeight temp;

    static StateWeight constant(double v) { return {Kind::constant, v, {}}; }
    static StateWeight temperature(const TemperatureWeight& tw) { return {Kind::temperature, 1.0, tw}; }

    double operator()(double t, double P) const { return kind == Kind::constant ? value : temp(t, P); }
};

struct ControlProblem {
    double period = units::hours_per_year;  // h
    PeriodicSignal target = PeriodicSignal::constant(20.0);
    StateWeight state_weight = StateWeight::constant(1.0);
    double w = 1.0;
    SupOUModel model;

    double xbar(double t) const { return target(t, period) - model.x_floor; }
    double wprime(double t) const { return state_weight(t, period); }

    void validate() const {
        model.validate();
        if (!(period > 0.0)) throw domain_error("ControlProblem: period must be positive");
        if (!(w > 0.0)) throw domain_error("ControlProblem: control weight w must be positive");
        if (state_weight.kind == StateWeight::Kind::temperature) state_weight.temp.validate();
        if (!(state_weight.kind == StateWeight::Kind::temperature || state_weight.value > 0.0))
            throw domain_error("ControlProblem: state weight must be positive");
        if (!(target.min_over_period(period) > model.x_floor))
            throw domain_error("ControlProblem: target must stay above the discharge floor");
    }
};

// The algae-control setting: constant target 20 m^3/s, temperature weight, one-year period.
inline ControlProblem application_problem(const SupOUModel& m, double w, double temp_shift = 0.0) {
    ControlProblem p;
    p.model = m;
    p.w = w;
    p.target = PeriodicSignal::constant(20.0);
    TemperatureWeight tw;
    tw.shift = temp_shift;
    p.state_weight = StateWeight::temperature(tw);
    return p;
}

}  // namespace supou
