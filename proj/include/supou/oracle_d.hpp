#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "supou/error.hpp"
#include "supou/lift.hpp"
#include "supou/model.hpp"
#include "supou/problem.hpp"
#include "supou/riccati.hpp"
#include "supou/units.hpp"

// Closed forms for the deterministic, time-independent problem: no jumps, constant
// target, unit state weight. Used to cross-check the lifted Riccati solver.
namespace supou {

struct AnalyticDSolution {
    double I = 0.0;          // pi-double average of Gamma / lambda
    double gamma_avg = 0.0;  // int gamma dpi
    double X_inf = 0.0;      // controlled equilibrium
    double H = 0.0;
};

// Nonnegative root of I^2 + 2wI - wR^2 = 0, written without cancellation.
inline double analytic_I(double w, double R) {
    if (!(w > 0.0)) throw domain_error("analytic_I: w must be positive");
    if (!(R >= 0.0)) throw domain_error("analytic_I: R must be nonnegative");
    return w * R * R / (w + std::sqrt(w * w + w * R * R));
}

inline AnalyticDSolution analytic_stationary(double R, double x_floor, double w, double x_hat) {
    if (!(x_hat > x_floor)) throw domain_error("analytic_stationary: target must exceed the floor");
    const double xb = x_hat - x_floor;
    AnalyticDSolution s;
    s.I = analytic_I(w, R);
    s.gamma_avg = -w * R * xb / (w + s.I);
    s.X_inf = x_floor + w * R * R * xb / ((w + s.I) * (w + s.I));
    s.H = -s.gamma_avg * s.gamma_avg / (2.0 * w) + 0.5 * xb * xb;
    return s;
}

inline AnalyticDSolution analytic_stationary(const SupOUModel& model, double w, double x_hat) {
    return analytic_stationary(reciprocal_moment(model.mixing), model.x_floor, w, x_hat);
}

// Discrete analogues read off a lifted solution at s = 0 (the solution is constant in time).
inline AnalyticDSolution discrete_stationary(const RiccatiSolution& sol, double x_floor) {
    const int n = sol.n;
    const double* A = sol.A_at(0);
    const double* B = sol.B_at(0);
    AnalyticDSolution d;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d.I += sol.c[i] * sol.c[j] / sol.lambda[i] * A[i * n + j];
    for (int i = 0; i < n; ++i) d.gamma_avg += sol.c[i] * B[i];
    // closed loop at rest: x_i = c_i u / lambda_i and u = -(sum D_j x_j + sum c B) / w
    double Rn = 0.0;
    for (int i = 0; i < n; ++i) Rn += sol.c[i] / sol.lambda[i];
    const double u = -d.gamma_avg / (sol.w + d.I);
    d.X_inf = x_floor + u * Rn;
    d.H = sol.H;
    return d;
}

struct OracleOptions {
    double tol = 1e-3;   // relative deviation that counts as agreement
    double dt = 0.1;     // h; the stationary fixed point of the Euler sweep does not depend on it
    double period = units::hours_per_year;
    double riccati_tol = 1e-12;
};

struct OracleReport {
    int n = 0;
    double w = 0.0, x_hat = 0.0;
    double R = 0.0, R_n = 0.0, gbar = 0.0;
    AnalyticDSolution analytic, discrete;
    AnalyticDSolution rel_dev;        // |discrete - analytic| / |analytic| per field
    double identity_dev = 0.0;        // |I_n - analytic_I(w, R_n)|: the solver against its own lift
    double max_rel_dev = 0.0;
    int cycles = 0;
    bool pass = false;
};

inline OracleReport oracle_check(const SupOUModel& model, const MarkovianLift& L, double w, double x_hat,
                                 const OracleOptions& opt = {}) {
    model.validate();
    if (!model.jump.is_zero()) throw domain_error("oracle_check: the jump measure must be zero");
    ControlProblem prob;
    prob.model = model;
    prob.w = w;
    prob.period = opt.period;
    prob.target = PeriodicSignal::constant(x_hat);
    prob.state_weight = StateWeight::constant(1.0);
    RiccatiOptions ro;
    ro.dt = opt.dt;
    ro.tol = opt.riccati_tol;
    ro.max_cycles = 200;
    ro.snapshot_every_h = opt.period / 4.0;
    const RiccatiSolution sol = solve_periodic_riccati(prob, L, ro);

    OracleReport r;
    r.n = L.n;
    r.w = w;
    r.x_hat = x_hat;
    r.R = reciprocal_moment(model.mixing);
    r.R_n = L.reciprocal_sum();
    r.gbar = gbar(L, model.mixing);
    r.cycles = sol.cycles;
    r.analytic = analytic_stationary(r.R, model.x_floor, w, x_hat);
    r.discrete = discrete_stationary(sol, model.x_floor);
    auto rel = [](double d, double a) { return std::fabs(d - a) / std::max(std::fabs(a), 1e-300); };
    r.rel_dev.I = rel(r.discrete.I, r.analytic.I);
    r.rel_dev.gamma_avg = rel(r.discrete.gamma_avg, r.analytic.gamma_avg);
    r.rel_dev.X_inf = rel(r.discrete.X_inf, r.analytic.X_inf);
    r.rel_dev.H = rel(r.discrete.H, r.analytic.H);
    r.max_rel_dev = std::max({r.rel_dev.I, r.rel_dev.gamma_avg, r.rel_dev.X_inf, r.rel_dev.H});
    r.identity_dev = std::fabs(r.discrete.I - analytic_I(w, r.R_n));
    r.pass = r.max_rel_dev < opt.tol;
    return r;
}

}  // namespace supou
