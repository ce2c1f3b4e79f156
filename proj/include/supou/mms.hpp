#pragma once

#include <cmath>
#include <utility>

#include "supou/error.hpp"
#include "supou/model.hpp"
#include "supou/problem.hpp"

// Manufactured solution Gamma = a(t) exp(-b (lambda + theta)), gamma = c(t) exp(-b lambda)
// for the sourced Riccati system, with the matching sources and exact Hamiltonian.
namespace supou {

struct MMSConfig {
    PeriodicSignal a_gamma = PeriodicSignal::harmonic(0.1, 0.0, 0.05);
    PeriodicSignal c_gamma = PeriodicSignal::harmonic(0.2, 0.0, 0.1);
    double b_gamma = 0.48;  // h

    void validate(double P) const {
        if (!(b_gamma >= 0.0)) throw domain_error("MMSConfig: b_gamma must be nonnegative");
        if (!(a_gamma.min_over_period(P) > 0.0) || !(c_gamma.min_over_period(P) > 0.0))
            throw domain_error("MMSConfig: a_gamma and c_gamma must stay positive");
    }
};

// Verification problem: target 10 (1 + 0.5 cos(2 pi s/P)), w = 1, unit state weight.
inline ControlProblem mms_problem(const SupOUModel& m) {
    ControlProblem p;
    p.model = m;
    p.w = 1.0;
    p.target = PeriodicSignal::harmonic(10.0, 5.0, 0.0);
    p.state_weight = StateWeight::constant(1.0);
    return p;
}

inline std::pair<double, double> mms_exact(const MMSConfig& cfg, double P, double t, double lambda, double theta) {
    return {cfg.a_gamma(t, P) * std::exp(-cfg.b_gamma * (lambda + theta)),
            cfg.c_gamma(t, P) * std::exp(-cfg.b_gamma * lambda)};
}

// int exp(-b lambda) pi(dlambda) = (1 + B b)^{-alpha}
inline double gamma_transform(const MixingParams& m, double b) {
    return std::pow(1.0 + m.B_pi * b, -m.alpha_pi);
}

// Parts of the sources that multiply the exponentials:
//   f + 1 = qa(lambda + theta) e^{-b(lambda+theta)},  g - xbar = qc(lambda) e^{-b lambda}
struct MMSSourceParts {
    double a, c, da, dc, T, T2;
};
inline MMSSourceParts mms_parts(const MMSConfig& cfg, const MixingParams& mix, double P, double t) {
    const double T = gamma_transform(mix, cfg.b_gamma);
    return {cfg.a_gamma(t, P), cfg.c_gamma(t, P), cfg.a_gamma.derivative(t, P), cfg.c_gamma.derivative(t, P), T,
            T * T};
}

inline std::pair<double, double> mms_sources(const MMSConfig& cfg, const MixingParams& mix, double w, double M1,
                                             double P, double xbar_t, double t, double lambda, double theta) {
    const MMSSourceParts q = mms_parts(cfg, mix, P, t);
    const double f = -1.0 + (-q.da + (theta + lambda) * q.a + q.a * q.a * q.T2 / w) *
                                std::exp(-cfg.b_gamma * (lambda + theta));
    const double g = xbar_t + (-q.dc + lambda * q.c + q.a * q.c * q.T2 / w - M1 * q.a * q.T) *
                                  std::exp(-cfg.b_gamma * lambda);
    return {f, g};
}

// Period average of -(int gamma pi)^2/(2w) + (M2/2) int Gamma(l,l) pi + M1 int gamma pi + w' xbar^2/2
// by the trapezoid rule, which is spectrally accurate for smooth periodic integrands.
inline double mms_exact_hamiltonian(const MMSConfig& cfg, const ControlProblem& prob, int samples = 1 << 16) {
    prob.validate();
    cfg.validate(prob.period);
    const auto& mix = prob.model.mixing;
    const double M1 = levy_moment(prob.model.jump, 1), M2 = levy_moment(prob.model.jump, 2);
    const double T = gamma_transform(mix, cfg.b_gamma), T2b = gamma_transform(mix, 2.0 * cfg.b_gamma);
    double s = 0.0;
    for (int k = 0; k < samples; ++k) {
        const double t = prob.period * k / samples;
        const double a = cfg.a_gamma(t, prob.period), c = cfg.c_gamma(t, prob.period);
        const double xb = prob.xbar(t);
        s += -c * c * T * T / (2.0 * prob.w) + 0.5 * M2 * a * T2b + M1 * c * T + 0.5 * prob.wprime(t) * xb * xb;
    }
    return s / samples;
}

}  // namespace supou
