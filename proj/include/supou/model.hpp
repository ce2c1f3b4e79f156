#pragma once

#include <cmath>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "supou/error.hpp"

namespace supou {

// nu(dz) = a z^{-1-alpha} exp(-b z^p) dz on z > 0. a == 0 is accepted as the
// zero measure (no jumps); everything else must satisfy the strict invariants.
struct JumpMeasureParams {
    double a_nu = 0.0;
    double b_nu = 1.0;
    double p_nu = 1.0;
    double alpha_nu = 0.0;

    bool is_zero() const { return a_nu == 0.0; }

    void validate() const {
        if (!(a_nu >= 0.0) || !std::isfinite(a_nu)) throw domain_error("a_nu must be positive");
        if (!(b_nu > 0.0) || !std::isfinite(b_nu)) throw domain_error("b_nu must be positive");
        if (!(p_nu > 0.0) || !std::isfinite(p_nu)) throw domain_error("p_nu must be positive");
        if (!(alpha_nu < 1.0) || !std::isfinite(alpha_nu))
            throw domain_error("alpha_nu must be below 1 (finite variation)");
    }
};

// pi = Gamma(shape alpha_pi, scale B_pi) on the reversion rate lambda.
struct MixingParams {
    double B_pi = 1.0;
    double alpha_pi = 2.0;

    void validate() const {
        if (!(B_pi > 0.0) || !std::isfinite(B_pi)) throw domain_error("B_pi must be positive");
        if (!(alpha_pi > 1.0) || !std::isfinite(alpha_pi)) throw domain_error("alpha_pi must exceed 1");
    }

    double mean_rate() const { return alpha_pi * B_pi; }
    double density(double lambda) const {
        if (lambda <= 0.0) return 0.0;
        return std::exp((alpha_pi - 1.0) * std::log(lambda) - lambda / B_pi -
                        boost::math::lgamma(alpha_pi) - alpha_pi * std::log(B_pi));
    }
};

struct SupOUModel {
    double x_floor = 0.0;
    JumpMeasureParams jump;
    MixingParams mixing;
    std::string name;

    void validate() const {
        if (!(x_floor >= 0.0) || !std::isfinite(x_floor)) throw domain_error("x_floor must be nonnegative");
        jump.validate();
        mixing.validate();
    }
};

struct StationaryStats {
    double ave = 0.0;
    double var = 0.0;
    double skew = 0.0;
    double kurt = 0.0;  // excess
    bool degenerate = false;

    double std_dev() const { return std::sqrt(var); }
};

// M_k = int z^k nu(dz) = (a/p) b^{(alpha-k)/p} Gamma((k-alpha)/p)
inline double levy_moment(const JumpMeasureParams& j, int k) {
    if (k < 1) throw domain_error("levy_moment: k must be >= 1");
    j.validate();
    if (j.is_zero()) return 0.0;
    const double s = (k - j.alpha_nu) / j.p_nu;
    if (!(s > 0.0)) throw domain_error("levy_moment: (k - alpha)/p must be positive");
    return j.a_nu / j.p_nu * std::pow(j.b_nu, -s) * boost::math::tgamma(s);
}

// R = int lambda^{-1} pi(dlambda)
inline double reciprocal_moment(const MixingParams& m) {
    m.validate();
    return 1.0 / (m.B_pi * (m.alpha_pi - 1.0));
}

inline StationaryStats stationary_stats(const SupOUModel& model) {
    model.validate();
    const double R = reciprocal_moment(model.mixing);
    StationaryStats s;
    if (model.jump.is_zero()) {
        s.ave = model.x_floor;
        s.degenerate = true;
        return s;
    }
    const double M1 = levy_moment(model.jump, 1);
    const double M2 = levy_moment(model.jump, 2);
    const double M3 = levy_moment(model.jump, 3);
    const double M4 = levy_moment(model.jump, 4);
    s.ave = model.x_floor + R * M1;
    s.var = R * M2 / 2.0;
    s.skew = R * M3 / (3.0 * std::pow(s.var, 1.5));
    s.kurt = R * M4 / (4.0 * s.var * s.var);
    return s;
}

inline double acf(const MixingParams& m, double tau) {
    m.validate();
    if (tau < 0.0) throw domain_error("acf: negative lag");
    return std::pow(1.0 + m.B_pi * tau, -(m.alpha_pi - 1.0));
}

}  // namespace supou
