#pragma once

#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "supou/error.hpp"
#include "supou/model.hpp"

namespace supou {

// Finite-dimensional surrogate of the mixing measure: n OU components with
// weights c_i and rates lambda_i from cells of the mesh eta_i = eta_bar i / n^beta.
// The mass beyond eta_n (tail_weight) decays instantly and never enters the dynamics.
struct MarkovianLift {
    int n = 0;
    double beta = 0.5;
    double eta_bar = 0.02;
    std::vector<double> mesh;    // eta_0 .. eta_n
    std::vector<double> c;       // c_1 .. c_n
    std::vector<double> lambda;  // lambda_1 .. lambda_n
    double tail_weight = 0.0;

    double weight_sum() const {
        double s = 0.0;
        for (double v : c) s += v;
        return s;
    }
    // sum c_i / lambda_i, the lift's version of the reciprocal moment R
    double reciprocal_sum() const {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += c[i] / lambda[i];
        return s;
    }

    void write_csv(std::ostream& os) const {
        os.precision(17);
        os << "i,eta_i,c_i,lambda_i\n";
        for (int i = 0; i < n; ++i)
            os << i + 1 << ',' << mesh[i + 1] << ',' << c[i] << ',' << lambda[i] << '\n';
    }
};

namespace detail {

// pi mass of (x0, x1] in units of the scale, for a Gamma(shape) law. Differences
// are taken on whichever side of the median keeps them accurate.
inline double gamma_cell_mass(double shape, double x0, double x1) {
    using boost::math::gamma_p;
    using boost::math::gamma_q;
    if (x1 <= shape) return gamma_p(shape, x1) - (x0 > 0.0 ? gamma_p(shape, x0) : 0.0);
    return (x0 > 0.0 ? gamma_q(shape, x0) : 1.0) - gamma_q(shape, x1);
}

}  // namespace detail

inline MarkovianLift build_lift(const MixingParams& mixing, int n, double beta, double eta_bar) {
    mixing.validate();
    if (n < 1) throw domain_error("build_lift: n must be >= 1");
    if (!(beta > 0.0 && beta < 1.0)) throw domain_error("build_lift: beta must lie in (0, 1)");
    if (!(eta_bar > 0.0)) throw domain_error("build_lift: eta_bar must be positive");

    MarkovianLift L;
    L.n = n;
    L.beta = beta;
    L.eta_bar = eta_bar;
    L.mesh.resize(n + 1);
    const double h = eta_bar / std::pow(static_cast<double>(n), beta);
    for (int i = 0; i <= n; ++i) L.mesh[i] = h * i;

    const double a = mixing.alpha_pi;
    const double B = mixing.B_pi;
    L.c.resize(n);
    L.lambda.resize(n);
    for (int i = 0; i < n; ++i) {
        const double x0 = L.mesh[i] / B, x1 = L.mesh[i + 1] / B;
        const double ci = detail::gamma_cell_mass(a, x0, x1);
        if (!(ci > 0.0))
            throw domain_error("build_lift: cell " + std::to_string(i + 1) + " has no mixing mass");
        // int lambda pi(dlambda) over the cell = alpha B * (Gamma(alpha+1) cell mass)
        const double first = a * B * detail::gamma_cell_mass(a + 1.0, x0, x1);
        L.c[i] = ci;
        L.lambda[i] = first / ci;
    }
    L.tail_weight = boost::math::gamma_q(a, L.mesh[n] / B);
    return L;
}

// G(n) = (1/eta_n) pi((eta_n, inf)) + sum (eta_i - eta_{i-1})^2 / lambda_i
inline double gbar(const MarkovianLift& L, const MixingParams& mixing) {
    mixing.validate();
    const double eta_n = L.mesh[L.n];
    double s = boost::math::gamma_q(mixing.alpha_pi, eta_n / mixing.B_pi) / eta_n;
    for (int i = 0; i < L.n; ++i) {
        const double d = L.mesh[i + 1] - L.mesh[i];
        s += d * d / L.lambda[i];
    }
    return s;
}

// One-component lift with all mass at the rate lambda (point-mass mixing).
inline MarkovianLift point_mass_lift(double lambda) {
    if (!(lambda > 0.0)) throw domain_error("point_mass_lift: rate must be positive");
    MarkovianLift L;
    L.n = 1;
    L.beta = 0.5;
    L.eta_bar = 2.0 * lambda;
    L.mesh = {0.0, 2.0 * lambda};
    L.c = {1.0};
    L.lambda = {lambda};
    L.tail_weight = 0.0;
    return L;
}

}  // namespace supou
