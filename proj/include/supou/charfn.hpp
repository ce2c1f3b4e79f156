#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "supou/error.hpp"
#include "supou/lift.hpp"
#include "supou/model.hpp"

// Log characteristic functions of the stationary supOU law (floor removed) and of
// its lifted version. With v = exp(-lambda (t - s)) the time integral becomes
// int_0^1 (exp(i u v z) - 1) / (lambda v) dv, so
//   ln phi(u) = [int pi(dlambda)/lambda] * K(u),  K(u) = int nu(dz) int_0^1 (e^{iuvz}-1)/v dv.
// The lift replaces the bracket by sum c_i / lambda_i.
namespace supou {

struct QuadConfig {
    double tail_tol = 1e-12;    // neglected z-mass bound at each end
    double log_z_panel = 0.5;   // panel width in ln z
    double rel_tol = 1e-7;      // allowed relative gap between the two resolutions
};

struct QuadResult {
    std::complex<double> value;
    double error = 0.0;
};

namespace detail {

using GL = boost::math::quadrature::gauss<double, 20>;

// int_a^b f over [a, b] with the 20-point Gauss-Legendre rule
template <class F>
std::complex<double> gl_panel(F&& f, double a, double b) {
    const auto& x = GL::abscissa();
    const auto& w = GL::weights();
    const double m = 0.5 * (a + b), r = 0.5 * (b - a);
    std::complex<double> s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (x[k] == 0.0) {
            s += w[k] * f(m);
        } else {
            s += w[k] * (f(m - r * x[k]) + f(m + r * x[k]));
        }
    }
    return r * s;
}

// g(x) = int_0^1 (exp(i x v) - 1)/v dv. The 1/v singularity is removable; the
// integrand is written as (-2 sin^2(xv/2) + i sin(xv))/v which stays accurate as v -> 0.
inline std::complex<double> inner_v(double x, int refine) {
    if (x == 0.0) return {0.0, 0.0};
    auto f = [x](double v) {
        const double h = std::sin(0.5 * x * v);
        return std::complex<double>(-2.0 * h * h / v, std::sin(x * v) / v);
    };
    const int panels = refine * (1 + static_cast<int>(std::ceil(std::fabs(x) / M_PI)));
    std::complex<double> s = 0.0;
    for (int k = 0; k < panels; ++k) s += gl_panel(f, double(k) / panels, double(k + 1) / panels);
    return s;
}

// E1(-ix) = int_1^inf e^{ixt}/t dt for x >= 1, continued fraction of E1 with modified Lentz.
inline std::complex<double> e1_neg_imag(double x) {
    const std::complex<double> z(0.0, -x);
    std::complex<double> b = z + 1.0, c = 1e300, d = 1.0 / b, h = d;
    for (int k = 1; k < 10000; ++k) {
        const double an = -double(k) * k;
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        const std::complex<double> del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) return h * std::exp(-z);
    }
    throw convergence_error("E1 continued fraction did not converge", x);
}

// Above this |u z| the inner integral is split as g(x) = -euler - ln x + i pi/2 - E1(-ix):
// the first three terms are smooth in ln z, the last oscillates and gets linear panels.
inline constexpr double oscillation_start = 4.0 * M_PI;

inline std::complex<double> jump_kernel_at(const JumpMeasureParams& j, double u, const QuadConfig& q,
                                           int refine) {
    const double a = j.a_nu, b = j.b_nu, p = j.p_nu, al = j.alpha_nu;
    const double au = std::fabs(u);
    // lower cut: |g(uz)| <= |u| z and int_0^zlo z nu(dz) <= a zlo^{1-alpha}/(1-alpha), ignoring tempering
    const double z_lo = std::pow(q.tail_tol * (1.0 - al) / (2.0 * au * a), 1.0 / (1.0 - al));
    // upper cut: |u| int_zhi^inf z nu(dz) = |u| (a/p) b^{(alpha-1)/p} Gamma_upper((1-alpha)/p, b zhi^p)
    const double s1 = (1.0 - al) / p;
    auto tail = [&](double z) {
        return au * a / p * std::pow(b, -s1) * boost::math::tgamma(s1, b * std::pow(z, p));
    };
    double z_hi = std::pow(b, -1.0 / p);
    while (tail(z_hi) > 0.5 * q.tail_tol) z_hi *= 1.5;
    if (!(z_hi > z_lo)) return {0.0, 0.0};
    const double z_c = std::clamp(oscillation_start / au, z_lo, z_hi);
    auto dens = [&](double z) { return a * std::exp(-(1.0 + al) * std::log(z) - b * std::pow(z, p)); };
    const double sgn = u > 0.0 ? 1.0 : -1.0;
    auto orient = [&](std::complex<double> g) { return u > 0.0 ? g : std::conj(g); };

    auto log_panels = [&](double z0, double z1, auto&& g) {
        std::complex<double> s = 0.0;
        if (!(z1 > z0)) return s;
        const double t0 = std::log(z0), t1 = std::log(z1);
        const int panels = refine * std::max(1, static_cast<int>(std::ceil((t1 - t0) / q.log_z_panel)));
        const double h = (t1 - t0) / panels;
        // dz = z dt
        auto f = [&](double t) {
            const double z = std::exp(t);
            return z * dens(z) * g(z);
        };
        for (int k = 0; k < panels; ++k) s += gl_panel(f, t0 + k * h, t0 + (k + 1) * h);
        return s;
    };

    std::complex<double> s = log_panels(z_lo, z_c, [&](double z) { return inner_v(u * z, refine); });
    if (z_hi > z_c) {
        s += log_panels(z_c, z_hi, [&](double z) {
            return std::complex<double>(-0.5772156649015329 - std::log(au * z), sgn * 0.5 * M_PI);
        });
        const double width = M_PI / au / refine;
        const int panels = std::max(1, static_cast<int>(std::ceil((z_hi - z_c) / width)));
        const double h = (z_hi - z_c) / panels;
        auto f = [&](double z) { return -dens(z) * orient(e1_neg_imag(au * z)); };
        for (int k = 0; k < panels; ++k) s += gl_panel(f, z_c + k * h, z_c + (k + 1) * h);
    }
    return s;
}

}  // namespace detail

// K(u) with an error estimate from a second pass at doubled resolution.
inline QuadResult jump_kernel(const JumpMeasureParams& j, double u, const QuadConfig& q = {}) {
    j.validate();
    if (u == 0.0 || j.is_zero()) return {};
    const auto coarse = detail::jump_kernel_at(j, u, q, 1);
    const auto fine = detail::jump_kernel_at(j, u, q, 2);
    return {fine, std::abs(fine - coarse)};
}

// int pi(dlambda)/lambda by exp-sinh quadrature of the Gamma density.
inline double reciprocal_moment_quadrature(const MixingParams& m, double* err = nullptr) {
    m.validate();
    boost::math::quadrature::exp_sinh<double> es;
    double e = 0.0, l1 = 0.0;
    const double v = es.integrate([&](double lam) { return m.density(lam) / lam; },
                                  std::sqrt(std::numeric_limits<double>::epsilon()), &e, &l1);
    if (err) *err = e;
    return v;
}

namespace detail {
inline std::complex<double> checked(const QuadResult& k, double weight, double extra_err, const QuadConfig& q) {
    const std::complex<double> v = weight * k.value;
    const double err = weight * k.error + extra_err * std::abs(k.value);
    if (err > q.rel_tol * std::abs(v) + q.tail_tol)
        throw convergence_error("characteristic function quadrature did not converge", err);
    return v;
}
}  // namespace detail

inline QuadResult log_charfn_exact_detail(const SupOUModel& model, double u, const QuadConfig& q = {}) {
    model.validate();
    double rerr = 0.0;
    const double Rq = reciprocal_moment_quadrature(model.mixing, &rerr);
    const QuadResult k = jump_kernel(model.jump, u, q);
    return {Rq * k.value, Rq * k.error + rerr * std::abs(k.value)};
}

inline std::complex<double> log_charfn_exact(const SupOUModel& model, double u, const QuadConfig& q = {}) {
    model.validate();
    double rerr = 0.0;
    const double Rq = reciprocal_moment_quadrature(model.mixing, &rerr);
    return detail::checked(jump_kernel(model.jump, u, q), Rq, rerr, q);
}

inline std::complex<double> log_charfn_lift(const SupOUModel& model, const MarkovianLift& L, double u,
                                            const QuadConfig& q = {}) {
    model.validate();
    return detail::checked(jump_kernel(model.jump, u, q), L.reciprocal_sum(), 0.0, q);
}

inline double consistency_gap(const SupOUModel& model, const MarkovianLift& L, double u,
                              const QuadConfig& q = {}) {
    if (u == 0.0) return 0.0;
    if (!(model.mixing.alpha_pi > 2.0))
        throw domain_error("consistency_gap: lift consistency needs alpha_pi > 2");
    return std::abs(log_charfn_exact(model, u, q) - log_charfn_lift(model, L, u, q));
}

}  // namespace supou
