#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "supou/data.hpp"
#include "supou/error.hpp"
#include "supou/model.hpp"
#include "supou/nelder_mead.hpp"
#include "supou/parallel.hpp"
#include "supou/rng.hpp"

namespace supou {

struct AcfFitConfig {
    double lag_step_h = 1.0;  // spacing of the empirical acf array
    double max_lag_h = 720.0;
    NelderMeadOptions nm{0.5, 1e-12, 100000, 3};
};

struct AcfFit {
    MixingParams mixing;
    double sse = 0.0;
    double grad_norm = 0.0;
    bool tail_warning = false;  // alpha_pi <= 2: lift consistency assumption fails
    int evals = 0;
};

// Least squares of (1 + B tau)^{-(alpha-1)} against the empirical acf on lags
// 1..max_lag, in (log B, log(alpha - 1)) coordinates.
inline AcfFit fit_acf(const std::vector<double>& emp, const AcfFitConfig& cfg = {}) {
    if (emp.empty() || std::fabs(emp[0] - 1.0) > 1e-12) throw domain_error("fit_acf: acf[0] must be 1");
    const int max_k = std::min<int>(static_cast<int>(emp.size()) - 1,
                                    static_cast<int>(std::floor(cfg.max_lag_h / cfg.lag_step_h + 1e-9)));
    if (max_k < 10) throw domain_error("fit_acf: need at least 10 lags");

    auto sse = [&](const std::vector<double>& y) {
        const double B = std::exp(y[0]), am1 = std::exp(y[1]);
        double s = 0.0;
        for (int k = 1; k <= max_k; ++k) {
            const double r = std::pow(1.0 + B * k * cfg.lag_step_h, -am1) - emp[k];
            s += r * r;
        }
        return s;
    };
    NelderMeadResult best;
    best.f = std::numeric_limits<double>::infinity();
    int evals = 0;
    for (double B0 : {1e-3, 1e-2, 1e-1})
        for (double a0 : {1.5, 2.5, 4.0}) {
            auto r = nelder_mead(sse, {std::log(B0), std::log(a0 - 1.0)}, cfg.nm);
            evals += r.evals;
            if (r.f < best.f) best = r;
        }
    AcfFit out;
    out.mixing = {std::exp(best.x[0]), 1.0 + std::exp(best.x[1])};
    out.sse = best.f;
    out.evals = evals;
    double g2 = 0.0;
    for (int j = 0; j < 2; ++j) {
        auto xp = best.x, xm = best.x;
        const double h = 1e-6 * std::max(1.0, std::fabs(best.x[j]));
        xp[j] += h;
        xm[j] -= h;
        const double g = (sse(xp) - sse(xm)) / (2 * h);
        g2 += g * g;
    }
    out.grad_norm = std::sqrt(g2);
    // a flat acf pushes B -> 0 or alpha -> 1: nothing was fitted
    const double tau_max = max_k * cfg.lag_step_h;
    if (out.mixing.B_pi * tau_max < 1e-8 || best.x[1] < std::log(1e-8) || !std::isfinite(best.f))
        throw convergence_error("fit_acf: no decay to fit (boundary optimum), B_pi=" +
                                    std::to_string(out.mixing.B_pi) + " grad=" + std::to_string(out.grad_norm),
                                out.sse);
    out.tail_warning = out.mixing.alpha_pi <= 2.0;
    return out;
}

// Sum of squared relative errors in Ave, Std, Skew and Kurt, data in the denominators.
inline double moment_objective(const StationaryStats& model, const StationaryStats& data) {
    const double dstd = data.std_dev();
    if (data.ave == 0.0 || dstd == 0.0 || data.skew == 0.0 || data.kurt == 0.0)
        throw domain_error("moment_objective: data statistic is zero");
    auto sq = [](double m, double d) { return (m - d) * (m - d) / (d * d); };
    return sq(model.ave, data.ave) + sq(model.std_dev(), dstd) + sq(model.skew, data.skew) +
           sq(model.kurt, data.kurt);
}

struct LevyFitConfig {
    int restarts = 16;
    std::uint64_t seed = 1;
    int threads = 1;
    double log_a_lo = std::log(1e-4), log_a_hi = std::log(1.0);
    double log_b_lo = std::log(1e-8), log_b_hi = std::log(1e-1);
    double alpha_lo = -2.0, alpha_hi = 1.0;
    NelderMeadOptions nm{1.0, 1e-10, 60000, 3};
};

struct FitReport {
    SupOUModel model;
    double acf_sse = 0.0;
    double moment_objective = 0.0;
    int best_restart = -1;
    int restarts_converged = 0;
    long total_evals = 0;
    bool tail_warning = false;
};

namespace detail {
inline JumpMeasureParams decode_levy(const std::vector<double>& y, double p, const LevyFitConfig& c) {
    const double sig = 1.0 / (1.0 + std::exp(-y[2]));
    return {std::exp(y[0]), std::exp(y[1]), p, c.alpha_lo + (c.alpha_hi - c.alpha_lo) * sig};
}
}  // namespace detail

// Multi-start simplex search for (a, b, alpha) with the mixing law held fixed.
inline FitReport fit_levy(const StationaryStats& data, const MixingParams& mixing, double x_floor,
                          double p_nu, const LevyFitConfig& cfg = {}) {
    mixing.validate();
    if (!(p_nu > 0.0)) throw domain_error("fit_levy: p_nu must be positive");
    if (!(cfg.alpha_hi <= 1.0 && cfg.alpha_lo < cfg.alpha_hi && cfg.log_a_lo < cfg.log_a_hi &&
          cfg.log_b_lo < cfg.log_b_hi))
        throw domain_error("fit_levy: infeasible bounds");
    moment_objective(data, data);  // rejects zero statistics up front

    auto objective = [&](const std::vector<double>& y) {
        SupOUModel m{x_floor, detail::decode_levy(y, p_nu, cfg), mixing, ""};
        if (!(m.jump.alpha_nu < 1.0) || !std::isfinite(m.jump.a_nu) || !std::isfinite(m.jump.b_nu) ||
            m.jump.a_nu <= 0.0 || m.jump.b_nu <= 0.0)
            return HUGE_VAL;
        const StationaryStats s = stationary_stats(m);
        const double v = moment_objective(s, data);
        return std::isfinite(v) ? v : HUGE_VAL;
    };

    std::vector<NelderMeadResult> runs(cfg.restarts);
    parallel_for(cfg.restarts, cfg.threads, [&](int r) {
        Rng rng = make_stream(cfg.seed, static_cast<std::uint64_t>(r));
        std::uniform_real_distribution<double> U(0.0, 1.0);
        std::vector<double> y0{cfg.log_a_lo + (cfg.log_a_hi - cfg.log_a_lo) * U(rng),
                               cfg.log_b_lo + (cfg.log_b_hi - cfg.log_b_lo) * U(rng), -3.0 + 6.0 * U(rng)};
        runs[r] = nelder_mead(objective, y0, cfg.nm);
    });

    FitReport rep;
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < cfg.restarts; ++r) {
        rep.total_evals += runs[r].evals;
        rep.restarts_converged += runs[r].converged ? 1 : 0;
        if (runs[r].f < best) {
            best = runs[r].f;
            rep.best_restart = r;
        }
    }
    if (rep.best_restart < 0 || !std::isfinite(best))
        throw convergence_error("fit_levy: no restart produced a finite objective");
    rep.model = {x_floor, detail::decode_levy(runs[rep.best_restart].x, p_nu, cfg), mixing, ""};
    rep.moment_objective = best;
    if (rep.restarts_converged == 0)
        throw convergence_error("fit_levy: simplex never collapsed, best objective " + std::to_string(best), best);
    return rep;
}

struct IdentifyConfig {
    AcfFitConfig acf;
    LevyFitConfig levy;
    double p_nu = 2.0;
};

// Both calibration steps on a series: acf fit for pi, then moment matching for nu
// with the floor set to the series minimum.
inline FitReport identify_series(const DischargeSeries& s, const IdentifyConfig& cfg = {}) {
    const EmpiricalStats e = empirical_moments(s);
    AcfFitConfig acfg = cfg.acf;
    acfg.lag_step_h = s.step;
    const int max_lag = static_cast<int>(std::floor(acfg.max_lag_h / s.step + 1e-9));
    const AcfFit af = fit_acf(empirical_acf(s, max_lag), acfg);
    const double floor = *std::min_element(s.values.begin(), s.values.end());
    FitReport rep = fit_levy(e.as_stationary(), af.mixing, floor, cfg.p_nu, cfg.levy);
    rep.acf_sse = af.sse;
    rep.tail_warning = af.tail_warning;
    return rep;
}

}  // namespace supou
