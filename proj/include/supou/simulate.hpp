#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "supou/data.hpp"
#include "supou/error.hpp"
#include "supou/lift.hpp"
#include "supou/model.hpp"
#include "supou/parallel.hpp"
#include "supou/problem.hpp"
#include "supou/riccati.hpp"
#include "supou/rng.hpp"
#include "supou/units.hpp"

namespace supou {

enum class SimScheme { uncontrolled_eq96, controlled_lift };

// How the uncontrolled scheme assigns reversion rates. rate_classes gives every
// increment its own rate and keeps it; shared_rate redraws one rate per step and
// applies it to the whole state.
enum class RateMode { rate_classes, shared_rate };

struct SimConfig {
    double dt = 0.001;                       // h; 0 = Riccati grid step (controlled runs)
    double horizon = 200.0 * units::hours_per_year;  // h of recorded output after burn-in
    double burn_in = -1.0;                   // h; negative = 20 / (alpha_pi B_pi), one period when controlled
    double obs_interval = 1.0;               // h
    double x0 = NAN;                         // initial X for uncontrolled runs; NaN = floor
    std::uint64_t seed = 1;
    int n_paths = 1;
    int threads = 0;
    SimScheme scheme = SimScheme::uncontrolled_eq96;
    RateMode rate_mode = RateMode::rate_classes;
    int rate_classes = 256;
    bool keep_series = false;
    int histogram_bins = 60;
    double small_jump_fraction = 1e-6;  // share of M2 carried by jumps replaced with their mean

    void validate() const {
        if (!(dt >= 0.0) || !std::isfinite(dt)) throw domain_error("SimConfig: dt must be positive");
        if (!(horizon > 0.0)) throw domain_error("SimConfig: horizon must be positive");
        if (n_paths < 1) throw domain_error("SimConfig: n_paths must be >= 1");
        if (rate_classes < 1) throw domain_error("SimConfig: rate_classes must be >= 1");
        if (!(obs_interval > 0.0)) throw domain_error("SimConfig: obs_interval must be positive");
    }
};

struct PathSummary {
    EmpiricalStats stats;
    std::size_t observations = 0;
    double min_value = 0.0;
    std::vector<double> series;  // observed X, all paths back to back (keep_series only)
    // controlled runs: time averages of w'(X - Xhat)^2 / 2, u^2 / 2 and their weighted sum
    double deviation = 0.0, control = 0.0, total = 0.0;
    double deviation_se = 0.0, control_se = 0.0, total_se = 0.0;
    std::size_t batches = 0;
    long steps = 0;
};

namespace detail {

struct Neumaier {
    double s = 0.0, c = 0.0;
    void add(double v) {
        const double t = s + v;
        c += std::fabs(s) >= std::fabs(v) ? (s - t) + v : (v - t) + s;
        s = t;
    }
    double value() const { return s + c; }
};

inline double mean_se(const std::vector<double>& v, double& se) {
    Neumaier m;
    for (double x : v) m.add(x);
    const double mean = m.value() / double(v.size());
    if (v.size() < 2) {
        se = NAN;
        return mean;
    }
    Neumaier q;
    for (double x : v) q.add((x - mean) * (x - mean));
    se = std::sqrt(q.value() / double(v.size() - 1) / double(v.size()));
    return mean;
}

inline long steps_per(double span, double dt, const char* what) {
    const double r = span / dt;
    const long k = std::lround(r);
    if (k < 1 || std::fabs(r - double(k)) > 1e-9 * std::max(1.0, r))
        throw domain_error(std::string("simulate: dt must divide the ") + what);
    return k;
}

}  // namespace detail

// nu'(dy) = a y^{-1-alpha} exp(-b y) dy, the image of nu under y = z^p.
struct TemperedStableParams {
    double a = 0.0, alpha = 0.0, b = 1.0;

    static TemperedStableParams from(const JumpMeasureParams& j) {
        j.validate();
        return {j.a_nu / j.p_nu, j.alpha_nu / j.p_nu, j.b_nu};
    }
    double mean_rate() const { return a * std::pow(b, alpha - 1.0) * boost::math::tgamma(1.0 - alpha); }
};

// Increments of the subordinator with measure nu' over a fixed dt.
class TemperedStableSampler {
public:
    static constexpr long max_rejections = 1000000;

    TemperedStableSampler(const TemperedStableParams& p, double dt) : p_(p), dt_(dt) {
        if (!(p.alpha < 1.0)) throw domain_error("tempered stable: alpha' must be below 1");
        if (!(dt > 0.0)) throw domain_error("tempered stable: dt must be positive");
        if (!(p.b > 0.0)) throw domain_error("tempered stable: b must be positive");
        if (p.a == 0.0) {
            kind_ = Kind::zero;
        } else if (p.alpha > 0.0) {
            kind_ = Kind::stable;
            sigma_ = std::pow(dt * p.a * boost::math::tgamma(1.0 - p.alpha) / p.alpha, 1.0 / p.alpha);
            e1_ = 1.0 / p.alpha;
            e2_ = (1.0 - p.alpha) / p.alpha;
        } else if (p.alpha == 0.0) {
            kind_ = Kind::gamma;
            gamma_ = std::gamma_distribution<double>(dt * p.a, 1.0 / p.b);
        } else {
            kind_ = Kind::compound;
            pois_ = std::poisson_distribution<long>(dt * p.a * std::pow(p.b, p.alpha) * boost::math::tgamma(-p.alpha));
            gamma_ = std::gamma_distribution<double>(-p.alpha, 1.0 / p.b);
        }
    }

    template <class URNG>
    double operator()(URNG& rng) {
        switch (kind_) {
            case Kind::zero:
                return 0.0;
            case Kind::gamma:
                return gamma_(rng);
            case Kind::compound: {
                const long k = pois_(rng);
                double s = 0.0;
                for (long i = 0; i < k; ++i) s += gamma_(rng);
                return s;
            }
            case Kind::stable:
                break;
        }
        for (long it = 0; it < max_rejections; ++it) {
            const double S = sigma_ * standard_stable(rng);
            const double bs = p_.b * S, v = unif_(rng);
            // 1 - bs <= exp(-bs), so most acceptances skip the exponential
            if (v < 1.0 - bs || v < std::exp(-bs)) return S;
        }
        throw convergence_error("tempered stable: rejection cap exceeded, dt too large for tilting", dt_);
    }

private:
    enum class Kind { zero, stable, gamma, compound };

    // one-sided stable with Laplace transform exp(-s^alpha), Kanter's representation
    template <class URNG>
    double standard_stable(URNG& rng) {
        double u;
        do u = std::numbers::pi * unif_(rng);
        while (u == 0.0);
        const double e = exp_(rng);
        const double al = p_.alpha;
        return std::sin(al * u) *
               std::exp(e2_ * std::log(std::sin((1.0 - al) * u) / e) - e1_ * std::log(std::sin(u)));
    }

    TemperedStableParams p_;
    double dt_;
    Kind kind_ = Kind::zero;
    double sigma_ = 0.0, e1_ = 1.0, e2_ = 0.0;
    std::uniform_real_distribution<double> unif_{0.0, 1.0};
    std::exponential_distribution<double> exp_{1.0};
    std::gamma_distribution<double> gamma_{1.0, 1.0};
    std::poisson_distribution<long> pois_{1.0};
};

inline double sample_tempered_stable_increment(const TemperedStableParams& p, double dt, Rng& rng) {
    TemperedStableSampler s(p, dt);
    return s(rng);
}

// Rate classes for the uncontrolled scheme: cells of equal mass under pi(dl)/l,
// class probability = pi mass of the cell, rate = harmonic mean over the cell.
// Sum q_k / l_k equals the reciprocal moment R exactly.
struct RateClasses {
    std::vector<double> prob, rate;
};

inline RateClasses rate_classes(const MixingParams& m, int K) {
    m.validate();
    const double a = m.alpha_pi;
    const double R = reciprocal_moment(m);
    std::vector<double> edge(K + 1, 0.0);
    for (int k = 1; k < K; ++k) edge[k] = boost::math::gamma_p_inv(a - 1.0, double(k) / K);
    RateClasses rc;
    rc.prob.resize(K);
    rc.rate.resize(K);
    for (int k = 0; k < K; ++k) {
        const double q = k == K - 1 ? boost::math::gamma_q(a, edge[k])
                                    : detail::gamma_cell_mass(a, edge[k], edge[k + 1]);
        rc.prob[k] = q;
        rc.rate[k] = q / (R / K);
    }
    return rc;
}

namespace detail {

// Walker alias table: O(1) draws from a fixed discrete law. std::discrete_distribution
// bisects its cumulative table, which dominated the per-step cost here.
class AliasTable {
public:
    explicit AliasTable(const std::vector<double>& w) : prob_(w.size()), alias_(w.size()) {
        const std::size_t K = w.size();
        double tot = 0.0;
        for (double v : w) tot += v;
        std::vector<double> q(K);
        std::vector<std::size_t> small, large;
        for (std::size_t k = 0; k < K; ++k) {
            q[k] = w[k] * double(K) / tot;
            (q[k] < 1.0 ? small : large).push_back(k);
        }
        while (!small.empty() && !large.empty()) {
            const std::size_t s = small.back(), l = large.back();
            small.pop_back();
            prob_[s] = q[s];
            alias_[s] = l;
            q[l] -= 1.0 - q[s];
            if (q[l] < 1.0) {
                large.pop_back();
                small.push_back(l);
            }
        }
        for (auto k : large) prob_[k] = 1.0, alias_[k] = k;
        for (auto k : small) prob_[k] = 1.0, alias_[k] = k;
    }

    template <class URNG>
    int operator()(URNG& rng) const {
        const double v = std::uniform_real_distribution<double>(0.0, double(prob_.size()))(rng);
        const std::size_t k = std::min(static_cast<std::size_t>(v), prob_.size() - 1);
        return static_cast<int>(v - double(k) < prob_[k] ? k : alias_[k]);
    }

private:
    std::vector<double> prob_;
    std::vector<std::size_t> alias_;
};

}  // namespace detail

inline PathSummary simulate_uncontrolled(const SupOUModel& model, const SimConfig& cfg) {
    model.validate();
    cfg.validate();
    if (cfg.scheme != SimScheme::uncontrolled_eq96) throw domain_error("simulate_uncontrolled: wrong scheme");
    if (!(cfg.dt > 0.0)) throw domain_error("simulate_uncontrolled: dt must be positive");
    const double dt = cfg.dt;
    const long per_obs = detail::steps_per(cfg.obs_interval, dt, "observation interval");
    const double burn = cfg.burn_in >= 0.0 ? cfg.burn_in : 20.0 / model.mixing.mean_rate();
    const long burn_obs = static_cast<long>(std::ceil(burn / cfg.obs_interval));
    const long n_obs = static_cast<long>(std::floor(cfg.horizon / cfg.obs_interval + 1e-9));
    const TemperedStableParams tp = TemperedStableParams::from(model.jump);
    const double inv_p = 1.0 / model.jump.p_nu;
    const double floor = model.x_floor;
    const RateClasses rc = rate_classes(model.mixing, cfg.rate_classes);
    const int K = cfg.rate_classes;

    std::vector<std::vector<double>> paths(cfg.n_paths);
    parallel_for(cfg.n_paths, resolve_threads(cfg.threads), [&](int path) {
        Rng rng = make_stream(cfg.seed, static_cast<std::uint64_t>(path));
        TemperedStableSampler inc(tp, dt);
        auto& out = paths[path];
        out.reserve(n_obs);
        auto lift = [&](double dl) { return inv_p == 1.0 ? dl : inv_p == 0.5 ? std::sqrt(dl) : std::pow(dl, inv_p); };
        const long total = burn_obs + n_obs;

        if (cfg.rate_mode == RateMode::shared_rate) {
            std::gamma_distribution<double> lam(model.mixing.alpha_pi, model.mixing.B_pi);
            double x = std::isnan(cfg.x0) ? floor : cfg.x0;
            for (long o = 0; o < total; ++o) {
                for (long s = 0; s < per_obs; ++s) {
                    const double l = lam(rng);
                    const double e = std::exp(-l * dt);
                    const double dl = inc(rng);
                    x = e * x + (1.0 - e) * floor + (-std::expm1(-l * dt)) / (l * dt) * lift(dl);
                }
                if (!std::isfinite(x))
                    throw convergence_error("simulate: non-finite state at step " + std::to_string((o + 1) * per_obs));
                if (o >= burn_obs) out.push_back(x);
            }
            return;
        }

        const detail::AliasTable pick(rc.prob);
        std::vector<double> fac(K), hop(K), Y(K, std::isnan(cfg.x0) ? 0.0 : (cfg.x0 - floor) / K), Z(K, 0.0);
        for (int k = 0; k < K; ++k) {
            const double l = rc.rate[k];
            fac[k] = -std::expm1(-l * dt) / (l * dt);
            hop[k] = std::exp(-l * cfg.obs_interval);
        }
        for (long o = 0; o < total; ++o) {
            std::fill(Z.begin(), Z.end(), 0.0);
            for (long s = 0; s < per_obs; ++s) {
                const double dl = inc(rng);
                if (dl <= 0.0) continue;
                const int k = pick(rng);
                // the increment lands at the end of step s and decays to the observation time
                const double rest = double(per_obs - 1 - s) * dt;
                Z[k] += fac[k] * lift(dl) * std::exp(-rc.rate[k] * rest);
            }
            detail::Neumaier x;
            x.add(floor);
            for (int k = 0; k < K; ++k) {
                Y[k] = Y[k] * hop[k] + Z[k];
                x.add(Y[k]);
            }
            const double X = x.value();
            if (!std::isfinite(X))
                throw convergence_error("simulate: non-finite state at step " + std::to_string((o + 1) * per_obs));
            if (o >= burn_obs) out.push_back(X);
        }
    });

    std::vector<double> all;
    all.reserve(std::size_t(n_obs) * cfg.n_paths);
    for (auto& p : paths) all.insert(all.end(), p.begin(), p.end());
    PathSummary sum;
    sum.observations = all.size();
    sum.steps = (burn_obs + n_obs) * per_obs * cfg.n_paths;
    sum.min_value = *std::min_element(all.begin(), all.end());
    if (model.jump.is_zero()) {
        sum.stats.ave = all.empty() ? floor : all.back();
    } else {
        sum.stats = empirical_moments(all);
        BinConfig bc;
        bc.bins = cfg.histogram_bins;
        bc.log_bins = true;
        sum.stats.histogram = empirical_pdf(all, bc);
    }
    if (cfg.keep_series) sum.series = std::move(all);
    return sum;
}

// Jumps of the driving subordinator in z: exact compound Poisson above a cutoff,
// mean drift below it.
struct JumpSampler {
    enum class Kind { none, pareto, log, gamma };
    Kind kind = Kind::none;
    JumpMeasureParams j;
    double eps = 0.0, rate = 0.0, small_drift = 0.0;

    explicit JumpSampler(const JumpMeasureParams& jp, double small_fraction = 1e-6) : j(jp) {
        j.validate();
        if (j.is_zero()) return;
        const double a = j.a_nu, al = j.alpha_nu, b = j.b_nu, p = j.p_nu;
        if (al < 0.0) {
            kind = Kind::gamma;
            rate = a / p * std::pow(b, al / p) * boost::math::tgamma(-al / p);
            return;
        }
        const double M2 = levy_moment(j, 2);
        eps = std::pow(small_fraction * M2 * (2.0 - al) / a, 1.0 / (2.0 - al));
        const double ep = std::pow(eps, p);
        small_drift = a / p * std::pow(b, -(1.0 - al) / p) * boost::math::tgamma_lower((1.0 - al) / p, b * ep);
        if (al > 0.0) {
            kind = Kind::pareto;
            rate = a * std::exp(-b * ep) * std::pow(eps, -al) / al;
        } else {
            kind = Kind::log;
            rate = a / p * std::exp(-b * ep) / (ep * b);
        }
    }

    // proposed jump size; 0 means the proposal was thinned away
    template <class URNG>
    double propose(URNG& rng) const {
        std::uniform_real_distribution<double> U(0.0, 1.0);
        const double p = j.p_nu, b = j.b_nu;
        switch (kind) {
            case Kind::none:
                return 0.0;
            case Kind::gamma: {
                std::gamma_distribution<double> g(-j.alpha_nu / p, 1.0 / b);
                return std::pow(g(rng), 1.0 / p);
            }
            case Kind::pareto: {
                const double z = eps * std::pow(1.0 - U(rng), -1.0 / j.alpha_nu);
                return U(rng) < std::exp(-b * (std::pow(z, p) - std::pow(eps, p))) ? z : 0.0;
            }
            case Kind::log: {
                const double ep = std::pow(eps, p);
                std::exponential_distribution<double> E(b);
                const double y = ep + E(rng);
                return U(rng) < ep / y ? std::pow(y, 1.0 / p) : 0.0;
            }
        }
        return 0.0;
    }
};

inline PathSummary simulate_controlled(const SupOUModel& model, const MarkovianLift& L, const RiccatiSolution& sol,
                                       const ControlProblem& prob, const SimConfig& cfg) {
    model.validate();
    cfg.validate();
    prob.validate();
    if (cfg.scheme != SimScheme::controlled_lift) throw domain_error("simulate_controlled: wrong scheme");
    if (sol.n != L.n || sol.lambda != L.lambda || sol.c != L.c)
        throw domain_error("simulate_controlled: Riccati solution belongs to a different lift");
    if (std::fabs(sol.period - prob.period) > 1e-9 * prob.period || sol.w != prob.w)
        throw domain_error("simulate_controlled: Riccati solution belongs to a different problem");
    if (cfg.dt > 0.0 && std::fabs(cfg.dt - sol.dt) > 1e-12 * sol.dt)
        throw domain_error("simulate_controlled: dt must equal the Riccati grid step");
    const double dt = sol.dt;
    const double P = prob.period;
    const long per_period = sol.steps;
    const long periods = std::max(1L, std::lround(cfg.horizon / P));
    const long burn = cfg.burn_in >= 0.0 ? static_cast<long>(std::ceil(cfg.burn_in / P - 1e-9)) : 1L;
    const int n = L.n;
    const JumpSampler js(model.jump, cfg.small_jump_fraction);
    const double M1 = model.jump.is_zero() ? 0.0 : levy_moment(model.jump, 1);

    // component choice for an accepted jump; the last slot is the tail mass, which drops the jump
    std::vector<double> wts(L.c);
    wts.push_back(std::max(0.0, 1.0 - L.weight_sum()));

    // w'(t) and xbar(t) on the step grid, shared by every path
    std::vector<double> wp(per_period), xb(per_period);
    for (long k = 0; k < per_period; ++k) {
        wp[k] = prob.wprime(k * dt);
        xb[k] = prob.xbar(k * dt);
    }

    struct Batches {
        std::vector<double> dev, ctl;
    };
    std::vector<Batches> res(cfg.n_paths);
    parallel_for(cfg.n_paths, resolve_threads(cfg.threads), [&](int path) {
        Rng rng = make_stream(cfg.seed, static_cast<std::uint64_t>(path));
        std::discrete_distribution<int> comp(wts.begin(), wts.end());
        std::exponential_distribution<double> wait(js.rate > 0.0 ? js.rate : 1.0);
        std::vector<double> x(n), D(n);
        for (int i = 0; i < n; ++i) x[i] = L.c[i] * M1 / L.lambda[i];
        double next = js.rate > 0.0 ? wait(rng) : HUGE_VAL;
        double clock = 0.0;  // time since the path started, for the jump clock
        for (long per = 0; per < burn + periods; ++per) {
            detail::Neumaier dev, ctl;
            for (long k = 0; k < per_period; ++k) {
                const double t = k * dt;
                double cb;
                sol.feedback_at(t, D.data(), cb);
                double sx = 0.0, fx = cb;
                for (int i = 0; i < n; ++i) {
                    sx += x[i];
                    fx += D[i] * x[i];
                }
                const double u = -fx / prob.w;
                const double e = sx - xb[k];
                dev.add(0.5 * wp[k] * e * e);
                ctl.add(0.5 * u * u);
                for (int i = 0; i < n; ++i) x[i] += dt * (-L.lambda[i] * x[i] + L.c[i] * (u + js.small_drift));
                clock += dt;
                while (next < clock) {
                    const double z = js.propose(rng);
                    if (z > 0.0) {
                        const int i = comp(rng);
                        if (i < n) x[i] += z;
                    }
                    next += wait(rng);
                }
            }
            for (int i = 0; i < n; ++i)
                if (!std::isfinite(x[i]))
                    throw convergence_error("simulate: non-finite state at step " +
                                            std::to_string((per + 1) * per_period));
            if (per >= burn) {
                res[path].dev.push_back(dev.value() * dt / P);
                res[path].ctl.push_back(ctl.value() * dt / P);
            }
        }
    });

    std::vector<double> dev, ctl, tot;
    for (auto& r : res) {
        dev.insert(dev.end(), r.dev.begin(), r.dev.end());
        ctl.insert(ctl.end(), r.ctl.begin(), r.ctl.end());
    }
    for (std::size_t k = 0; k < dev.size(); ++k) tot.push_back(dev[k] + prob.w * ctl[k]);
    PathSummary sum;
    sum.batches = dev.size();
    sum.steps = (burn + periods) * per_period * cfg.n_paths;
    sum.deviation = detail::mean_se(dev, sum.deviation_se);
    sum.control = detail::mean_se(ctl, sum.control_se);
    sum.total = detail::mean_se(tot, sum.total_se);
    return sum;
}

}  // namespace supou
