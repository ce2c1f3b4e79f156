#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "supou/error.hpp"
#include "supou/lift.hpp"
#include "supou/parallel.hpp"
#include "supou/problem.hpp"
#include "supou/riccati.hpp"

// Long-run control energy C of the optimal feedback. With F_i = sum_j c_j S_ij:
//   dS_ij/ds = (l_i + l_j) S_ij + (D_i F_j + D_j F_i)/w - D_i D_j / w^2
//   dN_i/ds  = l_i N_i - M1 F_i + (cb/w) F_i + (cN/w) D_i - (cb/w^2) D_i
//   C = avg[(M2/2) sum c_i S_ii + M1 cN - cb cN / w + cb^2 / (2 w^2)]
// The Riccati coefficients are regenerated alongside by re-running the converged
// cycle from its stored start state, so no per-step storage of A is needed.
namespace supou {

struct KBEOptions {
    double tol = 1e-10;
    int max_cycles = 50;
    bool null_control = false;  // force A = B = 0 (u = 0)
};

struct KBESolution {
    int n = 0;
    std::vector<double> times;
    std::vector<double> S, N;  // snapshots on the Riccati snapshot grid
    double C = 0.0;
    int cycles = 0;
    double last_change = 0.0;

    const double* S_at(std::size_t k) const { return S.data() + k * n * n; }
};

inline KBESolution solve_periodic_kbe(const RiccatiSolution& ric, const ControlProblem& prob, const MarkovianLift& L,
                                      const KBEOptions& opt = {}) {
    prob.validate();
    const int n = L.n;
    if (ric.n != n || ric.c != L.c || ric.lambda != L.lambda) throw domain_error("kbe: lift does not match the Riccati solution");
    if (ric.period != prob.period || ric.w != prob.w) throw domain_error("kbe: problem does not match the Riccati solution");
    const double dt = ric.dt;
    const long steps = ric.steps;
    if (std::fabs(steps * dt - prob.period) > 1e-9 * prob.period) throw domain_error("kbe: grid mismatch");

    detail::RiccatiCore core(L, prob);
    const double M1 = core.M1, M2 = core.M2, w = prob.w, iw = 1.0 / w, iw2 = iw * iw;
    const auto& c = L.c;
    const auto& lam = L.lambda;

    KBESolution sol;
    sol.n = n;
    sol.times = ric.times;
    const std::size_t K = ric.snapshots() - 1;
    sol.S.assign((K + 1) * n * n, 0.0);
    sol.N.assign((K + 1) * n, 0.0);

    std::vector<double> A(n * n), Bv(n), S(n * n, 0.0), Nv(n, 0.0), F(n), S0, N0;
    for (int cyc = 1; cyc <= opt.max_cycles; ++cyc) {
        if (opt.null_control) {
            std::fill(A.begin(), A.end(), 0.0);
            std::fill(Bv.begin(), Bv.end(), 0.0);
        } else {
            A = ric.A_P;
            Bv = ric.B_P;
        }
        S0 = S;
        N0 = Nv;
        double csum = 0.0;
        for (long k = steps; k >= 0; --k) {
            const double s = k * dt;
            if (opt.null_control) {
                std::fill(core.D.begin(), core.D.end(), 0.0);
                core.cb = 0.0;
            } else {
                core.feedback(A.data(), Bv.data());
            }
            const auto& D = core.D;
            const double cb = core.cb;
            double cN = 0.0, trS = 0.0;
            for (int i = 0; i < n; ++i) {
                const double* row = S.data() + i * n;
                double f = 0.0;
                for (int j = 0; j < n; ++j) f += row[j] * c[j];
                F[i] = f;
                cN += c[i] * Nv[i];
                trS += c[i] * row[i];
            }
            if (k % ric.stride == 0) {
                const std::size_t idx = static_cast<std::size_t>(k / ric.stride);
                std::copy(S.begin(), S.end(), sol.S.begin() + idx * n * n);
                std::copy(Nv.begin(), Nv.end(), sol.N.begin() + idx * n);
            }
            if (k == 0) break;
            csum += 0.5 * M2 * trS + M1 * cN - iw * cb * cN + 0.5 * iw2 * cb * cb;
            for (int i = 0; i < n; ++i) {
                double* row = S.data() + i * n;
                const double li = lam[i], Di = D[i], Fi = F[i];
                for (int j = 0; j < n; ++j)
                    row[j] -= dt * ((li + lam[j]) * row[j] + iw * (Di * F[j] + D[j] * Fi) - iw2 * Di * D[j]);
            }
            for (int i = 0; i < n; ++i)
                Nv[i] -= dt * (lam[i] * Nv[i] - M1 * F[i] + iw * cb * F[i] + iw * cN * D[i] - iw2 * cb * D[i]);
            if (!opt.null_control) core.step(s, dt, A.data(), Bv.data(), nullptr);
        }
        double change = 0.0;
        for (int i = 0; i < n * n; ++i) change = std::max(change, std::fabs(S[i] - S0[i]));
        for (int i = 0; i < n; ++i) change = std::max(change, std::fabs(Nv[i] - N0[i]));
        if (!std::isfinite(change)) throw convergence_error("kbe: solution blew up", change);
        sol.C = csum * dt / prob.period;
        sol.cycles = cyc;
        sol.last_change = change;
        if (change < opt.tol) return sol;
    }
    throw convergence_error("kbe: no periodic fixed point after " + std::to_string(opt.max_cycles) + " cycles",
                            sol.last_change);
}

// Period average of the C integrand on the stored snapshots.
inline double controlling_cost(const KBESolution& kbe, const RiccatiSolution& ric, const MarkovianLift& L,
                               const ControlProblem& prob) {
    const int n = L.n;
    const double M1 = prob.model.jump.is_zero() ? 0.0 : levy_moment(prob.model.jump, 1);
    const double M2 = prob.model.jump.is_zero() ? 0.0 : levy_moment(prob.model.jump, 2);
    const double w = prob.w;
    const std::size_t K = kbe.times.size() - 1;
    double s = 0.0;
    for (std::size_t k = 1; k <= K; ++k) {
        const double* S = kbe.S_at(k);
        const double* N = kbe.N.data() + k * n;
        double trS = 0.0, cN = 0.0;
        for (int i = 0; i < n; ++i) {
            trS += L.c[i] * S[i * n + i];
            cN += L.c[i] * N[i];
        }
        const double cb = ric.cB[k];
        s += 0.5 * M2 * trS + M1 * cN - cb * cN / w + cb * cb / (2.0 * w * w);
    }
    return s / double(K);
}

struct FrontierPoint {
    double w = 0.0, J = 0.0, C = 0.0, D = 0.0;
    int riccati_cycles = 0, kbe_cycles = 0;
    double min_rel_eig = 0.0;
    std::string error;  // non-empty if this w failed
};

struct FrontierOptions {
    RiccatiOptions riccati;
    KBEOptions kbe;
    int threads = 1;
    bool check_psd = true;
};

// Fig. 8 style weight list w_i = 10^{-2 + i/25}; `every` subsamples the index.
inline std::vector<double> paper_weights(int every = 1) {
    std::vector<double> w;
    for (int i = 0; i <= 100; i += every) w.push_back(std::pow(10.0, -2.0 + i / 25.0));
    return w;
}

inline FrontierPoint frontier_point(const ControlProblem& tmpl, const MarkovianLift& L, double w,
                                    const FrontierOptions& opt) {
    FrontierPoint p;
    p.w = w;
    ControlProblem prob = tmpl;
    prob.w = w;
    const RiccatiSolution ric = solve_periodic_riccati(prob, L, opt.riccati);
    const KBESolution kbe = solve_periodic_kbe(ric, prob, L, opt.kbe);
    p.J = ric.H;
    p.C = kbe.C;
    p.D = p.J - w * p.C;
    p.riccati_cycles = ric.cycles;
    p.kbe_cycles = kbe.cycles;
    p.min_rel_eig = opt.check_psd ? min_relative_eigenvalue(ric) : NAN;
    return p;
}

// One Riccati + KBE pipeline per weight; failures are recorded per point.
inline std::vector<FrontierPoint> frontier(const ControlProblem& tmpl, const MarkovianLift& L,
                                           const std::vector<double>& ws, const FrontierOptions& opt = {}) {
    for (double w : ws)
        if (!(w > 0.0)) throw domain_error("frontier: weights must be positive");
    std::vector<FrontierPoint> pts(ws.size());
    parallel_for(static_cast<int>(ws.size()), opt.threads, [&](int i) {
        try {
            pts[i] = frontier_point(tmpl, L, ws[i], opt);
        } catch (const std::exception& e) {
            pts[i].w = ws[i];
            pts[i].J = pts[i].C = pts[i].D = NAN;
            pts[i].error = e.what();
        }
    });
    std::stable_sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.C < b.C; });
    return pts;
}

struct Crossing {
    double w = 0.0, C = 0.0;
};

// Where D = c_factor * std2 along the frontier, interpolating linearly in (log C, log D).
inline Crossing guarantee_crossing(const std::vector<FrontierPoint>& pts, double c_factor, double std2) {
    const double target = c_factor * std2;
    std::vector<FrontierPoint> p;
    for (const auto& q : pts)
        if (q.error.empty() && q.C > 0.0 && q.D > 0.0) p.push_back(q);
    std::sort(p.begin(), p.end(), [](const auto& a, const auto& b) { return a.C < b.C; });
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k].D == target) return {p[k].w, p[k].C};
        if (k + 1 < p.size() && (p[k].D - target) * (p[k + 1].D - target) < 0.0) {
            const double f = (std::log(target) - std::log(p[k].D)) / (std::log(p[k + 1].D) - std::log(p[k].D));
            const double lc = std::log(p[k].C) + f * (std::log(p[k + 1].C) - std::log(p[k].C));
            const double lw = std::log(p[k].w) + f * (std::log(p[k + 1].w) - std::log(p[k].w));
            return {std::exp(lw), std::exp(lc)};
        }
    }
    throw domain_error("guarantee_crossing: D = " + std::to_string(target) + " is not bracketed by the frontier");
}

// Smallest second difference of D against C, divided by the D scale (convexity check).
inline double frontier_convexity(const std::vector<FrontierPoint>& pts) {
    double worst = HUGE_VAL, scale = 0.0;
    for (const auto& q : pts) scale = std::max(scale, std::fabs(q.D));
    for (std::size_t k = 1; k + 1 < pts.size(); ++k) {
        const auto &a = pts[k - 1], &b = pts[k], &c = pts[k + 1];
        // slope increase between consecutive chords
        const double s1 = (b.D - a.D) / (b.C - a.C), s2 = (c.D - b.D) / (c.C - b.C);
        worst = std::min(worst, (s2 - s1) * (c.C - a.C) / scale);
    }
    return worst;
}

}  // namespace supou
