#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "supou/error.hpp"
#include "supou/lift.hpp"
#include "supou/mms.hpp"
#include "supou/model.hpp"
#include "supou/problem.hpp"

// Periodic Riccati system of the lifted LQ problem, integrated backward in time:
//   dA_ij/ds = (l_i + l_j) A_ij + D_i D_j / w - w'(s)
//   dB_i/ds  = l_i B_i + (D_i / w) sum_j c_j B_j - M1 D_i + w'(s) xbar(s)
// with D_i = sum_j c_j A_ij, stepped as A(s - dt) = A(s) - dt dA/ds.
namespace supou {

struct RiccatiOptions {
    double dt = 0.0;               // 0 selects 1/n h
    double tol = 1e-10;            // max-norm change of (A, B) over one cycle
    int max_cycles = 50;
    double snapshot_every_h = 6.0;
    double max_snapshot_doubles = 2e7;
    double blowup = 1e12;
};

struct RiccatiSolution {
    int n = 0;
    double dt = 0.0;
    long steps = 0;    // N_t
    long stride = 1;   // solver steps between snapshots
    double period = 0.0;
    double w = 1.0;
    std::vector<double> c, lambda;
    std::vector<double> times;  // snapshot k sits at t = k * stride * dt
    std::vector<double> A, B, D, cB;
    double H = 0.0;
    int cycles = 0;
    double last_change = 0.0;
    std::vector<double> A_P, B_P;  // state at s = P that starts the converged cycle
    // manufactured runs only: max error against the exact solution over all nodes, sampled at the snapshots
    double linf_gamma_A = NAN, linf_gamma_B = NAN;

    std::size_t snapshots() const { return times.size(); }
    const double* A_at(std::size_t k) const { return A.data() + k * n * n; }
    const double* B_at(std::size_t k) const { return B.data() + k * n; }
    const double* D_at(std::size_t k) const { return D.data() + k * n; }

    // D(t) and sum c B(t), linear in time between snapshots, t wrapped into [0, P)
    void feedback_at(double t, double* Dout, double& cb) const {
        double s = std::fmod(t, period);
        if (s < 0.0) s += period;
        const double h = stride * dt;
        std::size_t k = static_cast<std::size_t>(s / h);
        if (k >= snapshots() - 1) k = snapshots() - 2;
        const double f = (s - times[k]) / h;
        const double* d0 = D_at(k);
        const double* d1 = D_at(k + 1);
        for (int i = 0; i < n; ++i) Dout[i] = (1.0 - f) * d0[i] + f * d1[i];
        cb = (1.0 - f) * cB[k] + f * cB[k + 1];
    }
};

namespace detail {

struct MMSForcing {
    const MMSConfig* cfg = nullptr;
    std::vector<double> e;  // exp(-b_gamma lambda_i)
    std::vector<double> u, v;
    double T = 1.0, T2 = 1.0;
    double errA = 0.0, errB = 0.0;

    // max-norm distance of (A, B) from the exact solution at time s
    void record_error(int n, double P, double s, const double* A, const double* B) {
        const double a = cfg->a_gamma(s, P), c = cfg->c_gamma(s, P);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) errA = std::max(errA, std::fabs(A[i * n + j] - a * e[i] * e[j]));
            errB = std::max(errB, std::fabs(B[i] - c * e[i]));
        }
    }
};

// Constant data of one lifted problem plus scratch space for the sweep.
struct RiccatiCore {
    int n;
    const std::vector<double>& c;
    const std::vector<double>& lam;
    const ControlProblem& prob;
    double M1, M2, w;
    std::vector<double> D;
    double cb = 0.0;

    RiccatiCore(const MarkovianLift& L, const ControlProblem& p)
        : n(L.n), c(L.c), lam(L.lambda), prob(p), w(p.w), D(L.n) {
        M1 = p.model.jump.is_zero() ? 0.0 : levy_moment(p.model.jump, 1);
        M2 = p.model.jump.is_zero() ? 0.0 : levy_moment(p.model.jump, 2);
    }

    void feedback(const double* A, const double* B) {
        cb = 0.0;
        for (int i = 0; i < n; ++i) {
            const double* row = A + i * n;
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += row[j] * c[j];
            D[i] = s;
            cb += c[i] * B[i];
        }
    }

    double hamiltonian_integrand(const double* A, double wp, double xb) const {
        double tr = 0.0;
        for (int i = 0; i < n; ++i) tr += c[i] * A[i * n + i];
        return -cb * cb / (2.0 * w) + 0.5 * M2 * tr + M1 * cb + 0.5 * wp * xb * xb;
    }

    // One backward Euler-in-s step at time s; feedback() must be current.
    void step(double s, double dt, double* A, double* B, MMSForcing* mms) {
        const double P = prob.period;
        const double wp = prob.wprime(s), xb = prob.xbar(s);
        const double iw = 1.0 / w;
        if (!mms) {
            for (int i = 0; i < n; ++i) {
                double* row = A + i * n;
                const double li = lam[i], Di = D[i] * iw;
                for (int j = 0; j < n; ++j)
                    row[j] -= dt * ((li + lam[j]) * row[j] + Di * D[j] - wp);
            }
            for (int i = 0; i < n; ++i)
                B[i] -= dt * (lam[i] * B[i] + D[i] * iw * cb - M1 * D[i] + wp * xb);
            return;
        }
        // sourced system: -w' - f = (1 - w') - qa_ij and w' xbar - g = (w' - 1) xbar - qc_i
        const MMSSourceParts q = mms_parts(*mms->cfg, prob.model.mixing, P, s);
        const double* e = mms->e.data();
        const double k0 = -q.da + q.a * q.a * q.T2 * iw;
        const double extra = 1.0 - wp;  // zero unless the weight is not one
        // qa_ij = e_i (u_j + l_i v_j) with u_j = e_j (k0 + a l_j), v_j = a e_j; exact Gamma_ij = e_i v_j
        double* u = mms->u.data();
        double* v = mms->v.data();
        for (int j = 0; j < n; ++j) {
            v[j] = q.a * e[j];
            u[j] = e[j] * (k0 + q.a * lam[j]);
        }
        for (int i = 0; i < n; ++i) {
            double* row = A + i * n;
            const double li = lam[i], Di = D[i] * iw, ei = e[i];
            for (int j = 0; j < n; ++j)
                row[j] -= dt * ((li + lam[j]) * row[j] + Di * D[j] - ei * (u[j] + li * v[j]) + extra);
        }
        for (int i = 0; i < n; ++i) {
            const double qc = (-q.dc + lam[i] * q.c + q.a * q.c * q.T2 * iw - M1 * q.a * q.T) * e[i];
            B[i] -= dt * (lam[i] * B[i] + D[i] * iw * cb - M1 * D[i] - qc + (wp - 1.0) * xb);
        }
    }
};

inline long steps_for(double P, double dt) {
    const double r = P / dt;
    const long N = std::lround(r);
    if (N < 1 || std::fabs(r - N) > 1e-9 * r) throw domain_error("dt must divide the period");
    return N;
}

}  // namespace detail

inline double default_dt(int n) { return 1.0 / n; }

// Pure evaluation of the right-hand side (row-major A).
inline void riccati_rhs(const std::vector<double>& A, const std::vector<double>& B, double t,
                        const ControlProblem& prob, const MarkovianLift& L, std::vector<double>& dA,
                        std::vector<double>& dB) {
    detail::RiccatiCore core(L, prob);
    const int n = L.n;
    core.feedback(A.data(), B.data());
    const double wp = prob.wprime(t), xb = prob.xbar(t);
    dA.assign(n * n, 0.0);
    dB.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            dA[i * n + j] = (L.lambda[i] + L.lambda[j]) * A[i * n + j] + core.D[i] * core.D[j] / prob.w - wp;
        dB[i] = L.lambda[i] * B[i] + core.D[i] / prob.w * core.cb - core.M1 * core.D[i] + wp * xb;
    }
}

namespace detail {

inline RiccatiSolution solve_riccati_impl(const ControlProblem& prob, const MarkovianLift& L,
                                          const RiccatiOptions& opt, const MMSConfig* mms_cfg) {
    prob.validate();
    const int n = L.n;
    RiccatiSolution sol;
    sol.n = n;
    sol.dt = opt.dt > 0.0 ? opt.dt : default_dt(n);
    sol.period = prob.period;
    sol.w = prob.w;
    sol.c = L.c;
    sol.lambda = L.lambda;
    sol.steps = steps_for(prob.period, sol.dt);
    long stride = std::max(1L, std::lround(opt.snapshot_every_h / sol.dt));
    while (double(sol.steps / stride + 1) * (n * n + 2 * n + 1) > opt.max_snapshot_doubles && stride < sol.steps)
        stride *= 2;
    // snapshots must land on t = P as well
    while (sol.steps % stride != 0) --stride;
    sol.stride = stride;
    const std::size_t K = static_cast<std::size_t>(sol.steps / stride);
    sol.times.resize(K + 1);
    for (std::size_t k = 0; k <= K; ++k) sol.times[k] = double(k) * stride * sol.dt;
    sol.A.assign((K + 1) * n * n, 0.0);
    sol.B.assign((K + 1) * n, 0.0);
    sol.D.assign((K + 1) * n, 0.0);
    sol.cB.assign(K + 1, 0.0);

    RiccatiCore core(L, prob);
    std::optional<MMSForcing> mms;
    if (mms_cfg) {
        mms_cfg->validate(prob.period);
        mms.emplace();
        mms->cfg = mms_cfg;
        mms->e.resize(n);
        mms->u.resize(n);
        mms->v.resize(n);
        for (int i = 0; i < n; ++i) mms->e[i] = std::exp(-mms_cfg->b_gamma * L.lambda[i]);
        mms->T = gamma_transform(prob.model.mixing, mms_cfg->b_gamma);
        mms->T2 = mms->T * mms->T;
    }

    std::vector<double> A(n * n, 0.0), Bv(n, 0.0), A0, B0;
    const double dt = sol.dt;
    auto store = [&](std::size_t k) {
        std::copy(A.begin(), A.end(), sol.A.begin() + k * n * n);
        std::copy(Bv.begin(), Bv.end(), sol.B.begin() + k * n);
        std::copy(core.D.begin(), core.D.end(), sol.D.begin() + k * n);
        sol.cB[k] = core.cb;
    };

    for (int cyc = 1; cyc <= opt.max_cycles; ++cyc) {
        A0 = A;
        B0 = Bv;
        if (mms) mms->errA = mms->errB = 0.0;
        double hsum = 0.0;
        for (long k = sol.steps; k >= 1; --k) {
            const double s = k * dt;
            core.feedback(A.data(), Bv.data());
            if (k % stride == 0) {
                store(static_cast<std::size_t>(k / stride));
                if (mms) mms->record_error(n, prob.period, s, A.data(), Bv.data());
            }
            hsum += core.hamiltonian_integrand(A.data(), prob.wprime(s), prob.xbar(s));
            core.step(s, dt, A.data(), Bv.data(), mms ? &*mms : nullptr);
        }
        core.feedback(A.data(), Bv.data());
        store(0);
        if (mms) mms->record_error(n, prob.period, 0.0, A.data(), Bv.data());
        double change = 0.0, amax = 0.0;
        for (int i = 0; i < n * n; ++i) {
            change = std::max(change, std::fabs(A[i] - A0[i]));
            amax = std::max(amax, std::fabs(A[i]));
        }
        for (int i = 0; i < n; ++i) change = std::max(change, std::fabs(Bv[i] - B0[i]));
        if (!std::isfinite(change) || amax > opt.blowup)
            throw convergence_error("riccati: solution blew up in cycle " + std::to_string(cyc), change);
        sol.H = hsum * dt / prob.period;
        sol.cycles = cyc;
        sol.last_change = change;
        sol.A_P = A0;
        sol.B_P = B0;
        if (mms) {
            sol.linf_gamma_A = mms->errA;
            sol.linf_gamma_B = mms->errB;
        }
        if (change < opt.tol) return sol;
    }
    throw convergence_error("riccati: no periodic fixed point after " + std::to_string(opt.max_cycles) +
                                " cycles (last change " + std::to_string(sol.last_change) + ")",
                            sol.last_change);
}

}  // namespace detail

inline RiccatiSolution solve_periodic_riccati(const ControlProblem& prob, const MarkovianLift& L,
                                              const RiccatiOptions& opt = {}) {
    return detail::solve_riccati_impl(prob, L, opt, nullptr);
}

// Sourced system whose exact solution is the manufactured (Gamma, gamma).
inline RiccatiSolution solve_manufactured_riccati(const ControlProblem& prob, const MarkovianLift& L,
                                                  const MMSConfig& cfg, const RiccatiOptions& opt = {}) {
    return detail::solve_riccati_impl(prob, L, opt, &cfg);
}

// Period average of the Hamiltonian integrand on the stored snapshots. The solver
// already records H on the full grid; this is the snapshot-resolution recomputation.
inline double effective_hamiltonian(const RiccatiSolution& sol, const ControlProblem& prob, const MarkovianLift& L) {
    detail::RiccatiCore core(L, prob);
    double s = 0.0;
    const std::size_t K = sol.snapshots() - 1;
    for (std::size_t k = 1; k <= K; ++k) {
        core.feedback(sol.A_at(k), sol.B_at(k));
        s += core.hamiltonian_integrand(sol.A_at(k), prob.wprime(sol.times[k]), prob.xbar(sol.times[k]));
    }
    return s / double(K);
}

inline double optimal_control(const RiccatiSolution& sol, double t, const std::vector<double>& x) {
    std::vector<double> D(sol.n);
    double cb = 0.0;
    sol.feedback_at(t, D.data(), cb);
    double s = cb;
    for (int i = 0; i < sol.n; ++i) s += D[i] * x[i];
    return -s / sol.w;
}

// min_i lambda_i - (1/w) |c|_2 |diag(c) A|_F at every snapshot
inline std::vector<double> dissipativity_margin(const RiccatiSolution& sol) {
    const int n = sol.n;
    const double lmin = *std::min_element(sol.lambda.begin(), sol.lambda.end());
    double cn = 0.0;
    for (double v : sol.c) cn += v * v;
    cn = std::sqrt(cn);
    std::vector<double> out(sol.snapshots());
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double* A = sol.A_at(k);
        double f = 0.0;
        for (int r = 0; r < n; ++r)
            for (int j = 0; j < n; ++j) {
                const double v = sol.c[r] * A[r * n + j];
                f += v * v;
            }
        out[k] = lmin - cn * std::sqrt(f) / sol.w;
    }
    return out;
}

// Smallest value of min_eig(A(t)) / max(|A(t)|_inf, tiny) over the stored snapshots.
inline double min_relative_eigenvalue(const RiccatiSolution& sol) {
    const int n = sol.n;
    double worst = HUGE_VAL;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    for (std::size_t k = 0; k < sol.snapshots(); ++k) {
        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> A(sol.A_at(k), n, n);
        es.compute(A, Eigen::EigenvaluesOnly);
        const double nrm = std::max(A.cwiseAbs().maxCoeff(), 1e-300);
        worst = std::min(worst, es.eigenvalues().minCoeff() / nrm);
    }
    return worst;
}

inline double max_asymmetry(const RiccatiSolution& sol) {
    const int n = sol.n;
    double m = 0.0;
    for (std::size_t k = 0; k < sol.snapshots(); ++k) {
        const double* A = sol.A_at(k);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) m = std::max(m, std::fabs(A[i * n + j] - A[j * n + i]));
    }
    return m;
}

}  // namespace supou
