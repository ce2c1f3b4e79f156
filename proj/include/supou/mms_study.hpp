#pragma once

#include <chrono>
#include <cmath>
#include <vector>

#include "supou/lift.hpp"
#include "supou/mms.hpp"
#include "supou/parallel.hpp"
#include "supou/riccati.hpp"

namespace supou {

struct MMSRow {
    int n = 0;
    double H = 0.0;
    double e_n = 0.0;  // |H - H_exact| / H_exact
    double rate = NAN;  // log(e_n / e_next) / log(n_next / n); NaN on the last row
    double linf_Gamma = 0.0, linf_gamma = 0.0;
    double rate_Gamma = NAN, rate_gamma = NAN;
    double min_rel_eig = 0.0;
    int cycles = 0;
    double seconds = 0.0;
};

struct MMSStudy {
    double beta = 0.5;
    double H_exact = 0.0;
    std::vector<MMSRow> rows;
};

inline double convergence_rate(double e_n, double e_next, int n, int n_next) {
    return std::log(e_n / e_next) / std::log(double(n_next) / double(n));
}

// One sourced Riccati solve per n; rates are taken between consecutive entries of ns.
inline MMSStudy run_mms_convergence(const ControlProblem& prob, const MMSConfig& cfg, double beta, double eta_bar,
                                    const std::vector<int>& ns, const RiccatiOptions& opt = {}, int threads = 1) {
    MMSStudy st;
    st.beta = beta;
    st.H_exact = mms_exact_hamiltonian(cfg, prob);
    st.rows.resize(ns.size());
    parallel_for(static_cast<int>(ns.size()), threads, [&](int k) {
        const auto t0 = std::chrono::steady_clock::now();
        const MarkovianLift L = build_lift(prob.model.mixing, ns[k], beta, eta_bar);
        const RiccatiSolution sol = solve_manufactured_riccati(prob, L, cfg, opt);
        MMSRow& r = st.rows[k];
        r.n = ns[k];
        r.H = sol.H;
        r.e_n = std::fabs(sol.H - st.H_exact) / std::fabs(st.H_exact);
        r.linf_Gamma = sol.linf_gamma_A;
        r.linf_gamma = sol.linf_gamma_B;
        r.min_rel_eig = min_relative_eigenvalue(sol);
        r.cycles = sol.cycles;
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    });
    for (std::size_t k = 0; k + 1 < st.rows.size(); ++k) {
        auto& a = st.rows[k];
        const auto& b = st.rows[k + 1];
        a.rate = convergence_rate(a.e_n, b.e_n, a.n, b.n);
        a.rate_Gamma = convergence_rate(a.linf_Gamma, b.linf_Gamma, a.n, b.n);
        a.rate_gamma = convergence_rate(a.linf_gamma, b.linf_gamma, a.n, b.n);
    }
    return st;
}

}  // namespace supou
