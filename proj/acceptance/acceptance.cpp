// Acceptance run: one PASS/FAIL line per criterion, details indented below it.
// Usage: acceptance [criterion numbers...]   (default: all)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "../tests/reference_riccati.hpp"
#include "supou.hpp"

using namespace supou;

namespace {

// tolerances, all in one place
constexpr double kManufacturedH = 46.2495;
constexpr double kManufacturedTol = 5e-5;  // 4 decimals
constexpr double kManufacturedSeconds = 1.0;
constexpr double kTable5Tol = 5e-3;
constexpr double kRateTol = 0.30;
constexpr double kLinfFactor = 2.0;
constexpr double kGapSpread = 10.0;
constexpr double kPsdTol = 1e-8;
constexpr double kOracleExact = 1e-10;
constexpr double kOracleTol = 1e-3;
constexpr double kMcAve = 0.03, kMcStd = 0.10, kMcSkew = 0.30, kMcKurt = 0.50;
constexpr double kMcSigmas = 3.0;
constexpr double kConvexTol = 1e-6;
constexpr double kGuarantee = 0.05;
constexpr double kFitObjective = 1e-8;
constexpr double kExactRecovery = 1e-3;
constexpr double kMixingRecovery = 0.10;
constexpr double kReductionTol = 1e-12;

constexpr int kFrontierN = 20;
constexpr int kControlledN = 20;
constexpr int kFrontierEvery = 5;  // 21 of the 101 weights
constexpr double kMcYears = 200.0;
constexpr double kControlledYears = 200.0;
constexpr std::uint64_t kSeed = 20240601;

double g_min_rel_eig = HUGE_VAL;
long g_psd_solutions = 0;
std::vector<double> g_series;  // criterion 7 output, refitted by criterion 10

void note_psd(double v) {
    g_min_rel_eig = std::min(g_min_rel_eig, v);
    ++g_psd_solutions;
}

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool report(int k, bool pass, const std::string& what) {
    std::printf("CRITERION %d %s: %s\n", k, pass ? "PASS" : "FAIL", what.c_str());
    std::fflush(stdout);
    return pass;
}

bool criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    const double H = mms_exact_hamiltonian(MMSConfig{}, mms_problem(presets::station_y()));
    const double secs = seconds_since(t0);
    std::printf("  H_manufactured = %.6f (%.3f s)\n", H, secs);
    return report(1, std::fabs(H - kManufacturedH) <= kManufacturedTol && secs < kManufacturedSeconds,
                  "manufactured Hamiltonian 46.2495 to 4 decimals in under 1 s");
}

const std::vector<int> kMmsN{10, 20, 40, 80};

MMSStudy mms_study(double beta) {
    const auto prob = mms_problem(presets::station_y());
    RiccatiOptions o;
    MMSStudy st = run_mms_convergence(prob, MMSConfig{}, beta, 0.02, kMmsN, o, resolve_threads());
    for (const auto& r : st.rows) {
        note_psd(r.min_rel_eig);
        std::printf("  beta %.1f n %3d H %.4f e_n %.3e rate %6.3f linf(Gamma) %.3e linf(gamma) %.3e (%d cycles, %.1f s)\n",
                    beta, r.n, r.H, r.e_n, r.rate, r.linf_Gamma, r.linf_gamma, r.cycles, r.seconds);
    }
    return st;
}

MMSStudy g_beta05;

bool criterion2() {
    g_beta05 = mms_study(0.5);
    const double Hp[] = {45.9120, 46.0756, 46.1811, 46.2319};
    const double rp[] = {0.957, 1.35, 1.96};
    bool ok = true;
    for (std::size_t k = 0; k < 4; ++k) {
        const auto& r = g_beta05.rows[k];
        ok &= std::fabs(r.H - Hp[k]) <= kTable5Tol;
        if (k > 0) ok &= r.e_n < g_beta05.rows[k - 1].e_n;
        if (k < 3) ok &= std::fabs(r.rate - rp[k]) <= kRateTol * rp[k];
    }
    return report(2, ok, "beta = 0.5 Hamiltonians within 5e-3, e_n decreasing, rates within 30%");
}

bool criterion3() {
    if (g_beta05.rows.empty()) g_beta05 = mms_study(0.5);
    const MMSStudy b02 = mms_study(0.2);
    const MMSStudy b08 = mms_study(0.8);
    const double G02[] = {3.90e-2, 4.25e-3, 6.86e-5, 4.60e-6}, g02[] = {1.86e-1, 2.24e-2, 3.73e-4, 9.64e-6};
    const double G05[] = {2.86e-1, 1.78e-1, 9.30e-2, 3.44e-2}, g05[] = {1.57, 1.24, 7.44e-1, 2.98e-1};
    auto within = [](double v, double p) { return v <= kLinfFactor * p && v >= p / kLinfFactor; };
    bool ok = true;
    int misses = 0;
    for (int k = 0; k < 4; ++k) {
        for (auto [v, p] : {std::pair{b02.rows[k].linf_Gamma, G02[k]}, {b02.rows[k].linf_gamma, g02[k]},
                            {g_beta05.rows[k].linf_Gamma, G05[k]}, {g_beta05.rows[k].linf_gamma, g05[k]}})
            if (!within(v, p)) ++misses;
        if (k > 0) {
            // beta = 0.2 and 0.5 converge, beta = 0.8 does not
            ok &= b02.rows[k].linf_Gamma < b02.rows[k - 1].linf_Gamma;
            ok &= g_beta05.rows[k].linf_Gamma < g_beta05.rows[k - 1].linf_Gamma;
            ok &= b08.rows[k].linf_Gamma >= b08.rows[k - 1].linf_Gamma;
            ok &= b08.rows[k].linf_gamma >= b08.rows[k - 1].linf_gamma;
        }
    }
    for (int k = 0; k < 3; ++k) ok &= b08.rows[k].rate_Gamma < 0.0 && b08.rows[k].rate_gamma < 0.0;
    std::printf("  %d of 16 l-infinity errors outside a factor 2 of the published values\n", misses);
    return report(3, ok && misses == 0,
                  "l-infinity errors within factor 2 (beta 0.2, 0.5) and non-decreasing for beta 0.8");
}

bool criterion4() {
    const auto m = presets::station_y();
    const double M1 = levy_moment(m.jump, 1);
    bool ok = true;
    for (double u : {0.5, 1.0, 2.0}) {
        double prev = HUGE_VAL, lo = HUGE_VAL, hi = 0.0;
        for (int n : kMmsN) {
            const auto L = build_lift(m.mixing, n, 0.5, 0.02);
            const double g = consistency_gap(m, L, u);
            const double norm = g / (std::fabs(u) * M1 * gbar(L, m.mixing));
            std::printf("  u %.1f n %3d gap %.4e normalized %.4e\n", u, n, g, norm);
            ok &= g < prev;
            prev = g;
            lo = std::min(lo, norm);
            hi = std::max(hi, norm);
        }
        ok &= hi <= kGapSpread * lo;
    }
    return report(4, ok, "characteristic-function gap decreasing in n, normalized spread within 10x");
}

bool criterion6() {
    bool ok = true;
    {
        ControlProblem p;
        p.period = 10.0;
        p.target = PeriodicSignal::constant(1.0);
        p.model = SupOUModel{0.0, {0.0, 1.0, 1.0, 0.0}, {1.0, 2.0}, ""};
        const auto L = point_mass_lift(1.0);
        RiccatiOptions o;
        o.dt = 0.01;
        o.tol = 1e-13;
        o.snapshot_every_h = 0.5;
        const auto ric = solve_periodic_riccati(p, L, o);
        note_psd(min_relative_eigenvalue(ric));
        KBEOptions ko;
        ko.tol = 1e-13;
        const auto kbe = solve_periodic_kbe(ric, p, L, ko);
        const double A = ric.A_at(0)[0], B = ric.B_at(0)[0];
        std::printf("  n=1: A %.12f B %.12f H %.12f C %.12f\n", A, B, ric.H, kbe.C);
        ok &= std::fabs(A - (std::sqrt(2.0) - 1.0)) < kOracleExact && std::fabs(B + 1.0 / std::sqrt(2.0)) < kOracleExact &&
              std::fabs(ric.H - 0.25) < kOracleExact && std::fabs(kbe.C - 0.125) < kOracleExact;
    }
    const auto a = analytic_stationary(1.0, 0.0, 1.0, 1.0);
    std::printf("  analytic: I %.15f X_inf %.15f H %.15f\n", a.I, a.X_inf, a.H);
    ok &= std::fabs(a.I - (std::sqrt(2.0) - 1.0)) < kOracleExact && std::fabs(a.X_inf - 0.5) < kOracleExact &&
          std::fabs(a.H - 0.25) < kOracleExact;

    auto m = presets::station_y();
    m.jump.a_nu = 0.0;
    OracleOptions oo;
    oo.tol = kOracleTol;
    double prev = HUGE_VAL, last = HUGE_VAL;
    for (int n : {20, 40, 80, 160}) {
        const auto r = oracle_check(m, build_lift(m.mixing, n, 0.5, 0.02), 1.0, m.x_floor + 1.0, oo);
        std::printf("  n %3d rel dev I %.3e gamma %.3e X_inf %.3e H %.3e (identity %.1e, R_n/R %.5f)\n", n,
                    r.rel_dev.I, r.rel_dev.gamma_avg, r.rel_dev.X_inf, r.rel_dev.H, r.identity_dev, r.R_n / r.R);
        ok &= r.max_rel_dev < prev;
        prev = last = r.max_rel_dev;
    }
    ok &= last < kOracleTol;
    return report(6, ok, "n=1 oracle to 1e-10, analytic unit case, lifted deviation < 1e-3 at n=160 and decreasing");
}

bool criterion7() {
    const auto m = presets::station_y();
    SimConfig c;
    c.dt = 0.001;
    c.horizon = kMcYears * units::hours_per_year;
    c.seed = kSeed;
    c.threads = resolve_threads();
    c.keep_series = true;
    const auto t0 = std::chrono::steady_clock::now();
    auto s = simulate_uncontrolled(m, c);
    const auto th = stationary_stats(m);
    std::printf("  %zu hourly observations in %.0f s\n", s.observations, seconds_since(t0));
    std::printf("  Ave MC %.3f theory %.3f | Std %.3f %.3f | Skew %.3f %.3f | Kurt %.1f %.1f\n", s.stats.ave, th.ave,
                s.stats.std_dev, th.std_dev(), s.stats.skew, th.skew, s.stats.kurt, th.kurt);
    g_series = std::move(s.series);
    const bool ok = rel(s.stats.ave, th.ave) <= kMcAve && rel(s.stats.std_dev, th.std_dev()) <= kMcStd &&
                    rel(s.stats.skew, th.skew) <= kMcSkew && rel(s.stats.kurt, th.kurt) <= kMcKurt;
    return report(7, ok, "200-year simulation within 3% / 10% / 30% / 50% of Ave / Std / Skew / Kurt");
}

bool criterion8() {
    const auto m = presets::station_y();
    const auto L = build_lift(m.mixing, kControlledN, 0.5, 0.02);
    bool ok = true;
    for (double w : {100.0, 1.0}) {
        const auto prob = application_problem(m, w);
        const auto ric = solve_periodic_riccati(prob, L);
        note_psd(min_relative_eigenvalue(ric));
        const auto kbe = solve_periodic_kbe(ric, prob, L);
        SimConfig c;
        c.scheme = SimScheme::controlled_lift;
        c.dt = 0.0;
        c.horizon = kControlledYears * units::hours_per_year;
        c.seed = kSeed + 1;
        c.threads = 1;
        const auto t0 = std::chrono::steady_clock::now();
        const auto s = simulate_controlled(m, L, ric, prob, c);
        std::printf("  w %g: H_n %.4f MC %.4f +- %.4f | C %.5f MC %.5f +- %.5f (%zu years, %.0f s)\n", w, ric.H,
                    s.total, s.total_se, kbe.C, s.control, s.control_se, s.batches, seconds_since(t0));
        ok &= std::fabs(s.total - ric.H) <= kMcSigmas * s.total_se;
        ok &= std::fabs(s.control - kbe.C) <= kMcSigmas * s.control_se;
    }
    return report(8, ok, "controlled-lift cost within 3 SE of H_n and control energy within 3 SE of C (w = 100, 1)");
}

bool criterion9() {
    bool ok = true;
    for (const char* name : {"Y", "D", "U"}) {
        const auto m = presets::by_name(name);
        const auto L = build_lift(m.mixing, kFrontierN, 0.5, 0.02);
        FrontierOptions fo;
        fo.threads = resolve_threads();
        const auto t0 = std::chrono::steady_clock::now();
        const auto pts = frontier(application_problem(m, 1.0), L, paper_weights(kFrontierEvery), fo);
        bool decreasing = true, clean = true;
        for (std::size_t k = 0; k < pts.size(); ++k) {
            clean &= pts[k].error.empty();
            if (pts[k].error.empty()) note_psd(pts[k].min_rel_eig);
            if (k > 0) decreasing &= pts[k].D < pts[k - 1].D;
        }
        const double convex = frontier_convexity(pts);
        const double std2 = stationary_stats(m).var;
        double C = NAN;
        try {
            C = guarantee_crossing(pts, kGuarantee, std2).C;
        } catch (const domain_error& e) {
            std::printf("  %s: %s\n", name, e.what());
        }
        std::printf("  %s: %zu points, convexity %.3e, D decreasing %s, crossing C = %.3f (%.0f s)\n", name,
                    pts.size(), convex, decreasing ? "yes" : "no", C, seconds_since(t0));
        ok &= clean && decreasing && convex >= -kConvexTol;
        if (std::string(name) == "D") ok &= std::fabs(C - 1.1) <= 0.2;
        if (std::string(name) == "U") ok &= std::fabs(C - 1.8) <= 0.3;
        if (std::string(name) == "Y")
            std::printf("  Y crossing against the published 2.3 (figure caption) and 4.7 (text): ratios %.2f, %.2f\n",
                        C / 2.3, C / 4.7);
    }
    return report(9, ok, "frontiers convex and decreasing; crossings D: 1.1 +- 0.2, U: 1.8 +- 0.3 (Y reported)");
}

bool criterion10() {
    bool ok = true;
    const auto m = presets::station_y();
    {
        std::vector<double> acf_exact(721);
        for (int k = 0; k <= 720; ++k) acf_exact[k] = acf(m.mixing, k);
        const auto af = fit_acf(acf_exact);
        const auto rep = fit_levy(stationary_stats(m), af.mixing, m.x_floor, 2.0);
        const auto& j = rep.model.jump;
        const double worst = std::max({rel(af.mixing.B_pi, m.mixing.B_pi), rel(af.mixing.alpha_pi, m.mixing.alpha_pi),
                                       rel(j.a_nu, m.jump.a_nu), rel(j.b_nu, m.jump.b_nu),
                                       rel(j.alpha_nu, m.jump.alpha_nu)});
        std::printf("  exact round trip: objective %.2e, worst parameter error %.2e\n", rep.moment_objective, worst);
        ok &= rep.moment_objective < kFitObjective && worst < kExactRecovery;
    }
    {
        if (g_series.empty()) {
            SimConfig c;
            c.dt = 0.001;
            c.horizon = kMcYears * units::hours_per_year;
            c.seed = kSeed;
            c.threads = resolve_threads();
            c.keep_series = true;
            g_series = simulate_uncontrolled(m, c).series;
        }
        DischargeSeries s;
        s.values = g_series;
        const auto rep = identify_series(s);
        std::printf("  simulated series: B_pi %.5f (true %.5f), alpha_pi %.4f (true %.4f), objective %.2e\n",
                    rep.model.mixing.B_pi, m.mixing.B_pi, rep.model.mixing.alpha_pi, m.mixing.alpha_pi,
                    rep.moment_objective);
        ok &= rel(rep.model.mixing.B_pi, m.mixing.B_pi) <= kMixingRecovery &&
              rel(rep.model.mixing.alpha_pi, m.mixing.alpha_pi) <= kMixingRecovery;
    }
    for (const auto& [model, data] : {std::pair{presets::station_y(), presets::data_stats_y()},
                                      std::pair{presets::station_d(), presets::data_stats_d()},
                                      std::pair{presets::station_u(), presets::data_stats_u()}}) {
        const double f2 = fit_levy(data, model.mixing, model.x_floor, 2.0).moment_objective;
        const double f1 = fit_levy(data, model.mixing, model.x_floor, 1.0).moment_objective;
        std::printf("  %s data: objective p=2 %.4e, p=1 %.4e\n", model.name.c_str(), f2, f1);
        ok &= f2 <= f1;
    }
    return report(10, ok, "exact round trip < 1e-8, simulated-series mixing within 10%, p=2 objective <= p=1");
}

bool criterion11() {
    const auto L = reference::random_lift(8, kSeed);
    ControlProblem p;
    p.period = 50.0;
    p.model = SupOUModel{0.5, {0.3, 0.2, 2.0, 0.4}, {1.0, 3.0}, ""};
    p.target = PeriodicSignal::harmonic(3.0, 1.0, -0.5);
    p.w = 0.7;
    RiccatiOptions o;
    o.dt = 0.01;
    o.tol = 1e-12;
    o.snapshot_every_h = 1.0;
    const auto sol = solve_periodic_riccati(p, L, o);
    note_psd(min_relative_eigenvalue(sol));
    const auto ref = reference::reference_riccati(p, L, levy_moment(p.model.jump, 1), levy_moment(p.model.jump, 2),
                                                o.dt, o.tol, o.max_cycles);
    double da = 0.0, db = 0.0;
    for (int i = 0; i < 8; ++i) {
        db = std::max(db, std::fabs(sol.B_at(0)[i] - ref.B[i]) / ref.B.cwiseAbs().maxCoeff());
        for (int j = 0; j < 8; ++j)
            da = std::max(da, std::fabs(sol.A_at(0)[i * 8 + j] - ref.A(i, j)) / ref.A.cwiseAbs().maxCoeff());
    }
    const double dh = rel(sol.H, ref.H);
    std::printf("  relative differences: A %.2e B %.2e H %.2e (cycles %d vs %d)\n", da, db, dh, sol.cycles, ref.cycles);
    return report(11, da < kReductionTol && db < kReductionTol && dh < kReductionTol && sol.cycles == ref.cycles,
                  "unit-weight solver equals the literal matrix implementation on a random n=8 problem");
}

bool criterion5() {
    std::printf("  %ld Riccati solutions checked, worst min eig / |A|_inf = %.3e\n", g_psd_solutions, g_min_rel_eig);
    return report(5, g_psd_solutions > 0 && g_min_rel_eig >= -kPsdTol, "every stored A(t) positive semidefinite");
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    auto want = [&](int k) { return only.empty() || only.count(k); };
    // criterion 5 collects from the runs of the others, so it goes last
    const std::vector<std::pair<int, std::function<bool()>>> order{
        {1, criterion1}, {2, criterion2},   {3, criterion3},   {4, criterion4}, {6, criterion6},
        {7, criterion7}, {8, criterion8},   {9, criterion9},   {10, criterion10}, {11, criterion11}};
    int failed = 0;
    for (const auto& [k, fn] : order) {
        if (!want(k)) continue;
        try {
            if (!fn()) ++failed;
        } catch (const std::exception& e) {
            report(k, false, std::string("exception: ") + e.what());
            ++failed;
        }
    }
    if (want(5) && !criterion5()) ++failed;
    std::printf("%d criteria failed\n", failed);
    return failed == 0 ? 0 : 1;
}
