// Optimal control of Station Y discharge at one control weight, then a short
// controlled simulation to compare the realized cost with the Riccati value.

#include <cstdio>

#include "supou.hpp"

using namespace supou;

int main() {
    const SupOUModel m = presets::station_y();
    const StationaryStats st = stationary_stats(m);
    std::printf("Station Y: Ave %.2f Std %.2f Skew %.2f Kurt %.1f (m3/s)\n", st.ave, st.std_dev(), st.skew, st.kurt);

    const MarkovianLift L = build_lift(m.mixing, 20, 0.5, 0.02);
    const ControlProblem prob = application_problem(m, 1.0);
    const RiccatiSolution ric = solve_periodic_riccati(prob, L);
    const KBESolution kbe = solve_periodic_kbe(ric, prob, L);
    std::printf("n = %d: H = %.4f, C = %.4f, D = %.4f (%d Riccati cycles)\n", L.n, ric.H, kbe.C, ric.H - prob.w * kbe.C,
                ric.cycles);

    SimConfig cfg;
    cfg.scheme = SimScheme::controlled_lift;
    cfg.dt = 0.0;
    cfg.horizon = 20.0 * units::hours_per_year;
    const PathSummary s = simulate_controlled(m, L, ric, prob, cfg);
    std::printf("simulated %zu years: cost %.4f +- %.4f, control energy %.4f +- %.4f\n", s.batches, s.total, s.total_se,
                s.control, s.control_se);
}
