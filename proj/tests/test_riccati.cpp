#include <gtest/gtest.h>

#include <cmath>

#include "reference_riccati.hpp"
#include "supou/mms.hpp"
#include "supou/presets.hpp"
#include "supou/riccati.hpp"

using namespace supou;

namespace {
ControlProblem point_mass_problem(double w = 1.0) {
    ControlProblem p;
    p.period = 10.0;
    p.target = PeriodicSignal::constant(1.0);
    p.w = w;
    p.model = SupOUModel{0.0, {0.0, 1.0, 1.0, 0.0}, {1.0, 2.0}, ""};
    return p;
}
}  // namespace

// scalar fixed point: 2A + A^2 = 1, (1 + A) B = -1, H = -B^2/2 + 1/2
TEST(Riccati, PointMassOracle) {
    RiccatiOptions o;
    o.dt = 0.01;
    o.tol = 1e-13;
    o.snapshot_every_h = 0.5;
    const auto sol = solve_periodic_riccati(point_mass_problem(), point_mass_lift(1.0), o);
    for (std::size_t k = 0; k < sol.snapshots(); ++k) {
        EXPECT_NEAR(sol.A_at(k)[0], std::sqrt(2.0) - 1.0, 1e-10);
        EXPECT_NEAR(sol.B_at(k)[0], -1.0 / std::sqrt(2.0), 1e-10);
    }
    EXPECT_NEAR(sol.H, 0.25, 1e-10);
    EXPECT_NEAR(optimal_control(sol, 3.0, {0.0}), 1.0 / std::sqrt(2.0), 1e-10);
}

TEST(Riccati, SymmetricAndPositive) {
    const auto m = presets::station_y();
    const auto L = build_lift(m.mixing, 10, 0.5, 0.02);
    const auto sol = solve_periodic_riccati(application_problem(m, 1.0), L);
    EXPECT_EQ(max_asymmetry(sol), 0.0);
    EXPECT_GE(min_relative_eigenvalue(sol), -1e-8);
    EXPECT_NEAR(effective_hamiltonian(sol, application_problem(m, 1.0), L) / sol.H, 1.0, 1e-3);
}

TEST(Riccati, ManufacturedHamiltonian) {
    const auto prob = mms_problem(presets::station_y());
    EXPECT_NEAR(mms_exact_hamiltonian(MMSConfig{}, prob), 46.2495, 5e-5);
}

TEST(Riccati, ManufacturedSolveAtTen) {
    const auto prob = mms_problem(presets::station_y());
    const auto L = build_lift(prob.model.mixing, 10, 0.5, 0.02);
    const auto sol = solve_manufactured_riccati(prob, L, MMSConfig{});
    EXPECT_NEAR(sol.H, 45.9120, 5e-3);
    EXPECT_GT(sol.linf_gamma_A, 0.0);
    EXPECT_LT(sol.linf_gamma_A, 1.0);
}

// With w huge the control vanishes and H tends to the uncontrolled deviation
// (R_n M2/2 + (R_n M1 - xbar)^2) / 2 of the lifted stationary state.
TEST(Riccati, NullControlLimit) {
    const auto m = presets::station_y();
    const auto L = build_lift(m.mixing, 5, 0.5, 0.02);
    ControlProblem p;
    p.model = m;
    p.target = PeriodicSignal::constant(20.0);
    p.w = 1e12;
    const auto sol = solve_periodic_riccati(p, L);
    const double Rn = L.reciprocal_sum(), M1 = levy_moment(m.jump, 1), M2 = levy_moment(m.jump, 2);
    const double xb = 20.0 - m.x_floor;
    const double D0 = 0.5 * (Rn * M2 / 2.0 + (Rn * M1 - xb) * (Rn * M1 - xb));
    EXPECT_NEAR(sol.H / D0, 1.0, 1e-9);
}

TEST(Riccati, UnitWeightMatchesReference) {
    const auto L = reference::random_lift(8, 7);
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
    const auto ref = reference::reference_riccati(p, L, levy_moment(p.model.jump, 1), levy_moment(p.model.jump, 2),
                                                o.dt, o.tol, o.max_cycles);
    EXPECT_EQ(sol.cycles, ref.cycles);
    EXPECT_NEAR(sol.H, ref.H, 1e-12 * std::fabs(ref.H));
    double da = 0.0, db = 0.0;
    for (int i = 0; i < 8; ++i) {
        db = std::max(db, std::fabs(sol.B_at(0)[i] - ref.B[i]) / ref.B.cwiseAbs().maxCoeff());
        for (int j = 0; j < 8; ++j)
            da = std::max(da, std::fabs(sol.A_at(0)[i * 8 + j] - ref.A(i, j)) / ref.A.cwiseAbs().maxCoeff());
    }
    EXPECT_LT(da, 1e-12);
    EXPECT_LT(db, 1e-12);
}

TEST(Riccati, InputErrors) {
    RiccatiOptions o;
    o.dt = 0.3;
    EXPECT_THROW(solve_periodic_riccati(point_mass_problem(), point_mass_lift(1.0), o), domain_error);
    o.dt = 0.01;
    o.max_cycles = 1;
    EXPECT_THROW(solve_periodic_riccati(point_mass_problem(), point_mass_lift(1.0), o), convergence_error);
    EXPECT_THROW(solve_periodic_riccati(point_mass_problem(0.0), point_mass_lift(1.0)), domain_error);
}
