#pragma once

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "supou/lift.hpp"
#include "supou/problem.hpp"

// Straight matrix transcription of the unweighted lifted Riccati system, used to
// check the production sweep (which carries a time-dependent state weight):
//   dA/ds = Lam A + A Lam + (A c)(A c)^T / w - 1 1^T
//   dB/ds = Lam B + (A c)(c.B) / w - M1 A c + xbar
//   H = avg[-(c.B)^2/(2w) + (M2/2) sum c_i A_ii + M1 c.B + xbar^2/2]
namespace supou::reference {

struct ReferenceRiccati {
    Eigen::MatrixXd A;
    Eigen::VectorXd B;
    double H = 0.0;
    int cycles = 0;
};

inline ReferenceRiccati reference_riccati(const ControlProblem& prob, const MarkovianLift& L, double M1, double M2,
                                          double dt, double tol, int max_cycles) {
    const int n = L.n;
    const Eigen::VectorXd c = Eigen::Map<const Eigen::VectorXd>(L.c.data(), n);
    const Eigen::MatrixXd Lam = Eigen::Map<const Eigen::VectorXd>(L.lambda.data(), n).asDiagonal();
    const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(n, n);
    const long N = std::lround(prob.period / dt);
    ReferenceRiccati r;
    r.A = Eigen::MatrixXd::Zero(n, n);
    r.B = Eigen::VectorXd::Zero(n);
    for (r.cycles = 1; r.cycles <= max_cycles; ++r.cycles) {
        const Eigen::MatrixXd A0 = r.A;
        const Eigen::VectorXd B0 = r.B;
        double h = 0.0;
        for (long k = N; k >= 1; --k) {
            const double s = k * dt;
            const double xb = prob.xbar(s);
            const Eigen::VectorXd D = r.A * c;
            const double cb = c.dot(r.B);
            h += -cb * cb / (2.0 * prob.w) + 0.5 * M2 * c.dot(r.A.diagonal()) + M1 * cb + 0.5 * xb * xb;
            const Eigen::MatrixXd dA = Lam * r.A + r.A * Lam + D * D.transpose() / prob.w - ones;
            const Eigen::VectorXd dB = Lam * r.B + D * cb / prob.w - M1 * D + Eigen::VectorXd::Constant(n, xb);
            r.A -= dt * dA;
            r.B -= dt * dB;
        }
        r.H = h * dt / prob.period;
        const double change = std::max((r.A - A0).cwiseAbs().maxCoeff(), (r.B - B0).cwiseAbs().maxCoeff());
        if (change < tol) return r;
    }
    --r.cycles;
    return r;
}

// A lift with random weights and rates: c in (0, 1) summing below one, rates spread over two decades.
inline MarkovianLift random_lift(int n, std::uint64_t seed) {
    std::mt19937_64 g(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    MarkovianLift L;
    L.n = n;
    L.mesh.assign(n + 1, 0.0);
    double tot = 0.0;
    for (int i = 0; i < n; ++i) {
        L.c.push_back(0.1 + U(g));
        tot += L.c.back();
        L.lambda.push_back(0.05 * std::pow(100.0, U(g)));
    }
    for (auto& v : L.c) v *= 0.9 / tot;
    L.tail_weight = 0.1;
    return L;
}

}  // namespace supou::reference
