#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace supou {

struct NelderMeadOptions {
    double initial_step = 0.5;
    double diameter_tol = 1e-10;  // stop once every vertex lies this close to the best one
    int max_evals = 200000;
    int polish_restarts = 2;      // fresh simplex around the optimum after each collapse
};

struct NelderMeadResult {
    std::vector<double> x;
    double f = 0.0;
    int evals = 0;
    bool converged = false;
};

template <class F>
NelderMeadResult nelder_mead(F&& f, std::vector<double> x0, const NelderMeadOptions& opt = {}) {
    const std::size_t d = x0.size();
    NelderMeadResult res;
    res.x = x0;
    res.f = f(x0);
    res.evals = 1;

    auto eval = [&](const std::vector<double>& x) {
        ++res.evals;
        const double v = f(x);
        return std::isnan(v) ? HUGE_VAL : v;
    };

    for (int round = 0; round <= opt.polish_restarts; ++round) {
        std::vector<std::vector<double>> s(d + 1, res.x);
        std::vector<double> fs(d + 1, res.f);
        for (std::size_t k = 0; k < d; ++k) {
            s[k + 1][k] += opt.initial_step;
            fs[k + 1] = eval(s[k + 1]);
        }
        std::vector<std::size_t> idx(d + 1);
        std::vector<double> xc(d), xr(d), xe(d), xk(d);
        bool collapsed = false;
        while (res.evals < opt.max_evals) {
            std::iota(idx.begin(), idx.end(), 0);
            std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return fs[a] < fs[b]; });
            const auto& best = s[idx[0]];
            double diam = 0.0;
            for (std::size_t k = 1; k <= d; ++k)
                for (std::size_t j = 0; j < d; ++j) diam = std::max(diam, std::fabs(s[idx[k]][j] - best[j]));
            if (diam < opt.diameter_tol) {
                collapsed = true;
                break;
            }
            const std::size_t w = idx[d], sw = idx[d - 1];
            std::fill(xc.begin(), xc.end(), 0.0);
            for (std::size_t k = 0; k < d; ++k)
                for (std::size_t j = 0; j < d; ++j) xc[j] += s[idx[k]][j] / double(d);
            for (std::size_t j = 0; j < d; ++j) xr[j] = xc[j] + (xc[j] - s[w][j]);
            const double fr = eval(xr);
            if (fr < fs[idx[0]]) {
                for (std::size_t j = 0; j < d; ++j) xe[j] = xc[j] + 2.0 * (xc[j] - s[w][j]);
                const double fe = eval(xe);
                if (fe < fr) {
                    s[w] = xe;
                    fs[w] = fe;
                } else {
                    s[w] = xr;
                    fs[w] = fr;
                }
                continue;
            }
            if (fr < fs[sw]) {
                s[w] = xr;
                fs[w] = fr;
                continue;
            }
            const bool outside = fr < fs[w];
            for (std::size_t j = 0; j < d; ++j)
                xk[j] = outside ? xc[j] + 0.5 * (xr[j] - xc[j]) : xc[j] + 0.5 * (s[w][j] - xc[j]);
            const double fk = eval(xk);
            if (fk < (outside ? fr : fs[w])) {
                s[w] = xk;
                fs[w] = fk;
                continue;
            }
            for (std::size_t k = 1; k <= d; ++k) {
                auto& v = s[idx[k]];
                for (std::size_t j = 0; j < d; ++j) v[j] = best[j] + 0.5 * (v[j] - best[j]);
                fs[idx[k]] = eval(v);
            }
        }
        const auto ib = static_cast<std::size_t>(std::min_element(fs.begin(), fs.end()) - fs.begin());
        const bool improved = fs[ib] < res.f;
        if (fs[ib] <= res.f) {
            res.x = s[ib];
            res.f = fs[ib];
        }
        res.converged = collapsed;
        if (!collapsed || (!improved && round > 0)) break;
    }
    return res;
}

}  // namespace supou
