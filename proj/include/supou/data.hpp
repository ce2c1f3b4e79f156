#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "supou/error.hpp"
#include "supou/model.hpp"

namespace supou {

struct DischargeSeries {
    double start_time = 0.0;  // hours (epoch hours for ISO stamps, raw index otherwise)
    double step = 1.0;        // hours
    std::vector<double> values;
};

struct SeriesFormat {
    double step_h = 1.0;
    bool interpolate_gaps = false;  // fill gaps of at most max_gap_h by linear interpolation
    double max_gap_h = 6.0;
};

namespace detail {

inline std::string trim(std::string s) {
    auto ns = [](unsigned char ch) { return !std::isspace(ch); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), ns));
    s.erase(std::find_if(s.rbegin(), s.rend(), ns).base(), s.end());
    return s;
}

// Integer hour index or ISO-8601 "YYYY-MM-DDTHH:MM[:SS]" (a space instead of T is accepted).
inline bool parse_time_h(const std::string& field, double& out) {
    if (field.empty()) return false;
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end && *end == '\0') {
        out = v;
        return true;
    }
    std::string f = field;
    std::replace(f.begin(), f.end(), 'T', ' ');
    if (!f.empty() && f.back() == 'Z') f.pop_back();
    std::tm tm{};
    for (const char* fmt : {"%Y-%m-%d %H:%M:%S", "%Y-%m-%d %H:%M", "%Y-%m-%d"}) {
        std::istringstream is(f);
        tm = std::tm{};
        is >> std::get_time(&tm, fmt);
        if (!is.fail() && is.peek() == std::char_traits<char>::eof()) {
            out = static_cast<double>(timegm(&tm)) / 3600.0;
            return true;
        }
    }
    return false;
}

}  // namespace detail

// CSV with header `time,discharge`. Rejects negative or non-finite discharge,
// duplicated or decreasing stamps, and (unless interpolation is enabled) gaps.
inline DischargeSeries load_series(std::istream& in, const SeriesFormat& fmt = {}) {
    std::string line;
    if (!std::getline(in, line)) throw io_error("empty series file");
    {
        std::string h = detail::trim(line);
        h.erase(std::remove_if(h.begin(), h.end(), [](unsigned char ch) { return std::isspace(ch); }), h.end());
        if (h != "time,discharge") throw io_error("line 1: expected header 'time,discharge'");
    }
    std::vector<double> t, x;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw io_error("line " + std::to_string(lineno) + ": missing comma");
        double ti = 0.0;
        if (!detail::parse_time_h(detail::trim(line.substr(0, comma)), ti))
            throw io_error("line " + std::to_string(lineno) + ": cannot parse time");
        const std::string vs = detail::trim(line.substr(comma + 1));
        char* end = nullptr;
        const double xi = std::strtod(vs.c_str(), &end);
        if (vs.empty() || *end != '\0' || !std::isfinite(xi))
            throw io_error("line " + std::to_string(lineno) + ": cannot parse discharge");
        if (xi < 0.0) throw io_error("line " + std::to_string(lineno) + ": negative discharge");
        if (!t.empty() && ti <= t.back())
            throw io_error("line " + std::to_string(lineno) + ": timestamp not increasing (duplicate or out of order)");
        t.push_back(ti);
        x.push_back(xi);
    }
    if (x.size() < 2) throw io_error("series needs at least two rows");

    const double step = fmt.step_h;
    const double eps = 1e-6 * step;
    DischargeSeries s;
    s.start_time = t.front();
    s.step = step;
    s.values.push_back(x.front());
    std::string gaps;
    for (std::size_t k = 1; k < t.size(); ++k) {
        const double dt = t[k] - t[k - 1];
        const double ratio = dt / step;
        const long m = std::lround(ratio);
        if (std::fabs(ratio - m) * step > eps || m < 1)
            throw io_error("row " + std::to_string(k + 2) + ": spacing " + std::to_string(dt) +
                           " h is not a multiple of the step");
        if (m > 1) {
            const bool fill = fmt.interpolate_gaps && dt - step <= fmt.max_gap_h + eps;
            if (!fill) {
                std::ostringstream os;
                os << "[" << t[k - 1] + step << ", " << t[k] - step << "] ";
                gaps += os.str();
                continue;
            }
            for (long j = 1; j < m; ++j)
                s.values.push_back(x[k - 1] + (x[k] - x[k - 1]) * double(j) / double(m));
        }
        s.values.push_back(x[k]);
    }
    if (!gaps.empty()) throw io_error("missing spans (h): " + gaps);
    return s;
}

inline DischargeSeries load_series(const std::string& path, const SeriesFormat& fmt = {}) {
    std::ifstream f(path);
    if (!f) throw io_error("cannot open series file '" + path + "'");
    return load_series(f, fmt);
}

struct Histogram {
    std::vector<double> edges;
    std::vector<double> density;
};

struct EmpiricalStats {
    double ave = 0.0, std_dev = 0.0, skew = 0.0, kurt = 0.0;
    std::vector<double> acf;
    Histogram histogram;

    StationaryStats as_stationary() const { return {ave, std_dev * std_dev, skew, kurt, false}; }
};

// Population moments; skew = m3/m2^1.5, excess kurt = m4/m2^2 - 3.
inline EmpiricalStats empirical_moments(const std::vector<double>& x) {
    if (x.size() < 4) throw domain_error("empirical_moments: need at least 4 samples");
    const double n = static_cast<double>(x.size());
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double d = v - mean, d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (!(m2 > 0.0)) throw domain_error("empirical_moments: constant series");
    EmpiricalStats e;
    e.ave = mean;
    e.std_dev = std::sqrt(m2);
    e.skew = m3 / std::pow(m2, 1.5);
    e.kurt = m4 / (m2 * m2) - 3.0;
    return e;
}
inline EmpiricalStats empirical_moments(const DischargeSeries& s) { return empirical_moments(s.values); }

// Biased sample autocorrelation (divide by N) at lags 0..max_lag.
inline std::vector<double> empirical_acf(const std::vector<double>& x, int max_lag) {
    const std::size_t N = x.size();
    if (max_lag < 0 || 2 * static_cast<std::size_t>(max_lag) >= N)
        throw domain_error("empirical_acf: max_lag must be below length/2");
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= double(N);
    std::vector<double> d(N);
    for (std::size_t k = 0; k < N; ++k) d[k] = x[k] - mean;
    double c0 = 0.0;
    for (double v : d) c0 += v * v;
    if (!(c0 > 0.0)) throw domain_error("empirical_acf: constant series");
    std::vector<double> r(max_lag + 1);
    r[0] = 1.0;
    for (int l = 1; l <= max_lag; ++l) {
        double s = 0.0;
        for (std::size_t k = 0; k + l < N; ++k) s += d[k] * d[k + l];
        r[l] = s / c0;
    }
    return r;
}
inline std::vector<double> empirical_acf(const DischargeSeries& s, int max_lag) {
    return empirical_acf(s.values, max_lag);
}

struct BinConfig {
    int bins = 50;
    bool log_bins = false;
    double lo = NAN, hi = NAN;  // default: data range
};

inline Histogram empirical_pdf(const std::vector<double>& x, const BinConfig& cfg = {}) {
    if (cfg.bins < 1) throw domain_error("empirical_pdf: need at least one bin");
    auto [mn, mx] = std::minmax_element(x.begin(), x.end());
    if (x.size() < 2 || *mn == *mx) throw domain_error("empirical_pdf: need two distinct values");
    double lo = std::isnan(cfg.lo) ? *mn : cfg.lo;
    double hi = std::isnan(cfg.hi) ? *mx : cfg.hi;
    if (cfg.log_bins) {
        if (!(lo > 0.0)) {
            // log bins start at the smallest positive sample
            lo = std::numeric_limits<double>::infinity();
            for (double v : x)
                if (v > 0.0) lo = std::min(lo, v);
        }
        if (!(hi > lo)) throw domain_error("empirical_pdf: log bins need positive spread");
    }
    Histogram h;
    h.edges.resize(cfg.bins + 1);
    for (int k = 0; k <= cfg.bins; ++k) {
        const double f = double(k) / cfg.bins;
        h.edges[k] = cfg.log_bins ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f;
    }
    h.edges.back() = hi;
    std::vector<double> count(cfg.bins, 0.0);
    double used = 0.0;
    for (double v : x) {
        if (v < lo || v > hi) continue;
        auto it = std::upper_bound(h.edges.begin(), h.edges.end(), v);
        int k = static_cast<int>(it - h.edges.begin()) - 1;
        k = std::clamp(k, 0, cfg.bins - 1);
        count[k] += 1.0;
        used += 1.0;
    }
    h.density.resize(cfg.bins);
    for (int k = 0; k < cfg.bins; ++k) h.density[k] = count[k] / (used * (h.edges[k + 1] - h.edges[k]));
    return h;
}

}  // namespace supou
