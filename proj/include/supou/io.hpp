#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "supou/data.hpp"
#include "supou/error.hpp"
#include "supou/kbe.hpp"
#include "supou/lift.hpp"
#include "supou/mms.hpp"
#include "supou/model.hpp"
#include "supou/presets.hpp"
#include "supou/problem.hpp"
#include "supou/riccati.hpp"
#include "supou/simulate.hpp"
#include "supou/units.hpp"

// JSON configuration. Dimensioned fields carry {"value": x, "unit": "..."} and are
// converted to hours, 1/h and m^3/s on read; a bare number there is an error.
namespace supou::io {

using json = nlohmann::json;

enum class Dim { none, duration, rate, discharge };

inline double discharge_to_m3s(const std::string& unit) {
    if (unit == "m3/s" || unit == "m^3/s" || unit == "cms") return 1.0;
    throw config_error("unknown discharge unit '" + unit + "'");
}

inline const char* internal_unit(Dim d) {
    switch (d) {
        case Dim::duration:
            return "h";
        case Dim::rate:
            return "1/h";
        case Dim::discharge:
            return "m3/s";
        case Dim::none:
            break;
    }
    return "";
}

inline json quantity(double v, Dim d) { return d == Dim::none ? json(v) : json{{"value", v}, {"unit", internal_unit(d)}}; }

inline double to_double(const json& v, const std::string& path) {
    if (!v.is_number()) throw config_error("field '" + path + "' must be a number");
    return v.get<double>();
}

// Reads obj[key] as a quantity of dimension d. Missing keys give `def` or an error.
inline double read(const json& obj, const std::string& key, Dim d, const std::string& path,
                   std::optional<double> def = std::nullopt) {
    const std::string where = path.empty() ? key : path + "." + key;
    if (!obj.is_object() || !obj.contains(key)) {
        if (def) return *def;
        throw config_error("missing field '" + where + "'");
    }
    const json& v = obj.at(key);
    if (d == Dim::none) {
        if (v.is_object()) return to_double(v.at("value"), where + ".value");
        return to_double(v, where);
    }
    if (!v.is_object() || !v.contains("value") || !v.contains("unit") || !v.at("unit").is_string())
        throw config_error("field '" + where + "' needs a unit annotation {\"value\": x, \"unit\": \"...\"}");
    const double x = to_double(v.at("value"), where + ".value");
    const std::string u = v.at("unit").get<std::string>();
    try {
        switch (d) {
            case Dim::duration:
                return x * units::duration_to_hours(u);
            case Dim::rate:
                return x * units::rate_to_per_hour(u);
            case Dim::discharge:
                return x * discharge_to_m3s(u);
            case Dim::none:
                break;
        }
    } catch (const config_error& e) {
        throw config_error("field '" + where + "': " + e.what());
    }
    return x;
}

inline int read_int(const json& obj, const std::string& key, const std::string& path, int def) {
    const double v = read(obj, key, Dim::none, path, double(def));
    if (v != std::floor(v)) throw config_error("field '" + path + "." + key + "' must be an integer");
    return static_cast<int>(v);
}

template <class T>
std::vector<T> read_list(const json& obj, const std::string& key, const std::string& path, std::vector<T> def) {
    if (!obj.is_object() || !obj.contains(key)) return def;
    const json& v = obj.at(key);
    std::vector<T> out;
    if (v.is_number()) return {v.get<T>()};
    if (!v.is_array()) throw config_error("field '" + path + "." + key + "' must be a list");
    for (const auto& e : v) {
        if (!e.is_number()) throw config_error("field '" + path + "." + key + "' must hold numbers");
        out.push_back(e.get<T>());
    }
    return out;
}

inline const json& section(const json& root, const std::string& key) {
    static const json empty = json::object();
    if (!root.contains(key)) return empty;
    if (!root.at(key).is_object()) throw config_error("section '" + key + "' must be an object");
    return root.at(key);
}

// Model: optional "preset" (Y, D, U, *-tempered), then any explicit field overrides it.
inline SupOUModel read_model(const json& m) {
    SupOUModel model;
    bool any = false;
    if (m.contains("preset")) {
        if (!m.at("preset").is_string()) throw config_error("field 'model.preset' must be a string");
        model = presets::by_name(m.at("preset").get<std::string>());
        any = true;
    }
    auto over = [&](const char* key, Dim d, double& slot) {
        if (m.contains(key)) {
            slot = read(m, key, d, "model");
            any = true;
        } else if (!m.contains("preset")) {
            throw config_error(std::string("missing field 'model.") + key + "'");
        }
    };
    over("x_floor", Dim::discharge, model.x_floor);
    over("a_nu", Dim::rate, model.jump.a_nu);
    over("b_nu", Dim::none, model.jump.b_nu);
    over("p_nu", Dim::none, model.jump.p_nu);
    over("alpha_nu", Dim::none, model.jump.alpha_nu);
    over("B_pi", Dim::rate, model.mixing.B_pi);
    over("alpha_pi", Dim::none, model.mixing.alpha_pi);
    if (!any) throw config_error("section 'model' is empty");
    if (m.contains("name") && m.at("name").is_string()) model.name = m.at("name").get<std::string>();
    try {
        model.validate();
    } catch (const domain_error& e) {
        throw config_error(std::string("model: ") + e.what());
    }
    return model;
}

inline json model_json(const SupOUModel& m) {
    return {{"name", m.name},
            {"x_floor", quantity(m.x_floor, Dim::discharge)},
            {"a_nu", quantity(m.jump.a_nu, Dim::rate)},
            {"b_nu", m.jump.b_nu},
            {"p_nu", m.jump.p_nu},
            {"alpha_nu", m.jump.alpha_nu},
            {"B_pi", quantity(m.mixing.B_pi, Dim::rate)},
            {"alpha_pi", m.mixing.alpha_pi}};
}

inline json stats_json(const StationaryStats& s) {
    return {{"ave", s.ave}, {"std", s.std_dev()}, {"skew", s.skew}, {"kurt", s.kurt}, {"degenerate", s.degenerate}};
}

inline PeriodicSignal read_signal(const json& v, const std::string& path, Dim d) {
    if (v.is_object() && v.contains("harmonic")) {
        const auto h = read_list<double>(v, "harmonic", path, {});
        if (h.size() != 3) throw config_error("field '" + path + ".harmonic' needs [c0, c_cos, c_sin]");
        double f = 1.0;
        if (d == Dim::discharge) {
            if (!v.contains("unit") || !v.at("unit").is_string())
                throw config_error("field '" + path + "' needs a unit annotation");
            f = discharge_to_m3s(v.at("unit").get<std::string>());
        }
        return PeriodicSignal::harmonic(f * h[0], f * h[1], f * h[2]);
    }
    json wrap = {{"x", v}};
    return PeriodicSignal::constant(read(wrap, "x", d, path));
}

inline json signal_json(const PeriodicSignal& s) {
    if (s.kind == PeriodicSignal::Kind::harmonic)
        return {{"harmonic", {s.c0, s.cc, s.cs}}, {"unit", "m3/s"}};
    if (s.kind == PeriodicSignal::Kind::constant) return quantity(s.c0, Dim::discharge);
    json k = json::array();
    for (const auto& [t, v] : s.knots) k.push_back({t, v});
    return {{"table_h", k}, {"unit", "m3/s"}};
}

struct RunConfig {
    std::uint64_t seed = 1;
    int threads = 0;

    bool has_model = false;
    SupOUModel model;

    int n = 160;
    double beta = 0.5;
    double eta_bar = 0.02;         // 1/h
    double point_mass_rate = NAN;  // 1/h; set = one-component lift at this rate

    std::string problem_kind = "application";  // application | mms | custom
    ControlProblem problem;
    double temp_shift = 0.0;
    MMSConfig mms;

    RiccatiOptions riccati;
    std::string dt_rule = "1/n";
    KBEOptions kbe;

    std::vector<double> w_list = paper_weights();
    double guarantee_factor = 0.05;

    SimConfig sim;

    std::string series_path;
    SeriesFormat series_format;
    int acf_max_lag_h = 720;
    int histogram_bins = 60;

    double fit_p_nu = 2.0;
    int fit_restarts = 16;

    std::vector<int> mms_n{10, 20, 40, 80};
    std::vector<double> mms_beta{0.5};
    std::vector<double> charfn_u{0.5, 1.0, 2.0};
    std::vector<int> charfn_n{10, 20, 40, 80};
    std::vector<int> oracle_n{20, 40, 80, 160};
    double oracle_w = 1.0;
    double oracle_x_hat = NAN;
    double oracle_tol = 1e-3;
    double oracle_dt = 0.1;

    MarkovianLift lift(int lift_n) const {
        if (!std::isnan(point_mass_rate)) return point_mass_lift(point_mass_rate);
        return build_lift(model.mixing, lift_n, beta, eta_bar);
    }

    // Riccati options with the dt rule applied for a lift of size n
    RiccatiOptions riccati_for(int lift_n) const {
        RiccatiOptions o = riccati;
        if (dt_rule == "1/n") o.dt = default_dt(lift_n);
        return o;
    }
};

inline void rebuild_problem(RunConfig& c) {
    if (c.problem_kind == "application") {
        const double w = c.problem.w, P = c.problem.period;
        c.problem = application_problem(c.model, w, c.temp_shift);
        c.problem.period = P;
    } else if (c.problem_kind == "mms") {
        const double P = c.problem.period;
        c.problem = mms_problem(c.model);
        c.problem.period = P;
    } else {
        c.problem.model = c.model;
    }
}

inline RunConfig parse_config(const json& root) {
    if (!root.is_object()) throw config_error("configuration must be a JSON object");
    RunConfig c;
    if (root.contains("seed")) {
        if (!root.at("seed").is_number_unsigned()) throw config_error("field 'seed' must be a nonnegative integer");
        c.seed = root.at("seed").get<std::uint64_t>();
    }
    c.threads = read_int(root, "threads", "", 0);

    if (root.contains("model")) {
        c.model = read_model(section(root, "model"));
        c.has_model = true;
    }

    const json& lift = section(root, "lift");
    c.n = read_int(lift, "n", "lift", c.n);
    c.beta = read(lift, "beta", Dim::none, "lift", c.beta);
    if (lift.contains("eta_bar")) c.eta_bar = read(lift, "eta_bar", Dim::rate, "lift");
    if (lift.contains("point_mass_rate")) {
        c.point_mass_rate = read(lift, "point_mass_rate", Dim::rate, "lift");
        c.n = 1;
    }
    if (c.n < 1 || !(c.beta > 0.0 && c.beta < 1.0) || !(c.eta_bar > 0.0))
        throw config_error("lift: need n >= 1, 0 < beta < 1, eta_bar > 0");

    const json& pr = section(root, "problem");
    if (pr.contains("kind")) c.problem_kind = pr.at("kind").get<std::string>();
    if (c.problem_kind != "application" && c.problem_kind != "mms" && c.problem_kind != "custom")
        throw config_error("problem.kind must be application, mms or custom");
    c.problem.period = read(pr, "period", Dim::duration, "problem", units::hours_per_year);
    c.problem.w = read(pr, "w", Dim::none, "problem", 1.0);
    c.temp_shift = read(pr, "temp_shift", Dim::none, "problem", 0.0);
    if (c.problem_kind == "custom") {
        if (!pr.contains("target")) throw config_error("missing field 'problem.target'");
        c.problem.target = read_signal(pr.at("target"), "problem.target", Dim::discharge);
        if (pr.contains("state_weight")) {
            const json& sw = pr.at("state_weight");
            if (sw.is_string() && sw.get<std::string>() == "temperature") {
                TemperatureWeight tw;
                tw.shift = c.temp_shift;
                c.problem.state_weight = StateWeight::temperature(tw);
            } else {
                json wrap = {{"x", sw}};
                c.problem.state_weight = StateWeight::constant(read(wrap, "x", Dim::none, "problem.state_weight"));
            }
        }
    }
    if (pr.contains("b_gamma")) c.mms.b_gamma = read(pr, "b_gamma", Dim::duration, "problem");
    if (c.has_model) rebuild_problem(c);

    const json& sv = section(root, "solver");
    if (sv.contains("dt")) {
        c.riccati.dt = read(sv, "dt", Dim::duration, "solver");
        c.dt_rule = "fixed";
    }
    if (sv.contains("dt_rule")) {
        c.dt_rule = sv.at("dt_rule").get<std::string>();
        if (c.dt_rule != "1/n" && c.dt_rule != "fixed") throw config_error("solver.dt_rule must be '1/n' or 'fixed'");
        if (c.dt_rule == "fixed" && !(c.riccati.dt > 0.0)) throw config_error("solver.dt_rule 'fixed' needs solver.dt");
    }
    c.riccati.tol = read(sv, "tol", Dim::none, "solver", c.riccati.tol);
    c.riccati.max_cycles = read_int(sv, "max_cycles", "solver", c.riccati.max_cycles);
    if (sv.contains("snapshot_every")) c.riccati.snapshot_every_h = read(sv, "snapshot_every", Dim::duration, "solver");
    c.kbe.tol = read(sv, "kbe_tol", Dim::none, "solver", c.riccati.tol);
    c.kbe.max_cycles = c.riccati.max_cycles;

    const json& fr = section(root, "frontier");
    if (fr.contains("w")) c.w_list = read_list<double>(fr, "w", "frontier", {});
    else c.w_list = paper_weights(read_int(fr, "every", "frontier", 1));
    c.guarantee_factor = read(fr, "guarantee_factor", Dim::none, "frontier", c.guarantee_factor);

    const json& sm = section(root, "simulation");
    if (sm.contains("dt")) c.sim.dt = read(sm, "dt", Dim::duration, "simulation");
    if (sm.contains("horizon")) c.sim.horizon = read(sm, "horizon", Dim::duration, "simulation");
    if (sm.contains("burn_in") && sm.at("burn_in") != "default")
        c.sim.burn_in = read(sm, "burn_in", Dim::duration, "simulation");
    c.sim.n_paths = read_int(sm, "n_paths", "simulation", c.sim.n_paths);
    c.sim.rate_classes = read_int(sm, "rate_classes", "simulation", c.sim.rate_classes);
    c.sim.histogram_bins = read_int(sm, "histogram_bins", "simulation", c.sim.histogram_bins);
    if (sm.contains("scheme")) {
        const std::string s = sm.at("scheme").get<std::string>();
        if (s == "uncontrolled_eq96" || s == "uncontrolled") c.sim.scheme = SimScheme::uncontrolled_eq96;
        else if (s == "controlled_lift" || s == "controlled") c.sim.scheme = SimScheme::controlled_lift;
        else throw config_error("simulation.scheme must be uncontrolled or controlled");
    }
    if (sm.contains("rate_mode")) {
        const std::string s = sm.at("rate_mode").get<std::string>();
        if (s == "rate_classes") c.sim.rate_mode = RateMode::rate_classes;
        else if (s == "shared_rate") c.sim.rate_mode = RateMode::shared_rate;
        else throw config_error("simulation.rate_mode must be rate_classes or shared_rate");
    }
    if (sm.contains("keep_series")) c.sim.keep_series = sm.at("keep_series").get<bool>();

    const json& da = section(root, "data");
    if (da.contains("series")) c.series_path = da.at("series").get<std::string>();
    if (da.contains("step")) c.series_format.step_h = read(da, "step", Dim::duration, "data");
    if (da.contains("max_gap")) c.series_format.max_gap_h = read(da, "max_gap", Dim::duration, "data");
    if (da.contains("interpolate_gaps")) c.series_format.interpolate_gaps = da.at("interpolate_gaps").get<bool>();
    if (da.contains("max_lag")) c.acf_max_lag_h = static_cast<int>(read(da, "max_lag", Dim::duration, "data"));
    c.histogram_bins = read_int(da, "histogram_bins", "data", c.histogram_bins);

    const json& fi = section(root, "fit");
    c.fit_p_nu = read(fi, "p_nu", Dim::none, "fit", c.fit_p_nu);
    c.fit_restarts = read_int(fi, "restarts", "fit", c.fit_restarts);
    if (fi.contains("max_lag")) c.acf_max_lag_h = static_cast<int>(read(fi, "max_lag", Dim::duration, "fit"));

    const json& mm = section(root, "mms");
    c.mms_n = read_list<int>(mm, "n", "mms", c.mms_n);
    c.mms_beta = read_list<double>(mm, "beta", "mms", c.mms_beta);

    const json& cf = section(root, "charfn");
    c.charfn_u = read_list<double>(cf, "u", "charfn", c.charfn_u);
    c.charfn_n = read_list<int>(cf, "n", "charfn", c.charfn_n);

    const json& od = section(root, "oracle");
    c.oracle_n = read_list<int>(od, "n", "oracle", c.oracle_n);
    c.oracle_w = read(od, "w", Dim::none, "oracle", c.oracle_w);
    if (od.contains("x_hat")) c.oracle_x_hat = read(od, "x_hat", Dim::discharge, "oracle");
    c.oracle_tol = read(od, "tol", Dim::none, "oracle", c.oracle_tol);
    if (od.contains("dt")) c.oracle_dt = read(od, "dt", Dim::duration, "oracle");
    return c;
}

inline json normalized(const RunConfig& c) {
    json j;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    if (c.has_model) j["model"] = model_json(c.model);
    j["lift"] = {{"n", c.n}, {"beta", c.beta}, {"eta_bar", quantity(c.eta_bar, Dim::rate)}};
    if (!std::isnan(c.point_mass_rate)) j["lift"]["point_mass_rate"] = quantity(c.point_mass_rate, Dim::rate);
    json pr = {{"kind", c.problem_kind},
               {"period", quantity(c.problem.period, Dim::duration)},
               {"w", c.problem.w},
               {"target", signal_json(c.problem.target)}};
    if (c.problem.state_weight.kind == StateWeight::Kind::temperature) {
        pr["state_weight"] = "temperature";
        pr["temp_shift"] = c.problem.state_weight.temp.shift;
    } else {
        pr["state_weight"] = c.problem.state_weight.value;
    }
    if (c.problem_kind == "mms") pr["b_gamma"] = quantity(c.mms.b_gamma, Dim::duration);
    j["problem"] = pr;
    json sv = {{"dt_rule", c.dt_rule},
               {"tol", c.riccati.tol},
               {"kbe_tol", c.kbe.tol},
               {"max_cycles", c.riccati.max_cycles},
               {"snapshot_every", quantity(c.riccati.snapshot_every_h, Dim::duration)}};
    if (c.dt_rule == "fixed") sv["dt"] = quantity(c.riccati.dt, Dim::duration);
    else sv["dt"] = quantity(default_dt(c.n), Dim::duration);
    j["solver"] = sv;
    j["frontier"] = {{"w", c.w_list}, {"guarantee_factor", c.guarantee_factor}};
    j["simulation"] = {{"dt", quantity(c.sim.dt, Dim::duration)},
                       {"horizon", quantity(c.sim.horizon, Dim::duration)},
                       {"burn_in", c.sim.burn_in < 0.0 ? json("default") : quantity(c.sim.burn_in, Dim::duration)},
                       {"n_paths", c.sim.n_paths},
                       {"scheme", c.sim.scheme == SimScheme::controlled_lift ? "controlled_lift" : "uncontrolled_eq96"},
                       {"rate_mode", c.sim.rate_mode == RateMode::shared_rate ? "shared_rate" : "rate_classes"},
                       {"rate_classes", c.sim.rate_classes}};
    json da = {{"step", quantity(c.series_format.step_h, Dim::duration)},
               {"max_gap", quantity(c.series_format.max_gap_h, Dim::duration)},
               {"interpolate_gaps", c.series_format.interpolate_gaps},
               {"max_lag", quantity(c.acf_max_lag_h, Dim::duration)},
               {"histogram_bins", c.histogram_bins}};
    if (!c.series_path.empty()) da["series"] = c.series_path;
    j["data"] = da;
    j["fit"] = {{"p_nu", c.fit_p_nu}, {"restarts", c.fit_restarts}};
    j["mms"] = {{"n", c.mms_n}, {"beta", c.mms_beta}};
    j["charfn"] = {{"u", c.charfn_u}, {"n", c.charfn_n}};
    json od = {{"n", c.oracle_n}, {"w", c.oracle_w}, {"tol", c.oracle_tol}, {"dt", quantity(c.oracle_dt, Dim::duration)}};
    if (!std::isnan(c.oracle_x_hat)) od["x_hat"] = quantity(c.oracle_x_hat, Dim::discharge);
    j["oracle"] = od;
    return j;
}

inline json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw config_error("config file '" + path + "' is not valid JSON: " + e.what());
    }
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write '" + path + "'");
    out << text;
    if (!out) throw io_error("write failed for '" + path + "'");
}

}  // namespace supou::io
