// supou-lqc: command-line front end for the supOU control library.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "supou.hpp"

namespace fs = std::filesystem;
using supou::io::json;

namespace {

const std::vector<std::string> kSubcommands = {"stats", "fit",      "simulate",     "riccati", "kbe",
                                               "frontier", "mms", "charfn-check", "oracle-d"};

enum Exit { ok = 0, config = 2, nonconvergence = 3, ioerr = 4 };

struct Common {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
};

struct Overrides {
    int n = 0;
    double beta = NAN, eta_bar = NAN, tol = NAN, w = NAN;
    std::string dt_rule;
    std::string series;
    double p_nu = NAN;
    double max_lag_h = NAN;
    std::string station;
    std::string scheme;
    std::string n_list, beta_list, u_list, w_list;
    std::string snapshot_times;
    int decimate = 0;
    double years = NAN;
};

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw supou::config_error("cannot parse number '" + tok + "'");
        }
    }
    if (out.empty()) throw supou::config_error("empty number list");
    return out;
}

std::vector<int> parse_ints(const std::string& s) {
    std::vector<int> out;
    for (double v : parse_doubles(s)) {
        if (v != std::floor(v) || v < 1) throw supou::config_error("expected positive integers, got " + s);
        out.push_back(static_cast<int>(v));
    }
    return out;
}

struct Run {
    supou::io::RunConfig cfg;
    json normalized;
    fs::path out;
    int threads = 1;
};

Run prepare(const Common& cm, const Overrides& ov, bool need_model) {
    Run r;
    json root = json::object();
    if (!cm.config_path.empty()) root = supou::io::load_json(cm.config_path);
    r.cfg = supou::io::parse_config(root);
    auto& c = r.cfg;
    if (cm.seed_set) c.seed = cm.seed;
    c.sim.seed = c.seed;
    if (cm.threads > 0) c.threads = cm.threads;
    r.threads = supou::resolve_threads(c.threads);
    c.sim.threads = r.threads;
    if (ov.n > 0) c.n = ov.n;
    if (!std::isnan(ov.beta)) c.beta = ov.beta;
    if (!std::isnan(ov.eta_bar)) c.eta_bar = ov.eta_bar;
    if (!std::isnan(ov.tol)) c.riccati.tol = c.kbe.tol = ov.tol;
    if (!ov.dt_rule.empty()) {
        if (ov.dt_rule != "1/n" && ov.dt_rule != "fixed") throw supou::config_error("--dt-rule must be 1/n or fixed");
        if (ov.dt_rule == "fixed" && !(c.riccati.dt > 0.0))
            throw supou::config_error("--dt-rule fixed needs solver.dt in the config");
        c.dt_rule = ov.dt_rule;
    }
    if (!std::isnan(ov.w)) c.problem.w = ov.w;
    if (!ov.series.empty()) c.series_path = ov.series;
    if (!std::isnan(ov.p_nu)) c.fit_p_nu = ov.p_nu;
    if (!std::isnan(ov.max_lag_h)) c.acf_max_lag_h = static_cast<int>(ov.max_lag_h);
    if (!std::isnan(ov.years)) c.sim.horizon = ov.years * supou::units::hours_per_year;
    if (!ov.scheme.empty()) {
        if (ov.scheme == "uncontrolled") c.sim.scheme = supou::SimScheme::uncontrolled_eq96;
        else if (ov.scheme == "controlled") c.sim.scheme = supou::SimScheme::controlled_lift;
        else throw supou::config_error("--scheme must be uncontrolled or controlled");
    }
    if (!ov.n_list.empty()) c.mms_n = c.charfn_n = c.oracle_n = parse_ints(ov.n_list);
    if (!ov.beta_list.empty()) c.mms_beta = parse_doubles(ov.beta_list);
    if (!ov.u_list.empty()) c.charfn_u = parse_doubles(ov.u_list);
    if (!ov.w_list.empty()) c.w_list = parse_doubles(ov.w_list);
    if (!ov.station.empty()) {
        c.model = supou::presets::by_name(ov.station);
        c.has_model = true;
    }
    if (need_model && !c.has_model) throw supou::config_error("a model is required (config 'model' or --station)");
    if (c.has_model) supou::io::rebuild_problem(c);
    if (c.has_model && c.problem_kind == "custom") c.problem.model = c.model;
    r.normalized = supou::io::normalized(c);
    r.out = cm.out_dir;
    std::error_code ec;
    fs::create_directories(r.out, ec);
    if (ec) throw supou::io_error("cannot create output directory '" + r.out.string() + "': " + ec.message());
    return r;
}

json envelope(const Run& r, const std::string& cmd) {
    return {{"command", cmd}, {"seed", r.cfg.seed}, {"threads", r.threads}, {"config", r.normalized}};
}

void emit(const Run& r, const std::string& name, const json& j) {
    supou::io::write_text((r.out / name).string(), j.dump(2) + "\n");
    std::cout << j.dump(2) << "\n";
}

// CSV files start with a comment line holding the seed and the normalized config.
std::string csv_header(const Run& r) { return "# seed=" + std::to_string(r.cfg.seed) + " config=" + r.normalized.dump() + "\n"; }

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json fit_json(const supou::FitReport& f) {
    return {{"model", supou::io::model_json(f.model)},
            {"acf_sse", f.acf_sse},
            {"moment_objective", f.moment_objective},
            {"best_restart", f.best_restart},
            {"restarts_converged", f.restarts_converged},
            {"total_evals", f.total_evals},
            {"tail_warning", f.tail_warning},
            {"fitted_stats", supou::io::stats_json(supou::stationary_stats(f.model))}};
}

// ---- subcommands ----

int cmd_stats(const Common& cm, const Overrides& ov) {
    Run r = prepare(cm, ov, false);
    auto& c = r.cfg;
    json j = envelope(r, "stats");
    if (c.has_model) {
        j["theory"] = supou::io::stats_json(supou::stationary_stats(c.model));
        j["reciprocal_moment_R"] = supou::reciprocal_moment(c.model.mixing);
        if (!c.model.jump.is_zero()) {
            j["M1"] = supou::levy_moment(c.model.jump, 1);
            j["M2"] = supou::levy_moment(c.model.jump, 2);
        }
    }
    if (!c.series_path.empty()) {
        const auto s = supou::load_series(c.series_path, c.series_format);
        const auto e = supou::empirical_moments(s);
        j["data"] = {{"ave", e.ave}, {"std", e.std_dev}, {"skew", e.skew}, {"kurt", e.kurt}, {"length", s.values.size()}};
        const int lag = static_cast<int>(c.acf_max_lag_h / s.step);
        const auto acf = supou::empirical_acf(s, lag);
        std::string acsv = csv_header(r) + "lag_h,acf" + (c.has_model ? ",model_acf\n" : "\n");
        for (int k = 0; k <= lag; ++k) {
            acsv += num(k * s.step) + "," + num(acf[k]);
            if (c.has_model) acsv += "," + num(supou::acf(c.model.mixing, k * s.step));
            acsv += "\n";
        }
        supou::io::write_text((r.out / "acf.csv").string(), acsv);
        supou::BinConfig bc;
        bc.bins = c.histogram_bins;
        bc.log_bins = true;
        const auto h = supou::empirical_pdf(s.values, bc);
        std::string hcsv = csv_header(r) + "bin_lo,bin_hi,density\n";
        for (std::size_t k = 0; k < h.density.size(); ++k)
            hcsv += num(h.edges[k]) + "," + num(h.edges[k + 1]) + "," + num(h.density[k]) + "\n";
        supou::io::write_text((r.out / "histogram.csv").string(), hcsv);
    }
    if (!j.contains("theory") && !j.contains("data"))
        throw supou::config_error("stats needs a model or a data series");
    emit(r, "stats.json", j);
    return ok;
}

int cmd_fit(const Common& cm, const Overrides& ov) {
    Run r = prepare(cm, ov, false);
    auto& c = r.cfg;
    if (!(c.fit_p_nu == 1.0 || c.fit_p_nu == 2.0)) throw supou::config_error("--p-nu must be 1 or 2");
    json j = envelope(r, "fit");
    supou::LevyFitConfig lc;
    lc.seed = c.seed;
    lc.threads = r.threads;
    lc.restarts = c.fit_restarts;
    if (!c.series_path.empty()) {
        const auto s = supou::load_series(c.series_path, c.series_format);
        supou::IdentifyConfig ic;
        ic.levy = lc;
        ic.p_nu = c.fit_p_nu;
        ic.acf.max_lag_h = c.acf_max_lag_h;
        j["fit"] = fit_json(supou::identify_series(s, ic));
    } else {
        // published data statistics of a station, with its mixing law and floor held fixed
        if (ov.station.empty()) throw supou::config_error("fit needs --series or --station");
        const auto& st = ov.station.substr(0, 1);
        const supou::StationaryStats data = st == "Y"   ? supou::presets::data_stats_y()
                                            : st == "D" ? supou::presets::data_stats_d()
                                                        : supou::presets::data_stats_u();
        auto rep = supou::fit_levy(data, c.model.mixing, c.model.x_floor, c.fit_p_nu, lc);
        j["data_stats"] = supou::io::stats_json(data);
        j["fit"] = fit_json(rep);
    }
    emit(r, "fit.json", j);
    return ok;
}

int cmd_simulate(const Common& cm, const Overrides& ov) {
    Run r = prepare(cm, ov, true);
    auto& c = r.cfg;
    json j = envelope(r, "simulate");
    if (c.sim.scheme == supou::SimScheme::uncontrolled_eq96) {
        supou::SimConfig sc = c.sim;
        sc.keep_series = ov.decimate > 0;
        const auto s = supou::simulate_uncontrolled(c.model, sc);
        j["summary"] = {{"observations", s.observations},
                        {"steps", s.steps},
                        {"min", s.min_value},
                        {"mc", {{"ave", s.stats.ave}, {"std", s.stats.std_dev}, {"skew", s.stats.skew}, {"kurt", s.stats.kurt}}},
                        {"theory", supou::io::stats_json(supou::stationary_stats(c.model))}};
        if (!s.stats.histogram.density.empty()) {
            json hist = json::array();
            for (std::size_t k = 0; k < s.stats.histogram.density.size(); ++k)
                hist.push_back({s.stats.histogram.edges[k], s.stats.histogram.edges[k + 1], s.stats.histogram.density[k]});
            j["summary"]["histogram"] = hist;
        }
        if (ov.decimate > 0) {
            std::string p = csv_header(r) + "time_h,X\n";
            for (std::size_t k = 0; k < s.series.size(); k += ov.decimate)
                p += num(double(k) * c.sim.obs_interval) + "," + num(s.series[k]) + "\n";
            supou::io::write_text((r.out / "path.csv").string(), p);
        }
    } else {
        const auto L = c.lift(c.n);
        const auto ric = supou::solve_periodic_riccati(c.problem, L, c.riccati_for(L.n));
        const auto kbe = supou::solve_periodic_kbe(ric, c.problem, L, c.kbe);
        supou::SimConfig sc = c.sim;
        sc.dt = 0.0;
        const auto s = supou::simulate_controlled(c.model, L, ric, c.problem, sc);
        j["summary"] = {{"batches", s.batches},
                        {"steps", s.steps},
                        {"deviation", s.deviation},
                        {"deviation_se", s.deviation_se},
                        {"control", s.control},
                        {"control_se", s.control_se},
                        {"total", s.total},
                        {"total_se", s.total_se},
                        {"H_n", ric.H},
                        {"C_kbe", kbe.C},
                        {"D_kbe", ric.H - c.problem.w * kbe.C}};
    }
    emit(r, "simulate.json", j);
    return ok;
}

json riccati_meta(const supou::RiccatiSolution& s) {
    const auto margin = supou::dissipativity_margin(s);
    return {{"H", s.H},
            {"n", s.n},
            {"dt", supou::io::quantity(s.dt, supou::io::Dim::duration)},
            {"steps", s.steps},
            {"cycles", s.cycles},
            {"last_change", s.last_change},
            {"min_relative_eigenvalue", supou::min_relative_eigenvalue(s)},
            {"max_asymmetry", supou::max_asymmetry(s)},
            {"min_dissipativity_margin", *std::min_element(margin.begin(), margin.end())}};
}

int cmd_riccati(const Common& cm, const Overrides& ov) {
    Run r = prepare(cm, ov, true);
    auto& c = r.cfg;
    const auto L = c.lift(c.n);
    const auto s = supou::solve_periodic_riccati(c.problem, L, c.riccati_for(L.n));
    json j = envelope(r, "riccati");
    j["H"] = s.H;
    j["solution"] = riccati_meta(s);
    std::string lc;
    {
        std::ostringstream os;
        L.write_csv(os);
        lc = csv_header(r) + os.str();
    }
    supou::io::write_text((r.out / "lift.csv").string(), lc);
    if (!ov.snapshot_times.empty()) {
        std::string p = csv_header(r) + "t_h,i,j,A_ij,B_i\n";
        std::vector<double> ts = parse_doubles(ov.snapshot_times);
        for (double t : ts) {
            const double sp = std::fmod(std::fmod(t, s.period) + s.period, s.period);
            const std::size_t k = std::min<std::size_t>(std::lround(sp / (s.stride * s.dt)), s.snapshots() - 1);
            for (int i = 0; i < s.n; ++i)
                for (int jx = 0; jx < s.n; ++jx)
                    p += num(s.times[k]) + "," + std::to_string(i + 1) + "," + std::to_string(jx + 1) + "," +
                         num(s.A_at(k)[i * s.n + jx]) + "," + num(s.B_at(k)[i]) + "\n";
        }
        supou::io::write_text((r.out / "snapshots.csv").string(), p);
    }
    emit(r, "riccati.json", j);
    return ok;
}

int cmd_kbe(const Common& cm, const Overrides& ov) {
    Run r = prepare(cm, ov, true);
    auto& c = r.cfg;
    const auto L = c.lift(c.n);
    const auto s = supou::solve_periodic_riccati(c.problem, L, c.riccati_for(L.n));
    const auto k = supou::solve_periodic_kbe(s, c.problem, L, c.kbe);
    json j = envelope(r, "kbe");
    j["w"] = c.problem.w;
    j["J"] = s.H;
    j["C"] = k.C;
    j["D"] = s.H - c.problem.w * k.C;
    j["kbe_cycles"] = k.cycles;
    j["kbe_last_change"] = k.last_change;
    j["riccati"] = riccati_meta(s);
    emit(r, "kbe.json", j);
    return ok;
}

int cmd_frontier(const Common& cm, const Overrides& ov) {
    Run r = prepare(cm, ov, true);
    auto& c = r.cfg;
    const auto L = c.lift(c.n);
    supou::FrontierOptions fo;
    fo.riccati = c.riccati_for(L.n);
    fo.kbe = c.kbe;
    fo.threads = r.threads;
    const auto pts = supou::frontier(c.problem, L, c.w_list, fo);
    std::string csv = csv_header(r) + "w,J,C,D\n";
    json j = envelope(r, "frontier");
    json bad = json::array();
    double min_eig = HUGE_VAL;
    bool decreasing = true;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const auto& p = pts[k];
        csv += num(p.w) + "," + num(p.J) + "," + num(p.C) + "," + num(p.D) + "\n";
        if (!p.error.empty()) bad.push_back({{"w", p.w}, {"error", p.error}});
        else min_eig = std::min(min_eig, p.min_rel_eig);
        if (k > 0 && !(p.D < pts[k - 1].D)) decreasing = false;
    }
    supou::io::write_text((r.out / "frontier.csv").string(), csv);
    const double std2 = supou::stationary_stats(c.model).var;
    j["points"] = pts.size();
    j["failed"] = bad;
    j["convexity"] = supou::frontier_convexity(pts);
    j["D_strictly_decreasing"] = decreasing;
    j["min_relative_eigenvalue"] = min_eig;
    j["std2"] = std2;
    try {
        const auto x = supou::guarantee_crossing(pts, c.guarantee_factor, std2);
        j["crossing"] = {{"C", x.C}, {"w", x.w}, {"D", c.guarantee_factor * std2}};
    } catch (const supou::domain_error& e) {
        j["crossing"] = {{"error", e.what()}};
    }
    emit(r, "frontier.json", j);
    return bad.empty() ? ok : nonconvergence;
}

int cmd_mms(const Common& cm, const Overrides& ov) {
    Overrides o = ov;
    Run r = prepare(cm, o, false);
    auto& c = r.cfg;
    if (!c.has_model) {
        c.model = supou::presets::station_y();
        c.has_model = true;
    }
    c.problem_kind = "mms";
    supou::io::rebuild_problem(c);
    r.normalized = supou::io::normalized(c);
    json j = envelope(r, "mms");
    std::string csv = csv_header(r) + "beta,n,H,e_n,rate,linf_Gamma,linf_gamma\n";
    json studies = json::array();
    for (double beta : c.mms_beta) {
        supou::RiccatiOptions ro = c.riccati;
        std::vector<supou::MMSRow> rows;
        // the dt rule depends on n, so each n is its own study of one row
        for (int n : c.mms_n) {
            ro = c.riccati_for(n);
            auto st = supou::run_mms_convergence(c.problem, c.mms, beta, c.eta_bar, {n}, ro, 1);
            rows.push_back(st.rows[0]);
            j["H_exact"] = st.H_exact;
        }
        for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
            rows[k].rate = supou::convergence_rate(rows[k].e_n, rows[k + 1].e_n, rows[k].n, rows[k + 1].n);
            rows[k].rate_Gamma = supou::convergence_rate(rows[k].linf_Gamma, rows[k + 1].linf_Gamma, rows[k].n, rows[k + 1].n);
            rows[k].rate_gamma = supou::convergence_rate(rows[k].linf_gamma, rows[k + 1].linf_gamma, rows[k].n, rows[k + 1].n);
        }
        json tab = json::array();
        for (const auto& row : rows) {
            csv += num(beta) + "," + std::to_string(row.n) + "," + num(row.H) + "," + num(row.e_n) + "," +
                   (std::isnan(row.rate) ? std::string("") : num(row.rate)) + "," + num(row.linf_Gamma) + "," +
                   num(row.linf_gamma) + "\n";
            tab.push_back({{"n", row.n},
                           {"H", row.H},
                           {"e_n", row.e_n},
                           {"rate", std::isnan(row.rate) ? json(nullptr) : json(row.rate)},
                           {"linf_Gamma", row.linf_Gamma},
                           {"linf_gamma", row.linf_gamma},
                           {"cycles", row.cycles},
                           {"min_relative_eigenvalue", row.min_rel_eig},
                           {"seconds", row.seconds}});
        }
        studies.push_back({{"beta", beta}, {"rows", tab}});
    }
    j["studies"] = studies;
    supou::io::write_text((r.out / "mms.csv").string(), csv);
    std::cout << csv;
    supou::io::write_text((r.out / "mms.json").string(), j.dump(2) + "\n");
    return ok;
}

int cmd_charfn(const Common& cm, const Overrides& ov) {
    Run r = prepare(cm, ov, true);
    auto& c = r.cfg;
    json j = envelope(r, "charfn-check");
    const double M1 = supou::levy_moment(c.model.jump, 1);
    std::string csv = csv_header(r) + "n,u,gap,gbar,normalized_gap\n";
    json rows = json::array();
    for (int n : c.charfn_n) {
        const auto L = supou::build_lift(c.model.mixing, n, c.beta, c.eta_bar);
        const double G = supou::gbar(L, c.model.mixing);
        for (double u : c.charfn_u) {
            const double gap = supou::consistency_gap(c.model, L, u);
            const double norm = gap / (std::fabs(u) * M1 * G);
            csv += std::to_string(n) + "," + num(u) + "," + num(gap) + "," + num(G) + "," + num(norm) + "\n";
            rows.push_back({{"n", n}, {"u", u}, {"gap", gap}, {"gbar", G}, {"normalized_gap", norm}});
        }
    }
    j["rows"] = rows;
    supou::io::write_text((r.out / "charfn.csv").string(), csv);
    emit(r, "charfn.json", j);
    return ok;
}

int cmd_oracle(const Common& cm, const Overrides& ov) {
    Run r = prepare(cm, ov, true);
    auto& c = r.cfg;
    const double x_hat = std::isnan(c.oracle_x_hat) ? c.model.x_floor + 1.0 : c.oracle_x_hat;
    supou::SupOUModel m = c.model;
    m.jump.a_nu = 0.0;
    supou::OracleOptions oo;
    oo.tol = c.oracle_tol;
    oo.dt = c.oracle_dt;
    std::vector<supou::OracleReport> reps(c.oracle_n.size());
    supou::parallel_for(static_cast<int>(reps.size()), r.threads, [&](int k) {
        reps[k] = supou::oracle_check(m, supou::build_lift(m.mixing, c.oracle_n[k], c.beta, c.eta_bar), c.oracle_w,
                                      x_hat, oo);
    });
    auto sol = [](const supou::AnalyticDSolution& a) {
        return json{{"I", a.I}, {"gamma_avg", a.gamma_avg}, {"X_inf", a.X_inf}, {"H", a.H}};
    };
    json j = envelope(r, "oracle-d");
    j["w"] = c.oracle_w;
    j["x_hat"] = x_hat;
    json rows = json::array();
    bool all = true;
    for (const auto& rep : reps) {
        rows.push_back({{"n", rep.n},
                        {"R", rep.R},
                        {"R_n", rep.R_n},
                        {"gbar", rep.gbar},
                        {"analytic", sol(rep.analytic)},
                        {"discrete", sol(rep.discrete)},
                        {"relative_deviation", sol(rep.rel_dev)},
                        {"max_relative_deviation", rep.max_rel_dev},
                        {"identity_deviation", rep.identity_dev},
                        {"cycles", rep.cycles},
                        {"pass", rep.pass}});
        all = all && rep.pass;
    }
    j["reports"] = rows;
    j["tol"] = c.oracle_tol;
    j["all_pass"] = all;
    emit(r, "oracle_d.json", j);
    return ok;
}

void usage(std::ostream& os) {
    os << "usage: supou-lqc <subcommand> [--config PATH] [--out DIR] [--seed N] [--threads N] [options]\n"
          "subcommands: stats fit simulate riccati kbe frontier mms charfn-check oracle-d\n"
          "threads default to $SUPOU_LQC_THREADS, then the hardware count.\n"
          "exit codes: 0 ok, 2 config error, 3 non-convergence, 4 I/O error\n";
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2 || std::find(kSubcommands.begin(), kSubcommands.end(), std::string(argv[1])) == kSubcommands.end()) {
        const std::string a = argc < 2 ? "" : argv[1];
        if (a == "-h" || a == "--help") {
            usage(std::cout);
            return ok;
        }
        if (!a.empty()) std::cerr << "unknown subcommand '" << a << "'\n";
        usage(std::cerr);
        return config;
    }

    CLI::App app{"supOU discharge model, calibration and long-run LQ control"};
    app.require_subcommand(1);
    Common cm;
    Overrides ov;
    std::string seed_str;
    auto common = [&](CLI::App* s) {
        s->add_option("--config", cm.config_path, "JSON configuration file");
        s->add_option("--out", cm.out_dir, "output directory");
        s->add_option("--seed", seed_str, "64-bit seed");
        s->add_option("--threads", cm.threads, "worker threads");
        s->add_option("--station", ov.station, "preset model: Y, D, U or *-tempered");
    };
    std::map<std::string, int (*)(const Common&, const Overrides&)> handlers = {
        {"stats", cmd_stats},       {"fit", cmd_fit},           {"simulate", cmd_simulate},
        {"riccati", cmd_riccati},   {"kbe", cmd_kbe},           {"frontier", cmd_frontier},
        {"mms", cmd_mms},           {"charfn-check", cmd_charfn}, {"oracle-d", cmd_oracle}};
    std::map<std::string, CLI::App*> subs;
    for (const auto& name : kSubcommands) {
        auto* s = app.add_subcommand(name);
        common(s);
        subs[name] = s;
    }
    subs["stats"]->add_option("--series", ov.series, "discharge CSV (time,discharge)");
    subs["stats"]->add_option("--max-lag-h", ov.max_lag_h, "largest acf lag in hours");
    subs["fit"]->add_option("--series", ov.series, "discharge CSV (time,discharge)");
    subs["fit"]->add_option("--p-nu", ov.p_nu, "jump measure exponent (1 or 2)");
    subs["fit"]->add_option("--max-lag-h", ov.max_lag_h, "largest acf lag in hours");
    subs["simulate"]->add_option("--scheme", ov.scheme, "uncontrolled or controlled");
    subs["simulate"]->add_option("--years", ov.years, "recorded horizon in years");
    subs["simulate"]->add_option("--path-every", ov.decimate, "write path.csv keeping every k-th observation");
    for (const char* name : {"simulate", "riccati", "kbe", "frontier", "mms", "charfn-check", "oracle-d"}) {
        auto* s = subs[name];
        s->add_option("--n", ov.n, "lift size");
        s->add_option("--beta", ov.beta, "mesh exponent");
        s->add_option("--eta-bar", ov.eta_bar, "mesh scale in 1/h");
        s->add_option("--dt-rule", ov.dt_rule, "1/n or fixed");
        s->add_option("--tol", ov.tol, "cycle tolerance");
        s->add_option("--w", ov.w, "control weight");
    }
    subs["riccati"]->add_option("--snapshots", ov.snapshot_times, "comma-separated times (h) for snapshots.csv");
    subs["frontier"]->add_option("--w-list", ov.w_list, "comma-separated weights");
    subs["mms"]->remove_option(subs["mms"]->get_option("--n"));
    subs["mms"]->remove_option(subs["mms"]->get_option("--beta"));
    subs["mms"]->add_option("--n", ov.n_list, "comma-separated lift sizes");
    subs["mms"]->add_option("--beta", ov.beta_list, "comma-separated mesh exponents");
    subs["charfn-check"]->add_option("--n-list", ov.n_list, "comma-separated lift sizes");
    subs["charfn-check"]->add_option("--u", ov.u_list, "comma-separated arguments");
    subs["oracle-d"]->add_option("--n-list", ov.n_list, "comma-separated lift sizes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        usage(std::cerr);
        return config;
    }

    try {
        if (!seed_str.empty()) {
            std::size_t used = 0;
            cm.seed = std::stoull(seed_str, &used);
            if (used != seed_str.size()) throw supou::config_error("--seed must be an unsigned integer");
            cm.seed_set = true;
        }
        for (auto& [name, s] : subs)
            if (s->parsed()) return handlers[name](cm, ov);
    } catch (const supou::io_error& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return ioerr;
    } catch (const supou::convergence_error& e) {
        std::cerr << "no convergence: " << e.what() << "\n";
        return nonconvergence;
    } catch (const supou::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return config;
    } catch (const supou::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return config;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return config;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return config;
    } catch (const std::out_of_range& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return config;
    }
    usage(std::cerr);
    return config;
}
