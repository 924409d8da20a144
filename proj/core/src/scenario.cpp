#include "bll/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bll/csv_io.hpp"
#include "bll/diagnostics.hpp"
#include "bll/errors.hpp"
#include "bll/norms.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace bll {

namespace {

constexpr const char* kVersion = "bl-lab 0.1.0";

std::pair<int, int> line_col(const std::string& text, size_t byte) {
    int line = 1, col = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

std::string now_iso8601() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&tt));
    return buf;
}

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

json to_canonical_json(const ScenarioConfig& c) {
    json j;
    j["variant"] = c.variant;
    j["grid"] = {{"n_x", c.n_x},       {"x_period", c.x_period}, {"n_y", c.n_y},
                 {"y_max", c.y_max},   {"y_stretch", c.y_stretch}};
    j["outer"] = {{"kind", c.outer_kind}, {"u", c.outer_u},         {"accel", c.outer_accel},
                  {"amp", c.outer_amp},   {"k", c.outer_k},         {"speed", c.outer_speed},
                  {"phase", c.outer_phase}, {"far_b", c.far_b}};
    j["initial"] = {{"kind", c.initial_kind}, {"u_bar", c.u_bar},
                    {"delta", c.delta},       {"thickness_amp", c.thickness_amp},
                    {"c", c.ee_c},            {"path", c.snapshot_path}};
    j["horizon"] = c.horizon;
    j["dt"] = c.dt;
    j["cfl"] = c.cfl;
    j["eps"] = c.eps;
    j["sample_dt"] = c.sample_dt;
    j["detectors"] = {{"blowup_factor", c.blowup_factor},
                      {"stop_on_backflow", c.stop_on_backflow}};
    j["crocco"] = {{"n_xi", c.n_xi},   {"n_eta", c.n_eta}, {"X", c.crocco_X},
                   {"nu", c.nu},       {"h", c.crocco_h},  {"M", c.crocco_M},
                   {"bound_b", c.crocco_bound_b}, {"px", c.crocco_px},
                   {"v0", c.crocco_v0}, {"a", c.crocco_a}, {"amp", c.crocco_amp}};
    json norms = json::array();
    for (const auto& p : c.norm_requests)
        norms.push_back({{"s", p.s}, {"gamma", p.gamma}, {"sigma", p.sigma},
                         {"delta", p.delta}, {"mu_rate", p.mu_rate}, {"alpha", p.alpha},
                         {"tau", p.tau}});
    j["norms"] = norms;
    return j;
}

const std::set<std::string> kVariants = {"classical",       "hartmann_damped", "magnetic_ph",
                                         "shercliff",       "ee",              "crocco_explicit",
                                         "crocco_implicit", "crocco_unsteady"};

}  // namespace

std::string ScenarioConfig::canonical_json() const { return to_canonical_json(*this).dump(); }

std::string ScenarioConfig::hash() const {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a(canonical_json())));
    return buf;
}

ScenarioConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ConfigError({"parse error at line " + std::to_string(line) + ", column " +
                           std::to_string(col) + ": " + e.what()});
    }
    ScenarioConfig c;
    std::vector<std::string> bad;
    auto get = [&](const json& obj, const char* key, auto& into, bool required = false) {
        if (obj.contains(key)) {
            try {
                into = obj.at(key).get<std::decay_t<decltype(into)>>();
            } catch (const json::exception& e) {
                bad.push_back(std::string("field '") + key + "': " + e.what());
            }
        } else if (required) {
            bad.push_back(std::string("missing required key '") + key + "'");
        }
    };

    get(j, "variant", c.variant, true);
    const bool is_crocco = c.variant.rfind("crocco", 0) == 0;
    if (!kVariants.count(c.variant)) bad.push_back("unknown variant '" + c.variant + "'");

    if (j.contains("grid")) {
        const json& g = j["grid"];
        get(g, "n_x", c.n_x);
        get(g, "x_period", c.x_period);
        get(g, "n_y", c.n_y, true);
        get(g, "y_max", c.y_max, true);
        get(g, "y_stretch", c.y_stretch);
    } else if (!is_crocco) {
        bad.push_back("missing required key 'grid'");
    }
    if (j.contains("outer")) {
        const json& o = j["outer"];
        get(o, "kind", c.outer_kind);
        get(o, "u", c.outer_u);
        get(o, "accel", c.outer_accel);
        get(o, "amp", c.outer_amp);
        get(o, "k", c.outer_k);
        get(o, "speed", c.outer_speed);
        get(o, "phase", c.outer_phase);
        get(o, "far_b", c.far_b);
        if (c.outer_kind != "constant" && c.outer_kind != "traveling_wave" &&
            c.outer_kind != "uniform_accel")
            bad.push_back("unknown outer kind '" + c.outer_kind + "'");
    }
    if (j.contains("initial")) {
        const json& o = j["initial"];
        get(o, "kind", c.initial_kind);
        get(o, "u_bar", c.u_bar);
        get(o, "delta", c.delta);
        get(o, "thickness_amp", c.thickness_amp);
        get(o, "c", c.ee_c);
        get(o, "path", c.snapshot_path);
    }
    get(j, "horizon", c.horizon);
    get(j, "dt", c.dt);
    get(j, "cfl", c.cfl);
    get(j, "eps", c.eps);
    get(j, "sample_dt", c.sample_dt);
    if (j.contains("detectors")) {
        get(j["detectors"], "blowup_factor", c.blowup_factor);
        get(j["detectors"], "stop_on_backflow", c.stop_on_backflow);
    }
    if (j.contains("crocco")) {
        const json& o = j["crocco"];
        get(o, "n_xi", c.n_xi);
        get(o, "n_eta", c.n_eta);
        get(o, "X", c.crocco_X);
        get(o, "nu", c.nu);
        get(o, "h", c.crocco_h);
        get(o, "M", c.crocco_M);
        get(o, "bound_b", c.crocco_bound_b);
        get(o, "px", c.crocco_px);
        get(o, "v0", c.crocco_v0);
        get(o, "a", c.crocco_a);
        get(o, "amp", c.crocco_amp);
    } else if (is_crocco) {
        bad.push_back("missing required key 'crocco'");
    }
    if (j.contains("norms")) {
        for (const json& nj : j["norms"]) {
            WeightParams p;
            get(nj, "s", p.s);
            get(nj, "gamma", p.gamma);
            get(nj, "sigma", p.sigma);
            get(nj, "delta", p.delta);
            get(nj, "mu_rate", p.mu_rate);
            get(nj, "alpha", p.alpha);
            get(nj, "tau", p.tau);
            c.norm_requests.push_back(p);
        }
    }

    // semantic validation (aggregated)
    if (!is_crocco && c.variant != "ee") {
        if (c.n_x < 4) bad.push_back("grid.n_x must be >= 4");
        if (c.n_y < 4) bad.push_back("grid.n_y must be >= 4");
        if (!(c.x_period > 0)) bad.push_back("grid.x_period must be positive");
        if (!(c.y_max > 0)) bad.push_back("grid.y_max must be positive");
        if (!(c.y_stretch >= 1.0)) bad.push_back("grid.y_stretch must be >= 1");
    }
    if (!(c.horizon > 0)) bad.push_back("horizon must be positive");
    if (c.dt < 0) bad.push_back("dt must be >= 0");
    if (c.eps < 0) bad.push_back("eps must be >= 0");
    if (c.variant == "hartmann_damped" && c.outer_kind != "constant")
        bad.push_back("hartmann_damped requires a constant outer flow (the far field u_bar)");
    if (c.variant == "ee" && c.initial_kind != "ee_profile")
        bad.push_back("variant ee requires initial.kind = ee_profile");
    if (is_crocco) {
        if (c.n_xi < 2 || c.n_eta < 2) bad.push_back("crocco counts must be >= 2");
        if (!(c.nu > 0)) bad.push_back("crocco.nu must be positive");
        if (!(c.crocco_h > 0)) bad.push_back("crocco.h must be positive");
    }
    if (!bad.empty()) throw ConfigError(bad);
    return c;
}

ScenarioConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string RunRecord::to_json() const {
    json j;
    j["config_hash"] = config_hash;
    j["started_at"] = started_at;
    j["finished_at"] = finished_at;
    j["verdict"] = {{"status", verdict_status}, {"t_star", t_star}, {"x_star", x_star}};
    j["outputs"] = outputs;
    j["version"] = version;
    if (!error.empty()) j["error"] = error;
    return j.dump(2) + "\n";
}

namespace {

OuterFlow make_outer(const ScenarioConfig& c) {
    if (c.outer_kind == "traveling_wave")
        return OuterFlow::traveling_wave(c.outer_u, c.outer_amp, c.outer_k, c.outer_speed,
                                         c.outer_phase);
    if (c.outer_kind == "uniform_accel") return OuterFlow::uniform_accel(c.outer_u, c.outer_accel);
    auto f = OuterFlow::constant(c.outer_u, c.far_b);
    return f;
}

}  // namespace

FlowState make_initial_state(const ScenarioConfig& cfg) {
    auto grid = build_grid(cfg.n_x, cfg.x_period, cfg.n_y, cfg.y_max, cfg.y_stretch);
    FlowState s;
    s.t = 0.0;
    s.variant = variant_from_string(cfg.variant);
    s.outer = make_outer(cfg);
    s.eps = cfg.eps;
    if (cfg.initial_kind == "hartmann_steady") {
        s.u = steady_damped_profile(grid, cfg.u_bar);
    } else if (cfg.initial_kind == "hartmann") {
        s.u = make_field(grid, FieldRole::u, [&](double, double y) {
            return cfg.u_bar * (1.0 - std::exp(-y));
        });
    } else if (cfg.initial_kind == "erf") {
        s.u = make_field(grid, FieldRole::u, [&](double x, double y) {
            const double thick = 1.0 + cfg.thickness_amp * std::cos(x);
            return cfg.u_bar * std::erf(y / (2.0 * thick));
        });
    } else if (cfg.initial_kind == "perturbed_hartmann") {
        Field base = steady_damped_profile(grid, cfg.u_bar);
        s.u = base;
        for (int i = 0; i < grid->n_x; ++i)
            for (int j = 0; j < grid->n_y; ++j) {
                const double y = grid->y[j];
                const double shape = (1.0 - std::exp(-y)) * std::exp(-y / 8.0);
                s.u.at(i, j) += cfg.delta * std::cos(grid->x[i]) * shape;
            }
        for (int i = 0; i < grid->n_x; ++i) {
            s.u.at(i, 0) = 0.0;
            s.u.at(i, grid->n_y - 1) = cfg.u_bar;
        }
    } else if (cfg.initial_kind == "snapshot") {
        Snapshot snap = read_snapshot(cfg.snapshot_path);
        s.u = snap.field;
        s.t = snap.t;
    } else {
        throw ConfigError({"unknown initial kind '" + cfg.initial_kind + "' for a 2D variant"});
    }
    s.u.role = FieldRole::u;
    return s;
}

RunRecord run_scenario(const ScenarioConfig& cfg, const fs::path& out_dir) {
    RunRecord rec;
    rec.config_hash = cfg.hash();
    rec.version = kVersion;
    rec.started_at = now_iso8601();
    fs::create_directories(out_dir);

    try {
        if (cfg.variant == "ee") {
            const int ny = std::max(cfg.n_y, 201);
            std::vector<double> y(ny), a0(ny);
            for (int j = 0; j < ny; ++j) {
                y[j] = cfg.y_max * j / (ny - 1);
                a0[j] = cfg.ee_c * y[j] * std::exp(-y[j]);
            }
            EeRunParams p;
            p.horizon = cfg.horizon;
            p.blowup_factor = cfg.blowup_factor;
            p.sample_dt = cfg.sample_dt;
            BlowupVerdict v = ee_run(y, a0, p);
            Series series;
            series.columns = {"t", "sup", "energy_minus"};
            for (size_t i = 0; i < v.t_history.size(); ++i)
                series.rows.push_back({v.t_history[i], v.sup_history[i],
                                       i < v.energy_history.size() ? v.energy_history[i]
                                                                   : std::nan("")});
            emit_csv(series, out_dir / "series.csv");
            rec.outputs.push_back((out_dir / "series.csv").string());
            rec.verdict_status = v.status_string();
            rec.t_star = v.t_star;
        } else if (cfg.variant.rfind("crocco", 0) == 0) {
            CroccoState c = make_crocco_state(
                cfg.n_xi, cfg.n_eta, cfg.crocco_X, cfg.nu, [&](double xi, double eta) {
                    const double s = 0.5 * (1.0 - std::cos(2.0 * M_PI * xi / cfg.crocco_X));
                    const double b = (1.0 - eta * eta);
                    return cfg.crocco_a * (1.0 - eta) + cfg.crocco_amp * s * b * b;
                });
            c.p_x = [&](double, double) { return cfg.crocco_px; };
            c.v0 = [&](double, double) { return cfg.crocco_v0; };
            const int nt = static_cast<int>(std::lround(cfg.horizon / cfg.crocco_h));
            for (int n = 0; n < nt; ++n) {
                if (cfg.variant == "crocco_explicit")
                    c = fd_explicit_step(c, cfg.crocco_h, cfg.crocco_M, cfg.crocco_bound_b);
                else if (cfg.variant == "crocco_implicit")
                    c = fd_implicit_step(c, cfg.crocco_h, cfg.crocco_M);
                else
                    c = fd_unsteady_step(c, cfg.crocco_h, cfg.crocco_bound_b, cfg.crocco_bound_b);
            }
            write_crocco_snapshot(c, out_dir / "crocco_final.csv");
            rec.outputs.push_back((out_dir / "crocco_final.csv").string());
            rec.verdict_status = "completed_horizon";
        } else {
            FlowState s0 = make_initial_state(cfg);
            RunParams p;
            p.horizon = cfg.horizon;
            p.dt = cfg.dt;
            p.cfl_target = cfg.cfl;
            p.sample_dt = cfg.sample_dt;
            p.blowup_factor = cfg.blowup_factor;
            p.stop_on_backflow = cfg.stop_on_backflow;
            Field background = s0.u;
            if (cfg.initial_kind == "perturbed_hartmann")
                background = steady_damped_profile(s0.u.grid, cfg.u_bar);
            p.background = &background;
            RunResult r = run(s0, p);
            Series series;
            series.columns = {"t", "pert_l2", "min_wall_shear", "sup"};
            for (size_t q = 0; q < cfg.norm_requests.size(); ++q)
                series.columns.push_back("H_s" + std::to_string(cfg.norm_requests[q].s) +
                                         "_g" + format_double(cfg.norm_requests[q].gamma));
            for (size_t n = 0; n < r.series.size(); ++n) {
                const auto& smp = r.series[n];
                std::vector<double> row = {smp.t, smp.pert_l2, smp.min_wall_shear, smp.sup};
                for (const auto& np : cfg.norm_requests) {
                    Field pert = r.snapshots[n].u;
                    for (size_t q = 0; q < pert.values.size(); ++q)
                        pert.values[q] -= background.values[q];
                    row.push_back(sobolev_weighted(pert, np));
                }
                series.rows.push_back(std::move(row));
            }
            emit_csv(series, out_dir / "series.csv");
            rec.outputs.push_back((out_dir / "series.csv").string());
            if (!r.snapshots.empty()) {
                write_snapshot(r.snapshots.back().u, r.snapshots.back().t,
                               out_dir / "final.csv");
                rec.outputs.push_back((out_dir / "final.csv").string());
            }
            rec.verdict_status = r.verdict.status_string();
            rec.t_star = r.verdict.t_star;
            rec.x_star = r.verdict.x_star;
        }
    } catch (const std::exception& e) {
        rec.error = e.what();
        rec.verdict_status = "error";
    }
    rec.finished_at = now_iso8601();
    write_text_atomic(rec.to_json(), out_dir / "record.json");
    return rec;
}

ConvergenceTable converge(const ScenarioConfig& cfg, int levels, const fs::path& out_csv) {
    if (levels < 3) throw PreconditionError("converge: levels must be >= 3");
    ConvergenceTable table;
    if (cfg.variant.rfind("crocco", 0) == 0) {
        auto w0 = [&](double xi, double eta) {
            const double s = 0.5 * (1.0 - std::cos(2.0 * M_PI * xi / cfg.crocco_X));
            const double b = (1.0 - eta * eta);
            return cfg.crocco_a * (1.0 - eta) + cfg.crocco_amp * s * b * b;
        };
        CroccoState base = make_crocco_state(cfg.n_xi, cfg.n_eta, cfg.crocco_X, cfg.nu, w0);
        base.p_x = [&](double, double) { return cfg.crocco_px; };
        base.v0 = [&](double, double) { return cfg.crocco_v0; };
        const CroccoScheme scheme = cfg.variant == "crocco_explicit"
                                        ? CroccoScheme::explicit_march
                                        : (cfg.variant == "crocco_implicit"
                                               ? CroccoScheme::implicit_march
                                               : CroccoScheme::unsteady);
        table = convergence_study(scheme, base, w0, cfg.horizon, cfg.crocco_h, levels,
                                  cfg.crocco_M, cfg.crocco_bound_b, cfg.crocco_bound_b,
                                  cfg.crocco_bound_b);
    } else {
        // x-independent 2D run against the heat-kernel shear oracle
        for (int L = 0; L < levels; ++L) {
            const int f = 1 << L;
            ScenarioConfig c = cfg;
            c.n_y = (cfg.n_y - 1) * f + 1;
            c.dt = cfg.dt / (f * f);
            FlowState s0 = make_initial_state(c);
            RunParams p;
            p.horizon = c.horizon;
            p.dt = c.dt;
            p.sample_dt = c.horizon;
            RunResult r = run(s0, p);
            const Field& uT = r.snapshots.back().u;
            std::vector<double> u0col(s0.u.grid->n_y);
            for (int j = 0; j < s0.u.grid->n_y; ++j) u0col[j] = s0.u.at(0, j);
            auto oracle = heat_kernel_shear(s0.u.grid->y, u0col, c.horizon, s0.u.grid->y);
            double err = 0.0;
            for (int j = 0; j < s0.u.grid->n_y; ++j)
                err = std::max(err, std::abs(uT.at(0, j) - oracle[j]));
            ConvergenceRow row;
            row.step = (c.y_max / (c.n_y - 1));
            row.error = err;
            if (L > 0) row.observed_order = std::log2(table.rows.back().error / err);
            table.rows.push_back(row);
        }
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (const auto& r : table.rows) {
            if (r.error <= 0) continue;
            sx += std::log(r.step);
            sy += std::log(r.error);
            sxx += std::log(r.step) * std::log(r.step);
            sxy += std::log(r.step) * std::log(r.error);
            ++n;
        }
        if (n >= 2) table.lsq_order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    Series out;
    out.columns = {"step", "error", "observed_order"};
    for (const auto& r : table.rows) out.rows.push_back({r.step, r.error, r.observed_order});
    emit_csv(out, out_csv);
    return table;
}

std::vector<ScanRow> blowup_scan(const ScenarioConfig& tmpl, std::vector<double> params,
                                 const fs::path& out_csv) {
    std::vector<double> unique;
    for (double p : params)
        if (std::find(unique.begin(), unique.end(), p) == unique.end()) unique.push_back(p);
    std::vector<ScanRow> rows;
    for (double p : unique) {
        ScanRow row;
        row.parameter = p;
        try {
            ScenarioConfig c = tmpl;
            c.ee_c = p;
            const int ny = std::max(c.n_y, 201);
            std::vector<double> y(ny), a0(ny);
            for (int j = 0; j < ny; ++j) {
                y[j] = c.y_max * j / (ny - 1);
                a0[j] = p * y[j] * std::exp(-y[j]);
            }
            EeRunParams ep;
            ep.horizon = c.horizon;
            ep.blowup_factor = c.blowup_factor;
            BlowupVerdict v = ee_run(y, a0, ep);
            row.verdict = v.status_string();
            row.t_star = v.t_star;
        } catch (const std::exception& e) {
            row.verdict = "error";
            row.error = e.what();
        }
        rows.push_back(row);
    }
    Series out;
    out.columns = {"parameter", "blowup", "t_star"};
    for (const auto& r : rows)
        out.rows.push_back({r.parameter, r.verdict == "blowup" ? 1.0 : 0.0, r.t_star});
    emit_csv(out, out_csv);
    return rows;
}

}  // namespace bll
