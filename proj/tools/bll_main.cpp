// bll: command line front end for the boundary-layer lab.
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bll/csv_io.hpp"
#include "bll/errors.hpp"
#include "bll/norms.hpp"
#include "bll/scenario.hpp"
#include "bll/selfsimilar.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path output_root() {
    if (const char* env = std::getenv("BLL_OUT")) return fs::path(env);
    return fs::path("bll_out");
}

int cmd_run(const std::string& config_path, std::string out_dir) {
    auto cfg = bll::load_config(config_path);
    fs::path dir = out_dir.empty() ? output_root() / ("run_" + cfg.hash()) : fs::path(out_dir);
    bll::RunRecord rec = bll::run_scenario(cfg, dir);
    std::cout << "verdict: " << rec.verdict_status;
    if (rec.t_star >= 0.0) std::cout << " at t* = " << rec.t_star;
    std::cout << "\noutputs in " << dir.string() << "\n";
    return rec.error.empty() ? 0 : 1;
}

int cmd_converge(const std::string& config_path, int levels, std::string out_csv) {
    auto cfg = bll::load_config(config_path);
    fs::path csv = out_csv.empty() ? output_root() / ("converge_" + cfg.hash() + ".csv")
                                   : fs::path(out_csv);
    auto table = bll::converge(cfg, levels, csv);
    std::cout << "step,error,observed_order\n";
    for (const auto& r : table.rows)
        std::cout << r.step << "," << r.error << "," << r.observed_order << "\n";
    std::cout << "least-squares order: " << table.lsq_order << "\n";
    std::cout << "table written to " << csv.string() << "\n";
    return 0;
}

int cmd_scan(const std::string& config_path, const std::vector<double>& params,
             std::string out_csv) {
    auto cfg = bll::load_config(config_path);
    fs::path csv = out_csv.empty() ? output_root() / ("scan_" + cfg.hash() + ".csv")
                                   : fs::path(out_csv);
    auto rows = bll::blowup_scan(cfg, params, csv);
    for (const auto& r : rows) {
        std::cout << "c = " << r.parameter << ": " << r.verdict;
        if (r.verdict == "blowup") std::cout << " at t* = " << r.t_star;
        if (!r.error.empty()) std::cout << " (" << r.error << ")";
        std::cout << "\n";
    }
    std::cout << "scan written to " << csv.string() << "\n";
    return 0;
}

int cmd_norms(const std::string& snapshot_path, const std::string& params_json) {
    bll::Snapshot snap = bll::read_snapshot(snapshot_path);
    bll::WeightParams p;
    if (!params_json.empty()) {
        json j = json::parse(params_json);
        if (j.contains("s")) p.s = j["s"];
        if (j.contains("gamma")) p.gamma = j["gamma"];
        if (j.contains("sigma")) p.sigma = j["sigma"];
        if (j.contains("delta")) p.delta = j["delta"];
        if (j.contains("mu_rate")) p.mu_rate = j["mu_rate"];
        if (j.contains("alpha")) p.alpha = j["alpha"];
        if (j.contains("tau")) p.tau = j["tau"];
    }
    json out;
    out["t"] = snap.t;
    out["grid"] = {{"n_x", snap.field.grid->n_x}, {"n_y", snap.field.grid->n_y}};
    bll::NormReport rep;
    out["sobolev_weighted"] = bll::sobolev_weighted(snap.field, p, &rep);
    out["tail_fraction"] = rep.tail_fraction;
    try {
        out["exp_weight"] = bll::exp_weight_norm(snap.field, std::min(p.s, 2), p.mu_rate);
    } catch (const bll::DecayError& e) {
        out["exp_weight_error"] = e.what();
    }
    try {
        auto sn = bll::analytic_seminorms(snap.field, p, snap.t, 16);
        out["X_sum"] = sn.X_sum;
        out["D_sum"] = sn.D_sum;
        out["Y_sum"] = sn.Y_sum;
        if (!sn.underflow.empty()) out["underflow_modes"] = sn.underflow;
    } catch (const bll::DecayError& e) {
        out["analytic_error"] = e.what();
    }
    auto membership = bll::class_membership(snap.field, p);
    out["class_membership"] = {{"pass", membership.pass},
                               {"lower_ok", membership.lower_ok},
                               {"deriv_ok", membership.deriv_ok},
                               {"worst_y", membership.worst_y}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_selfsimilar(bool blasius, const std::vector<double>& powerlaw, double eta_inf) {
    bll::SelfSimilarSolution sol;
    if (!powerlaw.empty()) {
        if (powerlaw.size() != 3)
            throw bll::PreconditionError("--powerlaw expects: n beta N");
        sol = bll::powerlaw_mhd_solve(powerlaw[0], powerlaw[1], powerlaw[2], eta_inf);
    } else {
        (void)blasius;  // default problem
        sol = bll::blasius_solve(eta_inf);
    }
    std::cout << "eta,f,fp,fpp\n";
    for (size_t i = 0; i < sol.eta.size(); i += 10)
        std::cout << bll::format_double(sol.eta[i]) << "," << bll::format_double(sol.f[i])
                  << "," << bll::format_double(sol.fp[i]) << ","
                  << bll::format_double(sol.fpp[i]) << "\n";
    std::cerr << "wall shear f''(0) = " << bll::format_double(sol.wall_shear)
              << "  (|f'(inf)-1| = " << sol.far_field_gap
              << ", residual = " << sol.residual_inf << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"boundary-layer lab: steppers, transforms, norms and detectors"};
    app.require_subcommand(1);

    std::string config_path, out_dir, out_csv, params_json, snapshot_path;
    int levels = 3;
    std::vector<double> scan_params;
    std::vector<double> powerlaw;
    bool blasius = false;
    double eta_inf = 12.0;
    long seed = 0;
    app.add_option("--seed", seed, "reserved; no stochastic components yet");

    auto* run = app.add_subcommand("run", "run a scenario config");
    run->add_option("config", config_path, "scenario JSON")->required();
    run->add_option("-o,--out", out_dir, "output directory");

    auto* conv = app.add_subcommand("converge", "refinement study");
    conv->add_option("config", config_path, "scenario JSON")->required();
    conv->add_option("--levels", levels, "number of levels (>= 3)");
    conv->add_option("-o,--out", out_csv, "output CSV");

    auto* scan = app.add_subcommand("blowup-scan", "parameter scan of blow-up runs");
    scan->add_option("template", config_path, "template scenario JSON")->required();
    scan->add_option("--param", scan_params, "parameter values (ee amplitude c)")
        ->required()
        ->delimiter(',');
    scan->add_option("-o,--out", out_csv, "output CSV");

    auto* nrm = app.add_subcommand("norms", "norm report for a field snapshot");
    nrm->add_option("snapshot", snapshot_path, "field snapshot CSV")->required();
    nrm->add_option("--params", params_json, "weight parameters as JSON");

    auto* ss = app.add_subcommand("selfsimilar", "self-similar profile solver");
    ss->add_flag("--blasius", blasius, "solve the Blasius problem (default)");
    ss->add_option("--powerlaw", powerlaw, "power-law MHD layer: n beta N")->expected(3);
    ss->add_option("--eta-inf", eta_inf, "far-field truncation");

    auto* cro = app.add_subcommand("crocco", "march a Crocco-variable scheme");
    cro->add_option("config", config_path, "scenario JSON (crocco_* variant)")->required();
    cro->add_option("-o,--out", out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, out_dir);
        if (conv->parsed()) return cmd_converge(config_path, levels, out_csv);
        if (scan->parsed()) return cmd_scan(config_path, scan_params, out_csv);
        if (nrm->parsed()) return cmd_norms(snapshot_path, params_json);
        if (ss->parsed()) return cmd_selfsimilar(blasius, powerlaw, eta_inf);
        if (cro->parsed()) return cmd_run(config_path, out_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
