#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bll/crocco.hpp"
#include "bll/norms.hpp"
#include "bll/solver2d.hpp"
#include "bll/verdict.hpp"

namespace bll {

/// Parsed scenario. `variant` selects the backing solver: one of the 2D
/// variants, "ee" (the reduced 1D blow-up equation) or "crocco_explicit" /
/// "crocco_implicit" / "crocco_unsteady".
struct ScenarioConfig {
    std::string variant = "classical";

    // 2D grid
    int n_x = 32;
    double x_period = 2.0 * 3.14159265358979323846;
    int n_y = 121;
    double y_max = 20.0;
    double y_stretch = 1.0;

    // outer flow
    std::string outer_kind = "constant";
    double outer_u = 1.0;
    double outer_accel = 0.0;
    double outer_amp = 0.0;
    double outer_k = 1.0;
    double outer_speed = 0.0;
    double outer_phase = 0.0;
    double far_b = 0.0;

    // initial data catalog
    std::string initial_kind = "hartmann_steady";
    double u_bar = 1.0;
    double delta = 0.0;         ///< perturbation amplitude
    double thickness_amp = 0.0; ///< erf-profile thickness modulation
    double ee_c = 1.0;          ///< amplitude of the separable blow-up profile
    std::string snapshot_path;

    double horizon = 1.0;
    double dt = 0.0;
    double cfl = 0.4;
    double eps = 0.0;
    double sample_dt = 0.05;
    double blowup_factor = 1e3;
    bool stop_on_backflow = false;

    // crocco scheme parameters
    int n_xi = 16;
    int n_eta = 16;
    double crocco_X = 1.0;
    double nu = 0.5;
    double crocco_h = 0.0;
    double crocco_M = 0.1;
    double crocco_bound_b = 1.0;
    double crocco_px = 0.0;
    double crocco_v0 = 0.0;
    double crocco_a = 0.6;    ///< base slope of the initial profile
    double crocco_amp = 0.2;  ///< bump amplitude of the initial profile

    std::vector<WeightParams> norm_requests;

    /// Stable 64-bit hash of the canonical serialized form.
    std::string hash() const;
    std::string canonical_json() const;
};

/// Parses the JSON config text. Aggregates all violations into a ConfigError
/// (parse errors carry line/column).
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);

struct RunRecord {
    std::string config_hash;
    std::string started_at;
    std::string finished_at;
    std::string verdict_status;
    double t_star = -1.0;
    double x_star = 0.0;
    std::vector<std::string> outputs;
    std::string version;
    std::string error;  ///< non-empty when the run failed

    std::string to_json() const;
};

/// Builds the initial 2D state from the catalog entry.
FlowState make_initial_state(const ScenarioConfig& cfg);

/// Executes the matching module run and writes series.csv, snapshots and
/// record.json into out_dir (atomically). Invalid configs write nothing.
RunRecord run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& out_dir);

/// Refinement study: delegates to the Crocco convergence study for crocco
/// variants, otherwise runs the x-independent shear-oracle refinement of the
/// 2D solver. Writes (h, error, order) rows to out_csv; returns the rows.
ConvergenceTable converge(const ScenarioConfig& cfg, int levels,
                          const std::filesystem::path& out_csv);

struct ScanRow {
    double parameter = 0.0;
    std::string verdict;
    double t_star = -1.0;
    std::string error;
};

/// Independent runs of the template config over the parameter values
/// (currently the ee amplitude c). Duplicates are dropped; per-row failures
/// are recorded and the scan continues.
std::vector<ScanRow> blowup_scan(const ScenarioConfig& tmpl, std::vector<double> params,
                                 const std::filesystem::path& out_csv);

}  // namespace bll
