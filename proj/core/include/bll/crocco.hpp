#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bll/grid.hpp"

namespace bll {

/// Coefficient handle on the Crocco strip: (tau, xi, eta) -> value.
using CroccoCoef = std::function<double(double, double, double)>;
/// Wall handle: (tau, xi) -> value.
using WallCoef = std::function<double(double, double)>;

/// w(xi, eta) on [0,X] x [0,1] plus the coefficient handles of the Crocco
/// systems. w = u_y / U >= 0 with w(.,1) = 0. The explicit and linearized
/// implicit marching schemes use p_x and v0; the unsteady scheme additionally
/// uses A, B, C and U.
struct CroccoState {
    int n_xi = 0;   ///< columns are xi = l * (X/n_xi), l = 0..n_xi
    int n_eta = 0;  ///< rows are eta = k * (1/n_eta), k = 0..n_eta
    double X = 1.0;
    double nu = 1.0;
    double tau = 0.0;
    std::vector<double> w;  ///< (n_xi+1) x (n_eta+1), xi-major

    CroccoCoef A = [](double, double, double) { return 0.0; };
    CroccoCoef B = [](double, double, double) { return 0.0; };
    WallCoef C = [](double, double) { return 0.0; };
    WallCoef p_x = [](double, double) { return 0.0; };
    WallCoef v0 = [](double, double) { return 0.0; };
    CroccoCoef U = [](double, double, double) { return 1.0; };
    /// Inflow column at xi = 0; defaults to holding the initial column.
    std::function<double(double, double)> inflow;  ///< (tau, eta) -> w

    double d_xi() const { return X / n_xi; }
    double d_eta() const { return 1.0 / n_eta; }
    double& at(int l, int k) { return w[static_cast<size_t>(l) * (n_eta + 1) + k]; }
    double at(int l, int k) const { return w[static_cast<size_t>(l) * (n_eta + 1) + k]; }
};

/// Builds a state from an initial profile w0(xi, eta); enforces w(.,1) = 0.
CroccoState make_crocco_state(int n_xi, int n_eta, double X, double nu,
                              const std::function<double(double, double)>& w0);

/// Crocco transform: given u on a physical grid and the trace U(x) per column,
/// resamples w = u_y/U onto the uniform eta grid by monotone interpolation of
/// (eta(y), u_y/U). Requires du/dy > 0 (throws MonotonicityError otherwise).
CroccoState to_crocco(const Field& u, std::span<const double> U, int n_eta);

/// Inverse transform: integrates deta/dy = w(eta) per column back to the
/// physical grid. Requires w > 0 on eta in [0, 1 - eta_cut].
Field from_crocco(const CroccoState& c, std::span<const double> U, GridPtr g,
                  double eta_cut = 1e-3);

/// Steady von Mises state: w = u^2 over (x, psi) with psi the stream function.
struct VonMisesState {
    int n_x = 0, n_psi = 0;
    double X = 1.0, psi_max = 1.0;
    std::vector<double> w;  ///< (n_x) x (n_psi+1), x-major
    std::function<double(double)> dp_dx = [](double) { return 0.0; };
    std::function<double(double)> v0 = [](double) { return 0.0; };

    double d_psi() const { return psi_max / n_psi; }
    double& at(int i, int k) { return w[static_cast<size_t>(i) * (n_psi + 1) + k]; }
    double at(int i, int k) const { return w[static_cast<size_t>(i) * (n_psi + 1) + k]; }
};

/// von Mises transform of a steady positive field: w = u^2 resampled on the
/// uniform psi grid, psi = int_0^y u dy'. Requires u > 0 for y > 0.
VonMisesState to_von_mises(const Field& u, const std::function<double(double)>& dp_dx,
                           int n_psi);

/// Pointwise residual of the von Mises equation
/// dw/dx + v0 dw/dpsi - sqrt(w) d2w/dpsi2 + 2 dp/dx on interior nodes.
std::vector<double> von_mises_residual(const VonMisesState& s);

struct GateResult {
    bool pass = false;
    double ratio = 0.0;
    double bound = 0.0;
    double margin = 0.0;
};

/// Explicit-scheme stability gate h/sigma^2 < 1/(2 nu b1^2).
GateResult stability_check(double h, double sigma, double nu, double bound_b);

/// Unsteady-scheme gate h/delta^2 <= 1/(2 nu a^2 + b delta^2 / d).
GateResult stability_check_unsteady(double h, double d, double delta, double nu, double a,
                                    double b);

/// One explicit marching level (tau -> tau + h). sigma is the common xi/eta
/// step of the printed scheme; the state's own spacings are used, with the
/// regularizer M*d_eta added to the diffusion coefficient. M must exceed
/// max|p_x|. The gate is checked with bound_b = max w; rejects on failure.
CroccoState fd_explicit_step(const CroccoState& c, double h, double M, double bound_b);

/// One linearized implicit level: coefficients frozen at the old level,
/// tridiagonal solve in eta per column, sweeping xi upwind. Checks diagonal
/// dominance (throws DominanceError with the row).
CroccoState fd_implicit_step(const CroccoState& c, double h, double M);

/// One level of the three-index unsteady scheme with coefficients A, B and the
/// closed-form wall root w0 = [w1 - d/nu v0 + sqrt((w1 - d/nu v0)^2 + 4 d/nu C)]/2.
/// Gate checked with the supplied a-priori bounds (a, b).
CroccoState fd_unsteady_step(const CroccoState& c, double h, double gate_a, double gate_b);

struct ConvergenceRow {
    double step = 0.0;
    double error = 0.0;
    double observed_order = 0.0;  ///< pairwise order vs the previous row (0 for the first)
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    double lsq_order = 0.0;
};

enum class CroccoScheme { explicit_march, implicit_march, unsteady };

/// Refinement study against a reference 8x finer than the finest level.
/// The explicit scheme refines h parabolically (h -> h/4 when steps halve);
/// the implicit and unsteady schemes refine all steps together. w0 supplies
/// the (smooth) initial profile re-sampled at every level.
ConvergenceTable convergence_study(CroccoScheme scheme, const CroccoState& base,
                                   const std::function<double(double, double)>& w0, double T,
                                   double h0, int levels, double M = 0.1, double bound_b = 1.0,
                                   double gate_a = 1.0, double gate_b = 1.0);

}  // namespace bll
