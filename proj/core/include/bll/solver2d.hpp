#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bll/grid.hpp"
#include "bll/outer_flow.hpp"
#include "bll/shear.hpp"
#include "bll/verdict.hpp"

namespace bll {

enum class Variant { classical, hartmann_damped, magnetic_ph, shercliff };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& s);

/// Time-stamped solution bundle for one 2D variant.
struct FlowState {
    double t = 0.0;
    Field u;
    Variant variant = Variant::classical;
    OuterFlow outer;
    double eps = 0.0;  ///< tangential regularization amplitude (coefficient eps^2 on u_xx)
};

using SourceFn = std::function<double(double, double, double)>;  ///< (t,x,y) -> forcing

/// One IMEX step: y-diffusion, eps^2 x-diffusion and linear damping implicit;
/// advection explicit with limited second-order upwinding; v recovered from
/// continuity; wall u=0 and far-field u=U(t,x) enforced exactly.
/// Throws CflError when dt exceeds c_cfl * min(dx/max|u|, hy_min/max|v|).
FlowState step(const FlowState& s, double dt, const SourceFn& source = nullptr,
               double c_cfl = 0.5);

/// Magnetic component for the mixed (shercliff) variant:
/// d2b/dy2 = -du/dx with b(x,0) = 0 and db/dy -> 0 at the truncation row.
/// Throws DecayError when |du/dx| at the top rows exceeds decay_tol.
Field solve_b(const Field& u, double far_b, double decay_tol = 1e-6);

struct SplitReport {
    double far_field_max = 0.0;  ///< max |perturbation| on the truncation row
    bool pass = true;
};

/// u = background(t) + perturbation; returns the perturbation and its far-field report.
std::pair<Field, SplitReport> perturbation_split(const FlowState& s,
                                                 const ShearProfile& background,
                                                 double far_tol = 1e-6);

/// Discrete steady profile of the damped variants: solves u - u_yy = u_bar
/// with u(0)=0, u(y_max)=u_bar on the grid (exact fixed point of step()).
Field steady_damped_profile(GridPtr g, double u_bar);

struct CompatIdentity {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = true;
};

struct CompatReport {
    std::vector<CompatIdentity> items;
    bool all_pass = true;
};

/// Wall-compatibility checker. For classical/hartmann_damped the field is the
/// perturbation about the background shear and the order-0/2/4/6 identities of
/// the perturbation system are evaluated; for shercliff the identities couple
/// u and the recovered b; for magnetic_ph the vorticity wall reduction
/// dw/dy|_0 = P_x - U is evaluated (outer required). Residual tolerances scale
/// with the one-sided stencil error.
CompatReport compat_check(const Field& u0, const ShearProfile& background, int order,
                          Variant variant, const OuterFlow* outer = nullptr);

/// First two boundary reductions of the vorticity system of the magnetic
/// variant: residuals of dw/dy|_0 = K and d3w/dy3|_0 = (dt - eps^2 dxx)K + K
/// + w dw/dx|_0, with K = P_x - U. dK/dt is formed by centered differences of
/// the outer-flow handles.
std::vector<double> wall_reduction_residuals(const Field& w, const OuterFlow& outer, double t,
                                             double eps);

struct RunParams {
    double horizon = 1.0;
    double dt = 0.0;           ///< fixed step when > 0, otherwise CFL-adaptive
    double cfl_target = 0.4;
    double dt_max = 1e-2;      ///< cap for adaptive stepping
    double sample_dt = 0.05;
    double blowup_factor = 1e3;
    bool stop_on_backflow = false;
    double c_cfl = 0.5;        ///< hard CFL guard passed to step()
    int max_steps = 50'000'000;
    const Field* background = nullptr;  ///< reference for the perturbation series
    SourceFn source;           ///< optional manufactured-solution forcing
};

struct RunSample {
    double t = 0.0;
    double pert_l2 = 0.0;
    double min_wall_shear = 0.0;
    double sup = 0.0;
};

struct RunResult {
    std::vector<FlowState> snapshots;
    std::vector<RunSample> series;
    BlowupVerdict verdict;
};

/// Steps to the horizon or until a detector triggers, sampling at the cadence.
RunResult run(const FlowState& s0, const RunParams& p);

/// Wall shear dyu(x, 0) per x column (second-order one-sided stencil).
std::vector<double> wall_shear(const Field& u);

/// L2 norm of (u - ref) over the periodic strip (trapezoid in y).
double l2_distance(const Field& u, const Field& ref);

}  // namespace bll
