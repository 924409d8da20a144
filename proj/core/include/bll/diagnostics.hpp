#pragma once

#include <span>
#include <vector>

#include "bll/outer_flow.hpp"
#include "bll/solver2d.hpp"
#include "bll/verdict.hpp"

namespace bll {

enum class EeSign { minus, plus };

/// Separable-ansatz energy: minus -> int (a_y^2/2 - a^3/4) dy,
/// plus -> int (a_y^2/2 + a^3/4) dy. Trapezoid on the sample grid.
/// Throws DecayError when a fails to decay at the truncation row.
double ee_energy(std::span<const double> y, std::span<const double> a,
                 EeSign sign = EeSign::minus);

/// One IMEX step of the reduced 1D equation a_t = a_yy + a^2 - a_y int_0^y a,
/// obtained by substituting u = -x a(t,y) into the pressureless half-plane
/// system; diffusion implicit, the quadratic and nonlocal terms explicit.
/// Boundary: a(0) = 0, a(y_max) = 0.
std::vector<double> ee_step(std::span<const double> y, std::span<const double> a, double dt,
                            double c_cfl = 0.5);

struct EeRunParams {
    double horizon = 5.0;
    double dt_max = 2e-3;
    double cfl = 0.4;
    double blowup_factor = 1e3;
    double sample_dt = 0.01;
};

/// Monitored run of the reduced equation; tracks sup and energy histories.
BlowupVerdict ee_run(std::span<const double> y, std::span<const double> a0,
                     const EeRunParams& p);

/// First crossing of the sup-norm threshold over a sampled history.
BlowupVerdict blowup_monitor(std::span<const double> t, std::span<const double> sup,
                             double threshold);

struct BackflowFinding {
    bool detected = false;
    double t_star = -1.0;
    double x_star = 0.0;
    bool boundary_first = true;  ///< interior dyu still positive at detection
    double interior_min = 0.0;
};

/// Earliest wall-shear zero crossing over a trajectory (linear interpolation
/// in t between samples), plus the boundary-first property check.
BackflowFinding backflow_detect(const std::vector<FlowState>& trajectory);

/// sup H(t) <= max{ e^{lambda t} sup|H(0)|, max_s e^{lambda(t-s)} sup|H(s)|_wall }
/// checked at every sample with relative slack.
bool extremum_principle_check(std::span<const double> t, std::span<const double> sup_H,
                              std::span<const double> wall_sup, double lambda,
                              double rel_slack = 0.02);

struct MonotonicityResult {
    double min_dyu = 0.0;
    bool flagged = false;  ///< min <= 0
    int arg_i = 0, arg_j = 0;
};

/// Minimum of dyu over the grid; flags a violation of the Oleinik condition.
/// y_cut restricts the scan (pass y_max - 2 to skip the truncation band).
MonotonicityResult monotonicity_monitor(const FlowState& s, double y_cut = 1e300);

/// max |U_t + U U_x + P_x| over the sampled (t, x) window.
double bernoulli_residual(const OuterFlow& outer, double t0, double t1, int nt,
                          std::span<const double> x_samples);

}  // namespace bll
