#pragma once

#include <span>
#include <vector>

#include "bll/grid.hpp"

namespace bll {

/// Exact / semi-exact shear flows used as background states and solver oracles.
/// heat_kernel evolves tabulated initial samples u0s(y) by the half-line heat
/// equation with u(0)=0 and far field u_bar; hartmann is the steady profile
/// u_bar*(1-exp(-y)); erf_self_similar is u_bar*erf(y/(2*sqrt(1+t))).
struct ShearProfile {
    enum class Kind { heat_kernel, hartmann, erf_self_similar };
    Kind kind = Kind::hartmann;
    double u_bar = 1.0;
    std::vector<double> y0;  ///< sample nodes for heat_kernel
    std::vector<double> u0;  ///< initial samples, u0[0] = 0, u0 -> u_bar

    static ShearProfile hartmann(double u_bar);
    static ShearProfile erf_self_similar(double u_bar);
    static ShearProfile heat_kernel(std::vector<double> y, std::vector<double> u0, double u_bar);

    double value(double t, double y) const;
    double dy(double t, double y) const;  ///< normal derivative du/dy

    /// Samples value(t, .) on a grid's y nodes for every x column.
    Field sample(GridPtr g, double t) const;
};

/// Image-kernel evaluation of the half-line heat solution at (t, ys):
/// u(t,y) = 1/(2 sqrt(pi t)) * int_0^inf (G(y-yb) - G(y+yb)) u0(yb) dyb,
/// with linear interpolation of the samples and constant continuation beyond
/// the last node. Quadrature is adaptive to rel_tol; the integral is truncated
/// at yb = y + 12*sqrt(t), where the Gaussian factor is below exp(-36).
/// t = 0 returns the interpolated samples.
std::vector<double> heat_kernel_shear(std::span<const double> y0, std::span<const double> u0,
                                      double t, std::span<const double> query,
                                      double rel_tol = 1e-8);

/// u_bar * (1 - exp(-y)) at the query points.
std::vector<double> hartmann_profile(double u_bar, std::span<const double> query);

/// Verdict of the two-sided shear decay bound check.
struct DecayBoundReport {
    bool pass = false;
    double worst_y = 0.0;
    double worst_ratio = 0.0;  ///< most violating value of dyu / exp(-y/4) scaled by the bound
    std::string detail;
};

/// Checks C^-1 e^{-y/4} <= dyu <= C e^{-y/4} on all nodes with y <= y_max - 2.
DecayBoundReport decay_bound_check(std::span<const double> y, std::span<const double> dyu,
                                   double C, double y_max);

}  // namespace bll
