#pragma once

#include <vector>

namespace bll {

/// Solution bundle of a self-similar boundary value problem on [0, eta_inf].
struct SelfSimilarSolution {
    std::vector<double> eta;  ///< uniform grid
    std::vector<double> f, fp, fpp;
    double wall_shear = 0.0;  ///< f''(0)
    double residual_inf = 0.0;  ///< max ODE residual on the grid (floor region excluded)
    double far_field_gap = 0.0; ///< |f'(eta_inf) - 1|
};

/// f''' + f f'' = 0, f(0) = f'(0) = 0, f'(inf) = 1, by shooting on f''(0)
/// with adaptive RK4 and bracketed bisection on f'(eta_inf) - 1.
SelfSimilarSolution blasius_solve(double eta_inf = 12.0, double tol = 1e-8);

/// |f''|^{n-1} f''' + f f'' + beta (1 - f'^2) + N (1 - f') = 0 with the same
/// boundary conditions; for n != 1 the |f''|^{1-n} factor floors |f''| at 1e-10.
SelfSimilarSolution powerlaw_mhd_solve(double n, double beta, double N_param,
                                       double eta_inf = 12.0, double tol = 1e-8);

/// Three-term small-eta series: f = a/2 eta^2 - a^2/5! eta^5 + 11 a^3/8! eta^8.
/// Accurate to ~1e-8 for eta <= 0.5 at Blasius-sized a.
std::vector<double> series_eval(double alpha, const std::vector<double>& eta);

}  // namespace bll
