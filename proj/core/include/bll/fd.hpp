#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace bll::fd {

/// Finite-difference weights for the m-th derivative at point x0 given
/// arbitrary node locations (Fornberg's recursion). weights.size() == nodes.size().
std::vector<double> weights(double x0, std::span<const double> nodes, int m);

/// Thomas algorithm for a tridiagonal system. diag/rhs have n entries,
/// lower/upper have n-1. If check_dominance, throws DominanceError on a row
/// with |d| < |l|+|u|. Overwrites rhs with the solution.
void solve_tridiag(std::span<const double> lower, std::span<const double> diag,
                   std::span<const double> upper, std::span<double> rhs,
                   bool check_dominance = false);

/// Periodic (cyclic) tridiagonal solve via Sherman-Morrison. All spans have n
/// entries; lower[i] couples row i to i-1 (wrapping), upper[i] to i+1.
void solve_cyclic_tridiag(std::span<const double> lower, std::span<const double> diag,
                          std::span<const double> upper, std::span<double> rhs);

/// Adaptive Simpson quadrature of f on [a,b] to given relative tolerance
/// (with abs_floor guarding the zero-integral case). Throws QuadratureError
/// if the recursion depth cap is hit before the tolerance is met.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, double abs_floor = 1e-300, int max_depth = 40);

/// Composite Simpson with a fixed even number of intervals (oracle-grade).
double composite_simpson(const std::function<double(double)>& f, double a, double b,
                         int intervals);

/// Cumulative trapezoid of samples f over nodes x; result[0] = 0.
std::vector<double> cumtrapz(std::span<const double> x, std::span<const double> f);

/// Trapezoid integral of samples f over nodes x.
double trapz(std::span<const double> x, std::span<const double> f);

/// minmod limiter.
inline double minmod(double a, double b) {
    if (a > 0 && b > 0) return a < b ? a : b;
    if (a < 0 && b < 0) return a > b ? a : b;
    return 0.0;
}

/// Monotonized-central slope: minmod(2a, (a+b)/2, 2b). Clips only at true
/// extrema, keeping the central slope in smooth monotone regions.
inline double minmod_mc(double a, double b) {
    if (a * b <= 0.0) return 0.0;
    const double c = 0.5 * (a + b);
    const double lim = 2.0 * (std::abs(a) < std::abs(b) ? a : b);
    return std::abs(c) < std::abs(lim) ? c : lim;
}

}  // namespace bll::fd
