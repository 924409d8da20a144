#pragma once

#include <functional>
#include <string>
#include <vector>

namespace bll {

/// Outer Euler trace driving the layer. Handles come from a small catalog so
/// that U_t and U_x are analytic (the Bernoulli residual check needs them).
struct OuterFlow {
    std::function<double(double, double)> U;    ///< (t,x) -> trace velocity
    std::function<double(double, double)> U_t;
    std::function<double(double, double)> U_x;
    std::function<double(double, double)> P_x;  ///< (t,x) -> pressure gradient
    double far_b = 0.0;                          ///< far magnetic component (shercliff/magnetic)
    std::string kind = "constant";

    /// U = u0, P_x = 0.
    static OuterFlow constant(double u0, double far_b = 0.0);

    /// U = mean + amp*cos(k(x - c t) + phase); P_x from Bernoulli.
    static OuterFlow traveling_wave(double mean, double amp, double k, double c,
                                    double phase = 0.0);

    /// U = u0 + accel*t (x-independent); P_x = -accel (Bernoulli-consistent).
    static OuterFlow uniform_accel(double u0, double accel);

    /// Tabulated-in-x steady trace (periodic linear interpolation); P_x likewise.
    static OuterFlow tabulated(std::vector<double> x, std::vector<double> U,
                               std::vector<double> P_x, double period);

    /// Arbitrary handles (used by manufactured-solution tests).
    static OuterFlow custom(std::function<double(double, double)> U,
                            std::function<double(double, double)> U_t,
                            std::function<double(double, double)> U_x,
                            std::function<double(double, double)> P_x);
};

}  // namespace bll
