#include "bll/outer_flow.hpp"

#include <cmath>

#include "bll/errors.hpp"

namespace bll {

OuterFlow OuterFlow::constant(double u0, double far_b) {
    OuterFlow f;
    f.U = [u0](double, double) { return u0; };
    f.U_t = [](double, double) { return 0.0; };
    f.U_x = [](double, double) { return 0.0; };
    f.P_x = [](double, double) { return 0.0; };
    f.far_b = far_b;
    f.kind = "constant";
    return f;
}

OuterFlow OuterFlow::traveling_wave(double mean, double amp, double k, double c, double phase) {
    OuterFlow f;
    auto arg = [k, c, phase](double t, double x) { return k * (x - c * t) + phase; };
    f.U = [=](double t, double x) { return mean + amp * std::cos(arg(t, x)); };
    f.U_t = [=](double t, double x) { return amp * k * c * std::sin(arg(t, x)); };
    f.U_x = [=](double t, double x) { return -amp * k * std::sin(arg(t, x)); };
    // Bernoulli: P_x = -(U_t + U U_x)
    f.P_x = [=](double t, double x) {
        const double u = mean + amp * std::cos(arg(t, x));
        const double ut = amp * k * c * std::sin(arg(t, x));
        const double ux = -amp * k * std::sin(arg(t, x));
        return -(ut + u * ux);
    };
    f.kind = "traveling_wave";
    return f;
}

OuterFlow OuterFlow::uniform_accel(double u0, double accel) {
    OuterFlow f;
    f.U = [=](double t, double) { return u0 + accel * t; };
    f.U_t = [=](double, double) { return accel; };
    f.U_x = [](double, double) { return 0.0; };
    f.P_x = [=](double, double) { return -accel; };
    f.kind = "uniform_accel";
    return f;
}

namespace {
double interp_periodic(const std::vector<double>& xs, const std::vector<double>& fs, double period,
                       double x) {
    double xm = std::fmod(x, period);
    if (xm < 0) xm += period;
    const size_t n = xs.size();
    for (size_t i = 0; i < n; ++i) {
        const double x0 = xs[i];
        const double x1 = (i + 1 < n) ? xs[i + 1] : xs[0] + period;
        if (xm >= x0 && xm <= x1) {
            const double t = (xm - x0) / (x1 - x0);
            return (1.0 - t) * fs[i] + t * fs[(i + 1) % n];
        }
    }
    return fs[0];
}
}  // namespace

OuterFlow OuterFlow::tabulated(std::vector<double> x, std::vector<double> U,
                               std::vector<double> P_x, double period) {
    if (x.size() != U.size() || x.size() != P_x.size() || x.size() < 2)
        throw PreconditionError("OuterFlow::tabulated: mismatched tables");
    OuterFlow f;
    f.U = [x, U, period](double, double xx) { return interp_periodic(x, U, period, xx); };
    f.U_t = [](double, double) { return 0.0; };
    // centered difference of the interpolant
    f.U_x = [x, U, period](double, double xx) {
        const double h = period / (100.0 * static_cast<double>(x.size()));
        return (interp_periodic(x, U, period, xx + h) - interp_periodic(x, U, period, xx - h)) /
               (2.0 * h);
    };
    f.P_x = [x, P_x, period](double, double xx) { return interp_periodic(x, P_x, period, xx); };
    f.kind = "tabulated";
    return f;
}

OuterFlow OuterFlow::custom(std::function<double(double, double)> U,
                            std::function<double(double, double)> U_t,
                            std::function<double(double, double)> U_x,
                            std::function<double(double, double)> P_x) {
    OuterFlow f;
    f.U = std::move(U);
    f.U_t = std::move(U_t);
    f.U_x = std::move(U_x);
    f.P_x = std::move(P_x);
    f.kind = "custom";
    return f;
}

}  // namespace bll
