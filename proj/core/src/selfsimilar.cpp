#include "bll/selfsimilar.hpp"

#include <array>
#include <cmath>

#include "bll/errors.hpp"

namespace bll {

namespace {

struct Ode {
    double n = 1.0, beta = 0.0, N = 0.0;

    std::array<double, 3> rhs(const std::array<double, 3>& y) const {
        const double f = y[0], fp = y[1], fpp = y[2];
        double base = -(f * fpp + beta * (1.0 - fp * fp) + N * (1.0 - fp));
        if (n != 1.0) {
            const double g = std::max(std::abs(fpp), 1e-10);
            base *= std::pow(g, 1.0 - n);
        }
        return {fp, fpp, base};
    }
};

std::array<double, 3> rk4_step(const Ode& ode, const std::array<double, 3>& y, double h) {
    auto add = [](const std::array<double, 3>& a, const std::array<double, 3>& b, double c) {
        return std::array<double, 3>{a[0] + c * b[0], a[1] + c * b[1], a[2] + c * b[2]};
    };
    const auto k1 = ode.rhs(y);
    const auto k2 = ode.rhs(add(y, k1, 0.5 * h));
    const auto k3 = ode.rhs(add(y, k2, 0.5 * h));
    const auto k4 = ode.rhs(add(y, k3, h));
    return {y[0] + h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
            y[1] + h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]),
            y[2] + h / 6.0 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])};
}

// Integrates to eta_inf with step-doubling adaptivity. Returns f' at the end,
// or a saturated +/- value when the trajectory diverges (keeps bisection sane).
double shoot_end(const Ode& ode, double alpha, double eta_inf, double tol) {
    std::array<double, 3> y{0.0, 0.0, alpha};
    double eta = 0.0;
    double h = eta_inf / 256.0;
    const double hmin = eta_inf * 1e-9;
    while (eta < eta_inf) {
        if (std::abs(y[1]) > 10.0 || !std::isfinite(y[1])) return y[1] > 1.0 ? 1e6 : -1e6;
        h = std::min(h, eta_inf - eta);
        const auto big = rk4_step(ode, y, h);
        const auto half = rk4_step(ode, rk4_step(ode, y, 0.5 * h), 0.5 * h);
        double err = 0.0;
        for (int i = 0; i < 3; ++i) err = std::max(err, std::abs(big[i] - half[i]));
        if (err > tol && h > hmin) {
            h *= 0.5;
            continue;
        }
        y = half;
        eta += h;
        if (err < tol / 32.0) h *= 2.0;
    }
    return y[1];
}

SelfSimilarSolution solve(const Ode& ode, double eta_inf, double tol) {
    if (!(eta_inf >= 8.0)) throw PreconditionError("self-similar solve: eta_inf must be >= 8");
    const double ode_tol = std::min(1e-10, tol * 1e-2);

    // bracket f'(inf) - 1 in alpha
    double lo = 0.02, hi = 0.1;
    auto phi = [&](double a) { return shoot_end(ode, a, eta_inf, ode_tol) - 1.0; };
    double flo = phi(lo);
    int guard = 0;
    while (flo > 0.0 && guard++ < 40) {
        lo *= 0.5;
        flo = phi(lo);
    }
    if (flo > 0.0) throw BracketError("shooting: no lower bracket for the wall shear");
    double fhi = phi(hi);
    guard = 0;
    while (fhi < 0.0 && guard++ < 40) {
        hi *= 1.7;
        fhi = phi(hi);
    }
    if (fhi < 0.0) throw BracketError("shooting: no upper bracket for the wall shear");

    for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (phi(mid) > 0.0)
            hi = mid;
        else
            lo = mid;
    }
    const double alpha = 0.5 * (lo + hi);

    // dense output on a uniform grid
    SelfSimilarSolution sol;
    const int n_nodes = 1201;
    sol.eta.resize(n_nodes);
    sol.f.resize(n_nodes);
    sol.fp.resize(n_nodes);
    sol.fpp.resize(n_nodes);
    const double he = eta_inf / (n_nodes - 1);
    std::array<double, 3> y{0.0, 0.0, alpha};
    sol.eta[0] = 0.0;
    sol.f[0] = y[0];
    sol.fp[0] = y[1];
    sol.fpp[0] = y[2];
    const int sub = 16;
    for (int i = 1; i < n_nodes; ++i) {
        for (int q = 0; q < sub; ++q) y = rk4_step(ode, y, he / sub);
        sol.eta[i] = i * he;
        sol.f[i] = y[0];
        sol.fp[i] = y[1];
        sol.fpp[i] = y[2];
    }
    sol.wall_shear = alpha;
    sol.far_field_gap = std::abs(sol.fp.back() - 1.0);

    // ODE residual with fourth-order differences of f'' (floor region excluded)
    double res = 0.0;
    for (int i = 2; i + 2 < n_nodes; ++i) {
        if (ode.n != 1.0 && std::abs(sol.fpp[i]) < 1e-8) continue;
        const double fppp = (sol.fpp[i - 2] - 8.0 * sol.fpp[i - 1] + 8.0 * sol.fpp[i + 1] -
                             sol.fpp[i + 2]) /
                            (12.0 * he);
        double lhs = fppp;
        if (ode.n != 1.0) lhs *= std::pow(std::abs(sol.fpp[i]), ode.n - 1.0);
        lhs += sol.f[i] * sol.fpp[i] + ode.beta * (1.0 - sol.fp[i] * sol.fp[i]) +
               ode.N * (1.0 - sol.fp[i]);
        res = std::max(res, std::abs(lhs));
    }
    sol.residual_inf = res;
    return sol;
}

}  // namespace

SelfSimilarSolution blasius_solve(double eta_inf, double tol) {
    return solve(Ode{}, eta_inf, tol);
}

SelfSimilarSolution powerlaw_mhd_solve(double n, double beta, double N_param, double eta_inf,
                                       double tol) {
    if (!(n > 0.0)) throw PreconditionError("powerlaw_mhd_solve: n must be positive");
    return solve(Ode{n, beta, N_param}, eta_inf, tol);
}

std::vector<double> series_eval(double alpha, const std::vector<double>& eta) {
    std::vector<double> out(eta.size());
    const double c5 = alpha * alpha / 120.0;           // 1/5!
    const double c8 = 11.0 * alpha * alpha * alpha / 40320.0;  // 11/8!
    for (size_t i = 0; i < eta.size(); ++i) {
        const double e = eta[i];
        const double e2 = e * e;
        out[i] = 0.5 * alpha * e2 - c5 * e2 * e2 * e + c8 * e2 * e2 * e2 * e2;
    }
    return out;
}

}  // namespace bll
