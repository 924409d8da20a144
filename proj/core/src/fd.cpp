#include "bll/fd.hpp"

#include <cmath>
#include <cstdlib>

#include "bll/errors.hpp"

namespace bll::fd {

std::vector<double> weights(double x0, std::span<const double> nodes, int m) {
    // B. Fornberg, "Generation of finite difference formulas on arbitrarily
    // spaced grids", Math. Comp. 51 (1988).
    const int n = static_cast<int>(nodes.size()) - 1;
    if (n < m) throw PreconditionError("fd::weights: need at least m+1 nodes");
    std::vector<double> c(static_cast<size_t>(n + 1) * static_cast<size_t>(m + 1), 0.0);
    auto C = [&](int i, int j) -> double& { return c[static_cast<size_t>(i) * (m + 1) + j]; };
    double c1 = 1.0;
    double c4 = nodes[0] - x0;
    C(0, 0) = 1.0;
    for (int i = 1; i <= n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = nodes[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    C(i, k) = c1 * (k * C(i - 1, k - 1) - c5 * C(i - 1, k)) / c2;
                C(i, 0) = -c1 * c5 * C(i - 1, 0) / c2;
            }
            for (int k = mn; k >= 1; --k)
                C(j, k) = (c4 * C(j, k) - k * C(j, k - 1)) / c3;
            C(j, 0) = c4 * C(j, 0) / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(nodes.size());
    for (size_t i = 0; i < nodes.size(); ++i) w[i] = C(static_cast<int>(i), m);
    return w;
}

void solve_tridiag(std::span<const double> lower, std::span<const double> diag,
                   std::span<const double> upper, std::span<double> rhs,
                   bool check_dominance) {
    const size_t n = diag.size();
    if (n == 0) return;
    std::vector<double> cp(n - 1);
    if (check_dominance) {
        for (size_t i = 0; i < n; ++i) {
            const double l = i > 0 ? std::abs(lower[i - 1]) : 0.0;
            const double u = i + 1 < n ? std::abs(upper[i]) : 0.0;
            if (std::abs(diag[i]) < l + u) throw DominanceError(static_cast<int>(i));
        }
    }
    double d = diag[0];
    rhs[0] /= d;
    for (size_t i = 1; i < n; ++i) {
        cp[i - 1] = upper[i - 1] / d;
        d = diag[i] - lower[i - 1] * cp[i - 1];
        rhs[i] = (rhs[i] - lower[i - 1] * rhs[i - 1]) / d;
    }
    for (size_t i = n - 1; i-- > 0;) rhs[i] -= cp[i] * rhs[i + 1];
}

void solve_cyclic_tridiag(std::span<const double> lower, std::span<const double> diag,
                          std::span<const double> upper, std::span<double> rhs) {
    const size_t n = diag.size();
    if (n == 1) {
        rhs[0] /= (diag[0] + lower[0] + upper[0]);
        return;
    }
    if (n == 2) {
        // dense 2x2: wrap couplings add up
        const double a = diag[0], b = upper[0] + lower[0];
        const double c = upper[1] + lower[1], d = diag[1];
        const double det = a * d - b * c;
        const double r0 = rhs[0], r1 = rhs[1];
        rhs[0] = (d * r0 - b * r1) / det;
        rhs[1] = (a * r1 - c * r0) / det;
        return;
    }
    // Sherman-Morrison with u = (gamma,0,...,alpha?) standard form
    const double alpha = lower[0];       // couples row 0 to row n-1
    const double beta = upper[n - 1];    // couples row n-1 to row 0
    const double gamma = -diag[0];
    std::vector<double> dmod(diag.begin(), diag.end());
    dmod[0] -= gamma;
    dmod[n - 1] -= alpha * beta / gamma;
    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = beta;
    std::vector<double> low(n - 1), up(n - 1);
    for (size_t i = 0; i + 1 < n; ++i) {
        low[i] = lower[i + 1];
        up[i] = upper[i];
    }
    std::vector<double> y(rhs.begin(), rhs.end());
    solve_tridiag(low, dmod, up, y);
    solve_tridiag(low, dmod, up, u);
    const double vy = y[0] + (alpha / gamma) * y[n - 1];
    const double vu = u[0] + (alpha / gamma) * u[n - 1];
    const double f = vy / (1.0 + vu);
    for (size_t i = 0; i < n; ++i) rhs[i] = y[i] - f * u[i];
}

namespace {
double simpson(double fa, double fm, double fb, double a, double b) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double b, double fa, double fm,
             double fb, double whole, double tol, int depth, int max_depth) {
    if (depth > max_depth)
        throw QuadratureError("adaptive_simpson: depth cap hit before tolerance was met");
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(fa, flm, fm, a, m);
    const double right = simpson(fm, frm, fb, m, b);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, max_depth) +
           adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, max_depth);
}
}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, double abs_floor, int max_depth) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = simpson(fa, fm, fb, a, b);
    const double tol = std::max(std::abs(whole) * rel_tol, abs_floor);
    return adapt(f, a, b, fa, fm, fb, whole, tol, 0, max_depth);
}

double composite_simpson(const std::function<double(double)>& f, double a, double b,
                         int intervals) {
    if (intervals % 2) ++intervals;
    const double h = (b - a) / intervals;
    double s = f(a) + f(b);
    for (int i = 1; i < intervals; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

std::vector<double> cumtrapz(std::span<const double> x, std::span<const double> f) {
    std::vector<double> out(x.size(), 0.0);
    for (size_t i = 1; i < x.size(); ++i)
        out[i] = out[i - 1] + 0.5 * (f[i] + f[i - 1]) * (x[i] - x[i - 1]);
    return out;
}

double trapz(std::span<const double> x, std::span<const double> f) {
    double s = 0.0;
    for (size_t i = 1; i < x.size(); ++i) s += 0.5 * (f[i] + f[i - 1]) * (x[i] - x[i - 1]);
    return s;
}

}  // namespace bll::fd
