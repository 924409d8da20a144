#include "bll/crocco.hpp"

#include <algorithm>
#include <cmath>

#include "bll/errors.hpp"
#include "bll/fd.hpp"

namespace bll {

CroccoState make_crocco_state(int n_xi, int n_eta, double X, double nu,
                              const std::function<double(double, double)>& w0) {
    if (n_xi < 2 || n_eta < 2) throw PreconditionError("make_crocco_state: counts too small");
    CroccoState c;
    c.n_xi = n_xi;
    c.n_eta = n_eta;
    c.X = X;
    c.nu = nu;
    c.w.assign(static_cast<size_t>(n_xi + 1) * (n_eta + 1), 0.0);
    for (int l = 0; l <= n_xi; ++l)
        for (int k = 0; k <= n_eta; ++k)
            c.at(l, k) = w0(l * c.d_xi(), k * c.d_eta());
    for (int l = 0; l <= n_xi; ++l) c.at(l, n_eta) = 0.0;
    std::vector<double> col0(n_eta + 1);
    for (int k = 0; k <= n_eta; ++k) col0[k] = c.at(0, k);
    c.inflow = [col0, n_eta](double, double eta) {
        const double s = eta * n_eta;
        const int k = std::min(static_cast<int>(s), n_eta - 1);
        const double t = s - k;
        return (1.0 - t) * col0[k] + t * col0[k + 1];
    };
    return c;
}

CroccoState to_crocco(const Field& u, std::span<const double> U, int n_eta) {
    const Grid2D& g = *u.grid;
    if (static_cast<int>(U.size()) != g.n_x)
        throw PreconditionError("to_crocco: U must have one entry per x column");
    Field uy = apply_derivative(u, Axis::y, 1);
    CroccoState c;
    c.n_xi = g.n_x - 1;
    c.n_eta = n_eta;
    c.X = g.x.back();
    c.nu = 1.0;
    c.w.assign(static_cast<size_t>(g.n_x) * (n_eta + 1), 0.0);
    std::vector<double> eta_nodes(g.n_y + 1), w_nodes(g.n_y + 1);
    for (int i = 0; i < g.n_x; ++i) {
        if (!(U[i] > 0.0)) throw PreconditionError("to_crocco: U must be positive");
        for (int j = 0; j < g.n_y; ++j) {
            if (!(uy.at(i, j) > 0.0))
                throw MonotonicityError("to_crocco: du/dy <= 0 at column " + std::to_string(i) +
                                        ", row " + std::to_string(j));
            eta_nodes[j] = u.at(i, j) / U[i];
            w_nodes[j] = uy.at(i, j) / U[i];
        }
        for (int j = 1; j < g.n_y; ++j)
            if (eta_nodes[j] <= eta_nodes[j - 1])
                throw MonotonicityError("to_crocco: eta not strictly increasing");
        // anchor the analytic boundary value w(eta=1) = 0
        eta_nodes[g.n_y] = 1.0;
        w_nodes[g.n_y] = 0.0;
        if (eta_nodes[g.n_y - 1] >= 1.0) {
            eta_nodes[g.n_y] = eta_nodes[g.n_y - 1] + 1e-12;
        }
        for (int k = 0; k <= n_eta; ++k) {
            const double eta = static_cast<double>(k) / n_eta;
            auto it = std::upper_bound(eta_nodes.begin(), eta_nodes.end(), eta);
            size_t hi = std::min<size_t>(it - eta_nodes.begin(), eta_nodes.size() - 1);
            if (hi == 0) hi = 1;
            const size_t lo = hi - 1;
            const double t = (eta - eta_nodes[lo]) / (eta_nodes[hi] - eta_nodes[lo]);
            c.w[static_cast<size_t>(i) * (n_eta + 1) + k] =
                (1.0 - t) * w_nodes[lo] + t * w_nodes[hi];
        }
        c.w[static_cast<size_t>(i) * (n_eta + 1) + n_eta] = 0.0;
    }
    return c;
}

Field from_crocco(const CroccoState& c, std::span<const double> U, GridPtr g, double eta_cut) {
    if (static_cast<int>(U.size()) != g->n_x)
        throw PreconditionError("from_crocco: U must have one entry per x column");
    const int ncol = std::min(g->n_x, c.n_xi + 1);
    const double de = c.d_eta();
    Field out(g, FieldRole::u);
    std::vector<double> wk(c.n_eta + 1);
    for (int i = 0; i < g->n_x; ++i) {
        const int l = std::min(i, ncol - 1);
        for (int k = 0; k <= c.n_eta; ++k) wk[k] = c.at(l, k);
        for (int k = 0; k <= c.n_eta; ++k) {
            const double eta = k * de;
            if (eta <= 1.0 - eta_cut && wk[k] <= 0.0)
                throw PreconditionError("from_crocco: w vanishing in the interior");
        }
        auto w_of_eta = [&](double eta) {
            if (eta >= 1.0) return 0.0;
            const double s = eta / de;
            const int k = std::min(static_cast<int>(s), c.n_eta - 1);
            const double t = s - k;
            return std::max(0.0, (1.0 - t) * wk[k] + t * wk[k + 1]);
        };
        // integrate deta/dy = w(eta) with RK4 on a refined y grid
        double eta = 0.0;
        out.at(i, 0) = 0.0;
        for (int j = 1; j < g->n_y; ++j) {
            const double h_total = g->y[j] - g->y[j - 1];
            const int nsub = 8;
            const double h = h_total / nsub;
            for (int q = 0; q < nsub; ++q) {
                const double k1 = w_of_eta(eta);
                const double k2 = w_of_eta(eta + 0.5 * h * k1);
                const double k3 = w_of_eta(eta + 0.5 * h * k2);
                const double k4 = w_of_eta(eta + h * k3);
                eta += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                eta = std::min(eta, 1.0);
            }
            out.at(i, j) = U[i] * eta;
        }
    }
    return out;
}

VonMisesState to_von_mises(const Field& u, const std::function<double(double)>& dp_dx,
                           int n_psi) {
    const Grid2D& g = *u.grid;
    for (int i = 0; i < g.n_x; ++i)
        for (int j = 1; j < g.n_y; ++j)
            if (!(u.at(i, j) > 0.0))
                throw MonotonicityError("to_von_mises: u must be positive for y > 0");
    Field psi = cumulative_integral_y(u);
    double psi_max = 1e300;
    for (int i = 0; i < g.n_x; ++i) psi_max = std::min(psi_max, psi.at(i, g.n_y - 1));
    VonMisesState s;
    s.n_x = g.n_x;
    s.n_psi = n_psi;
    s.X = g.x.back();
    s.psi_max = psi_max;
    s.dp_dx = dp_dx;
    s.w.assign(static_cast<size_t>(g.n_x) * (n_psi + 1), 0.0);
    for (int i = 0; i < g.n_x; ++i) {
        for (int j = 1; j < g.n_y; ++j)
            if (psi.at(i, j) <= psi.at(i, j - 1))
                throw MonotonicityError("to_von_mises: psi not strictly increasing");
        for (int k = 0; k <= n_psi; ++k) {
            const double p = psi_max * k / n_psi;
            int j = 0;
            while (j + 1 < g.n_y && psi.at(i, j + 1) < p) ++j;
            const double p0 = psi.at(i, j), p1 = psi.at(i, std::min(j + 1, g.n_y - 1));
            const double t = p1 > p0 ? (p - p0) / (p1 - p0) : 0.0;
            const double uu =
                (1.0 - t) * u.at(i, j) + t * u.at(i, std::min(j + 1, g.n_y - 1));
            s.at(i, k) = uu * uu;
        }
    }
    return s;
}

std::vector<double> von_mises_residual(const VonMisesState& s) {
    std::vector<double> res;
    const double dx = s.n_x > 1 ? s.X / (s.n_x - 1) : 1.0;
    const double dp = s.d_psi();
    res.reserve(static_cast<size_t>(std::max(0, s.n_x - 2)) * std::max(0, s.n_psi - 1));
    for (int i = 1; i + 1 < s.n_x; ++i) {
        const double x = i * dx;
        for (int k = 1; k < s.n_psi; ++k) {
            const double wx = (s.at(i + 1, k) - s.at(i - 1, k)) / (2.0 * dx);
            const double wp = (s.at(i, k + 1) - s.at(i, k - 1)) / (2.0 * dp);
            const double wpp = (s.at(i, k + 1) - 2.0 * s.at(i, k) + s.at(i, k - 1)) / (dp * dp);
            res.push_back(wx + s.v0(x) * wp - std::sqrt(std::max(0.0, s.at(i, k))) * wpp +
                          2.0 * s.dp_dx(x));
        }
    }
    return res;
}

GateResult stability_check(double h, double sigma, double nu, double bound_b) {
    if (!(h > 0.0) || !(sigma > 0.0) || !(nu >= 0.0) || !(bound_b > 0.0))
        throw PreconditionError("stability_check: inputs must be positive");
    GateResult r;
    r.ratio = h / (sigma * sigma);
    r.bound = nu > 0.0 ? 1.0 / (2.0 * nu * bound_b * bound_b) : 1e300;
    r.margin = r.bound - r.ratio;
    r.pass = r.ratio < r.bound;
    return r;
}

GateResult stability_check_unsteady(double h, double d, double delta, double nu, double a,
                                    double b) {
    if (!(h > 0.0) || !(d > 0.0) || !(delta > 0.0))
        throw PreconditionError("stability_check_unsteady: steps must be positive");
    GateResult r;
    r.ratio = h / (delta * delta);
    r.bound = 1.0 / (2.0 * nu * a * a + b * delta * delta / d);
    r.margin = r.bound - r.ratio;
    r.pass = r.ratio <= r.bound;
    return r;
}

CroccoState fd_explicit_step(const CroccoState& c, double h, double M, double bound_b) {
    const GateResult gate = stability_check(h, c.d_eta(), c.nu, bound_b);
    if (!gate.pass) throw StabilityGateError(gate.ratio, gate.bound);
    const double de = c.d_eta(), dxi = c.d_xi();
    CroccoState next = c;
    next.tau = c.tau + h;
    for (int l = 1; l <= c.n_xi; ++l) {
        const double xi = l * dxi;
        for (int k = 1; k < c.n_eta; ++k) {
            const double eta = k * de;
            const double wc = c.at(l, k);
            const double coef = c.nu * wc * wc + M * de;
            const double lap = (c.at(l, k + 1) - 2.0 * wc + c.at(l, k - 1)) / (de * de);
            const double adv = eta * (wc - c.at(l - 1, k)) / dxi;
            const double pe = c.p_x(c.tau, xi) * (wc - c.at(l, k - 1)) / de;
            next.at(l, k) = wc + h * (coef * lap - adv + pe);
            if (!std::isfinite(next.at(l, k)))
                throw NonFiniteError("fd_explicit_step", l, k);
        }
        // wall closure: nu w0^m (w1^{m+1} - w0^{m+1})/de - p_x - v0 w0^m = 0
        const double w0m = c.at(l, 0);
        if (!(w0m > 0.0))
            throw MonotonicityError("fd_explicit_step: wall w must stay positive");
        next.at(l, 0) =
            next.at(l, 1) - de * (c.p_x(c.tau, xi) + c.v0(c.tau, xi) * w0m) / (c.nu * w0m);
        next.at(l, c.n_eta) = 0.0;
        for (int k = 1; k < c.n_eta; ++k)
            if (next.at(l, k) < 0.0)
                throw MonotonicityError("fd_explicit_step: negative w produced (breakdown)");
    }
    for (int k = 0; k <= c.n_eta; ++k) next.at(0, k) = c.inflow(next.tau, k * de);
    next.at(0, c.n_eta) = 0.0;
    return next;
}

CroccoState fd_implicit_step(const CroccoState& c, double h, double M) {
    const double de = c.d_eta(), dxi = c.d_xi();
    const int K = c.n_eta + 1;
    CroccoState next = c;
    next.tau = c.tau + h;
    std::vector<double> lower(K - 1), diag(K), upper(K - 1), rhs(K);
    for (int k = 0; k <= c.n_eta; ++k) next.at(0, k) = c.inflow(next.tau, k * de);
    next.at(0, c.n_eta) = 0.0;
    for (int l = 1; l <= c.n_xi; ++l) {
        const double xi = l * dxi;
        const double px = c.p_x(c.tau, xi);
        const double w0m = c.at(l, 0);
        if (!(w0m > 0.0))
            throw MonotonicityError("fd_implicit_step: wall w must stay positive");
        // wall row: -nu w0m/de * w0 + nu w0m/de * w1 = p_x + v0 w0m
        diag[0] = -c.nu * w0m / de;
        upper[0] = c.nu * w0m / de;
        rhs[0] = px + c.v0(c.tau, xi) * w0m;
        for (int k = 1; k < c.n_eta; ++k) {
            const double eta = k * de;
            const double coef = c.nu * c.at(l, k) * c.at(l, k) + M * h;
            diag[k] = -2.0 * coef / (de * de) - 1.0 / h - eta / dxi - px / de;
            lower[k - 1] = coef / (de * de) + px / de;
            upper[k] = coef / (de * de);
            rhs[k] = -c.at(l, k) / h - eta * next.at(l - 1, k) / dxi;
        }
        lower[K - 2] = 0.0;
        diag[K - 1] = 1.0;
        rhs[K - 1] = 0.0;
        fd::solve_tridiag(lower, diag, upper, rhs, /*check_dominance=*/true);
        for (int k = 0; k < K; ++k) next.at(l, k) = rhs[k];
    }
    return next;
}

CroccoState fd_unsteady_step(const CroccoState& c, double h, double gate_a, double gate_b) {
    const double de = c.d_eta(), dxi = c.d_xi();
    const GateResult gate = stability_check_unsteady(h, dxi, de, c.nu, gate_a, gate_b);
    if (!gate.pass) throw StabilityGateError(gate.ratio, gate.bound);
    CroccoState next = c;
    next.tau = c.tau + h;
    for (int l = 1; l <= c.n_xi; ++l) {
        const double xi = l * dxi;
        for (int k = 1; k < c.n_eta; ++k) {
            const double eta = k * de;
            const double wc = c.at(l, k);
            const double lap = (c.at(l, k + 1) - 2.0 * wc + c.at(l, k - 1)) / (de * de);
            const double adv =
                eta * c.U(c.tau, xi, eta) * (wc - c.at(l - 1, k)) / dxi;
            const double ae = c.A(c.tau, xi, eta) * (wc - c.at(l, k - 1)) / de;
            const double be = c.B(c.tau, xi, eta) * wc;
            next.at(l, k) = wc + h * (c.nu * wc * wc * lap - adv + ae + be);
            if (!std::isfinite(next.at(l, k)))
                throw NonFiniteError("fd_unsteady_step", l, k);
        }
        // closed-form wall root
        const double w1 = next.at(l, 1);
        const double q = de / c.nu;
        const double Cw = c.C(next.tau, xi);
        const double disc = (w1 - q * c.v0(next.tau, xi)) * (w1 - q * c.v0(next.tau, xi)) +
                            4.0 * q * Cw;
        if (disc < 0.0)
            throw PreconditionError("fd_unsteady_step: negative wall discriminant");
        next.at(l, 0) = 0.5 * ((w1 - q * c.v0(next.tau, xi)) + std::sqrt(disc));
        next.at(l, c.n_eta) = 0.0;
    }
    for (int k = 0; k <= c.n_eta; ++k) next.at(0, k) = c.inflow(next.tau, k * de);
    next.at(0, c.n_eta) = 0.0;
    return next;
}

namespace {

CroccoState refine(const CroccoState& base, int factor,
                   const std::function<double(double, double)>& w0) {
    CroccoState c = make_crocco_state(base.n_xi * factor, base.n_eta * factor, base.X, base.nu, w0);
    c.A = base.A;
    c.B = base.B;
    c.C = base.C;
    c.p_x = base.p_x;
    c.v0 = base.v0;
    c.U = base.U;
    return c;
}

CroccoState march(CroccoScheme scheme, CroccoState c, double T, double h, double M,
                  double bound_b, double gate_a, double gate_b) {
    const int nt = static_cast<int>(std::lround(T / h));
    for (int m = 0; m < nt; ++m) {
        switch (scheme) {
            case CroccoScheme::explicit_march:
                c = fd_explicit_step(c, h, M, bound_b);
                break;
            case CroccoScheme::implicit_march:
                c = fd_implicit_step(c, h, M);
                break;
            case CroccoScheme::unsteady:
                c = fd_unsteady_step(c, h, gate_a, gate_b);
                break;
        }
    }
    return c;
}

}  // namespace

ConvergenceTable convergence_study(CroccoScheme scheme, const CroccoState& base,
                                   const std::function<double(double, double)>& w0, double T,
                                   double h0, int levels, double M, double bound_b,
                                   double gate_a, double gate_b) {
    if (levels < 3) throw PreconditionError("convergence_study: levels must be >= 3");
    const bool parabolic = scheme == CroccoScheme::explicit_march;
    auto h_at = [&](int L) { return parabolic ? h0 / std::pow(4.0, L) : h0 / std::pow(2.0, L); };

    std::vector<CroccoState> runs;
    for (int L = 0; L < levels; ++L)
        runs.push_back(march(scheme, refine(base, 1 << L, w0), T, h_at(L), M, bound_b, gate_a,
                             gate_b));
    const int ref_pow = levels - 1 + 3;  // 8x beyond the finest level
    CroccoState ref =
        march(scheme, refine(base, 1 << ref_pow, w0), T, h_at(ref_pow), M, bound_b, gate_a,
              gate_b);

    ConvergenceTable table;
    for (int L = 0; L < levels; ++L) {
        const int f = 1 << (ref_pow - L);
        double err = 0.0;
        for (int l = 0; l <= runs[L].n_xi; ++l)
            for (int k = 0; k <= runs[L].n_eta; ++k)
                err = std::max(err, std::abs(runs[L].at(l, k) - ref.at(l * f, k * f)));
        ConvergenceRow row;
        row.step = base.d_eta() / (1 << L);
        row.error = err;
        if (L > 0 && err > 0.0 && table.rows[L - 1].error > 0.0)
            row.observed_order = std::log2(table.rows[L - 1].error / err);
        table.rows.push_back(row);
    }
    // least-squares slope of log(err) vs log(step)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& r : table.rows) {
        if (r.error <= 0.0) continue;
        const double lx = std::log(r.step), ly = std::log(r.error);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n >= 2) table.lsq_order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return table;
}

}  // namespace bll
