#include "bll/solver2d.hpp"

#include <algorithm>
#include <cmath>

#include "bll/errors.hpp"
#include "bll/fd.hpp"

namespace bll {

std::string to_string(Variant v) {
    switch (v) {
        case Variant::classical: return "classical";
        case Variant::hartmann_damped: return "hartmann_damped";
        case Variant::magnetic_ph: return "magnetic_ph";
        case Variant::shercliff: return "shercliff";
    }
    return "classical";
}

Variant variant_from_string(const std::string& s) {
    if (s == "classical") return Variant::classical;
    if (s == "hartmann_damped") return Variant::hartmann_damped;
    if (s == "magnetic_ph") return Variant::magnetic_ph;
    if (s == "shercliff") return Variant::shercliff;
    throw PreconditionError("unknown variant '" + s + "'");
}

namespace {

// Limited second-order upwind derivative a*df/dx, periodic.
void add_x_advection(const Field& u, const Field& a, std::vector<double>& out) {
    const Grid2D& g = *u.grid;
    const double dx = g.dx();
    const int nx = g.n_x, ny = g.n_y;
    std::vector<double> sigma(static_cast<size_t>(nx));
    for (int j = 1; j < ny - 1; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int ip = (i + 1) % nx, im = (i + nx - 1) % nx;
            const double dm = (u.at(i, j) - u.at(im, j)) / dx;
            const double dp = (u.at(ip, j) - u.at(i, j)) / dx;
            sigma[i] = fd::minmod_mc(dm, dp);
        }
        for (int i = 0; i < nx; ++i) {
            const int ip = (i + 1) % nx, im = (i + nx - 1) % nx;
            const double speed = a.at(i, j);
            double d;
            if (speed >= 0.0) {
                const double left = u.at(i, j) + 0.5 * dx * sigma[i];
                const double lm = u.at(im, j) + 0.5 * dx * sigma[im];
                d = (left - lm) / dx;
            } else {
                const double right = u.at(ip, j) - 0.5 * dx * sigma[ip];
                const double rm = u.at(i, j) - 0.5 * dx * sigma[i];
                d = (right - rm) / dx;
            }
            out[static_cast<size_t>(i) * ny + j] += speed * d;
        }
    }
}

// Limited second-order upwind derivative a*df/dy on the (possibly stretched)
// y grid. Boundary rows are skipped; they are Dirichlet-closed.
void add_y_advection(const Field& u, const Field& a, std::vector<double>& out) {
    const Grid2D& g = *u.grid;
    const int nx = g.n_x, ny = g.n_y;
    std::vector<double> sigma(static_cast<size_t>(ny), 0.0);
    for (int i = 0; i < nx; ++i) {
        auto col = u.column(i);
        sigma[0] = 0.0;
        sigma[ny - 1] = 0.0;
        for (int j = 1; j < ny - 1; ++j) {
            const double dm = (col[j] - col[j - 1]) / g.hy[j - 1];
            const double dp = (col[j + 1] - col[j]) / g.hy[j];
            sigma[j] = fd::minmod_mc(dm, dp);
        }
        for (int j = 1; j < ny - 1; ++j) {
            const double speed = a.at(i, j);
            const double hm = g.hy[j - 1], hp = g.hy[j];
            const double width = 0.5 * (hm + hp);
            double d;
            if (speed >= 0.0) {
                const double hi = col[j] + 0.5 * hp * sigma[j];
                const double lo = col[j - 1] + 0.5 * hm * sigma[j - 1];
                d = (hi - lo) / width;
            } else {
                const double hi = col[j + 1] - 0.5 * hp * sigma[j + 1];
                const double lo = col[j] - 0.5 * hm * sigma[j];
                d = (hi - lo) / width;
            }
            out[static_cast<size_t>(i) * ny + j] += speed * d;
        }
    }
}

struct DiffusionStencil {
    std::vector<double> wm, wc, wp;  // per interior row j = 1..n_y-2
};

DiffusionStencil y_diffusion(const Grid2D& g) {
    DiffusionStencil s;
    const int n = g.n_y;
    s.wm.resize(n);
    s.wc.resize(n);
    s.wp.resize(n);
    for (int j = 1; j < n - 1; ++j) {
        const double nodes[3] = {g.y[j - 1], g.y[j], g.y[j + 1]};
        auto w = fd::weights(g.y[j], nodes, 2);
        s.wm[j] = w[0];
        s.wc[j] = w[1];
        s.wp[j] = w[2];
    }
    return s;
}

}  // namespace

std::vector<double> wall_shear(const Field& u) {
    const Grid2D& g = *u.grid;
    const double nodes[3] = {g.y[0], g.y[1], g.y[2]};
    auto w = fd::weights(0.0, nodes, 1);
    std::vector<double> out(g.n_x);
    for (int i = 0; i < g.n_x; ++i)
        out[i] = w[0] * u.at(i, 0) + w[1] * u.at(i, 1) + w[2] * u.at(i, 2);
    return out;
}

double l2_distance(const Field& u, const Field& ref) {
    const Grid2D& g = *u.grid;
    const double dx = g.dx();
    double acc = 0.0;
    for (int i = 0; i < g.n_x; ++i) {
        double coli = 0.0;
        for (int j = 0; j + 1 < g.n_y; ++j) {
            const double a = u.at(i, j) - ref.at(i, j);
            const double b = u.at(i, j + 1) - ref.at(i, j + 1);
            coli += 0.5 * (a * a + b * b) * g.hy[j];
        }
        acc += coli * dx;
    }
    return std::sqrt(acc);
}

FlowState step(const FlowState& s, double dt, const SourceFn& source, double c_cfl) {
    if (!(dt > 0.0)) throw PreconditionError("step: dt must be positive");
    const Grid2D& g = *s.u.grid;
    const int nx = g.n_x, ny = g.n_y;

    s.u.check_finite("step input");
    Field v = recover_v(s.u);

    const double umax = s.u.max_abs();
    const double vmax = v.max_abs();
    const double bound_x = umax > 0 ? c_cfl * g.dx() / umax : 1e300;
    const double bound_y = vmax > 0 ? c_cfl * g.hy_min() / vmax : 1e300;
    const double bound = std::min(bound_x, bound_y);
    if (dt > bound) throw CflError(dt, bound);

    // explicit advection
    std::vector<double> adv(static_cast<size_t>(nx) * ny, 0.0);
    add_x_advection(s.u, s.u, adv);
    add_y_advection(s.u, v, adv);

    // explicit forcing and rhs
    Field b;
    Field bx;
    if (s.variant == Variant::shercliff) {
        b = solve_b(s.u, s.outer.far_b);
        bx = apply_derivative(b, Axis::x, 1);
    }
    double damping = 0.0;
    if (s.variant == Variant::hartmann_damped || s.variant == Variant::magnetic_ph) damping = 1.0;

    Field rhs(s.u.grid, FieldRole::generic);
    for (int i = 0; i < nx; ++i) {
        const double xi = g.x[i];
        for (int j = 0; j < ny; ++j) {
            double f = 0.0;
            switch (s.variant) {
                case Variant::classical:
                    f = -s.outer.P_x(s.t, xi);
                    break;
                case Variant::hartmann_damped:
                    f = s.outer.U(s.t, xi);  // +u_bar; the -u part is implicit
                    break;
                case Variant::magnetic_ph:
                    f = s.outer.U(s.t, xi) - s.outer.P_x(s.t, xi);
                    break;
                case Variant::shercliff:
                    f = bx.at(i, j);
                    break;
            }
            if (source) f += source(s.t, xi, g.y[j]);
            rhs.at(i, j) = s.u.at(i, j) + dt * (-adv[static_cast<size_t>(i) * ny + j] + f);
        }
    }

    // implicit x-regularization (interior rows), coefficient eps^2
    if (s.eps > 0.0) {
        const double mu = dt * s.eps * s.eps / (g.dx() * g.dx());
        std::vector<double> lo(nx, -mu), di(nx, 1.0 + 2.0 * mu), up(nx, -mu), row(nx);
        for (int j = 1; j < ny - 1; ++j) {
            for (int i = 0; i < nx; ++i) row[i] = rhs.at(i, j);
            fd::solve_cyclic_tridiag(lo, di, up, row);
            for (int i = 0; i < nx; ++i) rhs.at(i, j) = row[i];
        }
    }

    // implicit y-diffusion + damping, Dirichlet closure
    const DiffusionStencil dif = y_diffusion(g);
    const int m = ny - 2;
    std::vector<double> lower(m - 1), diag(m), upper(m - 1), col(m);
    for (int j = 1; j <= m; ++j) {
        diag[j - 1] = 1.0 + dt * damping - dt * dif.wc[j];
        if (j > 1) lower[j - 2] = -dt * dif.wm[j];
        if (j < m) upper[j - 1] = -dt * dif.wp[j];
    }
    FlowState out = s;
    out.t = s.t + dt;
    for (int i = 0; i < nx; ++i) {
        const double u_far = s.outer.U(out.t, g.x[i]);
        for (int j = 1; j <= m; ++j) col[j - 1] = rhs.at(i, j);
        // boundary contributions: wall value 0, far value u_far
        col[m - 1] += dt * dif.wp[m] * u_far;
        fd::solve_tridiag(lower, diag, upper, col);
        out.u.at(i, 0) = 0.0;
        for (int j = 1; j <= m; ++j) out.u.at(i, j) = col[j - 1];
        out.u.at(i, ny - 1) = u_far;
    }
    out.u.check_finite("step output");
    return out;
}

Field solve_b(const Field& u, double /*far_b*/, double decay_tol) {
    const Grid2D& g = *u.grid;
    Field ux = apply_derivative(u, Axis::x, 1);
    double top = 0.0;
    for (int i = 0; i < g.n_x; ++i)
        top = std::max({top, std::abs(ux.at(i, g.n_y - 1)), std::abs(ux.at(i, g.n_y - 2))});
    if (top > decay_tol)
        throw DecayError("solve_b: du/dx does not decay at the truncation row (max " +
                         std::to_string(top) + ")");
    // db/dy (y) = int_y^ymax du/dx dy'; b(x,0) = 0
    Field cum = cumulative_integral_y(ux);
    Field dby(u.grid, FieldRole::generic);
    for (int i = 0; i < g.n_x; ++i) {
        const double total = cum.at(i, g.n_y - 1);
        for (int j = 0; j < g.n_y; ++j) dby.at(i, j) = total - cum.at(i, j);
    }
    Field b = cumulative_integral_y(dby);
    b.role = FieldRole::b;
    return b;
}

std::pair<Field, SplitReport> perturbation_split(const FlowState& s,
                                                 const ShearProfile& background, double far_tol) {
    Field bg = background.sample(s.u.grid, s.t);
    Field pert(s.u.grid, FieldRole::u);
    for (size_t k = 0; k < pert.values.size(); ++k)
        pert.values[k] = s.u.values[k] - bg.values[k];
    SplitReport rep;
    const Grid2D& g = *s.u.grid;
    for (int i = 0; i < g.n_x; ++i)
        rep.far_field_max = std::max(rep.far_field_max, std::abs(pert.at(i, g.n_y - 1)));
    rep.pass = rep.far_field_max <= far_tol;
    return {std::move(pert), rep};
}

Field steady_damped_profile(GridPtr g, double u_bar) {
    const DiffusionStencil dif = y_diffusion(*g);
    const int ny = g->n_y;
    const int m = ny - 2;
    std::vector<double> lower(m - 1), diag(m), upper(m - 1), rhs(m, u_bar);
    for (int j = 1; j <= m; ++j) {
        diag[j - 1] = 1.0 - dif.wc[j];
        if (j > 1) lower[j - 2] = -dif.wm[j];
        if (j < m) upper[j - 1] = -dif.wp[j];
    }
    rhs[m - 1] += dif.wp[m] * u_bar;
    fd::solve_tridiag(lower, diag, upper, rhs);
    Field out(g, FieldRole::u);
    for (int i = 0; i < g->n_x; ++i) {
        out.at(i, 0) = 0.0;
        for (int j = 1; j <= m; ++j) out.at(i, j) = rhs[j - 1];
        out.at(i, ny - 1) = u_bar;
    }
    return out;
}

namespace {

// One-sided wall derivative d^k/dy^k with enough nodes for O(h^2) accuracy,
// per column; returns the value per x index.
std::vector<double> wall_dyk(const Field& f, int k, int extra = 2) {
    const Grid2D& g = *f.grid;
    const int width = k + extra;
    if (g.n_y < width)
        throw PreconditionError("wall derivative: grid too coarse for requested order");
    std::span<const double> nodes(g.y.data(), static_cast<size_t>(width));
    auto w = fd::weights(0.0, nodes, k);
    std::vector<double> out(g.n_x, 0.0);
    for (int i = 0; i < g.n_x; ++i)
        for (int q = 0; q < width; ++q) out[i] += w[q] * f.at(i, q);
    return out;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// Tolerance for a wall identity on the k-th derivative: stencil truncation is
// O(h^2 * |d^{k+2}u|) with the magnitude taken over the stencil footprint.
double wall_tol(const Field& f, int k, double scale) {
    const Grid2D& g = *f.grid;
    const double h = g.y[std::min(k + 2, g.n_y - 1)] / std::max(1, k + 2);
    double dnext = 0.0;
    if (g.n_y >= k + 6) {
        const int width = k + 4;
        std::span<const double> nodes(g.y.data(), static_cast<size_t>(width));
        for (int at = 0; at <= k + 4 && at < g.n_y; ++at) {
            auto w = fd::weights(g.y[at], nodes, k + 2);
            for (int i = 0; i < g.n_x; ++i) {
                double acc = 0.0;
                for (int q = 0; q < width; ++q) acc += w[q] * f.at(i, q);
                dnext = std::max(dnext, std::abs(acc));
            }
        }
    }
    return 4.0 * h * h * dnext + 1e-7 * std::max(scale, 1.0);
}

}  // namespace

CompatReport compat_check(const Field& u0, const ShearProfile& background, int order,
                          Variant variant, const OuterFlow* outer) {
    if (order != 0 && order != 2 && order != 4 && order != 6)
        throw PreconditionError("compat_check: order must be 0, 2, 4 or 6");
    CompatReport rep;
    auto push = [&](const std::string& name, double res, double tol) {
        CompatIdentity id{name, res, tol, std::abs(res) <= tol};
        rep.all_pass = rep.all_pass && id.pass;
        rep.items.push_back(std::move(id));
    };
    const Grid2D& g = *u0.grid;

    if (variant == Variant::magnetic_ph) {
        if (!outer) throw PreconditionError("compat_check(magnetic_ph): outer flow required");
        // vorticity wall reduction: d2u/dy2|_0 = P_x - U at t=0
        auto d2 = wall_dyk(u0, 2);
        double res = 0.0, scale = 0.0;
        for (int i = 0; i < g.n_x; ++i) {
            const double k = outer->P_x(0.0, g.x[i]) - outer->U(0.0, g.x[i]);
            res = std::max(res, std::abs(d2[i] - k));
            scale = std::max(scale, std::abs(k));
        }
        push("dyw|0 = P_x - U", res, wall_tol(u0, 2, scale));
        return rep;
    }

    if (variant == Variant::shercliff) {
        auto d0 = wall_dyk(u0, 0, 1);
        push("u|0 = 0", max_abs(d0), 1e-9);
        Field b = solve_b(u0, outer ? outer->far_b : 0.0);
        if (order >= 2) {
            push("d2u|0 = 0", max_abs(wall_dyk(u0, 2)), wall_tol(u0, 2, u0.max_abs()));
            push("d2b|0 = 0", max_abs(wall_dyk(b, 2)), wall_tol(b, 2, b.max_abs()));
        }
        if (order >= 4) {
            auto d4 = wall_dyk(u0, 4);
            auto d1 = wall_dyk(u0, 1);
            auto dxy = wall_dyk(apply_derivative(u0, Axis::x, 1), 1);
            double res = 0.0, scale = 0.0;
            for (int i = 0; i < g.n_x; ++i) {
                res = std::max(res, std::abs(d4[i] - dxy[i] * d1[i]));
                scale = std::max(scale, std::abs(dxy[i] * d1[i]));
            }
            push("d4u|0 = dxdyu*dyu|0", res, wall_tol(u0, 4, scale));
            push("d4b|0 = 0", max_abs(wall_dyk(b, 4)), wall_tol(b, 4, b.max_abs()));
        }
        if (order >= 6) {
            Field ux = apply_derivative(u0, Axis::x, 1);
            Field uxx = apply_derivative(u0, Axis::x, 2);
            Field bx = apply_derivative(b, Axis::x, 1);
            Field bxx = apply_derivative(b, Axis::x, 2);
            auto d6 = wall_dyk(u0, 6);
            auto d1 = wall_dyk(u0, 1);
            auto d3 = wall_dyk(u0, 3);
            auto dxy = wall_dyk(ux, 1);
            auto dx3y = wall_dyk(ux, 3);
            auto dxxb1 = wall_dyk(bxx, 1);
            auto dxb1 = wall_dyk(bx, 1);
            double res = 0.0, scale = 0.0;
            for (int i = 0; i < g.n_x; ++i) {
                const double rhsv = (4.0 * dx3y[i] + dxxb1[i]) * d1[i] +
                                    (dxb1[i] - d3[i]) * dxy[i];
                res = std::max(res, std::abs(d6[i] - rhsv));
                scale = std::max(scale, std::abs(rhsv));
            }
            push("d6u|0 identity", res, wall_tol(u0, 6, scale));
        }
        return rep;
    }

    // classical / hartmann_damped: perturbation identities about the shear background
    const double us1 = background.dy(0.0, 0.0);
    auto d0 = wall_dyk(u0, 0, 1);
    push("u~|0 = 0", max_abs(d0), 1e-9);
    if (order >= 2) push("d2u~|0 = 0", max_abs(wall_dyk(u0, 2)), wall_tol(u0, 2, u0.max_abs()));
    Field ux = apply_derivative(u0, Axis::x, 1);
    if (order >= 4) {
        auto d4 = wall_dyk(u0, 4);
        auto d1 = wall_dyk(u0, 1);
        auto dxy = wall_dyk(ux, 1);
        double res = 0.0, scale = 0.0;
        for (int i = 0; i < g.n_x; ++i) {
            const double rhsv = (us1 + d1[i]) * dxy[i];
            res = std::max(res, std::abs(d4[i] - rhsv));
            scale = std::max(scale, std::abs(rhsv));
        }
        push("d4u~|0 identity", res, wall_tol(u0, 4, scale));
    }
    if (order >= 6) {
        auto d6 = wall_dyk(u0, 6);
        auto d1 = wall_dyk(u0, 1);
        auto d2 = wall_dyk(u0, 2);
        auto d3 = wall_dyk(u0, 3);
        auto d4 = wall_dyk(u0, 4);
        auto dxy0 = wall_dyk(ux, 0, 1);
        auto dxy1 = wall_dyk(ux, 1);
        auto dxy2 = wall_dyk(ux, 2);
        auto dxy3 = wall_dyk(ux, 3);
        auto dxy4 = wall_dyk(ux, 4);
        // background wall derivatives us_k = d^k u0s / dy^k (0)
        double us[5];
        {
            const double h = 1e-3;
            std::vector<double> nodes(9);
            for (int q = 0; q < 9; ++q) nodes[q] = q * h;
            std::vector<double> vals(9);
            for (int q = 0; q < 9; ++q) vals[q] = background.value(0.0, nodes[q]);
            for (int k = 0; k <= 4; ++k) {
                auto w = fd::weights(0.0, nodes, k);
                us[k] = 0.0;
                for (int q = 0; q < 9; ++q) us[k] += w[q] * vals[q];
            }
        }
        const double binom4[4] = {0.0, 4.0, 6.0, 4.0};
        double res = 0.0, scale = 0.0;
        for (int i = 0; i < g.n_x; ++i) {
            const double dyu[5] = {d0[i], d1[i], d2[i], d3[i], d4[i]};
            const double dxyu[5] = {dxy0[i], dxy1[i], dxy2[i], dxy3[i], dxy4[i]};
            double rhsv = (us[3] + dyu[3]) * dxyu[1];
            for (int jj = 1; jj <= 3; ++jj)
                rhsv += binom4[jj] * ((us[jj] + dyu[jj]) * dxyu[4 - jj] -
                                      dxyu[jj - 1] * (us[5 - jj] + dyu[5 - jj]));
            res = std::max(res, std::abs(d6[i] - rhsv));
            scale = std::max(scale, std::abs(rhsv));
        }
        push("d6u~|0 identity", res, wall_tol(u0, 6, scale));
    }
    return rep;
}

std::vector<double> wall_reduction_residuals(const Field& w, const OuterFlow& outer, double t,
                                             double eps) {
    const Grid2D& g = *w.grid;
    auto d1 = wall_dyk(w, 1);
    auto d3 = wall_dyk(w, 3);
    auto w0 = wall_dyk(w, 0, 1);
    Field wx = apply_derivative(w, Axis::x, 1);
    auto wx0 = wall_dyk(wx, 0, 1);
    const double dtp = 1e-6;
    double r1 = 0.0, r2 = 0.0;
    for (int i = 0; i < g.n_x; ++i) {
        const double x = g.x[i];
        auto K = [&](double tt, double xx) { return outer.P_x(tt, xx) - outer.U(tt, xx); };
        const double k0 = K(t, x);
        const double kt = (K(t + dtp, x) - K(t - dtp, x)) / (2.0 * dtp);
        const double hx = g.dx();
        const double kxx =
            (K(t, x + hx) - 2.0 * k0 + K(t, x - hx)) / (hx * hx);
        r1 = std::max(r1, std::abs(d1[i] - k0));
        const double rhs2 = (kt - eps * eps * kxx) + k0 + w0[i] * wx0[i];
        r2 = std::max(r2, std::abs(d3[i] - rhs2));
    }
    return {r1, r2};
}

RunResult run(const FlowState& s0, const RunParams& p) {
    RunResult out;
    FlowState s = s0;
    Field background = p.background ? *p.background : s0.u;

    const double init_sup = s.u.max_abs();
    const double threshold = p.blowup_factor * std::max(init_sup, 1e-12);

    auto sample = [&](const FlowState& st) {
        RunSample smp;
        smp.t = st.t;
        smp.pert_l2 = l2_distance(st.u, background);
        auto ws = wall_shear(st.u);
        smp.min_wall_shear = *std::min_element(ws.begin(), ws.end());
        smp.sup = st.u.max_abs();
        out.series.push_back(smp);
        out.verdict.t_history.push_back(st.t);
        out.verdict.sup_history.push_back(smp.sup);
        out.snapshots.push_back(st);
    };
    sample(s);

    double next_sample = s.t + p.sample_dt;
    int steps = 0;
    while (s.t < p.horizon - 1e-14 && steps < p.max_steps) {
        double dt = p.dt;
        if (dt <= 0.0) {
            Field v = recover_v(s.u);
            const double umax = s.u.max_abs();
            const double vmax = v.max_abs();
            dt = p.dt_max;
            if (umax > 0) dt = std::min(dt, p.cfl_target * s.u.grid->dx() / umax);
            if (vmax > 0) dt = std::min(dt, p.cfl_target * s.u.grid->hy_min() / vmax);
        }
        dt = std::min(dt, p.horizon - s.t);
        FlowState next = s;
        try {
            next = step(s, dt, p.source, p.c_cfl);
        } catch (const NonFiniteError&) {
            out.verdict.status = BlowupVerdict::Status::scheme_breakdown;
            out.verdict.t_star = s.t + dt;
            sample(s);
            return out;
        }
        s = std::move(next);
        ++steps;

        const double sup = s.u.max_abs();
        if (sup > threshold) {
            out.verdict.status = BlowupVerdict::Status::blowup;
            out.verdict.t_star = s.t;
            sample(s);
            return out;
        }
        if (s.t >= next_sample - 1e-12 || s.t >= p.horizon - 1e-14) {
            sample(s);
            next_sample += p.sample_dt;
            if (p.stop_on_backflow) {
                const RunSample& smp = out.series.back();
                if (smp.min_wall_shear <= 0.0) {
                    auto ws = wall_shear(s.u);
                    const size_t arg =
                        std::min_element(ws.begin(), ws.end()) - ws.begin();
                    out.verdict.status = BlowupVerdict::Status::backflow;
                    out.verdict.t_star = s.t;
                    out.verdict.x_star = s.u.grid->x[arg];
                    // boundary-first: interior shear still positive (the
                    // truncation band y > y_max - 2 is excluded)
                    Field dyu = apply_derivative(s.u, Axis::y, 1);
                    double interior_min = 1e300;
                    for (int i = 0; i < s.u.grid->n_x; ++i)
                        for (int j = 1; j < s.u.grid->n_y; ++j) {
                            if (s.u.grid->y[j] > s.u.grid->y_max - 2.0) break;
                            interior_min = std::min(interior_min, dyu.at(i, j));
                        }
                    out.verdict.boundary_first = interior_min > 0.0;
                    return out;
                }
            }
        }
    }
    out.verdict.status = BlowupVerdict::Status::completed_horizon;
    if (out.series.empty() || out.series.back().t < s.t) sample(s);
    return out;
}

}  // namespace bll
