#include "bll/solver3d.hpp"

#include <algorithm>
#include <cmath>

#include "bll/errors.hpp"
#include "bll/fd.hpp"

namespace bll {

double k_constraint_residual(const KField& K) {
    const Grid3D& g = *K.grid;
    const double dx = g.dx(), dy = g.dy();
    double worst = 0.0;
    for (int i = 0; i < g.n_x; ++i) {
        for (int j = 0; j < g.n_y; ++j) {
            double kx;
            if (i == 0)
                kx = (-3.0 * K.at(0, j) + 4.0 * K.at(1, j) - K.at(2, j)) / (2.0 * dx);
            else if (i == g.n_x - 1)
                kx = (3.0 * K.at(i, j) - 4.0 * K.at(i - 1, j) + K.at(i - 2, j)) / (2.0 * dx);
            else
                kx = (K.at(i + 1, j) - K.at(i - 1, j)) / (2.0 * dx);
            const int jp = (j + 1) % g.n_y, jm = (j + g.n_y - 1) % g.n_y;
            const double ky = (K.at(i, jp) - K.at(i, jm)) / (2.0 * dy);
            worst = std::max(worst, std::abs(kx + K.at(i, j) * ky));
        }
    }
    return worst;
}

KField k_build_constant(Grid3DPtr g, double c) {
    KField K;
    K.grid = std::move(g);
    K.provenance = KField::Provenance::constant;
    K.values.assign(static_cast<size_t>(K.grid->n_x) * K.grid->n_y, c);
    K.burgers_residual = k_constraint_residual(K);
    return K;
}

KField k_build_characteristic(Grid3DPtr g, const std::function<double(double)>& profile,
                              const std::function<double(double)>& dprofile) {
    // crossing check: the implicit solve K = profile(y - Kx) is contractive
    // iff |x * profile'| < 1 over the strip
    double dmax = 0.0;
    for (int j = 0; j < 512; ++j)
        dmax = std::max(dmax, std::abs(dprofile(g->y_period * j / 512.0)));
    if (dmax * g->x_period >= 1.0)
        throw PreconditionError("k_build_characteristic: characteristics cross within the strip "
                                "(|x dprofile| reaches " +
                                std::to_string(dmax * g->x_period) + ")");
    KField K;
    K.grid = g;
    K.provenance = KField::Provenance::characteristic;
    K.values.assign(static_cast<size_t>(g->n_x) * g->n_y, 0.0);
    for (int i = 0; i < g->n_x; ++i) {
        for (int j = 0; j < g->n_y; ++j) {
            double k = profile(g->y[j]);
            for (int it = 0; it < 200; ++it) {
                const double next = profile(g->y[j] - k * g->x[i]);
                if (std::abs(next - k) < 1e-14) {
                    k = next;
                    break;
                }
                k = next;
            }
            K.at(i, j) = k;
        }
    }
    K.burgers_residual = k_constraint_residual(K);
    return K;
}

KField k_build_user(Grid3DPtr g, const std::function<double(double, double)>& fn) {
    KField K;
    K.grid = g;
    K.provenance = KField::Provenance::user;
    K.values.assign(static_cast<size_t>(g->n_x) * g->n_y, 0.0);
    for (int i = 0; i < g->n_x; ++i)
        for (int j = 0; j < g->n_y; ++j) K.at(i, j) = fn(g->x[i], g->y[j]);
    K.burgers_residual = k_constraint_residual(K);
    return K;
}

namespace {

// d/dx by limited upwinding with speed field a, periodic x; adds a*du/dx.
void add_adv_x(const Field3D& u, const std::function<double(int, int, int)>& speed,
               std::vector<double>& out) {
    const Grid3D& g = *u.grid;
    const double dx = g.dx();
    std::vector<double> sigma(g.n_x);
    for (int j = 0; j < g.n_y; ++j) {
        for (int k = 1; k < g.n_z - 1; ++k) {
            for (int i = 0; i < g.n_x; ++i) {
                const int ip = (i + 1) % g.n_x, im = (i + g.n_x - 1) % g.n_x;
                sigma[i] = fd::minmod_mc((u.at(i, j, k) - u.at(im, j, k)) / dx,
                                      (u.at(ip, j, k) - u.at(i, j, k)) / dx);
            }
            for (int i = 0; i < g.n_x; ++i) {
                const int ip = (i + 1) % g.n_x, im = (i + g.n_x - 1) % g.n_x;
                const double a = speed(i, j, k);
                double d;
                if (a >= 0.0)
                    d = (u.at(i, j, k) + 0.5 * dx * sigma[i] -
                         (u.at(im, j, k) + 0.5 * dx * sigma[im])) / dx;
                else
                    d = (u.at(ip, j, k) - 0.5 * dx * sigma[ip] -
                         (u.at(i, j, k) - 0.5 * dx * sigma[i])) / dx;
                out[(static_cast<size_t>(i) * g.n_y + j) * g.n_z + k] += a * d;
            }
        }
    }
}

void add_adv_y(const Field3D& u, const std::function<double(int, int, int)>& speed,
               std::vector<double>& out) {
    const Grid3D& g = *u.grid;
    const double dy = g.dy();
    std::vector<double> sigma(g.n_y);
    for (int i = 0; i < g.n_x; ++i) {
        for (int k = 1; k < g.n_z - 1; ++k) {
            for (int j = 0; j < g.n_y; ++j) {
                const int jp = (j + 1) % g.n_y, jm = (j + g.n_y - 1) % g.n_y;
                sigma[j] = fd::minmod_mc((u.at(i, j, k) - u.at(i, jm, k)) / dy,
                                      (u.at(i, jp, k) - u.at(i, j, k)) / dy);
            }
            for (int j = 0; j < g.n_y; ++j) {
                const int jp = (j + 1) % g.n_y, jm = (j + g.n_y - 1) % g.n_y;
                const double a = speed(i, j, k);
                double d;
                if (a >= 0.0)
                    d = (u.at(i, j, k) + 0.5 * dy * sigma[j] -
                         (u.at(i, jm, k) + 0.5 * dy * sigma[jm])) / dy;
                else
                    d = (u.at(i, jp, k) - 0.5 * dy * sigma[jp] -
                         (u.at(i, j, k) - 0.5 * dy * sigma[j])) / dy;
                out[(static_cast<size_t>(i) * g.n_y + j) * g.n_z + k] += a * d;
            }
        }
    }
}

void add_adv_z(const Field3D& u, const Field3D& w, std::vector<double>& out) {
    const Grid3D& g = *u.grid;
    std::vector<double> sigma(g.n_z, 0.0);
    for (int i = 0; i < g.n_x; ++i) {
        for (int j = 0; j < g.n_y; ++j) {
            sigma[0] = sigma[g.n_z - 1] = 0.0;
            for (int k = 1; k < g.n_z - 1; ++k)
                sigma[k] = fd::minmod_mc((u.at(i, j, k) - u.at(i, j, k - 1)) / g.hz[k - 1],
                                      (u.at(i, j, k + 1) - u.at(i, j, k)) / g.hz[k]);
            for (int k = 1; k < g.n_z - 1; ++k) {
                const double a = w.at(i, j, k);
                const double hm = g.hz[k - 1], hp = g.hz[k];
                const double width = 0.5 * (hm + hp);
                double d;
                if (a >= 0.0)
                    d = (u.at(i, j, k) + 0.5 * hp * sigma[k] -
                         (u.at(i, j, k - 1) + 0.5 * hm * sigma[k - 1])) / width;
                else
                    d = (u.at(i, j, k + 1) - 0.5 * hp * sigma[k + 1] -
                         (u.at(i, j, k) - 0.5 * hm * sigma[k])) / width;
                out[(static_cast<size_t>(i) * g.n_y + j) * g.n_z + k] += a * d;
            }
        }
    }
}

// d/dx central periodic
double ddx_c(const Field3D& f, int i, int j, int k) {
    const Grid3D& g = *f.grid;
    const int ip = (i + 1) % g.n_x, im = (i + g.n_x - 1) % g.n_x;
    return (f.at(ip, j, k) - f.at(im, j, k)) / (2.0 * g.dx());
}

double ddy_c(const Field3D& f, int i, int j, int k) {
    const Grid3D& g = *f.grid;
    const int jp = (j + 1) % g.n_y, jm = (j + g.n_y - 1) % g.n_y;
    return (f.at(i, jp, k) - f.at(i, jm, k)) / (2.0 * g.dy());
}

struct ZDiffusion {
    std::vector<double> wm, wc, wp;
};

ZDiffusion z_diffusion(const Grid3D& g) {
    ZDiffusion s;
    s.wm.resize(g.n_z);
    s.wc.resize(g.n_z);
    s.wp.resize(g.n_z);
    for (int k = 1; k < g.n_z - 1; ++k) {
        const double nodes[3] = {g.z[k - 1], g.z[k], g.z[k + 1]};
        auto w = fd::weights(g.z[k], nodes, 2);
        s.wm[k] = w[0];
        s.wc[k] = w[1];
        s.wp[k] = w[2];
    }
    return s;
}

void implicit_z(Field3D& rhs, const Grid3D& g, const ZDiffusion& dif, double dt,
                const std::function<double(int, int)>& far, Field3D& out) {
    const int m = g.n_z - 2;
    std::vector<double> lower(m - 1), diag(m), upper(m - 1), col(m);
    for (int k = 1; k <= m; ++k) {
        diag[k - 1] = 1.0 - dt * dif.wc[k];
        if (k > 1) lower[k - 2] = -dt * dif.wm[k];
        if (k < m) upper[k - 1] = -dt * dif.wp[k];
    }
    for (int i = 0; i < g.n_x; ++i) {
        for (int j = 0; j < g.n_y; ++j) {
            const double u_far = far(i, j);
            for (int k = 1; k <= m; ++k) col[k - 1] = rhs.at(i, j, k);
            col[m - 1] += dt * dif.wp[m] * u_far;
            fd::solve_tridiag(lower, diag, upper, col);
            out.at(i, j, 0) = 0.0;
            for (int k = 1; k <= m; ++k) out.at(i, j, k) = col[k - 1];
            out.at(i, j, g.n_z - 1) = u_far;
        }
    }
}

void cfl_guard(const Field3D& u, const Field3D& w, double ky_scale, double dt, double c_cfl) {
    const Grid3D& g = *u.grid;
    const double umax = u.max_abs();
    const double wmax = w.max_abs();
    double bound = 1e300;
    if (umax > 0) bound = std::min(bound, c_cfl * g.dx() / umax);
    if (umax * ky_scale > 0) bound = std::min(bound, c_cfl * g.dy() / (umax * ky_scale));
    if (wmax > 0) bound = std::min(bound, c_cfl * g.hz_min() / wmax);
    if (dt > bound) throw CflError(dt, bound);
}

}  // namespace

Field3D recover_w_reduced(const Field3D& u, const KField& K) {
    const Grid3D& g = *u.grid;
    Field3D div(u.grid);
    for (int i = 0; i < g.n_x; ++i)
        for (int j = 0; j < g.n_y; ++j)
            for (int k = 0; k < g.n_z; ++k) {
                // (K u)_y with K independent of z
                const int jp = (j + 1) % g.n_y, jm = (j + g.n_y - 1) % g.n_y;
                const double kuy =
                    (K.at(i, jp) * u.at(i, jp, k) - K.at(i, jm) * u.at(i, jm, k)) /
                    (2.0 * g.dy());
                div.at(i, j, k) = ddx_c(u, i, j, k) + kuy;
            }
    Field3D w(u.grid);
    for (int i = 0; i < g.n_x; ++i)
        for (int j = 0; j < g.n_y; ++j) {
            double acc = 0.0;
            w.at(i, j, 0) = 0.0;
            for (int k = 1; k < g.n_z; ++k) {
                acc += 0.5 * (div.at(i, j, k) + div.at(i, j, k - 1)) * g.hz[k - 1];
                w.at(i, j, k) = -acc;
            }
        }
    return w;
}

Field3D recover_w_full(const Field3D& u, const Field3D& v) {
    const Grid3D& g = *u.grid;
    Field3D w(u.grid);
    for (int i = 0; i < g.n_x; ++i)
        for (int j = 0; j < g.n_y; ++j) {
            double acc = 0.0;
            w.at(i, j, 0) = 0.0;
            for (int k = 1; k < g.n_z; ++k) {
                const double a = ddx_c(u, i, j, k) + ddy_c(v, i, j, k);
                const double b = ddx_c(u, i, j, k - 1) + ddy_c(v, i, j, k - 1);
                acc += 0.5 * (a + b) * g.hz[k - 1];
                w.at(i, j, k) = -acc;
            }
        }
    return w;
}

FlowState3D step3d_reduced(const FlowState3D& s, double dt, const Source3DFn& source,
                           double c_cfl) {
    const Grid3D& g = *s.u.grid;
    s.u.check_finite("step3d_reduced input");
    Field3D w = recover_w_reduced(s.u, s.K);
    double kmax = 0.0;
    for (double v : s.K.values) kmax = std::max(kmax, std::abs(v));
    cfl_guard(s.u, w, kmax, dt, c_cfl);

    std::vector<double> adv(s.u.values.size(), 0.0);
    add_adv_x(s.u, [&](int i, int j, int k) { return s.u.at(i, j, k); }, adv);
    add_adv_y(s.u, [&](int i, int j, int k) { return s.K.at(i, j) * s.u.at(i, j, k); }, adv);
    add_adv_z(s.u, w, adv);

    Field3D rhs(s.u.grid);
    for (int i = 0; i < g.n_x; ++i)
        for (int j = 0; j < g.n_y; ++j)
            for (int k = 0; k < g.n_z; ++k) {
                double f = -s.P_x(s.t, g.x[i], g.y[j]);
                if (source) f += source(s.t, g.x[i], g.y[j], g.z[k]);
                rhs.at(i, j, k) =
                    s.u.at(i, j, k) +
                    dt * (-adv[(static_cast<size_t>(i) * g.n_y + j) * g.n_z + k] + f);
            }
    FlowState3D out = s;
    out.t = s.t + dt;
    const ZDiffusion dif = z_diffusion(g);
    implicit_z(rhs, g, dif, dt, [&](int i, int j) { return s.U(out.t, g.x[i], g.y[j]); },
               out.u);
    out.u.check_finite("step3d_reduced output");
    return out;
}

FullState3D step3d_full(const FullState3D& s, double dt, const Source3DFn& source_u,
                        const Source3DFn& source_v, double c_cfl) {
    const Grid3D& g = *s.u.grid;
    s.u.check_finite("step3d_full input u");
    s.v.check_finite("step3d_full input v");
    Field3D w = recover_w_full(s.u, s.v);
    const double vmax = s.v.max_abs();
    const double umax = std::max(s.u.max_abs(), 1e-300);
    cfl_guard(s.u, w, vmax / umax, dt, c_cfl);

    std::vector<double> adv_u(s.u.values.size(), 0.0), adv_v(s.v.values.size(), 0.0);
    auto ax = [&](int i, int j, int k) { return s.u.at(i, j, k); };
    auto ay = [&](int i, int j, int k) { return s.v.at(i, j, k); };
    add_adv_x(s.u, ax, adv_u);
    add_adv_y(s.u, ay, adv_u);
    add_adv_z(s.u, w, adv_u);
    add_adv_x(s.v, ax, adv_v);
    add_adv_y(s.v, ay, adv_v);
    add_adv_z(s.v, w, adv_v);

    Field3D rhs_u(s.u.grid), rhs_v(s.v.grid);
    for (int i = 0; i < g.n_x; ++i)
        for (int j = 0; j < g.n_y; ++j)
            for (int k = 0; k < g.n_z; ++k) {
                const double px = s.P_x(s.t, g.x[i], g.y[j]);
                const double py = s.K.at(i, j) * px;  // pressure alignment of the structure
                double fu = -px, fv = -py;
                if (source_u) fu += source_u(s.t, g.x[i], g.y[j], g.z[k]);
                if (source_v) fv += source_v(s.t, g.x[i], g.y[j], g.z[k]);
                const size_t q = (static_cast<size_t>(i) * g.n_y + j) * g.n_z + k;
                rhs_u.at(i, j, k) = s.u.at(i, j, k) + dt * (-adv_u[q] + fu);
                rhs_v.at(i, j, k) = s.v.at(i, j, k) + dt * (-adv_v[q] + fv);
            }
    FullState3D out = s;
    out.t = s.t + dt;
    const ZDiffusion dif = z_diffusion(g);
    implicit_z(rhs_u, g, dif, dt, [&](int i, int j) { return s.U(out.t, g.x[i], g.y[j]); },
               out.u);
    implicit_z(rhs_v, g, dif, dt,
               [&](int i, int j) { return s.K.at(i, j) * s.U(out.t, g.x[i], g.y[j]); }, out.v);
    out.u.check_finite("step3d_full output u");
    out.v.check_finite("step3d_full output v");
    return out;
}

double structure_defect(const Field3D& u, const Field3D& v, const KField& K) {
    const Grid3D& g = *u.grid;
    double worst = 0.0;
    for (int i = 0; i < g.n_x; ++i)
        for (int j = 0; j < g.n_y; ++j)
            for (int k = 0; k < g.n_z; ++k)
                worst = std::max(worst, std::abs(v.at(i, j, k) - K.at(i, j) * u.at(i, j, k)));
    return worst;
}

std::vector<double> structure_monitor(FullState3D s, double dt, int n_steps, int sample_every,
                                      std::vector<double>* times) {
    std::vector<double> defects;
    defects.push_back(structure_defect(s.u, s.v, s.K));
    if (times) times->push_back(s.t);
    for (int n = 1; n <= n_steps; ++n) {
        s = step3d_full(s, dt);
        if (n % sample_every == 0 || n == n_steps) {
            defects.push_back(structure_defect(s.u, s.v, s.K));
            if (times) times->push_back(s.t);
        }
    }
    return defects;
}

}  // namespace bll
