#include "bll/norms.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "bll/errors.hpp"
#include "bll/fd.hpp"

namespace bll {

void WeightParams::validate() const {
    std::vector<std::string> bad;
    if (s < 0) bad.push_back("s must be >= 0");
    if (!(gamma >= 1.0)) bad.push_back("gamma must be >= 1");
    if (!(sigma > gamma + 0.5)) bad.push_back("sigma must exceed gamma + 1/2");
    if (!(delta > 0.0 && delta < 1.0)) bad.push_back("delta must lie in (0,1)");
    if (!(alpha >= 0.25 && alpha <= 0.5)) bad.push_back("alpha must lie in [1/4,1/2]");
    if (!(tau > 0.0)) bad.push_back("tau must be positive");
    if (!bad.empty()) throw ConfigError(bad);
}

namespace {

using cd = std::complex<double>;

// Direct DFT per y-row; grids here are small enough that O(n^2) is fine.
std::vector<cd> dft_row(const Field& f, int j) {
    const int n = f.grid->n_x;
    std::vector<cd> c(n);
    for (int k = 0; k < n; ++k) {
        cd acc = 0.0;
        for (int i = 0; i < n; ++i) {
            const double ang = -2.0 * M_PI * k * i / n;
            acc += f.at(i, j) * cd(std::cos(ang), std::sin(ang));
        }
        c[k] = acc / static_cast<double>(n);
    }
    return c;
}

void idft_into(const std::vector<cd>& c, Field& out, int j) {
    const int n = out.grid->n_x;
    for (int i = 0; i < n; ++i) {
        cd acc = 0.0;
        for (int k = 0; k < n; ++k) {
            const double ang = 2.0 * M_PI * k * i / n;
            acc += c[k] * cd(std::cos(ang), std::sin(ang));
        }
        out.at(i, j) = acc.real();
    }
}

double wavenumber(int k, int n, double period) {
    const int kk = k <= n / 2 ? k : k - n;
    return 2.0 * M_PI * kk / period;
}

// Weighted squared L2 over the strip: dx * trapz_y of g(i,j)^2 * weight(j)^2.
template <typename G, typename W>
double weighted_l2_sq(const Grid2D& grid, G&& g, W&& weight) {
    const double dx = grid.dx();
    double acc = 0.0;
    for (int i = 0; i < grid.n_x; ++i) {
        double coli = 0.0;
        for (int j = 0; j + 1 < grid.n_y; ++j) {
            const double a = g(i, j) * weight(j);
            const double b = g(i, j + 1) * weight(j + 1);
            coli += 0.5 * (a * a + b * b) * grid.hy[j];
        }
        acc += coli * dx;
    }
    return acc;
}

// Fraction of the squared mass that sits in the top truncation band [y_max-2, y_max].
template <typename G, typename W>
double tail_fraction(const Grid2D& grid, G&& g, W&& weight) {
    const double total = weighted_l2_sq(grid, g, weight);
    if (total <= 0.0) return 0.0;
    const double cut = grid.y_max - 2.0;
    double top = 0.0;
    const double dx = grid.dx();
    for (int i = 0; i < grid.n_x; ++i) {
        double coli = 0.0;
        for (int j = 0; j + 1 < grid.n_y; ++j) {
            if (grid.y[j] < cut) continue;
            const double a = g(i, j) * weight(j);
            const double b = g(i, j + 1) * weight(j + 1);
            coli += 0.5 * (a * a + b * b) * grid.hy[j];
        }
        top += coli * dx;
    }
    return top / total;
}

}  // namespace

Field spectral_dx(const Field& f, int m) {
    const Grid2D& g = *f.grid;
    Field out(f.grid, FieldRole::generic);
    if (m == 0) {
        out.values = f.values;
        return out;
    }
    const int n = g.n_x;
    std::vector<cd> c(n);
    for (int j = 0; j < g.n_y; ++j) {
        c = dft_row(f, j);
        for (int k = 0; k < n; ++k) {
            if (n % 2 == 0 && k == n / 2 && m % 2 == 1) {
                c[k] = 0.0;  // odd derivative of the unpaired Nyquist mode
                continue;
            }
            const double kap = wavenumber(k, n, g.x_period);
            cd mult = std::pow(cd(0.0, kap), m);
            c[k] *= mult;
        }
        idft_into(c, out, j);
    }
    return out;
}

Field dyk(const Field& f, int k) {
    if (k == 0) return f;
    const Grid2D& g = *f.grid;
    Field out(f.grid, FieldRole::generic);
    const int width = std::min(g.n_y, k + 3);
    for (int j = 0; j < g.n_y; ++j) {
        int lo = j - width / 2;
        lo = std::max(0, std::min(lo, g.n_y - width));
        std::span<const double> nodes(g.y.data() + lo, static_cast<size_t>(width));
        auto w = fd::weights(g.y[j], nodes, k);
        for (int i = 0; i < g.n_x; ++i) {
            double acc = 0.0;
            for (int q = 0; q < width; ++q) acc += w[q] * f.at(i, lo + q);
            out.at(i, j) = acc;
        }
    }
    return out;
}

double sobolev_weighted(const Field& w, const WeightParams& p, NormReport* report) {
    p.validate();
    const Grid2D& g = *w.grid;
    if (2 * p.s >= g.n_x)
        throw PreconditionError("sobolev_weighted: n_x too small for s (resolution check)");
    double total = 0.0;
    double tail_top = 0.0, tail_tot = 0.0;
    for (int a1 = 0; a1 <= p.s; ++a1) {
        Field fx = spectral_dx(w, a1);
        for (int a2 = 0; a1 + a2 <= p.s; ++a2) {
            Field d = dyk(fx, a2);
            auto weight = [&](int j) { return std::pow(1.0 + g.y[j], p.gamma + a2); };
            auto val = [&](int i, int j) { return d.at(i, j); };
            const double term = weighted_l2_sq(g, val, weight);
            total += term;
            tail_tot += term;
            tail_top += term * tail_fraction(g, val, weight);
        }
    }
    if (report) {
        report->values["H^{s,gamma}"] = std::sqrt(total);
        report->tail_fraction = tail_tot > 0 ? tail_top / tail_tot : 0.0;
        report->grid_desc = std::to_string(g.n_x) + "x" + std::to_string(g.n_y);
    }
    return std::sqrt(total);
}

Field gs_quantity(const Field& w, const Field& u, std::span<const double> U, int s) {
    const Grid2D& g = *w.grid;
    if (static_cast<int>(U.size()) != g.n_x)
        throw PreconditionError("gs_quantity: U must have one entry per x column");
    for (int i = 0; i < g.n_x; ++i)
        for (int j = 0; j < g.n_y; ++j)
            if (!(w.at(i, j) > 0.0))
                throw MonotonicityError("gs_quantity: w <= 0 at (" + std::to_string(i) + "," +
                                        std::to_string(j) + ")");
    Field wy = dyk(w, 1);
    Field dxs_w = spectral_dx(w, s);
    Field um(u.grid, FieldRole::generic);
    for (int i = 0; i < g.n_x; ++i)
        for (int j = 0; j < g.n_y; ++j) um.at(i, j) = u.at(i, j) - U[i];
    Field dxs_um = spectral_dx(um, s);
    Field out(w.grid, FieldRole::generic);
    for (int i = 0; i < g.n_x; ++i)
        for (int j = 0; j < g.n_y; ++j)
            out.at(i, j) = dxs_w.at(i, j) - wy.at(i, j) / w.at(i, j) * dxs_um.at(i, j);
    return out;
}

double hg_norm(const Field& w, const Field& u, std::span<const double> U,
               const WeightParams& p) {
    p.validate();
    const Grid2D& g = *w.grid;
    Field gs = gs_quantity(w, u, U, p.s);
    auto weight_g = [&](int j) { return std::pow(1.0 + g.y[j], p.gamma); };
    double total = weighted_l2_sq(g, [&](int i, int j) { return gs.at(i, j); }, weight_g);
    for (int a1 = 0; a1 <= p.s - 1; ++a1) {
        Field fx = spectral_dx(w, a1);
        for (int a2 = 0; a1 + a2 <= p.s; ++a2) {
            Field d = dyk(fx, a2);
            auto weight = [&](int j) { return std::pow(1.0 + g.y[j], p.gamma + a2); };
            total += weighted_l2_sq(g, [&](int i, int j) { return d.at(i, j); }, weight);
        }
    }
    return std::sqrt(total);
}

ClassMembership class_membership(const Field& w, const WeightParams& p) {
    p.validate();
    const Grid2D& g = *w.grid;
    ClassMembership r;
    std::vector<Field> derivs;
    for (int a1 = 0; a1 <= 2; ++a1) {
        Field fx = spectral_dx(w, a1);
        for (int a2 = 0; a1 + a2 <= 2; ++a2) derivs.push_back(dyk(fx, a2));
    }
    // the a2 exponents corresponding to the loop order above
    const int a2s[6] = {0, 1, 2, 0, 1, 0};
    double worst = 0.0;
    for (int i = 0; i < g.n_x; ++i) {
        for (int j = 0; j < g.n_y; ++j) {
            if (g.y[j] > g.y_max - 2.0) continue;
            const double pw = std::pow(1.0 + g.y[j], p.sigma);
            const bool lower = pw * std::abs(w.at(i, j)) >= p.delta;
            double sum = 0.0;
            for (int q = 0; q < 6; ++q) {
                const double v = std::pow(1.0 + g.y[j], p.sigma + a2s[q]) * derivs[q].at(i, j);
                sum += v * v;
            }
            const bool upper = sum <= 1.0 / (p.delta * p.delta);
            double sev = 0.0;
            if (!lower) sev = p.delta - pw * std::abs(w.at(i, j));
            if (!upper) sev = std::max(sev, sum - 1.0 / (p.delta * p.delta));
            if (sev > worst) {
                worst = sev;
                r.worst_y = g.y[j];
                r.worst_i = i;
                r.worst_j = j;
            }
            r.lower_ok = r.lower_ok && lower;
            r.deriv_ok = r.deriv_ok && upper;
        }
    }
    r.pass = r.lower_ok && r.deriv_ok;
    return r;
}

double exp_weight_norm(const Field& f, int m, double mu_rate, NormReport* report) {
    const Grid2D& g = *f.grid;
    auto weight = [&](int j) { return std::exp(mu_rate * g.y[j]); };
    const double tf = tail_fraction(g, [&](int i, int j) { return f.at(i, j); }, weight);
    if (tf > 0.2)
        throw DecayError("exp_weight_norm: weighted integrand does not decay (tail fraction " +
                         std::to_string(tf) + ")");
    double total = 0.0;
    for (int a1 = 0; a1 <= m; ++a1) {
        Field fx = spectral_dx(f, a1);
        const int b_max = a1 <= m - 1 ? m - a1 : 0;
        for (int a2 = 0; a2 <= b_max; ++a2) {
            if (a1 == m && a2 > 0) break;
            Field d = dyk(fx, a2);
            total += weighted_l2_sq(g, [&](int i, int j) { return d.at(i, j); }, weight);
        }
    }
    if (report) {
        report->values["H^m_mu"] = std::sqrt(total);
        report->tail_fraction = tf;
        report->m_max = m;
    }
    return std::sqrt(total);
}

Seminorms analytic_seminorms(const Field& f, const WeightParams& p, double t, int m_max) {
    p.validate();
    const Grid2D& g = *f.grid;
    const double zden = std::sqrt(1.0 + t);
    auto theta = [&](int j) {
        const double z = g.y[j] / zden;
        return std::exp(p.alpha * z * z / 4.0);
    };
    const double tf = tail_fraction(g, [&](int i, int j) { return f.at(i, j); }, theta);
    if (tf > 0.2)
        throw DecayError("analytic_seminorms: theta-weighted tail does not converge "
                         "(tail fraction " + std::to_string(tf) + ")");
    Seminorms out;
    out.X.resize(m_max + 1);
    out.D.resize(m_max + 1);
    out.Y.resize(m_max + 1, 0.0);
    const double log_min = std::log(std::numeric_limits<double>::min()) + 40.0;
    for (int m = 0; m <= m_max; ++m) {
        Field fx = spectral_dx(f, m);
        Field fxy = dyk(fx, 1);
        const double nx =
            std::sqrt(weighted_l2_sq(g, [&](int i, int j) { return fx.at(i, j); }, theta));
        const double nd =
            std::sqrt(weighted_l2_sq(g, [&](int i, int j) { return fxy.at(i, j); }, theta));
        // log-space factorial weight M_m = sqrt(m+1)/m!
        const double logM = 0.5 * std::log(m + 1.0) - std::lgamma(m + 1.0);
        const double logTau = m * std::log(p.tau);
        if (logM + logTau < log_min) {
            out.underflow.push_back(m);
            out.X[m] = out.D[m] = out.Y[m] = 0.0;
            continue;
        }
        const double wfac = std::exp(logM + logTau);
        out.X[m] = nx * wfac;
        out.D[m] = nd * wfac;
        if (m >= 1) out.Y[m] = nx * std::exp(logM + (m - 1) * std::log(p.tau)) * m;
    }
    for (int m = 0; m <= m_max; ++m) {
        out.X_sum += out.X[m];
        out.D_sum += out.D[m];
        out.Y_sum += out.Y[m];
    }
    return out;
}

RadiusResult radius_ode(std::span<const double> ts, std::span<const double> Xs,
                        std::span<const double> Ds, double C, double tau0) {
    if (ts.size() != Xs.size() || ts.size() != Ds.size() || ts.empty())
        throw PreconditionError("radius_ode: mismatched histories");
    if (!(tau0 > 0.0)) throw PreconditionError("radius_ode: tau0 must be positive");
    RadiusResult out;
    const double floor32 = std::pow(tau0 / 4.0, 1.5);
    double acc = 0.0;
    double prev_integrand = Xs[0] + std::pow(1.0 + ts[0], 0.25) * Ds[0];
    double prev32 = std::pow(tau0, 1.5);
    out.t.push_back(ts[0]);
    out.tau.push_back(tau0);
    for (size_t i = 1; i < ts.size(); ++i) {
        const double integ = Xs[i] + std::pow(1.0 + ts[i], 0.25) * Ds[i];
        acc += 0.5 * (integ + prev_integrand) * (ts[i] - ts[i - 1]);
        prev_integrand = integ;
        const double cur32 = std::pow(tau0, 1.5) - 1.5 * C * acc;
        if (cur32 <= floor32) {
            // interpolate the crossing in the tau^{3/2} variable
            const double frac = (prev32 - floor32) / (prev32 - cur32);
            out.floor_crossing = ts[i - 1] + frac * (ts[i] - ts[i - 1]);
            out.t.push_back(*out.floor_crossing);
            out.tau.push_back(tau0 / 4.0);
            return out;
        }
        prev32 = cur32;
        out.t.push_back(ts[i]);
        out.tau.push_back(std::pow(cur32, 2.0 / 3.0));
    }
    return out;
}

Lifespan lifespan_predict(double eps, double tau0, double alpha, double C) {
    if (!(alpha >= 0.25 && alpha <= 0.5))
        throw PreconditionError("lifespan_predict: alpha must lie in [1/4,1/2]");
    if (!(eps > 0.0 && eps < 1.0)) throw PreconditionError("lifespan_predict: eps must be in (0,1)");
    if (!(C > 0.0)) throw PreconditionError("lifespan_predict: C must be positive");
    Lifespan r;
    r.C1 = 3.0 * C * (alpha + 2.0) / (2.0 * alpha);
    r.C2 = std::pow(7.0 * std::pow(tau0, 1.5) / (8.0 * r.C1), 4.0 / 3.0);
    r.T_eps = r.C2 * std::pow(eps, -4.0 / 3.0) - 1.0;
    const double t32 = std::pow(tau0, 1.5);
    const double g1 = 7.0 * eps / (8.0 * r.C1);
    const double g2 = 128.0 * std::sqrt(2.0) * C * eps;
    const double g3 = 256.0 * std::sqrt(2.0) * C * std::pow(r.C2, 0.75) / alpha;
    r.feasible = std::max({g1, g2, g3}) <= t32;
    return r;
}

CancellationFields cancellation_gm(const Field& u_tilde, const ShearProfile& background,
                                   double t, int m) {
    const Grid2D& g = *u_tilde.grid;
    Field us = background.sample(u_tilde.grid, t);
    Field usy = dyk(us, 1);
    Field usyy = dyk(us, 2);
    Field uy = dyk(u_tilde, 1);
    Field uyy = dyk(u_tilde, 2);
    Field denom(u_tilde.grid, FieldRole::generic);
    for (int i = 0; i < g.n_x; ++i)
        for (int j = 0; j < g.n_y; ++j) {
            denom.at(i, j) = usy.at(i, j) + uy.at(i, j);
            if (!(denom.at(i, j) > 0.0))
                throw MonotonicityError("cancellation_gm: dy(u0s + u~) must be positive");
        }
    Field dxm = spectral_dx(u_tilde, m);
    Field ratio(u_tilde.grid, FieldRole::generic);
    for (size_t q = 0; q < ratio.values.size(); ++q)
        ratio.values[q] = dxm.values[q] / denom.values[q];
    CancellationFields out{dyk(ratio, 1), Field(u_tilde.grid, FieldRole::generic),
                           Field(u_tilde.grid, FieldRole::generic)};
    Field uxy = dyk(spectral_dx(u_tilde, 1), 1);
    for (int i = 0; i < g.n_x; ++i)
        for (int j = 0; j < g.n_y; ++j) {
            out.eta1.at(i, j) = uxy.at(i, j) / denom.at(i, j);
            out.eta2.at(i, j) = (usyy.at(i, j) + uyy.at(i, j)) / denom.at(i, j);
        }
    return out;
}

}  // namespace bll
