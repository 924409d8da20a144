#include "bll/shear.hpp"

#include <algorithm>
#include <cmath>

#include "bll/errors.hpp"
#include "bll/fd.hpp"

namespace bll {

namespace {

double interp_linear(std::span<const double> xs, std::span<const double> fs, double x,
                     double beyond) {
    if (x <= xs.front()) return fs.front();
    if (x >= xs.back()) return beyond;
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const size_t j = static_cast<size_t>(it - xs.begin());
    const double t = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
    return (1.0 - t) * fs[j - 1] + t * fs[j];
}

}  // namespace

ShearProfile ShearProfile::hartmann(double u_bar) {
    ShearProfile p;
    p.kind = Kind::hartmann;
    p.u_bar = u_bar;
    return p;
}

ShearProfile ShearProfile::erf_self_similar(double u_bar) {
    ShearProfile p;
    p.kind = Kind::erf_self_similar;
    p.u_bar = u_bar;
    return p;
}

ShearProfile ShearProfile::heat_kernel(std::vector<double> y, std::vector<double> u0,
                                       double u_bar) {
    if (y.size() != u0.size() || y.size() < 2)
        throw PreconditionError("heat_kernel profile: need matching sample arrays");
    if (u0.front() != 0.0) throw PreconditionError("heat_kernel profile: u0(0) must be 0");
    ShearProfile p;
    p.kind = Kind::heat_kernel;
    p.u_bar = u_bar;
    p.y0 = std::move(y);
    p.u0 = std::move(u0);
    return p;
}

double ShearProfile::value(double t, double y) const {
    switch (kind) {
        case Kind::hartmann:
            return u_bar * (1.0 - std::exp(-y));
        case Kind::erf_self_similar:
            return u_bar * std::erf(y / (2.0 * std::sqrt(1.0 + t)));
        case Kind::heat_kernel: {
            const double q[1] = {y};
            return heat_kernel_shear(y0, u0, t, q)[0];
        }
    }
    return 0.0;
}

double ShearProfile::dy(double t, double y) const {
    switch (kind) {
        case Kind::hartmann:
            return u_bar * std::exp(-y);
        case Kind::erf_self_similar: {
            const double s = 2.0 * std::sqrt(1.0 + t);
            return u_bar * 2.0 / (std::sqrt(M_PI) * s) * std::exp(-(y / s) * (y / s));
        }
        case Kind::heat_kernel: {
            // centered difference of the kernel evaluation
            const double h = 1e-5 * std::max(1.0, y);
            const double lo = std::max(0.0, y - h);
            const double q[2] = {lo, y + h};
            auto v = heat_kernel_shear(y0, u0, t, q);
            return (v[1] - v[0]) / (y + h - lo);
        }
    }
    return 0.0;
}

Field ShearProfile::sample(GridPtr g, double t) const {
    Field out(g, FieldRole::u);
    std::vector<double> vals(g->n_y);
    if (kind == Kind::heat_kernel) {
        vals = heat_kernel_shear(y0, u0, t, g->y);
    } else {
        for (int j = 0; j < g->n_y; ++j) vals[j] = value(t, g->y[j]);
    }
    for (int i = 0; i < g->n_x; ++i)
        for (int j = 0; j < g->n_y; ++j) out.at(i, j) = vals[j];
    return out;
}

std::vector<double> heat_kernel_shear(std::span<const double> y0, std::span<const double> u0,
                                      double t, std::span<const double> query, double rel_tol) {
    if (!(t >= 0.0)) throw PreconditionError("heat_kernel_shear: t must be >= 0");
    if (y0.size() != u0.size() || y0.size() < 2)
        throw PreconditionError("heat_kernel_shear: need matching sample arrays");
    if (u0[0] != 0.0) throw PreconditionError("heat_kernel_shear: u0(0) must be 0");
    for (double v : u0)
        if (!std::isfinite(v)) throw PreconditionError("heat_kernel_shear: non-finite samples");

    const double far = u0.back();
    std::vector<double> out(query.size());
    if (t < 1e-14) {
        for (size_t q = 0; q < query.size(); ++q) out[q] = interp_linear(y0, u0, query[q], far);
        return out;
    }
    const double st = std::sqrt(t);
    const double norm = 1.0 / (2.0 * std::sqrt(M_PI * t));
    for (size_t q = 0; q < query.size(); ++q) {
        const double y = query[q];
        // Gaussian tail beyond yb = y + 12*sqrt(t) is bounded by
        // sup|u0| * erfc(6) < 1e-16 * sup|u0|; documented truncation.
        const double hi = y + 12.0 * st;
        auto integrand = [&](double yb) {
            const double dm = (y - yb) / (2.0 * st);
            const double dp = (y + yb) / (2.0 * st);
            const double ker = std::exp(-dm * dm) - std::exp(-dp * dp);
            return ker * interp_linear(y0, u0, yb, far);
        };
        // quadrature segments aligned with the sample nodes, where the
        // interpolated integrand is smooth
        std::vector<double> cuts;
        cuts.push_back(0.0);
        for (double node : y0)
            if (node > 0.0 && node < hi) cuts.push_back(node);
        cuts.push_back(hi);
        const double scale = std::max(std::abs(far), 1.0);
        const double floor_total = rel_tol * scale * 2.0 * st;
        double acc = 0.0;
        for (size_t s = 0; s + 1 < cuts.size(); ++s)
            acc += fd::adaptive_simpson(integrand, cuts[s], cuts[s + 1], rel_tol,
                                        floor_total / static_cast<double>(cuts.size()));
        out[q] = norm * acc;
    }
    return out;
}

std::vector<double> hartmann_profile(double u_bar, std::span<const double> query) {
    if (!std::isfinite(u_bar)) throw PreconditionError("hartmann_profile: u_bar must be finite");
    std::vector<double> out(query.size());
    for (size_t i = 0; i < query.size(); ++i) out[i] = u_bar * (1.0 - std::exp(-query[i]));
    return out;
}

DecayBoundReport decay_bound_check(std::span<const double> y, std::span<const double> dyu,
                                   double C, double y_max) {
    if (!(C > 1.0)) throw PreconditionError("decay_bound_check: C must be > 1");
    DecayBoundReport rep;
    rep.pass = true;
    rep.worst_ratio = 1.0;
    for (size_t j = 0; j < y.size(); ++j) {
        if (y[j] > y_max - 2.0) continue;  // truncation buffer
        const double e = std::exp(-y[j] / 4.0);
        const double lo = e / C, hi = C * e;
        // severity: how far outside [lo, hi], in multiples of the band edges
        double sev = 1.0;
        if (dyu[j] < lo) sev = lo / std::max(dyu[j], 1e-300);
        if (dyu[j] > hi) sev = dyu[j] / hi;
        if (sev > rep.worst_ratio) {
            rep.worst_ratio = sev;
            rep.worst_y = y[j];
        }
        if (dyu[j] < lo || dyu[j] > hi) rep.pass = false;
    }
    rep.detail = rep.pass ? "both bounds hold on y <= y_max - 2"
                          : "bound violated; worst node at y = " + std::to_string(rep.worst_y);
    return rep;
}

}  // namespace bll
