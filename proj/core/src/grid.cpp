#include "bll/grid.hpp"

#include <algorithm>
#include <cmath>

#include "bll/errors.hpp"
#include "bll/fd.hpp"

namespace bll {

double Grid2D::hy_min() const {
    return *std::min_element(hy.begin(), hy.end());
}

GridPtr build_grid(int n_x, double x_period, int n_y, double y_max, double y_stretch) {
    if (n_x < 4 || n_y < 4) throw PreconditionError("build_grid: counts must be >= 4");
    if (!(x_period > 0.0) || !(y_max > 0.0))
        throw PreconditionError("build_grid: lengths must be positive and finite");
    if (!(y_stretch >= 1.0) || !std::isfinite(y_stretch))
        throw PreconditionError("build_grid: y_stretch must be >= 1");
    if (!std::isfinite(x_period) || !std::isfinite(y_max))
        throw PreconditionError("build_grid: non-finite input");

    auto g = std::make_shared<Grid2D>();
    g->n_x = n_x;
    g->x_period = x_period;
    g->n_y = n_y;
    g->y_max = y_max;
    g->y_stretch = y_stretch;

    g->x.resize(n_x);
    const double dx = x_period / n_x;
    for (int i = 0; i < n_x; ++i) g->x[i] = i * dx;

    g->y.resize(n_y);
    g->hy.resize(n_y - 1);
    const int m = n_y - 1;
    if (y_stretch == 1.0) {
        for (int j = 0; j <= m; ++j) g->y[j] = y_max * j / m;
    } else {
        // geometric spacings h0 * r^j summing to y_max
        const double r = y_stretch;
        const double h0 = y_max * (r - 1.0) / (std::pow(r, m) - 1.0);
        g->y[0] = 0.0;
        double h = h0;
        for (int j = 1; j <= m; ++j) {
            g->y[j] = g->y[j - 1] + h;
            h *= r;
        }
        g->y[m] = y_max;  // absorb rounding
    }
    for (int j = 0; j < m; ++j) g->hy[j] = g->y[j + 1] - g->y[j];
    return g;
}

std::string to_string(FieldRole r) {
    switch (r) {
        case FieldRole::u: return "u";
        case FieldRole::v: return "v";
        case FieldRole::vorticity: return "vorticity";
        case FieldRole::b: return "b";
        case FieldRole::a: return "a";
        case FieldRole::K: return "K";
        case FieldRole::generic: return "generic";
    }
    return "generic";
}

FieldRole field_role_from_string(const std::string& s) {
    if (s == "u") return FieldRole::u;
    if (s == "v") return FieldRole::v;
    if (s == "vorticity") return FieldRole::vorticity;
    if (s == "b") return FieldRole::b;
    if (s == "a") return FieldRole::a;
    if (s == "K") return FieldRole::K;
    if (s == "generic") return FieldRole::generic;
    throw PreconditionError("unknown field role '" + s + "'");
}

Field::Field(GridPtr g, FieldRole r)
    : grid(std::move(g)), role(r),
      values(static_cast<size_t>(grid->n_x) * grid->n_y, 0.0) {}

void Field::check_finite(const std::string& where) const {
    for (int i = 0; i < grid->n_x; ++i)
        for (int j = 0; j < grid->n_y; ++j)
            if (!std::isfinite(at(i, j))) throw NonFiniteError(where, i, j);
}

double Field::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

Field make_field(GridPtr g, FieldRole role, const std::function<double(double, double)>& f) {
    Field out(std::move(g), role);
    for (int i = 0; i < out.grid->n_x; ++i)
        for (int j = 0; j < out.grid->n_y; ++j) out.at(i, j) = f(out.grid->x[i], out.grid->y[j]);
    return out;
}

namespace {

// Per-row y-derivative stencils: 3-point interior (exact on quadratics),
// one-sided boundary closures wide enough for second-order accuracy.
struct YStencils {
    std::vector<std::vector<double>> w;  // weights per row
    std::vector<int> start;              // first node of each stencil
};

YStencils y_stencils(const Grid2D& g, int order) {
    YStencils s;
    const int n = g.n_y;
    s.w.resize(n);
    s.start.resize(n);
    const int bwidth = order == 1 ? 3 : 4;  // one-sided width for 2nd-order accuracy
    for (int j = 0; j < n; ++j) {
        int lo;
        int width;
        if (j == 0) {
            lo = 0;
            width = bwidth;
        } else if (j == n - 1) {
            lo = n - bwidth;
            width = bwidth;
        } else {
            lo = j - 1;
            width = 3;
        }
        std::span<const double> nodes(g.y.data() + lo, static_cast<size_t>(width));
        s.w[j] = fd::weights(g.y[j], nodes, order);
        s.start[j] = lo;
    }
    return s;
}

}  // namespace

Field apply_derivative(const Field& f, Axis axis, int order) {
    if (order != 1 && order != 2) throw PreconditionError("apply_derivative: order must be 1 or 2");
    const Grid2D& g = *f.grid;
    Field out(f.grid, FieldRole::generic);
    if (axis == Axis::x) {
        const double dx = g.dx();
        for (int i = 0; i < g.n_x; ++i) {
            const int ip = (i + 1) % g.n_x;
            const int im = (i + g.n_x - 1) % g.n_x;
            for (int j = 0; j < g.n_y; ++j) {
                if (order == 1)
                    out.at(i, j) = (f.at(ip, j) - f.at(im, j)) / (2.0 * dx);
                else
                    out.at(i, j) = (f.at(ip, j) - 2.0 * f.at(i, j) + f.at(im, j)) / (dx * dx);
            }
        }
    } else {
        const YStencils s = y_stencils(g, order);
        for (int i = 0; i < g.n_x; ++i) {
            auto col = f.column(i);
            for (int j = 0; j < g.n_y; ++j) {
                double acc = 0.0;
                const auto& w = s.w[j];
                for (size_t k = 0; k < w.size(); ++k) acc += w[k] * col[s.start[j] + k];
                out.at(i, j) = acc;
            }
        }
    }
    return out;
}

Field cumulative_integral_y(const Field& f) {
    const Grid2D& g = *f.grid;
    Field out(f.grid, FieldRole::generic);
    for (int i = 0; i < g.n_x; ++i) {
        auto col = f.column(i);
        auto acc = fd::cumtrapz(g.y, col);
        for (int j = 0; j < g.n_y; ++j) out.at(i, j) = acc[j];
    }
    return out;
}

Field recover_v(const Field& u) {
    Field ux = apply_derivative(u, Axis::x, 1);
    Field v = cumulative_integral_y(ux);
    for (double& val : v.values) val = -val;
    v.role = FieldRole::v;
    return v;
}

double Grid3D::hz_min() const {
    return *std::min_element(hz.begin(), hz.end());
}

Grid3DPtr build_grid3d(int n_x, double x_period, int n_y, double y_period, int n_z, double z_max,
                       double z_stretch) {
    if (n_x < 4 || n_y < 4 || n_z < 4) throw PreconditionError("build_grid3d: counts must be >= 4");
    if (!(x_period > 0.0) || !(y_period > 0.0) || !(z_max > 0.0))
        throw PreconditionError("build_grid3d: lengths must be positive");
    auto g = std::make_shared<Grid3D>();
    g->n_x = n_x;
    g->n_y = n_y;
    g->n_z = n_z;
    g->x_period = x_period;
    g->y_period = y_period;
    g->z_max = z_max;
    g->z_stretch = z_stretch;
    g->x.resize(n_x);
    g->y.resize(n_y);
    for (int i = 0; i < n_x; ++i) g->x[i] = i * x_period / n_x;
    for (int j = 0; j < n_y; ++j) g->y[j] = j * y_period / n_y;
    auto g2 = build_grid(4, 1.0, n_z, z_max, z_stretch);
    g->z = g2->y;
    g->hz = g2->hy;
    return g;
}

Field3D::Field3D(Grid3DPtr g)
    : grid(std::move(g)),
      values(static_cast<size_t>(grid->n_x) * grid->n_y * grid->n_z, 0.0) {}

void Field3D::check_finite(const std::string& where) const {
    for (int i = 0; i < grid->n_x; ++i)
        for (int j = 0; j < grid->n_y; ++j)
            for (int k = 0; k < grid->n_z; ++k)
                if (!std::isfinite(at(i, j, k))) throw NonFiniteError(where, i, j, k);
}

double Field3D::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace bll
