#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace bll {

/// Tensor grid on the truncated half plane: x periodic with period x_period,
/// y in [0, y_max] with optional geometric stretching (ratio y_stretch >= 1).
struct Grid2D {
    int n_x = 0;
    double x_period = 0.0;
    int n_y = 0;
    double y_max = 0.0;
    double y_stretch = 1.0;

    std::vector<double> x;   ///< n_x nodes, x[i] = i * dx (periodic, no duplicate endpoint)
    std::vector<double> y;   ///< n_y nodes, y[0] = 0, y[n_y-1] = y_max, strictly increasing
    std::vector<double> hy;  ///< n_y-1 spacings, hy[j] = y[j+1]-y[j]

    double dx() const { return x_period / n_x; }
    double hy_min() const;
};

using GridPtr = std::shared_ptr<const Grid2D>;

/// Validates parameters and materializes the node arrays.
GridPtr build_grid(int n_x, double x_period, int n_y, double y_max, double y_stretch = 1.0);

enum class FieldRole { u, v, vorticity, b, a, K, generic };

std::string to_string(FieldRole r);
FieldRole field_role_from_string(const std::string& s);

/// Real samples of one physical quantity on a Grid2D, stored x-major
/// (values[i*n_y + j] at (x_i, y_j)).
struct Field {
    GridPtr grid;
    FieldRole role = FieldRole::generic;
    std::vector<double> values;

    Field() = default;
    Field(GridPtr g, FieldRole r);

    double& at(int i, int j) { return values[static_cast<size_t>(i) * grid->n_y + j]; }
    double at(int i, int j) const { return values[static_cast<size_t>(i) * grid->n_y + j]; }
    std::span<double> column(int i) { return {values.data() + static_cast<size_t>(i) * grid->n_y,
                                              static_cast<size_t>(grid->n_y)}; }
    std::span<const double> column(int i) const {
        return {values.data() + static_cast<size_t>(i) * grid->n_y,
                static_cast<size_t>(grid->n_y)};
    }

    /// Throws NonFiniteError naming the first bad node.
    void check_finite(const std::string& where) const;

    double max_abs() const;
};

/// Fills a field from f(x, y).
Field make_field(GridPtr g, FieldRole role, const std::function<double(double, double)>& f);

enum class Axis { x, y };

/// Discrete partial derivative of order 1 or 2. Second-order central stencils
/// in the interior, periodic wrap in x, second-order one-sided stencils at the
/// wall and truncation rows.
Field apply_derivative(const Field& f, Axis axis, int order);

/// Trapezoid cumulative integral along y; zero on the wall row.
Field cumulative_integral_y(const Field& f);

/// v(x,y) = -int_0^y du/dx dy', so that continuity u_x + v_y = 0 holds
/// discretely up to the stencil error. v vanishes on the wall row.
Field recover_v(const Field& u);

/// 3D extension used by the structured 3D solver: x and y periodic, z truncated.
struct Grid3D {
    int n_x = 0, n_y = 0, n_z = 0;
    double x_period = 0.0, y_period = 0.0, z_max = 0.0, z_stretch = 1.0;
    std::vector<double> x, y, z, hz;

    double dx() const { return x_period / n_x; }
    double dy() const { return y_period / n_y; }
    double hz_min() const;
};

using Grid3DPtr = std::shared_ptr<const Grid3D>;

Grid3DPtr build_grid3d(int n_x, double x_period, int n_y, double y_period, int n_z, double z_max,
                       double z_stretch = 1.0);

struct Field3D {
    Grid3DPtr grid;
    std::vector<double> values;  ///< values[(i*n_y + j)*n_z + k]

    Field3D() = default;
    explicit Field3D(Grid3DPtr g);

    double& at(int i, int j, int k) {
        return values[(static_cast<size_t>(i) * grid->n_y + j) * grid->n_z + k];
    }
    double at(int i, int j, int k) const {
        return values[(static_cast<size_t>(i) * grid->n_y + j) * grid->n_z + k];
    }
    std::span<double> pencil(int i, int j) {
        return {values.data() + (static_cast<size_t>(i) * grid->n_y + j) * grid->n_z,
                static_cast<size_t>(grid->n_z)};
    }
    void check_finite(const std::string& where) const;
    double max_abs() const;
};

}  // namespace bll
