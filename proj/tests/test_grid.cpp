#include <doctest.h>

#include <cmath>
#include <random>

#include "bll/csv_io.hpp"
#include "bll/errors.hpp"
#include "bll/fd.hpp"
#include "bll/grid.hpp"

using namespace bll;

TEST_CASE("build_grid uniform spacing") {
    auto g = build_grid(8, 2.0 * M_PI, 8, 10.0, 1.0);
    CHECK(g->hy[0] == doctest::Approx(10.0 / 7.0));
    CHECK(g->y.front() == 0.0);
    CHECK(g->y.back() == doctest::Approx(10.0));
    CHECK(g->dx() == doctest::Approx(2.0 * M_PI / 8.0));
}

TEST_CASE("build_grid geometric stretching sums to y_max") {
    auto g = build_grid(8, 2.0 * M_PI, 8, 10.0, 1.2);
    for (int j = 0; j + 1 < static_cast<int>(g->hy.size()); ++j)
        CHECK(g->hy[j + 1] / g->hy[j] == doctest::Approx(1.2).epsilon(1e-9));
    double sum = 0.0;
    for (double h : g->hy) sum += h;
    CHECK(sum == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("build_grid rejects bad input") {
    CHECK_THROWS_AS(build_grid(3, 2.0 * M_PI, 8, 10.0, 1.0), PreconditionError);
    CHECK_THROWS_AS(build_grid(8, -1.0, 8, 10.0, 1.0), PreconditionError);
    CHECK_THROWS_AS(build_grid(8, 2.0, 8, 10.0, 0.5), PreconditionError);
    CHECK_THROWS_AS(build_grid(8, std::nan(""), 8, 10.0, 1.0), PreconditionError);
}

TEST_CASE("x derivative of sin matches cos to second order") {
    auto g = build_grid(64, 2.0 * M_PI, 8, 5.0, 1.0);
    Field f = make_field(g, FieldRole::generic, [](double x, double) { return std::sin(x); });
    Field d = apply_derivative(f, Axis::x, 1);
    double err = 0.0;
    for (int i = 0; i < g->n_x; ++i)
        err = std::max(err, std::abs(d.at(i, 0) - std::cos(g->x[i])));
    CHECK(err < std::pow(g->dx(), 2));
}

TEST_CASE("second y derivative exact on quadratics") {
    auto g = build_grid(4, 1.0, 16, 4.0, 1.0);
    Field f = make_field(g, FieldRole::generic, [](double, double y) { return y * y; });
    Field d = apply_derivative(f, Axis::y, 2);
    for (int j = 0; j < g->n_y; ++j) CHECK(d.at(0, j) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("y derivative Richardson refinement: error drops by ~4") {
    // DERIVED oracle: analytic derivative of exp(-y); refine n_y x2
    auto err_at = [](int ny) {
        auto g = build_grid(4, 1.0, ny, 6.0, 1.0);
        Field f = make_field(g, FieldRole::generic,
                             [](double, double y) { return std::exp(-y); });
        Field d = apply_derivative(f, Axis::y, 1);
        double e = 0.0;
        for (int j = 0; j < g->n_y; ++j)
            e = std::max(e, std::abs(d.at(0, j) + std::exp(-g->y[j])));
        return e;
    };
    const double e1 = err_at(49), e2 = err_at(97);
    CHECK(e1 / e2 > 3.2);
    CHECK(e1 / e2 < 4.8);
}

TEST_CASE("cumulative integral of 1 is y") {
    auto g = build_grid(4, 1.0, 12, 7.0, 1.1);
    Field f = make_field(g, FieldRole::generic, [](double, double) { return 1.0; });
    Field c = cumulative_integral_y(f);
    for (int j = 0; j < g->n_y; ++j) CHECK(c.at(2, j) == doctest::Approx(g->y[j]));
}

TEST_CASE("cumulative integral of exp(-y) has O(h^2) error") {
    auto g = build_grid(4, 1.0, 101, 10.0, 1.0);
    Field f = make_field(g, FieldRole::generic, [](double, double y) { return std::exp(-y); });
    Field c = cumulative_integral_y(f);
    const double h = g->hy[0];
    for (int j = 0; j < g->n_y; ++j) {
        const double exact = 1.0 - std::exp(-g->y[j]);
        CHECK(std::abs(c.at(0, j) - exact) < h * h);
    }
}

TEST_CASE("cumulative integral matches a fine-grid quadrature oracle on smooth data") {
    // DERIVED: fine composite Simpson of the interpolating smooth function
    auto g = build_grid(4, 1.0, 81, 8.0, 1.0);
    auto smooth = [](double y) { return std::sin(0.7 * y) * std::exp(-0.3 * y) + 0.2; };
    Field f = make_field(g, FieldRole::generic, [&](double, double y) { return smooth(y); });
    Field c = cumulative_integral_y(f);
    const double oracle = fd::composite_simpson(smooth, 0.0, g->y.back(), 4096);
    CHECK(c.at(0, g->n_y - 1) == doctest::Approx(oracle).epsilon(2e-4));
}

TEST_CASE("recover_v vanishes for x-independent data") {
    auto g = build_grid(16, 2.0 * M_PI, 24, 10.0, 1.0);
    Field u = make_field(g, FieldRole::u, [](double, double y) { return 1.0 - std::exp(-y); });
    Field v = recover_v(u);
    CHECK(v.max_abs() == doctest::Approx(0.0));
}

TEST_CASE("recover_v closed form for u = sin(x) y") {
    auto g = build_grid(128, 2.0 * M_PI, 65, 4.0, 1.0);
    Field u = make_field(g, FieldRole::u, [](double x, double y) { return std::sin(x) * y; });
    Field v = recover_v(u);
    double err = 0.0;
    for (int i = 0; i < g->n_x; ++i)
        for (int j = 0; j < g->n_y; ++j)
            err = std::max(err, std::abs(v.at(i, j) +
                                         std::cos(g->x[i]) * g->y[j] * g->y[j] / 2.0));
    CHECK(err < 5e-3);  // O(dx^2) of the central x-stencil times y^2/2
}

TEST_CASE("recover_v matches the symbolic oracle for a modulated Hartmann profile") {
    // u = (1 - e^-y)(1 + 0.1 cos x): v = -d/dx int_0^y u = 0.1 sin(x) (y - 1 + e^-y)
    auto g = build_grid(96, 2.0 * M_PI, 161, 12.0, 1.0);
    Field u = make_field(g, FieldRole::u, [](double x, double y) {
        return (1.0 - std::exp(-y)) * (1.0 + 0.1 * std::cos(x));
    });
    Field v = recover_v(u);
    double err = 0.0;
    for (int i = 0; i < g->n_x; ++i)
        for (int j = 0; j < g->n_y; ++j) {
            const double exact =
                0.1 * std::sin(g->x[i]) * (g->y[j] - 1.0 + std::exp(-g->y[j]));
            err = std::max(err, std::abs(v.at(i, j) - exact));
        }
    CHECK(err < 2e-3);
    // wall row exactly zero
    for (int i = 0; i < g->n_x; ++i) CHECK(v.at(i, 0) == 0.0);
}

TEST_CASE("x derivative of an x-constant field is identically zero") {
    auto g = build_grid(32, 5.0, 16, 8.0, 1.2);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> unif(-1, 1);
    Field f(g, FieldRole::generic);
    for (int j = 0; j < g->n_y; ++j) {
        const double v = unif(rng);
        for (int i = 0; i < g->n_x; ++i) f.at(i, j) = v;
    }
    Field d = apply_derivative(f, Axis::x, 1);
    CHECK(d.max_abs() == 0.0);
}

TEST_CASE("cumint of dy f reproduces f - f(.,0) on smooth fields") {
    auto g = build_grid(8, 2.0, 201, 10.0, 1.0);
    Field f = make_field(g, FieldRole::generic,
                         [](double, double y) { return std::cos(y) * std::exp(-0.2 * y); });
    Field d = apply_derivative(f, Axis::y, 1);
    Field c = cumulative_integral_y(d);
    const double h = g->hy[0];
    for (int j = 0; j < g->n_y; ++j)
        CHECK(std::abs(c.at(0, j) - (f.at(0, j) - f.at(0, 0))) < 4.0 * h * h);
}

TEST_CASE("field snapshot round trip") {
    auto g = build_grid(8, 2.0 * M_PI, 12, 6.0, 1.1);
    Field f = make_field(g, FieldRole::u,
                         [](double x, double y) { return std::sin(x) * std::exp(-y) + 0.125; });
    const auto path = std::filesystem::temp_directory_path() / "bll_snapshot_test.csv";
    write_snapshot(f, 0.75, path);
    Snapshot s = read_snapshot(path);
    CHECK(s.t == 0.75);
    CHECK(s.field.role == FieldRole::u);
    CHECK(s.field.grid->n_x == 8);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 12; ++j) CHECK(s.field.at(i, j) == f.at(i, j));
    std::filesystem::remove(path);
}

TEST_CASE("non-finite detection names the node") {
    auto g = build_grid(4, 1.0, 4, 1.0, 1.0);
    Field f(g, FieldRole::generic);
    f.at(2, 1) = std::nan("");
    try {
        f.check_finite("test");
        CHECK(false);
    } catch (const NonFiniteError& e) {
        CHECK(e.i == 2);
        CHECK(e.j == 1);
    }
}
