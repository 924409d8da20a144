#include <doctest.h>

#include <cmath>
#include <vector>

#include "bll/errors.hpp"
#include "bll/fd.hpp"
#include "bll/grid.hpp"
#include "bll/shear.hpp"

using namespace bll;

namespace {

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

double interp(const std::vector<double>& xs, const std::vector<double>& fs, double x) {
    if (x <= xs.front()) return fs.front();
    if (x >= xs.back()) return fs.back();
    const double h = xs[1] - xs[0];
    const size_t j = std::min(static_cast<size_t>(x / h), xs.size() - 2);
    const double t = (x - xs[j]) / h;
    return (1.0 - t) * fs[j] + t * fs[j + 1];
}

// Test-side oracle: composite Simpson of the image-kernel integral with a
// fixed fine step, fully independent of the adaptive path in the library.
double kernel_oracle(const std::function<double(double)>& u0, double t, double y) {
    const double hi = y + 14.0 * std::sqrt(t);
    auto f = [&](double yb) {
        const double dm = (y - yb) / (2.0 * std::sqrt(t));
        const double dp = (y + yb) / (2.0 * std::sqrt(t));
        return (std::exp(-dm * dm) - std::exp(-dp * dp)) * u0(yb);
    };
    return fd::composite_simpson(f, 0.0, hi, 200000) / (2.0 * std::sqrt(M_PI * t));
}

}  // namespace

TEST_CASE("zero initial data stays zero") {
    auto y = linspace(0, 20, 101);
    std::vector<double> u0(y.size(), 0.0);
    auto out = heat_kernel_shear(y, u0, 0.7, y);
    for (double v : out) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("erf initial data evolves self-similarly") {
    auto y = linspace(0, 30, 4001);
    std::vector<double> u0(y.size());
    for (size_t j = 0; j < y.size(); ++j) u0[j] = std::erf(y[j] / 2.0);
    const std::vector<double> q = {0.5, 1.0, 2.5, 5.0};
    for (double t : {0.3, 1.0}) {
        auto out = heat_kernel_shear(y, u0, t, q);
        for (size_t i = 0; i < q.size(); ++i) {
            const double exact = std::erf(q[i] / (2.0 * std::sqrt(1.0 + t)));
            CHECK(out[i] == doctest::Approx(exact).epsilon(1e-5));
        }
    }
}

TEST_CASE("t -> 0 returns the samples") {
    auto y = linspace(0, 10, 51);
    std::vector<double> u0(y.size());
    for (size_t j = 0; j < y.size(); ++j) u0[j] = 1.0 - std::exp(-y[j]);
    auto out = heat_kernel_shear(y, u0, 0.0, y);
    for (size_t j = 0; j < y.size(); ++j) CHECK(out[j] == doctest::Approx(u0[j]));
}

TEST_CASE("value at (t=0.5, y=1) for 1 - e^-y matches the fine quadrature oracle") {
    auto y = linspace(0, 40, 4001);
    std::vector<double> u0(y.size());
    for (size_t j = 0; j < y.size(); ++j) u0[j] = 1.0 - std::exp(-y[j]);
    const double q[1] = {1.0};
    const double lib = heat_kernel_shear(y, u0, 0.5, q)[0];
    // same tabulated data, independent fixed-step integration path
    const double oracle =
        kernel_oracle([&](double yb) { return interp(y, u0, yb); }, 0.5, 1.0);
    CHECK(std::abs(lib - oracle) <= 1e-6);
}

TEST_CASE("heat kernel satisfies the discrete heat equation residual") {
    auto y = linspace(0, 24, 961);
    std::vector<double> u0(y.size());
    for (size_t j = 0; j < y.size(); ++j) u0[j] = std::erf(y[j] / 2.0);
    const double t = 0.5, dt = 1e-4;
    auto grid_y = linspace(0.5, 8.0, 301);
    auto um = heat_kernel_shear(y, u0, t - dt, grid_y, 1e-11);
    auto u = heat_kernel_shear(y, u0, t, grid_y, 1e-11);
    auto up = heat_kernel_shear(y, u0, t + dt, grid_y, 1e-11);
    const double h = grid_y[1] - grid_y[0];
    double worst = 0.0;
    for (size_t j = 1; j + 1 < grid_y.size(); ++j) {
        const double ut = (up[j] - um[j]) / (2.0 * dt);
        const double uyy = (u[j + 1] - 2.0 * u[j] + u[j - 1]) / (h * h);
        worst = std::max(worst, std::abs(ut - uyy));
    }
    CHECK(worst <= 1e-5);
}

TEST_CASE("quadrature failure is a distinct error") {
    // samples with a violent kink and an extreme tolerance cannot converge
    auto y = linspace(0, 10, 5);
    std::vector<double> u0 = {0.0, 1e8, -1e8, 1e8, 0.0};
    const double q[1] = {1.0};
    CHECK_THROWS_AS(heat_kernel_shear(y, u0, 1e-6, q, 1e-16), QuadratureError);
}

TEST_CASE("hartmann profile values and derivative") {
    const double q[3] = {0.0, std::log(2.0), 5.0};
    auto out = hartmann_profile(1.0, q);
    CHECK(out[0] == 0.0);
    CHECK(out[1] == doctest::Approx(0.5));
    // derivative at the wall equals u_bar to stencil order
    auto g = build_grid(4, 1.0, 41, 8.0, 1.0);
    auto prof = hartmann_profile(2.5, g->y);
    Field f(g, FieldRole::u);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < g->n_y; ++j) f.at(i, j) = prof[j];
    Field d = apply_derivative(f, Axis::y, 1);
    CHECK(d.at(0, 0) == doctest::Approx(2.5).epsilon(1e-2));
}

TEST_CASE("hartmann profile is a steady state of the damped operator") {
    // d2/dy2 (ubar(1-e^-y)) - ubar(1-e^-y) + ubar = 0 pointwise
    for (double y : {0.0, 0.3, 1.7, 6.0}) {
        const double ub = 1.3;
        const double u = ub * (1.0 - std::exp(-y));
        const double uyy = -ub * std::exp(-y);
        CHECK(uyy - u + ub == doctest::Approx(0.0).epsilon(1e-15));
    }
}

TEST_CASE("erf profile matches the heat kernel of its own t=0 trace") {
    ShearProfile p = ShearProfile::erf_self_similar(1.0);
    auto y = linspace(0, 30, 4001);
    std::vector<double> u0(y.size());
    for (size_t j = 0; j < y.size(); ++j) u0[j] = p.value(0.0, y[j]);
    for (double t : {0.25, 0.75}) {
        const double q[2] = {1.0, 3.0};
        auto out = heat_kernel_shear(y, u0, t, q);
        CHECK(out[0] == doctest::Approx(p.value(t, 1.0)).epsilon(2e-5));
        CHECK(out[1] == doctest::Approx(p.value(t, 3.0)).epsilon(2e-5));
    }
}

TEST_CASE("decay bound check trivial pass and fail") {
    auto y = linspace(0, 20, 201);
    std::vector<double> good(y.size()), bad(y.size());
    for (size_t j = 0; j < y.size(); ++j) {
        good[j] = std::exp(-y[j] / 4.0);
        bad[j] = std::exp(-y[j]);
    }
    CHECK(decay_bound_check(y, good, 2.0, 20.0).pass);
    auto rep = decay_bound_check(y, bad, 2.0, 20.0);
    CHECK_FALSE(rep.pass);
    CHECK(rep.worst_y > 1.0);  // violation at large y where e^-y < e^{-y/4}/C
    CHECK_THROWS_AS(decay_bound_check(y, good, 0.5, 20.0), PreconditionError);
}
