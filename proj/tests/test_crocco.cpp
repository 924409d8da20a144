#include <doctest.h>

#include <cmath>
#include <vector>

#include "bll/crocco.hpp"
#include "bll/csv_io.hpp"
#include "bll/errors.hpp"
#include "bll/grid.hpp"

using namespace bll;

namespace {

// inverse error function by Newton iteration on erf (test-side oracle helper)
double erfinv(double x) {
    double z = 0.0;
    for (int it = 0; it < 60; ++it) {
        const double f = std::erf(z) - x;
        const double df = 2.0 / std::sqrt(M_PI) * std::exp(-z * z);
        z -= f / df;
    }
    return z;
}

// frozen convergence scenario: steady linear profile (exact for the wall
// closure with suction v0 = -nu * slope) plus a compatible bump
double scenario_w0(double xi, double eta) {
    const double s = 0.5 * (1.0 - std::cos(2.0 * M_PI * xi));
    const double b = 1.0 - eta * eta;
    return 0.6 * (1.0 - eta) + 0.2 * s * b * b;
}

CroccoState scenario(int n_xi, int n_eta, double nu = 0.5, double v0 = -0.3) {
    CroccoState c = make_crocco_state(n_xi, n_eta, 1.0, nu, scenario_w0);
    c.v0 = [v0](double, double) { return v0; };
    return c;
}

}  // namespace

TEST_CASE("to_crocco maps the Hartmann profile to w = 1 - eta") {
    auto g = build_grid(8, 2.0 * M_PI, 201, 18.0, 1.0);
    const double U = 1.4;
    Field u = make_field(g, FieldRole::u,
                         [&](double, double y) { return U * (1.0 - std::exp(-y)); });
    std::vector<double> Uvec(g->n_x, U);
    CroccoState c = to_crocco(u, Uvec, 64);
    double err = 0.0;
    for (int k = 0; k <= c.n_eta; ++k) {
        const double eta = k * c.d_eta();
        err = std::max(err, std::abs(c.at(0, k) - (1.0 - eta)));
    }
    const double h = g->hy[0];
    CHECK(err < 2.0 * h * h + 1e-6);
}

TEST_CASE("to_crocco matches the symbolic oracle for the erf profile") {
    auto g = build_grid(4, 2.0 * M_PI, 401, 8.0, 1.0);
    const double U = 1.0;
    Field u = make_field(g, FieldRole::u,
                         [&](double, double y) { return U * std::erf(y / 2.0); });
    std::vector<double> Uvec(g->n_x, U);
    CroccoState c = to_crocco(u, Uvec, 128);
    // w(eta) = (1/sqrt(pi)) e^{-y(eta)^2/4}, y(eta) = 2 erfinv(eta)
    double err = 0.0;
    for (int k = 1; k < c.n_eta - 1; ++k) {
        const double eta = k * c.d_eta();
        const double yk = 2.0 * erfinv(eta);
        const double exact = std::exp(-yk * yk / 4.0) / std::sqrt(M_PI);
        err = std::max(err, std::abs(c.at(0, k) - exact));
    }
    CHECK(err < 5e-4);
}

TEST_CASE("to_crocco rejects non-monotone data") {
    auto g = build_grid(4, 2.0 * M_PI, 64, 10.0, 1.0);
    Field u = make_field(g, FieldRole::u,
                         [](double, double y) { return std::exp(-y) * y; });
    std::vector<double> Uvec(g->n_x, 1.0);
    CHECK_THROWS_AS(to_crocco(u, Uvec, 32), MonotonicityError);
}

TEST_CASE("from_crocco closed form: w = 1 - eta gives the Hartmann profile") {
    CroccoState c = make_crocco_state(4, 256, 1.0, 1.0,
                                      [](double, double eta) { return 1.0 - eta; });
    auto g = build_grid(4, 2.0 * M_PI, 101, 8.0, 1.0);
    std::vector<double> Uvec(g->n_x, 1.0);
    Field u = from_crocco(c, Uvec, g);
    double err = 0.0;
    for (int j = 0; j < g->n_y; ++j)
        err = std::max(err, std::abs(u.at(0, j) - (1.0 - std::exp(-g->y[j]))));
    CHECK(err < 1e-5);
}

TEST_CASE("crocco round trip on the erf profile at n_eta = 512") {
    auto g = build_grid(4, 2.0 * M_PI, 401, 8.0, 1.0);
    const double U = 1.0;
    Field u = make_field(g, FieldRole::u,
                         [&](double, double y) { return U * std::erf(y / 2.0); });
    std::vector<double> Uvec(g->n_x, U);
    CroccoState c = to_crocco(u, Uvec, 512);
    Field back = from_crocco(c, Uvec, g);
    double err = 0.0;
    for (int j = 0; j < g->n_y; ++j)
        err = std::max(err, std::abs(back.at(0, j) - u.at(0, j)));
    CHECK(err <= 1e-4);
}

TEST_CASE("from_crocco rejects interior zeros") {
    CroccoState c = make_crocco_state(4, 64, 1.0, 1.0, [](double, double eta) {
        return std::max(0.0, 0.5 - eta);
    });
    auto g = build_grid(4, 2.0 * M_PI, 33, 6.0, 1.0);
    std::vector<double> Uvec(g->n_x, 1.0);
    CHECK_THROWS_AS(from_crocco(c, Uvec, g), PreconditionError);
}

TEST_CASE("von Mises transform basics") {
    SUBCASE("constant u gives w = U^2 and zero residual") {
        auto g = build_grid(8, 1.0, 33, 4.0, 1.0);
        const double U = 1.3;
        Field u = make_field(g, FieldRole::u, [&](double, double) { return U; });
        VonMisesState s = to_von_mises(u, [](double) { return 0.0; }, 32);
        for (int i = 0; i < s.n_x; ++i)
            for (int k = 0; k <= s.n_psi; ++k)
                CHECK(s.at(i, k) == doctest::Approx(U * U).epsilon(1e-12));
        auto res = von_mises_residual(s);
        for (double r : res) CHECK(std::abs(r) < 1e-10);
    }
    SUBCASE("hartmann profile matches the symbolic psi-inversion oracle") {
        auto g = build_grid(8, 1.0, 801, 16.0, 1.0);
        Field u = make_field(g, FieldRole::u,
                             [](double, double y) { return 1.0 - std::exp(-y); });
        VonMisesState s = to_von_mises(u, [](double) { return 0.0; }, 64);
        // psi(y) = y - 1 + e^-y; invert by Newton per psi node
        double err = 0.0;
        for (int k = 0; k <= s.n_psi; ++k) {
            const double p = s.psi_max * k / s.n_psi;
            double y = std::max(0.1, p);
            for (int it = 0; it < 80; ++it) {
                const double f = y - 1.0 + std::exp(-y) - p;
                y -= f / (1.0 - std::exp(-y) + 1e-15);
            }
            const double uu = 1.0 - std::exp(-y);
            err = std::max(err, std::abs(s.at(3, k) - uu * uu));
        }
        CHECK(err < 2e-4);
    }
    SUBCASE("sign change rejected") {
        auto g = build_grid(8, 1.0, 33, 4.0, 1.0);
        Field u = make_field(g, FieldRole::u,
                             [](double, double y) { return std::sin(2.0 * y); });
        CHECK_THROWS_AS(to_von_mises(u, [](double) { return 0.0; }, 16),
                        MonotonicityError);
    }
}

TEST_CASE("stability gate arithmetic") {
    auto r = stability_check(0.01, 0.4, 1.0, 2.0);
    CHECK(r.pass);
    CHECK(r.ratio == doctest::Approx(0.0625));
    CHECK(r.bound == doctest::Approx(0.125));
    auto r2 = stability_check(0.05, 0.4, 1.0, 2.0);
    CHECK_FALSE(r2.pass);
    CHECK(r2.ratio == doctest::Approx(0.3125));
    auto r3 = stability_check(10.0, 0.01, 0.0, 2.0);
    CHECK(r3.pass);
}

TEST_CASE("unsteady gate follows the printed inequality") {
    const double h = 1e-3, d = 0.1, delta = 0.05, nu = 0.5, a = 1.2, b = 0.8;
    auto r = stability_check_unsteady(h, d, delta, nu, a, b);
    const double bound = 1.0 / (2.0 * nu * a * a + b * delta * delta / d);
    CHECK(r.bound == doctest::Approx(bound));
    CHECK(r.pass == (h / (delta * delta) <= bound));
}

TEST_CASE("explicit scheme: fixed point and gate rejection") {
    CroccoState c = make_crocco_state(8, 16, 0.5, 0.5,
                                      [](double, double eta) { return 0.6 * (1.0 - eta); });
    c.nu = 0.5;
    c.v0 = [](double, double) { return -0.3; };  // matches nu * slope
    const CroccoState before = c;
    CroccoState after = fd_explicit_step(c, 1e-3, 0.1, 1.0);
    for (int l = 0; l <= c.n_xi; ++l)
        for (int k = 0; k <= c.n_eta; ++k)
            CHECK(after.at(l, k) == doctest::Approx(before.at(l, k)).epsilon(1e-13));
    CHECK_THROWS_AS(fd_explicit_step(c, 1.0, 0.1, 1.0), StabilityGateError);
}

TEST_CASE("implicit scheme: fixed point and dominance failure") {
    CroccoState c = make_crocco_state(8, 16, 1.0, 0.5,
                                      [](double, double eta) { return 0.6 * (1.0 - eta); });
    c.nu = 0.5;
    c.v0 = [](double, double) { return -0.3; };
    CroccoState after = fd_implicit_step(c, 1e-3, 0.1);
    for (int l = 0; l <= c.n_xi; ++l)
        for (int k = 0; k <= c.n_eta; ++k)
            CHECK(after.at(l, k) == doctest::Approx(c.at(l, k)).epsilon(1e-11));
    c.p_x = [](double, double) { return -1e6; };
    CHECK_THROWS_AS(fd_implicit_step(c, 1e-3, 2e6), DominanceError);
}

TEST_CASE("unsteady scheme: fixed point, wall root, and gate") {
    CroccoState c = make_crocco_state(8, 16, 1.0, 0.5,
                                      [](double, double eta) { return 0.6 * (1.0 - eta); });
    c.nu = 0.5;
    c.v0 = [](double, double) { return -0.3; };
    SUBCASE("fixed point with zero coefficients") {
        CroccoState after = fd_unsteady_step(c, 1e-3, 1.0, 1.0);
        for (int l = 0; l <= c.n_xi; ++l)
            for (int k = 0; k <= c.n_eta; ++k)
                CHECK(after.at(l, k) == doctest::Approx(c.at(l, k)).epsilon(1e-13));
    }
    SUBCASE("wall closure with C = 0 and v0 = 0 reduces to the w1 branch") {
        c.v0 = [](double, double) { return 0.0; };
        CroccoState after = fd_unsteady_step(c, 1e-3, 1.0, 1.0);
        for (int l = 1; l <= c.n_xi; ++l)
            CHECK(after.at(l, 0) == doctest::Approx(after.at(l, 1)));
    }
    SUBCASE("gate violation rejected") {
        CHECK_THROWS_AS(fd_unsteady_step(c, 1.0, 1.0, 1.0), StabilityGateError);
    }
    SUBCASE("wall discriminant is real for C >= 0") {
        for (double w1 : {-0.5, 0.1, 0.7})
            for (double v0 : {-0.4, 0.0, 0.3})
                for (double C : {0.0, 0.2, 1.5}) {
                    const double q = c.d_eta() / c.nu;
                    const double disc = (w1 - q * v0) * (w1 - q * v0) + 4.0 * q * C;
                    CHECK(disc >= 0.0);
                }
    }
}

TEST_CASE("explicit scheme respects the interior maximum property") {
    CroccoState c = scenario(16, 20);
    const double h = 0.3 / (2.0 * c.nu * 1.0) * c.d_eta() * c.d_eta();
    for (int n = 0; n < 20; ++n) {
        double level_max = 0.0;
        for (double v : c.w) level_max = std::max(level_max, v);
        CroccoState next = fd_explicit_step(c, h, 0.1, 1.0);
        double interior_max = 0.0;
        for (int l = 1; l <= c.n_xi; ++l)
            for (int k = 1; k < c.n_eta; ++k)
                interior_max = std::max(interior_max, next.at(l, k));
        CHECK(interior_max <= level_max + 1e-12);
        c = next;
    }
}

TEST_CASE("xi-uniform linear datum is stationary under the unsteady scheme") {
    CroccoState c = make_crocco_state(12, 16, 1.0, 0.5,
                                      [](double, double eta) { return 0.6 * (1.0 - eta); });
    c.nu = 0.5;
    c.v0 = [](double, double) { return -0.3; };
    c.U = [](double, double, double) { return 1.0; };
    const double h =
        0.2 / (2.0 * c.nu + 1.0 * c.d_eta() * c.d_eta() / c.d_xi()) * c.d_eta() * c.d_eta();
    CroccoState evolved = c;
    const int nt = 10;
    for (int n = 0; n < nt; ++n) evolved = fd_unsteady_step(evolved, h, 1.0, 1.0);
    double drift = 0.0;
    for (size_t q = 0; q < c.w.size(); ++q)
        drift = std::max(drift, std::abs(evolved.w[q] - c.w[q]));
    CHECK(drift < 1e-12);
}

TEST_CASE("convergence study: explicit and implicit orders sit in [0.8, 1.3]") {
    CroccoState base = scenario(6, 8);
    const double T = 0.125;
    auto expl = convergence_study(CroccoScheme::explicit_march, base, scenario_w0, T, T / 32.0,
                                  3, 0.1, 1.0);
    CHECK(expl.lsq_order >= 0.8);
    CHECK(expl.lsq_order <= 1.3);
    auto impl = convergence_study(CroccoScheme::implicit_march, base, scenario_w0, T, T / 8.0,
                                  3, 0.1, 1.0);
    CHECK(impl.lsq_order >= 0.8);
    CHECK(impl.lsq_order <= 1.3);
}

TEST_CASE("convergence study on a fixed-point datum reports vanishing errors") {
    CroccoState base = make_crocco_state(6, 8, 1.0, 0.5,
                                         [](double, double eta) { return 0.6 * (1.0 - eta); });
    base.nu = 0.5;
    base.v0 = [](double, double) { return -0.3; };
    auto t = convergence_study(
        CroccoScheme::implicit_march, base, [](double, double eta) { return 0.6 * (1.0 - eta); },
        0.125, 0.125 / 8.0, 3, 0.1, 1.0);
    for (const auto& row : t.rows) CHECK(row.error < 1e-10);
}

TEST_CASE("crocco snapshot round trip") {
    CroccoState c = scenario(6, 8);
    c.tau = 0.5;
    const auto path = std::filesystem::temp_directory_path() / "bll_crocco_test.csv";
    write_crocco_snapshot(c, path);
    CroccoState r = read_crocco_snapshot(path);
    CHECK(r.n_xi == c.n_xi);
    CHECK(r.n_eta == c.n_eta);
    CHECK(r.tau == c.tau);
    for (size_t q = 0; q < c.w.size(); ++q) CHECK(r.w[q] == c.w[q]);
    std::filesystem::remove(path);
}
