#include <doctest.h>

#include <cmath>
#include <vector>

#include "bll/errors.hpp"
#include "bll/shear.hpp"
#include "bll/solver2d.hpp"
#include "bll/csv_io.hpp"
#include "bll/solver3d.hpp"

using namespace bll;

TEST_CASE("k catalog: constant, user, characteristic") {
    auto g = build_grid3d(24, 2.0 * M_PI, 24, 2.0 * M_PI, 17, 10.0);
    SUBCASE("constant K has zero residual") {
        KField K = k_build_constant(g, 0.7);
        CHECK(K.burgers_residual == doctest::Approx(0.0));
    }
    SUBCASE("K = x has residual 1") {
        KField K = k_build_user(g, [](double x, double) { return x; });
        CHECK(k_constraint_residual(K) == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("characteristic build: residual is O(h^2), crossing rejected") {
        auto prof = [](double y) { return 0.02 * std::sin(y); };
        auto dprof = [](double y) { return 0.02 * std::cos(y); };
        KField K1 = k_build_characteristic(g, prof, dprof);
        auto g2 = build_grid3d(48, 2.0 * M_PI, 48, 2.0 * M_PI, 17, 10.0);
        KField K2 = k_build_characteristic(g2, prof, dprof);
        CHECK(K1.burgers_residual < 5e-4);
        CHECK(K2.burgers_residual < K1.burgers_residual);
        // refinement roughly quarters the residual (second-order differences)
        CHECK(K1.burgers_residual / K2.burgers_residual > 2.5);
        // steep profile crosses characteristics within the strip
        CHECK_THROWS_AS(
            k_build_characteristic(g, [](double y) { return std::sin(y); },
                                   [](double y) { return std::cos(y); }),
            PreconditionError);
    }
}

TEST_CASE("reduced 3D step: xy-independent data follows the 1D heat flow") {
    auto g = build_grid3d(4, 2.0 * M_PI, 4, 2.0 * M_PI, 161, 20.0);
    FlowState3D s;
    s.K = k_build_constant(g, 0.7);
    s.u = Field3D(g);
    for (int i = 0; i < g->n_x; ++i)
        for (int j = 0; j < g->n_y; ++j)
            for (int k = 0; k < g->n_z; ++k) s.u.at(i, j, k) = std::erf(g->z[k] / 2.0);
    std::vector<double> z0col(g->n_z);
    for (int k = 0; k < g->n_z; ++k) z0col[k] = s.u.at(0, 0, k);
    const double T = 0.5, dt = 2e-3;
    for (int n = 0; n < static_cast<int>(T / dt); ++n) s = step3d_reduced(s, dt);
    auto oracle = heat_kernel_shear(g->z, z0col, T, g->z);
    double err = 0.0;
    for (int k = 0; k < g->n_z; ++k) err = std::max(err, std::abs(s.u.at(1, 2, k) - oracle[k]));
    CHECK(err < 4.0 * (0.125 * 0.125 / 12.0 + dt));
    // w vanishes on the wall plane
    Field3D w = recover_w_reduced(s.u, s.K);
    for (int i = 0; i < g->n_x; ++i)
        for (int j = 0; j < g->n_y; ++j) CHECK(w.at(i, j, 0) == 0.0);
}

TEST_CASE("reduced 3D with K=0 and y-independent data agrees with the 2D solver") {
    const int nx = 24, nz = 41;
    auto g3 = build_grid3d(nx, 2.0 * M_PI, 4, 2.0 * M_PI, nz, 12.0);
    auto g2 = build_grid(nx, 2.0 * M_PI, nz, 12.0, 1.0);
    auto init = [](double x, double z) {
        return (1.0 - std::exp(-z)) * (1.0 + 0.2 * std::sin(x) * std::exp(-0.5 * z));
    };
    FlowState3D s3;
    s3.K = k_build_constant(g3, 0.0);
    s3.u = Field3D(g3);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < nz; ++k) s3.u.at(i, j, k) = init(g3->x[i], g3->z[k]);
    FlowState s2;
    s2.variant = Variant::classical;
    s2.outer = OuterFlow::constant(1.0);
    s2.u = make_field(g2, FieldRole::u, init);

    const double dt = 1e-3;
    for (int n = 0; n < 200; ++n) {
        s3 = step3d_reduced(s3, dt);
        s2 = step(s2, dt);
    }
    double gap = 0.0;
    for (int i = 0; i < nx; ++i)
        for (int k = 0; k < nz; ++k)
            gap = std::max(gap, std::abs(s3.u.at(i, 1, k) - s2.u.at(i, k)));
    CHECK(gap < 1e-10);
}

TEST_CASE("discrete steady state of the reduced system is stationary to 1e-12") {
    // with U constant and xy-independent data the implicit z-solve fixes the
    // linear-in-z discrete profile exactly
    auto g = build_grid3d(4, 2.0 * M_PI, 4, 2.0 * M_PI, 33, 10.0);
    FlowState3D s;
    s.K = k_build_constant(g, 0.4);
    s.u = Field3D(g);
    for (int i = 0; i < g->n_x; ++i)
        for (int j = 0; j < g->n_y; ++j)
            for (int k = 0; k < g->n_z; ++k) s.u.at(i, j, k) = g->z[k] / g->z_max;
    const Field3D u0 = s.u;
    for (int n = 0; n < 100; ++n) s = step3d_reduced(s, 5e-3);
    double drift = 0.0;
    for (size_t q = 0; q < u0.values.size(); ++q)
        drift = std::max(drift, std::abs(s.u.values[q] - u0.values[q]));
    CHECK(drift < 1e-12);
}

TEST_CASE("diagonal data with K=1 reproduces the aligned 2D run") {
    // translation-invariant data along (1,-1): the discrete operators act on
    // the diagonal exactly like the 2D scheme on the half-period grid
    const int N = 24, nz = 33;
    auto g3 = build_grid3d(N, 2.0 * M_PI, N, 2.0 * M_PI, nz, 10.0);
    auto g2 = build_grid(N, M_PI, nz, 10.0, 1.0);
    auto profile = [](double s, double z) {
        return (1.0 - std::exp(-z)) * (1.0 + 0.15 * std::sin(s));
    };
    FlowState3D s3;
    s3.K = k_build_constant(g3, 1.0);
    s3.u = Field3D(g3);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int k = 0; k < nz; ++k)
                s3.u.at(i, j, k) = profile(g3->x[i] + g3->y[j], g3->z[k]);
    s3.U = [&](double, double x, double y) { return 1.0 + 0.15 * std::sin(x + y); };
    FlowState s2;
    s2.variant = Variant::classical;
    s2.outer = OuterFlow::custom(
        [](double, double xp) { return 1.0 + 0.15 * std::sin(2.0 * xp); },
        [](double, double) { return 0.0; },
        [](double, double xp) { return 0.3 * std::cos(2.0 * xp); },
        [](double, double) { return 0.0; });
    s2.u = make_field(g2, FieldRole::u,
                      [&](double xp, double z) { return profile(2.0 * xp, z); });
    const double dt = 5e-4;
    for (int n = 0; n < 200; ++n) {
        s3 = step3d_reduced(s3, dt);
        s2 = step(s2, dt);
    }
    double gap = 0.0;
    for (int i = 0; i < N; ++i)
        for (int k = 0; k < nz; ++k) {
            // s = x + y at (i, j=0) equals 2 x' with x' = x_i / 2 -> index i on g2
            gap = std::max(gap, std::abs(s3.u.at(i, 0, k) - s2.u.at(i, k)));
        }
    CHECK(gap < 1e-11);
}

TEST_CASE("full 3D: structure preservation and violation") {
    const int N = 16, nz = 33;
    auto g = build_grid3d(N, 2.0 * M_PI, N, 2.0 * M_PI, nz, 10.0);
    auto base = [&](double x, double y, double z) {
        return (1.0 - std::exp(-z)) * (1.0 + 0.1 * std::sin(x) * std::cos(y));
    };
    auto make_state = [&](const KField& K, bool structured_v) {
        FullState3D s;
        s.K = K;
        s.u = Field3D(g);
        s.v = Field3D(g);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                for (int k = 0; k < nz; ++k) {
                    s.u.at(i, j, k) = base(g->x[i], g->y[j], g->z[k]);
                    s.v.at(i, j, k) = structured_v
                                          ? K.at(i, j) * s.u.at(i, j, k)
                                          : 0.3 * base(g->x[i], g->y[j], g->z[k]) + 0.1;
                }
        s.U = [&](double, double x, double y) { return 1.0 + 0.1 * std::sin(x) * std::cos(y); };
        return s;
    };
    SUBCASE("admissible constant K keeps v = K u to machine level") {
        KField K = k_build_constant(g, 0.7);
        FullState3D s = make_state(K, true);
        auto defects = structure_monitor(s, 1e-3, 200, 50);
        for (double d : defects) CHECK(d < 1e-12);
    }
    SUBCASE("v0 != K u0 leaves an O(1) gap") {
        KField K = k_build_constant(g, 0.7);
        FullState3D s = make_state(K, false);
        auto defects = structure_monitor(s, 1e-3, 100, 100);
        CHECK(defects.back() > 0.05);
    }
    SUBCASE("Burgers-violating K grows a defect and is flagged") {
        KField K = k_build_user(
            g, [](double x, double y) { return 0.5 + 0.3 * std::sin(x) * std::cos(y); });
        CHECK(K.burgers_residual > 0.1);  // inadmissible, recorded at build
        FullState3D s = make_state(K, true);
        auto defects = structure_monitor(s, 1e-3, 300, 100);
        CHECK(defects.front() < 1e-14);
        CHECK(defects.back() > 1e-4);  // grows well past discretization noise
    }
}

TEST_CASE("structure defect equals the direct sup") {
    auto g = build_grid3d(8, 1.0, 8, 1.0, 9, 4.0);
    KField K = k_build_constant(g, 0.5);
    Field3D u(g), v(g);
    for (size_t q = 0; q < u.values.size(); ++q) {
        u.values[q] = 0.1 * static_cast<double>(q % 7);
        v.values[q] = 0.05 * static_cast<double>(q % 5);
    }
    double direct = 0.0;
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            for (int k = 0; k < 9; ++k)
                direct = std::max(direct, std::abs(v.at(i, j, k) - 0.5 * u.at(i, j, k)));
    CHECK(structure_defect(u, v, K) == direct);
    // v = K u exactly gives zero
    for (size_t q = 0; q < u.values.size(); ++q) v.values[q] = 0.5 * u.values[q];
    CHECK(structure_defect(u, v, K) == 0.0);
}

TEST_CASE("3d snapshot directory with manifest") {
    auto g = build_grid3d(4, 1.0, 4, 1.0, 5, 2.0);
    Field3D u(g);
    for (size_t q = 0; q < u.values.size(); ++q) u.values[q] = 0.25 * static_cast<double>(q);
    const auto dir = std::filesystem::temp_directory_path() / "bll_snap3d";
    std::filesystem::remove_all(dir);
    write_snapshot3d(u, 0.5, dir);
    CHECK(std::filesystem::exists(dir / "manifest.json"));
    for (int k = 0; k < 5; ++k)
        CHECK(std::filesystem::exists(dir / ("slice_" + std::to_string(k) + ".csv")));
    std::filesystem::remove_all(dir);
}
