#include "doctest.h"

#include <cmath>
#include <random>

#include "nlcl/roe.hpp"
#include "support.hpp"

using namespace nlcl;

TEST_CASE("static flux")
{
    CHECK(flux_static(0.1, 2.0, 5.0) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(flux_static(-0.1, 2.0, 5.0) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(flux_static(0.0, 2.0, 5.0) == 0.0);
    CHECK(flux_static(0.0, -3.0, 7.0) == 0.0);
}

TEST_CASE("non-local flux")
{
    CHECK(flux_nonlocal(1.0, 9.0, 0.0) == 0.0);
    CHECK(flux_nonlocal(1.0, 9.0, 0.05) == doctest::Approx(0.05).epsilon(1e-15));
    CHECK(flux_nonlocal(1.0, 9.0, -0.05) == doctest::Approx(-0.45).epsilon(1e-15));
}

TEST_CASE("cfl time step")
{
    const double lh = 50.0 / 3.141592653589793;
    CflPolicy bv{CflMode::bv, 1.0};
    CHECK(cfl_dt(0.1, 0.0, 0.05, lh, 0.01, 0.01, bv) == doctest::Approx(0.01 / (3.0 * (0.05 * lh + 0.1))).epsilon(1e-14));
    CHECK(cfl_dt(0.1, 0.0, 0.05, lh, 0.01, 0.01, bv) == doctest::Approx(3.721e-3).epsilon(1e-3));
    CflPolicy pos{CflMode::positivity, 1.0};
    CHECK(cfl_dt(0.1, 0.0, 0.05, lh, 0.01, 0.01, pos) == doctest::Approx(3.333e-2).epsilon(1e-3));
    CHECK(cfl_dt(0.1, 0.0, 0.0, lh, 0.01, 0.01, pos) == doctest::Approx(0.05).epsilon(1e-15));
    CHECK(cfl_dt(0.1, 0.0, 0.0, lh, 0.01, 0.01, CflPolicy{CflMode::positivity, 0.5}) == doctest::Approx(0.025));
    CHECK_THROWS_AS(cfl_dt(0.0, 0.0, 0.0, lh, 0.01, 0.01, pos), ConfigError);
    CHECK_THROWS_AS(cfl_dt(0.1, 0.0, 0.0, lh, 0.01, 0.01, CflPolicy{CflMode::positivity, 1.5}), ConfigError);
}

TEST_CASE("x-sweep examples")
{
    const Grid g(8, 5, 0.1, 0.1);
    const BoundaryPolicy walls = test::all_walls();
    InterfaceField v(g, Axis::x, 0.2), J(g, Axis::x, 0.0);
    for (int j = 0; j < g.ny; ++j) {
        v(0, j) = 0.0;
        v(g.nx, j) = 0.0;
    }

    const Field2D u(g, 1.5);
    const Field2D same = sweep_x(u, v, J, 0.1, walls);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i + 1 < g.nx; ++i)
            REQUIRE(same(i, j) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(same(0, 2) == doctest::Approx(1.5 - 0.2 * 1.5).epsilon(1e-15));
    CHECK(same(g.nx - 1, 2) == doctest::Approx(1.5 + 0.2 * 1.5).epsilon(1e-15));

    Field2D one(g);
    one(3, 2) = 4.0;
    const double dt = 0.2, lam = dt / g.dx;
    const Field2D moved = sweep_x(one, v, J, dt, walls);
    CHECK(moved(3, 2) == doctest::Approx(4.0 - lam * 0.2 * 4.0).epsilon(1e-15));
    CHECK(moved(4, 2) == doctest::Approx(lam * 0.2 * 4.0).epsilon(1e-15));
    CHECK(moved(2, 2) == 0.0);
    CHECK(total_mass(moved) == doctest::Approx(total_mass(one)).epsilon(1e-15));
}

TEST_CASE("y-sweep mirrors the x-sweep")
{
    const Grid g(5, 8, 0.1, 0.1);
    const BoundaryPolicy walls = test::all_walls();
    InterfaceField v(g, Axis::y, 0.2), J(g, Axis::y, 0.0);

    const Field2D u(g, 1.5);
    const Field2D same = sweep_y(u, v, J, 0.1, walls);
    for (int j = 1; j + 1 < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            REQUIRE(same(i, j) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(same(2, 0) == doctest::Approx(1.2).epsilon(1e-15));

    Field2D one(g);
    one(2, 3) = 4.0;
    const double dt = 0.2, lam = dt / g.dy;
    const Field2D moved = sweep_y(one, v, J, dt, walls);
    CHECK(moved(2, 3) == doctest::Approx(4.0 - lam * 0.2 * 4.0).epsilon(1e-15));
    CHECK(moved(2, 4) == doctest::Approx(lam * 0.2 * 4.0).epsilon(1e-15));
    CHECK(moved(2, 2) == 0.0);
}

TEST_CASE("symmetric repulsion spreads symmetrically")
{
    Scenario s = test::small_scenario(41, 0.005, 1, 0.1);
    s.belt_speed = 0.0;
    s.boundary = test::all_walls();
    s.t_end = 0.5;
    RoeStepper st(s, ConvolutionMode::direct, CflPolicy{});
    const Grid& g = s.grid;
    SchemeState state{0.0, 0, {test::bump(g, g.x_center(20), g.y_center(20), 0.01, 3.0)}, 0.0};
    const double m0 = total_mass(state.rho[0]);
    for (int n = 0; n < 5; ++n)
        st.step(state, st.cfl_step());
    const Field2D& f = state.rho[0];
    CHECK(f(20, 20) < 3.0);
    for (int d = 1; d < 6; ++d) {
        CHECK(f(20 + d, 20) == doctest::Approx(f(20 - d, 20)).epsilon(1e-9));
        CHECK(f(20, 20 + d) == doctest::Approx(f(20, 20 - d)).epsilon(1e-9));
    }
    CHECK(total_mass(f) == doctest::Approx(m0).epsilon(1e-13));
}

TEST_CASE("zero data stays zero")
{
    Scenario s = test::small_scenario(24, 0.005);
    RoeStepper st(s, ConvolutionMode::fft, CflPolicy{});
    SchemeState state{0.0, 0, {Field2D(s.grid), Field2D(s.grid)}, 0.0};
    for (int n = 0; n < 10; ++n)
        st.step(state);
    CHECK(state.rho[0].max() == 0.0);
    CHECK(state.rho[1].max() == 0.0);
}

TEST_CASE("closed domain conserves mass")
{
    Scenario s = test::small_scenario(32, 0.005, 2, 0.1);
    s.boundary = test::all_walls();
    s.belt_direction_deg = 30.0;
    RoeStepper st(s, ConvolutionMode::fft, CflPolicy{});
    std::mt19937_64 rng(8);
    SchemeState state{0.0, 0, {test::random_field(s.grid, rng, 0.0, 1.5), test::random_field(s.grid, rng, 0.0, 1.5)}, 0.0};
    const double m0 = total_mass(state.rho[0]), m1 = total_mass(state.rho[1]);
    for (int n = 0; n < 40; ++n)
        st.step(state, st.cfl_step());
    CHECK(std::abs(total_mass(state.rho[0]) - m0) <= 1e-13 * m0);
    CHECK(std::abs(total_mass(state.rho[1]) - m1) <= 1e-13 * m1);
}

TEST_CASE("edge fluxes account for the mass change")
{
    Scenario s = test::small_scenario(30, 0.005, 1, 0.05);
    s.belt_direction_deg = 20.0;
    RoeStepper st(s, ConvolutionMode::direct, CflPolicy{});
    const Grid& g = s.grid;
    SchemeState state{0.0, 0, {test::bump(g, 0.12, 0.08, 0.02, 0.8)}, 0.0};
    double out = 0.0;
    double prev = total_mass(state.rho[0]);
    for (int n = 0; n < 20; ++n) {
        const StepRecord r = st.step(state, st.cfl_step());
        out += r.outflux[0].total();
        const double now = total_mass(state.rho[0]);
        REQUIRE(prev - now == doctest::Approx(r.outflux[0].total()).epsilon(1e-9).scale(1e-18));
        prev = now;
    }
    CHECK(out > 0.0);
}

TEST_CASE("step rejects oversized time steps")
{
    Scenario s = test::small_scenario(16, 0.01, 1);
    RoeStepper st(s, ConvolutionMode::direct, CflPolicy{});
    SchemeState state{0.0, 0, {Field2D(s.grid, 0.1)}, 0.0};
    CHECK_THROWS_AS(st.step(state, 2.0 * st.cfl_step()), StepRejected);
    CHECK_THROWS_AS(st.step(state, 0.0), StepRejected);
    CHECK_NOTHROW(st.step(state, st.cfl_step()));
}

TEST_CASE("negative densities are rejected")
{
    Field2D f(Grid(3, 3, 1.0, 1.0), 0.0);
    f(1, 1) = -1e-13;
    CHECK_THROWS_AS(require_nonnegative(f, "test"), StepRejected);
    f(1, 1) = -1e-15;
    CHECK_NOTHROW(require_nonnegative(f, "test"));
}

TEST_CASE("last step lands on t_end")
{
    Scenario s = test::small_scenario(16, 0.01, 1);
    s.t_end = 0.37;
    RoeStepper st(s, ConvolutionMode::direct, CflPolicy{});
    SchemeState state{0.0, 0, {Field2D(s.grid, 0.1)}, 0.0};
    while (state.t < s.t_end * (1.0 - 1e-12))
        st.step(state);
    CHECK(state.t == doctest::Approx(0.37).epsilon(1e-14));
}
