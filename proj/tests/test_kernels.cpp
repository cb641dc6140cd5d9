#include "doctest.h"

#include <cmath>
#include <numbers>

#include "nlcl/kernels.hpp"

using namespace nlcl;

namespace {

constexpr double pi = std::numbers::pi;

// Coarse grid search followed by repeated zooming around the best sample.
template <class F>
double grid_max(F f, double lo, double hi)
{
    double bx = 0.0, by = 0.0, best = -1.0;
    double step = (hi - lo) / 800.0;
    for (double x = lo; x <= hi; x += step)
        for (double y = lo; y <= hi; y += step) {
            const double v = f(x, y);
            if (v > best) {
                best = v;
                bx = x;
                by = y;
            }
        }
    for (int round = 0; round < 12; ++round) {
        const double cx = bx, cy = by;
        for (int a = -20; a <= 20; ++a)
            for (int b = -20; b <= 20; ++b) {
                const double x = cx + a * step / 10.0, y = cy + b * step / 10.0;
                const double v = f(x, y);
                if (v > best) {
                    best = v;
                    bx = x;
                    by = y;
                }
            }
        step /= 10.0;
    }
    return best;
}

} // namespace

TEST_CASE("gaussian values")
{
    CHECK(gaussian_value(1.0e4, 0.0, 0.0) == doctest::Approx(1591.5494309189535).epsilon(1e-15));
    CHECK(gaussian_value(1.0e4, 1.0, 0.0) == 0.0);
    CHECK(gaussian_dx(1.0e4, 0.0, 0.0) == 0.0);
    CHECK(gaussian_dy(1.0e4, 0.0, 0.0) == 0.0);
    // derivative against a central difference
    const double h = 1e-7, x = 0.004, y = -0.003;
    const double fd = (gaussian_value(1.0e4, x + h, y) - gaussian_value(1.0e4, x - h, y)) / (2 * h);
    CHECK(gaussian_dx(1.0e4, x, y) == doctest::Approx(fd).epsilon(1e-6));
}

TEST_CASE("derivative stencil antisymmetry")
{
    const Grid g(80, 80, 0.005, 0.005);
    const KernelStencil d1 = build_stencil(KernelKind::d1, 1.0e4, g, 5.0);
    CHECK(d1.weight(0, 0) == 0.0);
    for (int my = d1.lo_y; my <= d1.hi_y; ++my)
        for (int mx = d1.lo_x; mx <= d1.hi_x; ++mx)
            REQUIRE(d1.weight(mx, my) == -d1.weight(-mx, my));

    const KernelStencil d2 = build_stencil(KernelKind::d2, 1.0e4, g, 5.0);
    for (int my = d2.lo_y; my <= d2.hi_y; ++my)
        for (int mx = d2.lo_x; mx <= d2.hi_x; ++mx)
            REQUIRE(d2.weight(mx, my) == -d2.weight(mx, -my));

    // face placement: offsets (mx - 1/2) dx pair up as mx <-> 1 - mx
    const KernelStencil f1 = build_stencil(KernelKind::d1, 1.0e4, g, 5.0, Placement::x_face);
    CHECK(f1.lo_x == -f1.radius_cells);
    CHECK(f1.hi_x == f1.radius_cells + 1);
    for (int my = f1.lo_y; my <= f1.hi_y; ++my)
        for (int mx = f1.lo_x; mx <= f1.hi_x; ++mx)
            REQUIRE(f1.weight(mx, my) == -f1.weight(1 - mx, my));
}

TEST_CASE("smoothing stencil has unit discrete mass")
{
    for (double sigma : {1.0e4, 3.0e4, 9.0e4}) {
        const Grid g(100, 100, 0.005, 0.005);
        for (Placement p : {Placement::center, Placement::x_face, Placement::y_face}) {
            const KernelStencil s = build_stencil(KernelKind::smoothing, sigma, g, 5.0, p);
            long double sum = 0.0L;
            for (double w : s.weights)
                sum += w;
            CHECK(std::abs(static_cast<double>(sum) * g.dx * g.dy - 1.0) <= 1e-14);
        }
    }
}

TEST_CASE("stencil weights are finite and decay along the axes")
{
    const Grid g(80, 80, 0.005, 0.005);
    const KernelStencil s = build_stencil(KernelKind::smoothing, 1.0e4, g, 5.0);
    for (double w : s.weights)
        REQUIRE(std::isfinite(w));
    for (int mx = 0; mx < s.hi_x; ++mx)
        REQUIRE(s.weight(mx + 1, 0) < s.weight(mx, 0));
    for (int my = 0; my < s.hi_y; ++my)
        REQUIRE(s.weight(0, my + 1) < s.weight(0, my));
}

TEST_CASE("stencil radius and errors")
{
    const Grid g(40, 40, 0.005, 0.005);
    CHECK(stencil_radius(1.0e4, g, 5.0) == 10);
    CHECK_THROWS_AS(build_stencils(1.0e4, Grid(8, 8, 0.005, 0.005), 5.0), ConfigError);
    CHECK_THROWS_AS(build_stencils(0.0, g, 5.0), ConfigError);
    CHECK_THROWS_AS(build_stencils(1.0e4, g, 2.0), ConfigError);
}

TEST_CASE("heaviside examples")
{
    const SmoothedHeaviside h{50.0};
    CHECK(heaviside(h, 1.0) == 0.5);
    CHECK(heaviside(h, 1.02) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(heaviside(h, 0.0) == doctest::Approx(std::atan(-50.0) / pi + 0.5).epsilon(1e-14));
    CHECK(heaviside(h, 0.0) == doctest::Approx(0.006366).epsilon(1e-4));
}

TEST_CASE("heaviside range, monotonicity and point symmetry")
{
    const SmoothedHeaviside h{50.0};
    double prev = -1.0;
    for (double u = -3.0; u <= 5.0; u += 0.01) {
        const double v = h(u);
        REQUIRE(v > 0.0);
        REQUIRE(v < 1.0);
        REQUIRE(v > prev);
        prev = v;
    }
    for (double d : {0.0, 1e-3, 0.02, 0.5, 3.0})
        CHECK(h(1.0 + d) + h(1.0 - d) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("lipschitz constant")
{
    CHECK(lipschitz_constant(SmoothedHeaviside{pi}) == doctest::Approx(1.0).epsilon(1e-15));
    const SmoothedHeaviside h{50.0};
    double best = 0.0;
    for (int k = 0; k <= 200000; ++k) {
        const double u = k * 1e-5;
        best = std::max(best, 50.0 / (pi * (1.0 + 2500.0 * (u - 1.0) * (u - 1.0))));
    }
    CHECK(lipschitz_constant(h) == doctest::Approx(best).epsilon(1e-12));
    CHECK(lipschitz_constant(h) == doctest::Approx(15.91549).epsilon(1e-6));
    CHECK(h.derivative(1.0) == doctest::Approx(lipschitz_constant(h)).epsilon(1e-15));
}

TEST_CASE("kernel norms at unit sigma")
{
    const KernelNorms n = kernel_norms(1.0);
    auto grad = [](double x, double y) { return std::hypot(gaussian_dx(1.0, x, y), gaussian_dy(1.0, x, y)); };
    CHECK(n.grad == doctest::Approx(grid_max(grad, -4.0, 4.0)).epsilon(1e-8));
    CHECK(n.grad == doctest::Approx(std::exp(-0.5) / (2 * pi)).epsilon(1e-10));

    auto hess = [](double x, double y) {
        const double e = std::exp(-(x * x + y * y) / 2) / (2 * pi);
        return std::max({std::abs((x * x - 1) * e), std::abs((y * y - 1) * e), std::abs(x * y * e)});
    };
    CHECK(n.hess == doctest::Approx(grid_max(hess, -4.0, 4.0)).epsilon(1e-8));

    auto third = [](double x, double y) {
        const double e = std::exp(-(x * x + y * y) / 2) / (2 * pi);
        return std::max({std::abs((3 * x - x * x * x) * e), std::abs((3 * y - y * y * y) * e),
                         std::abs(y * (1 - x * x) * e), std::abs(x * (1 - y * y) * e)});
    };
    CHECK(n.third == doctest::Approx(grid_max(third, -4.0, 4.0)).epsilon(1e-8));
}

TEST_CASE("kernel norms scale with sigma")
{
    const KernelNorms a = kernel_norms(1.0);
    for (double s : {4.0, 1.0e4, 3.0e4}) {
        const KernelNorms b = kernel_norms(s);
        CHECK(b.grad == doctest::Approx(a.grad * std::pow(s, 1.5)).epsilon(1e-12));
        CHECK(b.hess == doctest::Approx(a.hess * s * s).epsilon(1e-12));
        CHECK(b.third == doctest::Approx(a.third * std::pow(s, 2.5)).epsilon(1e-12));
        CHECK(b.grad > 0.0);
    }
}
