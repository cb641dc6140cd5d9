#include "doctest.h"

#include "nlcl/grid.hpp"

using namespace nlcl;

TEST_CASE("cell centers")
{
    const Vec2 a = cell_center(Grid(4, 4, 1.0, 1.0), 0, 0);
    CHECK(a.x == 0.5);
    CHECK(a.y == 0.5);

    const Vec2 b = cell_center(Grid(4, 4, 0.5, 0.5), 2, 0);
    CHECK(b.x == 1.25);
    CHECK(b.y == 0.25);

    const Vec2 c = cell_center(Grid(4, 4, 1.0, 1.0, -1.0, -1.0), 0, 0);
    CHECK(c.x == -0.5);
    CHECK(c.y == -0.5);
}

TEST_CASE("cell center out of range")
{
    const Grid g(3, 2, 1.0, 1.0);
    CHECK_THROWS_AS(cell_center(g, 3, 0), IndexError);
    CHECK_THROWS_AS(cell_center(g, -1, 0), IndexError);
    CHECK_THROWS_AS(cell_center(g, 0, 2), IndexError);
}

TEST_CASE("grid rejects empty extents")
{
    CHECK_THROWS(Grid(0, 3, 1.0, 1.0));
    CHECK_THROWS(Grid(3, 3, 0.0, 1.0));
    CHECK_THROWS(Grid(3, 3, 1.0, -1.0));
}

TEST_CASE("l1 norm")
{
    CHECK(l1_norm(Field2D(Grid(5, 5, 0.1, 0.1))) == 0.0);

    Field2D one(Grid(1, 1, 0.1, 0.1), 2.0);
    CHECK(l1_norm(one) == doctest::Approx(0.02).epsilon(1e-15));

    Field2D u(Grid(10, 10, 1.0, 1.0), 1.0);
    CHECK(l1_norm(u) == 100.0);
}

TEST_CASE("l1 norm is absolutely homogeneous")
{
    const Grid g(7, 3, 0.2, 0.3);
    Field2D f(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            f(i, j) = (i - 3) * 0.5 + j;
    const double n = l1_norm(f);
    CHECK(l1_norm(-2.5 * f) == doctest::Approx(2.5 * n).epsilon(1e-14));
    CHECK(l1_distance(f, f) == 0.0);
}

TEST_CASE("interface layout")
{
    const Grid g(3, 2, 0.5, 0.25, 1.0, 2.0);
    InterfaceField fx(g, Axis::x);
    InterfaceField fy(g, Axis::y);
    CHECK(fx.size() == 8u);
    CHECK(fy.size() == 9u);
    const Vec2 px = fx.position(3, 1);
    CHECK(px.x == 2.5);
    CHECK(px.y == doctest::Approx(2.375));
    const Vec2 py = fy.position(0, 2);
    CHECK(py.x == doctest::Approx(1.25));
    CHECK(py.y == 2.5);
}

TEST_CASE("field arithmetic needs matching grids")
{
    Field2D a(Grid(2, 2, 1.0, 1.0), 1.0);
    Field2D b(Grid(3, 2, 1.0, 1.0), 1.0);
    CHECK_THROWS_AS(a += b, StructuralError);
}
