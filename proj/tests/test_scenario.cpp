#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nlcl/config.hpp"
#include "nlcl/scenario.hpp"
#include "support.hpp"

using namespace nlcl;

namespace {

RunConfig default_config() { return parse_config(""); }

const Obstacle& find(const Scenario& s, const std::string& name)
{
    for (const auto& o : s.obstacles.regions)
        if (o.name == name)
            return o;
    throw std::runtime_error("no obstacle " + name);
}

} // namespace

TEST_CASE("static velocity")
{
    const Scenario s = default_config().scenario;
    const Vec2 belt = static_velocity(s, 0.2, 0.3);
    CHECK(belt.x == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(std::abs(belt.y) < 1e-17);

    const Obstacle& d = find(s, "diverter");
    const Vec2 inside = static_velocity(s, d.center.x, d.center.y);
    CHECK(inside.x == 0.0);
    CHECK(inside.y == 0.0);

    Scenario still = s;
    still.belt_speed = 0.0;
    const Vec2 z = static_velocity(still, 0.2, 0.3);
    CHECK(z.x == 0.0);
    CHECK(z.y == 0.0);
}

TEST_CASE("sampled static velocity vanishes next to zero-velocity cells")
{
    const Scenario s = default_config().scenario;
    const StaticVelocityField v = sample_static_velocity(s);
    const auto mask = zero_velocity_mask(s);
    const Grid& g = s.grid;
    for (int j = 0; j < g.ny; ++j)
        for (int k = 1; k < g.nx; ++k)
            if (mask[g.index(k - 1, j)] || mask[g.index(k, j)])
                REQUIRE(v.v1(k, j) == 0.0);
    CHECK(v.sup_v1 == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(v.d1v1 == 0.0);
}

TEST_CASE("particle initialization")
{
    const Grid g(21, 21, 0.5, 0.5);
    const Vec2 p = cell_center(g, 10, 10);
    const Field2D one = init_from_particles({p}, 0.02, 2004.0, g);
    const double peak = 0.02 / (2.0 * std::numbers::pi * 2004.0);
    CHECK(one(10, 10) == doctest::Approx(peak).epsilon(1e-15));
    CHECK(one(10, 10) == doctest::Approx(1.5882e-6).epsilon(1e-4));
    CHECK(one.max() == one(10, 10));

    const Field2D none = init_from_particles({}, 0.02, 2004.0, g);
    CHECK(none.max() == 0.0);
    CHECK(none.min() == 0.0);

    const Field2D two = init_from_particles({p, p}, 0.02, 2004.0, g);
    for (std::size_t k = 0; k < two.size(); ++k)
        REQUIRE(two.values()[k] == 2.0 * one.values()[k]);

    CHECK_THROWS_AS(init_from_particles({p}, 0.0, 2004.0, g), ConfigError);
}

TEST_CASE("particle initialization ignores the order of positions")
{
    const Grid g(30, 20, 0.02, 0.02);
    auto pts = random_particles(40, {0.0, 0.6, 0.0, 0.4}, 7);
    const Field2D a = init_from_particles(pts, 200.0, 2004.0, g);
    std::reverse(pts.begin(), pts.end());
    const Field2D b = init_from_particles(pts, 200.0, 2004.0, g);
    CHECK(a.values() == b.values());
}

TEST_CASE("random particles are reproducible and inside the region")
{
    const Rect r{0.0, 0.4, 0.0, 0.6};
    const auto a = random_particles(192, r, 3);
    const auto b = random_particles(192, r, 3);
    REQUIRE(a.size() == 192u);
    for (std::size_t k = 0; k < a.size(); ++k) {
        REQUIRE(a[k].x == b[k].x);
        REQUIRE(r.contains(a[k]));
    }
    CHECK(random_particles(192, r, 4)[0].x != a[0].x);
}

TEST_CASE("class split")
{
    const Grid g(10, 4, 0.1, 0.1);
    const Field2D u(g, 1.0);
    const auto [l, r] = split_classes(u, 0.5);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            REQUIRE(l(i, j) == (i < 5 ? 1.0 : 0.0));
            REQUIRE(r(i, j) == (i < 5 ? 0.0 : 1.0));
        }
    const auto [l2, r2] = split_classes(u, -1.0);
    CHECK(l2.max() == 0.0);
    CHECK(r2.values() == u.values());

    const RunConfig cfg = default_config();
    const auto rho = initial_state(cfg);
    const Field2D all = init_from_particles(random_particles(192, cfg.initial.region, cfg.seed), 200.0, 2004.0,
                                            cfg.scenario.grid);
    const auto obst = obstacle_mask(cfg.scenario);
    double total = 0.0;
    for (const Field2D& f : rho)
        total += total_mass(f);
    double expected = 0.0;
    for (std::size_t k = 0; k < all.size(); ++k)
        if (!obst[k])
            expected += all.values()[k] * cfg.scenario.grid.cell_area();
    CHECK(total == doctest::Approx(expected).epsilon(1e-12));
    // class 2 holds the mass left of x = 1/3
    const Grid& gg = cfg.scenario.grid;
    for (int j = 0; j < gg.ny; ++j)
        for (int i = 0; i < gg.nx; ++i) {
            if (gg.x_center(i) < 1.0 / 3.0)
                REQUIRE(rho[0](i, j) == 0.0);
            else
                REQUIRE(rho[1](i, j) == 0.0);
        }
}

TEST_CASE("validation of obstacle mass")
{
    Scenario s = test::small_scenario(40, 0.01);
    Obstacle o;
    o.name = "block";
    o.rect = {0.1, 0.2, 0.1, 0.2};
    o.mass = 1.5 * s.r_max;
    s.obstacles.regions.push_back(o);
    CHECK(validate_assumptions(s).ok());

    s.obstacles.regions[0].mass = 0.5 * s.r_max;
    const ValidationReport bad = validate_assumptions(s);
    REQUIRE_FALSE(bad.ok());
    CHECK(bad.summary().find("obstacle mass below r_max") != std::string::npos);
    CHECK(bad.summary().find("block") != std::string::npos);
    CHECK_THROWS_AS(require_valid(s), ConfigError);

    s.obstacles.regions.clear();
    const ValidationReport none = validate_assumptions(s);
    CHECK(none.ok());
    CHECK_FALSE(none.notes.empty());
}

TEST_CASE("validation of geometry")
{
    Scenario s = test::small_scenario(40, 0.01);
    Obstacle o;
    o.name = "outside";
    o.rect = {0.3, 0.5, 0.1, 0.2};
    o.mass = 2.0;
    s.obstacles.regions.push_back(o);
    CHECK_FALSE(validate_assumptions(s).ok());

    Scenario tiny = test::small_scenario(2, 0.01);
    CHECK_FALSE(validate_assumptions(tiny).ok());
}

TEST_CASE("diverter geometry")
{
    const Scenario s = default_config().scenario;
    const Obstacle& d = find(s, "diverter");
    const auto [a, b] = d.axis_endpoints();
    const double top = std::max(a.y, b.y);
    CHECK(top == doctest::Approx(s.grid.y_max()).epsilon(1e-12));
    CHECK(strip_tip_y(d) == doctest::Approx(std::min(a.y, b.y)).epsilon(1e-15));
    CHECK(d.contains(d.center));
    CHECK_FALSE(d.contains({d.center.x, d.center.y + 0.1}));
}

TEST_CASE("obstacle density")
{
    const Scenario s = default_config().scenario;
    const Field2D m = obstacle_density(s);
    const auto mask = obstacle_mask(s);
    for (std::size_t k = 0; k < m.size(); ++k)
        REQUIRE((m.values()[k] > 0.0) == static_cast<bool>(mask[k]));
    CHECK(m.max() >= 5.0);
}
