#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "nlcl/config.hpp"
#include "nlcl/grid.hpp"
#include "nlcl/scenario.hpp"

namespace nlcl::test {

inline Scenario small_scenario(int n, double h, int classes = 2, double eps = 0.05)
{
    Scenario s;
    s.grid = Grid(n, n, h, h);
    for (int c = 0; c < classes; ++c) {
        MaterialClass mc;
        mc.id = c + 1;
        mc.epsilon = eps;
        mc.sigma = c == 0 ? 3.0e4 : 1.0e4;
        mc.alpha = c == 0 ? 1.0 : 2.0;
        s.classes.push_back(mc);
    }
    s.sigma_tilde = 9.0e4;
    s.t_end = 1.0;
    return s;
}

inline BoundaryPolicy all_walls()
{
    return {EdgePolicy::wall, EdgePolicy::wall, EdgePolicy::wall, EdgePolicy::wall};
}

inline Field2D random_field(const Grid& g, std::mt19937_64& rng, double lo, double hi)
{
    std::uniform_real_distribution<double> u(lo, hi);
    Field2D f(g);
    for (double& v : f.values())
        v = u(rng);
    return f;
}

/// Smooth bump exp(-|x - c|^2 / (2 w^2)) scaled to `peak`, sampled at cell centers.
inline Field2D bump(const Grid& g, double cx, double cy, double w, double peak)
{
    Field2D f(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double dx = g.x_center(i) - cx, dy = g.y_center(j) - cy;
            f(i, j) = peak * std::exp(-(dx * dx + dy * dy) / (2.0 * w * w));
        }
    return f;
}

inline double rel_diff(double a, double b)
{
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

} // namespace nlcl::test
