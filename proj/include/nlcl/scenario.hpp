#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nlcl/grid.hpp"

namespace nlcl {

struct MaterialClass {
    int id = 1;
    double epsilon = 0.05;  // collision speed scale, m/s
    double sigma = 1.0e4;   // kernel concentration, 1/m^2
    double alpha = 1.0;     // PCE weight
    double r_max_class = 1.0;
};

struct Rect {
    double x_lo = 0.0, x_hi = 0.0, y_lo = 0.0, y_hi = 0.0;
    bool contains(Vec2 p) const { return p.x >= x_lo && p.x <= x_hi && p.y >= y_lo && p.y <= y_hi; }
};

/**
 * Obstacle region: an axis-aligned rectangle or a rotated strip.
 *
 * A strip is the set of points within width/2 of the segment of the given
 * length through `center` with direction (cos angle, sin angle).
 */
struct Obstacle {
    enum class Shape { rectangle, strip };

    std::string name;
    Shape shape = Shape::rectangle;
    Rect rect;
    Vec2 center;
    double length = 0.0;
    double width = 0.0;
    double angle_deg = 0.0;
    double mass = 2.0;
    bool zero_velocity = true;

    bool contains(Vec2 p) const;
    /// End points of the strip's center line (rectangle: lower-left and upper-right corners).
    std::pair<Vec2, Vec2> axis_endpoints() const;
};

struct ObstacleSet {
    std::vector<Obstacle> regions;
};

enum class EdgePolicy {
    zero,     // ghost cell holds zero density
    outflow,  // ghost copies the adjacent interior cell
    wall      // no flux through the edge
};

struct BoundaryPolicy {
    EdgePolicy left = EdgePolicy::zero;
    EdgePolicy right = EdgePolicy::outflow;
    EdgePolicy bottom = EdgePolicy::zero;
    EdgePolicy top = EdgePolicy::zero;
};

const char* to_string(EdgePolicy p);

struct Scenario {
    Grid grid;
    std::vector<MaterialClass> classes;
    ObstacleSet obstacles;
    BoundaryPolicy boundary;
    double r_max = 1.0;
    double belt_speed = 0.1;
    double belt_direction_deg = 0.0;
    double diverter_angle = 55.0;
    double heaviside_slope = 50.0;
    double sigma_tilde = 9.0e4;
    double kernel_cutoff = 5.0;
    double t_end = 6.0;
    bool mollify_static_velocity = false;

    double epsilon_max() const;
};

/// Belt velocity at a point; zero inside zero-velocity regions.
Vec2 static_velocity(const Scenario& scenario, double x, double y);

/**
 * Static velocity sampled where the scheme needs it.
 *
 * v1 lives on x-faces, v2 on y-faces. A face carries zero velocity when either
 * adjacent cell center lies in a zero-velocity region. Norms are "as sampled":
 * finite differences between cells in different velocity regions are skipped,
 * so a piecewise-constant field has vanishing derivative norms.
 */
struct StaticVelocityField {
    InterfaceField v1;
    InterfaceField v2;
    double sup = 0.0;        // max |v| over face samples
    double sup_v1 = 0.0;     // max |v1|
    double sup_v2 = 0.0;     // max |v2|
    double d1v1 = 0.0;       // max |dv1/dx|
    double d2v2 = 0.0;       // max |dv2/dy|
    double grad = 0.0;       // max entry of the Jacobian
    double hess = 0.0;       // max entry of the second-derivative tensor
};

StaticVelocityField sample_static_velocity(const Scenario& scenario);

/// One flag per cell: cell center inside a zero-velocity region.
std::vector<char> zero_velocity_mask(const Scenario& scenario);

/// One flag per cell: cell center inside any obstacle.
std::vector<char> obstacle_mask(const Scenario& scenario);

/// Sum of R_l chi_l over obstacles, by cell-center membership.
Field2D obstacle_density(const Scenario& scenario);

/// rho0(x) = gamma / (2 pi rho_max) * sum_i exp(-gamma |x - x_i|^2 / 2) at cell centers.
Field2D init_from_particles(const std::vector<Vec2>& positions, double gamma, double rho_max, const Grid& grid);

/// Uniform positions in `region`, mt19937_64 seeded with `seed`.
std::vector<Vec2> random_particles(std::size_t count, const Rect& region, std::uint64_t seed);

/// (left, right): cells with center x < x_split go left, the rest right.
std::pair<Field2D, Field2D> split_classes(const Field2D& rho0, double x_split);

struct ValidationReport {
    std::vector<std::string> failures;
    std::vector<std::string> notes;
    bool ok() const { return failures.empty(); }
    std::string summary() const;
};

ValidationReport validate_assumptions(const Scenario& scenario);

/// Throws ConfigError carrying the report summary when validation fails.
void require_valid(const Scenario& scenario);

/// Lowest point of a strip's center line; the deflection side is y below it.
double strip_tip_y(const Obstacle& strip);

} // namespace nlcl
