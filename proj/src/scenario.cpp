#include "nlcl/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "nlcl/kernels.hpp"

namespace nlcl {

namespace {

constexpr double deg = std::numbers::pi / 180.0;

bool inside_domain(const Grid& g, Vec2 p, double tol)
{
    return p.x >= g.x_min() - tol && p.x <= g.x_max() + tol && p.y >= g.y_min() - tol && p.y <= g.y_max() + tol;
}

std::vector<char> mask_where(const Scenario& s, bool zero_velocity_only)
{
    const Grid& g = s.grid;
    std::vector<char> m(g.cell_count(), 0);
    for (const auto& ob : s.obstacles.regions) {
        if (zero_velocity_only && !ob.zero_velocity)
            continue;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                if (ob.contains({g.x_center(i), g.y_center(j)}))
                    m[g.index(i, j)] = 1;
    }
    return m;
}

// Smooth a cell-centered field with the normalized sigma_tilde window,
// renormalizing near the edges by the in-domain weight.
std::vector<double> mollify(const Grid& g, const std::vector<double>& f, double sigma, double cutoff)
{
    const KernelStencil st = build_stencil(KernelKind::smoothing, sigma, g, cutoff);
    std::vector<double> out(f.size(), 0.0);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            double acc = 0.0, wsum = 0.0;
            for (int my = st.lo_y; my <= st.hi_y; ++my) {
                const int h = j - my;
                if (h < 0 || h >= g.ny)
                    continue;
                for (int mx = st.lo_x; mx <= st.hi_x; ++mx) {
                    const int k = i - mx;
                    if (k < 0 || k >= g.nx)
                        continue;
                    const double w = st.weight(mx, my);
                    acc += w * f[g.index(k, h)];
                    wsum += w;
                }
            }
            out[g.index(i, j)] = wsum > 0.0 ? acc / wsum : 0.0;
        }
    }
    return out;
}

} // namespace

const char* to_string(EdgePolicy p)
{
    switch (p) {
    case EdgePolicy::zero:
        return "zero";
    case EdgePolicy::outflow:
        return "outflow";
    case EdgePolicy::wall:
        return "wall";
    }
    return "?";
}

bool Obstacle::contains(Vec2 p) const
{
    if (shape == Shape::rectangle)
        return rect.contains(p);
    const double c = std::cos(angle_deg * deg), s = std::sin(angle_deg * deg);
    const double rx = p.x - center.x, ry = p.y - center.y;
    const double along = rx * c + ry * s;
    const double across = -rx * s + ry * c;
    return std::abs(along) <= 0.5 * length && std::abs(across) <= 0.5 * width;
}

std::pair<Vec2, Vec2> Obstacle::axis_endpoints() const
{
    if (shape == Shape::rectangle)
        return {{rect.x_lo, rect.y_lo}, {rect.x_hi, rect.y_hi}};
    const double hx = 0.5 * length * std::cos(angle_deg * deg);
    const double hy = 0.5 * length * std::sin(angle_deg * deg);
    return {{center.x - hx, center.y - hy}, {center.x + hx, center.y + hy}};
}

double strip_tip_y(const Obstacle& strip)
{
    const auto [a, b] = strip.axis_endpoints();
    return std::min(a.y, b.y);
}

double Scenario::epsilon_max() const
{
    double e = 0.0;
    for (const auto& c : classes)
        e = std::max(e, c.epsilon);
    return e;
}

Vec2 static_velocity(const Scenario& scenario, double x, double y)
{
    for (const auto& ob : scenario.obstacles.regions)
        if (ob.zero_velocity && ob.contains({x, y}))
            return {0.0, 0.0};
    const double a = scenario.belt_direction_deg * deg;
    return {scenario.belt_speed * std::cos(a), scenario.belt_speed * std::sin(a)};
}

std::vector<char> zero_velocity_mask(const Scenario& scenario) { return mask_where(scenario, true); }

std::vector<char> obstacle_mask(const Scenario& scenario) { return mask_where(scenario, false); }

Field2D obstacle_density(const Scenario& scenario)
{
    const Grid& g = scenario.grid;
    Field2D out(g, 0.0);
    for (const auto& ob : scenario.obstacles.regions)
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                if (ob.contains({g.x_center(i), g.y_center(j)}))
                    out(i, j) += ob.mass;
    return out;
}

StaticVelocityField sample_static_velocity(const Scenario& scenario)
{
    const Grid& g = scenario.grid;
    const auto zmask = zero_velocity_mask(scenario);
    const double a = scenario.belt_direction_deg * deg;
    const double bx = scenario.belt_speed * std::cos(a);
    const double by = scenario.belt_speed * std::sin(a);

    std::vector<double> c1(g.cell_count()), c2(g.cell_count());
    for (std::size_t k = 0; k < g.cell_count(); ++k) {
        c1[k] = zmask[k] ? 0.0 : bx;
        c2[k] = zmask[k] ? 0.0 : by;
    }
    const bool smooth = scenario.mollify_static_velocity;
    if (smooth) {
        c1 = mollify(g, c1, scenario.sigma_tilde, scenario.kernel_cutoff);
        c2 = mollify(g, c2, scenario.sigma_tilde, scenario.kernel_cutoff);
    }

    StaticVelocityField out;
    out.v1 = InterfaceField(g, Axis::x);
    out.v2 = InterfaceField(g, Axis::y);
    for (int j = 0; j < g.ny; ++j) {
        for (int k = 0; k <= g.nx; ++k) {
            const int l = std::max(k - 1, 0), r = std::min(k, g.nx - 1);
            double v;
            if (smooth)
                v = 0.5 * (c1[g.index(l, j)] + c1[g.index(r, j)]);
            else
                v = (zmask[g.index(l, j)] || zmask[g.index(r, j)]) ? 0.0 : bx;
            out.v1(k, j) = v;
            out.sup_v1 = std::max(out.sup_v1, std::abs(v));
        }
    }
    for (int k = 0; k <= g.ny; ++k) {
        for (int i = 0; i < g.nx; ++i) {
            const int b = std::max(k - 1, 0), t = std::min(k, g.ny - 1);
            double v;
            if (smooth)
                v = 0.5 * (c2[g.index(i, b)] + c2[g.index(i, t)]);
            else
                v = (zmask[g.index(i, b)] || zmask[g.index(i, t)]) ? 0.0 : by;
            out.v2(i, k) = v;
            out.sup_v2 = std::max(out.sup_v2, std::abs(v));
        }
    }
    for (std::size_t k = 0; k < g.cell_count(); ++k)
        out.sup = std::max(out.sup, std::hypot(c1[k], c2[k]));

    // Difference stencils only count when every cell involved sits in the same
    // velocity region (always, for the mollified field).
    auto same = [&](std::initializer_list<std::size_t> cells) {
        if (smooth)
            return true;
        const char first = zmask[*cells.begin()];
        for (auto c : cells)
            if (zmask[c] != first)
                return false;
        return true;
    };
    const std::vector<double>* comps[2] = {&c1, &c2};
    for (int comp = 0; comp < 2; ++comp) {
        const auto& f = *comps[comp];
        for (int j = 0; j < g.ny; ++j) {
            for (int i = 0; i < g.nx; ++i) {
                const std::size_t c = g.index(i, j);
                if (i + 1 < g.nx && same({c, g.index(i + 1, j)})) {
                    const double d = std::abs(f[g.index(i + 1, j)] - f[c]) / g.dx;
                    out.grad = std::max(out.grad, d);
                    if (comp == 0)
                        out.d1v1 = std::max(out.d1v1, d);
                }
                if (j + 1 < g.ny && same({c, g.index(i, j + 1)})) {
                    const double d = std::abs(f[g.index(i, j + 1)] - f[c]) / g.dy;
                    out.grad = std::max(out.grad, d);
                    if (comp == 1)
                        out.d2v2 = std::max(out.d2v2, d);
                }
                if (i >= 1 && i + 1 < g.nx && same({g.index(i - 1, j), c, g.index(i + 1, j)})) {
                    const double d = std::abs(f[g.index(i + 1, j)] - 2.0 * f[c] + f[g.index(i - 1, j)]) / (g.dx * g.dx);
                    out.hess = std::max(out.hess, d);
                }
                if (j >= 1 && j + 1 < g.ny && same({g.index(i, j - 1), c, g.index(i, j + 1)})) {
                    const double d = std::abs(f[g.index(i, j + 1)] - 2.0 * f[c] + f[g.index(i, j - 1)]) / (g.dy * g.dy);
                    out.hess = std::max(out.hess, d);
                }
                if (i + 1 < g.nx && j + 1 < g.ny &&
                    same({c, g.index(i + 1, j), g.index(i, j + 1), g.index(i + 1, j + 1)})) {
                    const double d = std::abs(f[g.index(i + 1, j + 1)] - f[g.index(i + 1, j)] - f[g.index(i, j + 1)] + f[c]) /
                                     (g.dx * g.dy);
                    out.hess = std::max(out.hess, d);
                }
            }
        }
    }
    return out;
}

Field2D init_from_particles(const std::vector<Vec2>& positions, double gamma, double rho_max, const Grid& grid)
{
    if (!(gamma > 0.0) || !(rho_max > 0.0))
        throw ConfigError("particle initialization needs gamma > 0 and rho_max > 0");
    // Sorted copy: the per-cell sum is then independent of input order, bit for bit.
    std::vector<Vec2> pts(positions);
    std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    const double pref = gamma / (2.0 * std::numbers::pi * rho_max);
    Field2D out(grid, 0.0);
    for (int j = 0; j < grid.ny; ++j) {
        const double y = grid.y_center(j);
        for (int i = 0; i < grid.nx; ++i) {
            const double x = grid.x_center(i);
            double sum = 0.0;
            for (const auto& p : pts) {
                const double d2 = (x - p.x) * (x - p.x) + (y - p.y) * (y - p.y);
                sum += std::exp(-0.5 * gamma * d2);
            }
            out(i, j) = pref * sum;
        }
    }
    return out;
}

std::vector<Vec2> random_particles(std::size_t count, const Rect& region, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(region.x_lo, region.x_hi);
    std::uniform_real_distribution<double> uy(region.y_lo, region.y_hi);
    std::vector<Vec2> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double x = ux(rng);
        const double y = uy(rng);
        out.push_back({x, y});
    }
    return out;
}

std::pair<Field2D, Field2D> split_classes(const Field2D& rho0, double x_split)
{
    const Grid& g = rho0.grid();
    Field2D left(g, 0.0), right(g, 0.0);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (g.x_center(i) < x_split)
                left(i, j) = rho0(i, j);
            else
                right(i, j) = rho0(i, j);
        }
    return {std::move(left), std::move(right)};
}

std::string ValidationReport::summary() const
{
    std::ostringstream os;
    for (std::size_t k = 0; k < failures.size(); ++k)
        os << (k ? "; " : "") << failures[k];
    return os.str();
}

ValidationReport validate_assumptions(const Scenario& s)
{
    ValidationReport rep;
    auto fail = [&](const std::string& m) { rep.failures.push_back(m); };
    const Grid& g = s.grid;

    if (g.nx < 3 || g.ny < 3)
        fail("grid needs at least 3 cells per direction");
    if (!(s.r_max > 0.0) || !std::isfinite(s.r_max))
        fail("r_max must be positive");
    if (!(s.belt_speed >= 0.0) || !std::isfinite(s.belt_speed))
        fail("belt_speed must be finite and nonnegative");
    if (!std::isfinite(s.belt_direction_deg))
        fail("belt_direction must be finite");
    if (!(s.diverter_angle > 0.0 && s.diverter_angle < 90.0))
        fail("diverter_angle must lie in (0, 90)");
    if (!(s.heaviside_slope > 0.0) || !std::isfinite(s.heaviside_slope))
        fail("heaviside_slope must be positive");
    if (!(s.sigma_tilde > 0.0) || !std::isfinite(s.sigma_tilde))
        fail("sigma_tilde must be positive");
    if (!(s.kernel_cutoff >= 3.0))
        fail("kernel_cutoff must be at least 3");
    if (!(s.t_end >= 0.0) || !std::isfinite(s.t_end))
        fail("t_end must be finite and nonnegative");
    if (s.classes.empty())
        fail("at least one material class is required");

    auto radius_fits = [&](double sigma, const std::string& what) {
        if (!(sigma > 0.0) || !(s.kernel_cutoff >= 3.0))
            return;
        const int r = stencil_radius(sigma, g, s.kernel_cutoff);
        if (r > std::max(g.nx, g.ny))
            fail(what + " kernel radius (" + std::to_string(r) + " cells) exceeds the grid");
    };
    radius_fits(s.sigma_tilde, "sigma_tilde");

    for (const auto& c : s.classes) {
        const std::string tag = "class " + std::to_string(c.id);
        if (!(c.epsilon >= 0.0) || !std::isfinite(c.epsilon))
            fail(tag + ": epsilon must be finite and nonnegative");
        if (!(c.sigma > 0.0) || !std::isfinite(c.sigma))
            fail(tag + ": sigma must be positive");
        if (!(c.alpha > 0.0) || !std::isfinite(c.alpha))
            fail(tag + ": alpha must be positive");
        if (!(c.r_max_class > 0.0))
            fail(tag + ": r_max must be positive");
        radius_fits(c.sigma, tag);
    }

    if (s.obstacles.regions.empty())
        rep.notes.push_back("no obstacles: boundary assumptions hold vacuously");
    for (const auto& ob : s.obstacles.regions) {
        const std::string tag = "obstacle '" + ob.name + "'";
        if (!(ob.mass > s.r_max))
            fail(tag + ": obstacle mass below r_max");
        if (ob.shape == Obstacle::Shape::rectangle) {
            if (!(ob.rect.x_lo < ob.rect.x_hi && ob.rect.y_lo < ob.rect.y_hi))
                fail(tag + ": empty rectangle");
        } else if (!(ob.length > 0.0 && ob.width > 0.0)) {
            fail(tag + ": strip needs positive length and width");
        }
        const auto [a, b] = ob.axis_endpoints();
        const double tol = 1e-12 * std::max(g.x_max() - g.x_min(), g.y_max() - g.y_min());
        if (!inside_domain(g, a, tol) || !inside_domain(g, b, tol))
            fail(tag + ": region leaves the computational rectangle");
    }
    return rep;
}

void require_valid(const Scenario& scenario)
{
    const ValidationReport rep = validate_assumptions(scenario);
    if (!rep.ok())
        throw ConfigError(rep.summary());
}

} // namespace nlcl
