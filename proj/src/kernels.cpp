#include "nlcl/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

namespace nlcl {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

/// Dense grid search over [-extent, extent]^2 followed by repeated local
/// zooming around the incumbent.
double maximize_2d(const std::function<double(double, double)>& f, double extent, double step)
{
    double best = -1.0;
    double bx = 0.0, by = 0.0;
    const int n = static_cast<int>(std::ceil(extent / step));
    for (int a = -n; a <= n; ++a) {
        for (int b = -n; b <= n; ++b) {
            const double v = f(a * step, b * step);
            if (v > best) {
                best = v;
                bx = a * step;
                by = b * step;
            }
        }
    }
    double h = step;
    while (h > 1e-13) {
        const double cx = bx, cy = by;
        for (int a = -10; a <= 10; ++a) {
            for (int b = -10; b <= 10; ++b) {
                const double x = cx + a * h * 0.1;
                const double y = cy + b * h * 0.1;
                const double v = f(x, y);
                if (v > best) {
                    best = v;
                    bx = x;
                    by = y;
                }
            }
        }
        h *= 0.25;
    }
    return best;
}

// Derivatives of the unit Gaussian g(z) = exp(-|z|^2/2) / (2 pi).
double unit_g(double x, double y) { return std::exp(-0.5 * (x * x + y * y)) / two_pi; }

const KernelNorms& unit_norms()
{
    static const KernelNorms norms = [] {
        KernelNorms n;
        n.grad = maximize_2d([](double x, double y) { return std::hypot(x, y) * unit_g(x, y); }, 5.0, 0.01);
        n.hess = maximize_2d(
            [](double x, double y) {
                const double g = unit_g(x, y);
                const double gxx = std::abs((x * x - 1.0) * g);
                const double gyy = std::abs((y * y - 1.0) * g);
                const double gxy = std::abs(x * y * g);
                return std::max({gxx, gyy, gxy});
            },
            5.0, 0.01);
        n.third = maximize_2d(
            [](double x, double y) {
                const double g = unit_g(x, y);
                const double gxxx = std::abs((3.0 * x - x * x * x) * g);
                const double gyyy = std::abs((3.0 * y - y * y * y) * g);
                const double gxxy = std::abs(y * (x * x - 1.0) * g);
                const double gxyy = std::abs(x * (y * y - 1.0) * g);
                return std::max({gxxx, gyyy, gxxy, gxyy});
            },
            5.0, 0.01);
        return n;
    }();
    return norms;
}

double sample_kernel(KernelKind kind, double sigma, double x, double y)
{
    switch (kind) {
    case KernelKind::smoothing:
        return gaussian_value(sigma, x, y);
    case KernelKind::d1:
        return gaussian_dx(sigma, x, y);
    case KernelKind::d2:
        return gaussian_dy(sigma, x, y);
    }
    return 0.0;
}

} // namespace

double gaussian_value(double sigma, double x, double y)
{
    return sigma / two_pi * std::exp(-0.5 * sigma * (x * x + y * y));
}

double gaussian_dx(double sigma, double x, double y) { return -sigma * x * gaussian_value(sigma, x, y); }

double gaussian_dy(double sigma, double x, double y) { return -sigma * y * gaussian_value(sigma, x, y); }

double KernelStencil::analytic(double ox, double oy) const
{
    return mass_scale * sample_kernel(kind, sigma, ox, oy);
}

int stencil_radius(double sigma, const Grid& grid, double cutoff_stddevs)
{
    return static_cast<int>(std::ceil(cutoff_stddevs / (std::sqrt(sigma) * std::min(grid.dx, grid.dy))));
}

KernelStencil build_stencil(KernelKind kind, double sigma, const Grid& grid, double cutoff_stddevs, Placement placement)
{
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw ConfigError("kernel sigma must be positive");
    if (!(cutoff_stddevs >= 3.0))
        throw ConfigError("kernel cutoff must be at least 3 standard deviations");
    const int r = stencil_radius(sigma, grid, cutoff_stddevs);
    if (r > std::max(grid.nx, grid.ny)) {
        std::ostringstream msg;
        msg << "kernel radius of " << r << " cells (sigma=" << sigma << ") exceeds the " << grid.nx << "x" << grid.ny
            << " grid";
        throw ConfigError(msg.str());
    }

    KernelStencil s;
    s.kind = kind;
    s.placement = placement;
    s.sigma = sigma;
    s.dx = grid.dx;
    s.dy = grid.dy;
    s.radius_cells = r;
    s.lo_x = -r;
    s.hi_x = r;
    s.lo_y = -r;
    s.hi_y = r;
    if (placement == Placement::x_face) {
        s.shift_x = -0.5;
        s.hi_x = r + 1;
    } else if (placement == Placement::y_face) {
        s.shift_y = -0.5;
        s.hi_y = r + 1;
    }
    s.weights.resize(static_cast<std::size_t>(s.width()) * s.height());
    for (int my = s.lo_y; my <= s.hi_y; ++my) {
        for (int mx = s.lo_x; mx <= s.hi_x; ++mx) {
            const Vec2 o = s.offset(mx, my);
            s.weights[static_cast<std::size_t>(my - s.lo_y) * s.width() + (mx - s.lo_x)] =
                sample_kernel(kind, sigma, o.x, o.y);
        }
    }
    // Odd kernels: the sample at the mirrored offset is computed from the
    // negated coordinate, which is exact, so antisymmetry holds bit for bit.
    if (kind == KernelKind::smoothing) {
        double sum = 0.0;
        for (double w : s.weights)
            sum += w;
        s.mass_scale = 1.0 / (grid.dx * grid.dy * sum);
        for (double& w : s.weights)
            w *= s.mass_scale;
    }
    return s;
}

StencilSet build_stencils(double sigma, const Grid& grid, double cutoff_stddevs, Placement placement)
{
    return {build_stencil(KernelKind::d1, sigma, grid, cutoff_stddevs, placement),
            build_stencil(KernelKind::d2, sigma, grid, cutoff_stddevs, placement),
            build_stencil(KernelKind::smoothing, sigma, grid, cutoff_stddevs, placement)};
}

double SmoothedHeaviside::operator()(double u) const { return std::atan(slope * (u - 1.0)) / std::numbers::pi + 0.5; }

double SmoothedHeaviside::derivative(double u) const
{
    const double z = slope * (u - 1.0);
    return slope / (std::numbers::pi * (1.0 + z * z));
}

double heaviside(const SmoothedHeaviside& h, double u) { return h(u); }

double lipschitz_constant(const SmoothedHeaviside& h) { return std::abs(h.slope) / std::numbers::pi; }

KernelNorms kernel_norms(double sigma)
{
    if (!(sigma > 0.0))
        throw ConfigError("kernel sigma must be positive");
    // eta_sigma(z) = sigma * g(sqrt(sigma) z), so k-th derivatives scale as sigma^(1 + k/2).
    const KernelNorms& u = unit_norms();
    const double s = std::sqrt(sigma);
    return {u.grad * sigma * s, u.hess * sigma * sigma, u.third * sigma * sigma * s};
}

} // namespace nlcl
