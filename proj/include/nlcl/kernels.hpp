#pragma once

#include <vector>

#include "nlcl/grid.hpp"

namespace nlcl {

/// eta(x, y) = sigma / (2 pi) * exp(-sigma (x^2 + y^2) / 2)
double gaussian_value(double sigma, double x, double y);
double gaussian_dx(double sigma, double x, double y);
double gaussian_dy(double sigma, double x, double y);

enum class KernelKind { smoothing, d1, d2 };

/// Where the stencil's output lives relative to the cells it reads.
enum class Placement { center, x_face, y_face };

/**
 * Analytic Gaussian (or one of its first derivatives) sampled on the lattice
 * of output-to-cell-center offsets.
 *
 * Sample (mx, my) sits at ((mx + shift_x) dx, (my + shift_y) dy). Along an
 * axis where the output lives on faces the shift is -1/2 and mx runs over
 * [-r, r+1], which keeps the offsets symmetric about zero; otherwise the shift
 * is 0 and mx runs over [-r, r]. Output a reads cell h through mx = a - h.
 *
 * Weights are raw kernel values; the dx*dy quadrature factor is applied by the
 * convolution. Smoothing stencils are scaled by mass_scale so that
 * dx*dy*sum(weights) == 1.
 */
struct KernelStencil {
    KernelKind kind = KernelKind::smoothing;
    Placement placement = Placement::center;
    double sigma = 0.0;
    double dx = 0.0;
    double dy = 0.0;
    int radius_cells = 0;
    int lo_x = 0, hi_x = 0, lo_y = 0, hi_y = 0;
    double shift_x = 0.0, shift_y = 0.0;
    double mass_scale = 1.0;
    std::vector<double> weights;

    int width() const { return hi_x - lo_x + 1; }
    int height() const { return hi_y - lo_y + 1; }
    double weight(int mx, int my) const { return weights[static_cast<std::size_t>(my - lo_y) * width() + (mx - lo_x)]; }
    Vec2 offset(int mx, int my) const { return {(mx + shift_x) * dx, (my + shift_y) * dy}; }
    /// Analytic value of the (scaled) underlying kernel at an arbitrary offset.
    double analytic(double ox, double oy) const;
};

struct StencilSet {
    KernelStencil d1;
    KernelStencil d2;
    KernelStencil smoothing;
};

/// Radius in cells: ceil(cutoff_stddevs / (sqrt(sigma) * min(dx, dy))).
int stencil_radius(double sigma, const Grid& grid, double cutoff_stddevs);

KernelStencil build_stencil(KernelKind kind, double sigma, const Grid& grid, double cutoff_stddevs,
                            Placement placement = Placement::center);

/// d1, d2 and smoothing stencils for one sigma. Throws ConfigError when the
/// window would be wider than the grid or the arguments are out of range.
StencilSet build_stencils(double sigma, const Grid& grid, double cutoff_stddevs,
                          Placement placement = Placement::center);

/// H_t(u) = arctan(slope (u - 1)) / pi + 1/2
struct SmoothedHeaviside {
    double slope = 50.0;

    double operator()(double u) const;
    double derivative(double u) const;
};

double heaviside(const SmoothedHeaviside& h, double u);

/// sup |H_t'| = slope / pi
double lipschitz_constant(const SmoothedHeaviside& h);

/**
 * Sup-norms of the Gaussian's derivatives: Euclidean norm of the gradient,
 * maximum absolute entry of the Hessian and of the third-derivative tensor.
 */
struct KernelNorms {
    double grad = 0.0;
    double hess = 0.0;
    double third = 0.0;
};

KernelNorms kernel_norms(double sigma);

} // namespace nlcl
