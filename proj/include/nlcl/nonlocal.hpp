#pragma once

#include <string>
#include <vector>

#include "nlcl/convolution.hpp"
#include "nlcl/kernels.hpp"
#include "nlcl/scenario.hpp"

namespace nlcl {

/// r_Omega = sum_c alpha_c rho^c + obstacle density.
Field2D augmented_density(const std::vector<Field2D>& rho, const std::vector<MaterialClass>& classes,
                          const Field2D& obstacle_mass);

struct DynamicVelocity {
    InterfaceField J1;  // x-faces
    InterfaceField J2;  // y-faces
};

/// d1, d2 from the class kernel and smoothing from eta-tilde, all placed on one face family.
StencilSet face_stencils(double sigma, double sigma_tilde, const Grid& grid, double cutoff, Placement placement);

/**
 * J_axis = -eps H_t(u) g_axis / sqrt(1 + |g|^2) with g = grad(eta_c * r) and
 * u = (eta_tilde * r) / r_max, both components of g taken at the same face.
 * Direct summation.
 */
DynamicVelocity dynamic_velocity(const Field2D& r, double epsilon, const StencilSet& x_faces,
                                 const StencilSet& y_faces, const SmoothedHeaviside& h, double r_max);

/// Inputs for the kernel estimates of one class.
struct KernelBoundInputs {
    double epsilon = 0.0;
    KernelNorms eta;          // norms of eta_c
    double grad_tilde = 0.0;  // sup |grad eta_tilde| including the smoothing mass scale
    double lipschitz = 0.0;   // Lipschitz constant of u -> H_t(u / r_max) in terms of the raw convolution
};

/// A = 2 |D^2 eta| + L_H |grad eta_tilde|
double first_difference_factor(const KernelBoundInputs& in);
/// C = c1 |r| + c2 |r|^2, c1 = 2 |D^3 eta|, c2 = 3 |D^2 eta|^2 + 2 L_H |grad eta_tilde| |D^2 eta|
double second_difference_constant(const KernelBoundInputs& in, double r_l1);

struct BoundRatio {
    std::string name;
    double ratio = 0.0;  // max observed / bound
    int a = -1, b = -1;  // face lattice location of the max
};

struct KernelBoundReport {
    std::vector<BoundRatio> ratios;
    double max_ratio() const;
    const BoundRatio& worst() const;
};

/**
 * Sup bound, first differences of J1 and J2 along and across their faces,
 * second differences along each axis and mixed differences, each compared with
 * its bound built from |r|_{L1}.
 */
KernelBoundReport verify_kernel_bounds(const DynamicVelocity& J, const Field2D& r, const KernelBoundInputs& in);

/// Throws DiagnosticFailure naming the worst inequality when any ratio exceeds 1 + tol.
void require_kernel_bounds(const KernelBoundReport& rep, double tol = 1e-9);

/**
 * Per-scenario evaluator of the dynamic velocities. Stencils and (in fft
 * mode) kernel spectra are built once; evaluate() convolves the augmented
 * density once per call and counts calls.
 */
class NonlocalOperator {
public:
    NonlocalOperator(const Scenario& scenario, ConvolutionMode mode);

    Field2D augmented(const std::vector<Field2D>& rho) const;
    std::vector<DynamicVelocity> evaluate(const std::vector<Field2D>& rho);
    std::vector<DynamicVelocity> evaluate_augmented(const Field2D& r);

    long evaluations() const { return evaluations_; }
    const Field2D& obstacle_mass() const { return obstacle_; }
    const StencilSet& x_stencils(std::size_t c) const { return xs_[c]; }
    const StencilSet& y_stencils(std::size_t c) const { return ys_[c]; }
    KernelBoundInputs bound_inputs(std::size_t c) const;
    double lipschitz() const;
    double grad_tilde() const;

private:
    const Scenario* scenario_;
    SmoothedHeaviside heaviside_;
    Field2D obstacle_;
    std::vector<StencilSet> xs_, ys_;
    std::vector<KernelNorms> norms_;
    InterfaceConvolver conv_;
    struct Ids {
        int d1x, d2x, d1y, d2y;
    };
    std::vector<Ids> ids_;
    int sx_ = -1, sy_ = -1;
    long evaluations_ = 0;
};

} // namespace nlcl
