#pragma once

#include <string>
#include <vector>

#include "nlcl/nonlocal.hpp"
#include "nlcl/roe.hpp"
#include "nlcl/scenario.hpp"

namespace nlcl {

struct ClassConstants {
    double epsilon = 0.0;
    KernelNorms eta;
    double A = 0.0;       // 2 |D^2 eta| + L_H |grad eta_tilde|
    double C_inf = 0.0;
    double K1 = 0.0;
    double K2 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double C_c = 0.0;
    double B = 0.0;       // (|grad v| + eps A |r_o|) |rho_o|, the time-regularity offset
    double tv0 = 0.0;     // initial BV seminorm
    double rho_l1 = 0.0;
    double rho_linf = 0.0;
};

/**
 * Every constant of the a-priori estimates for one run. The bounds grow like
 * exp(C t) with C of order 1e8 for realistic kernels, so they are carried as
 * natural logarithms.
 */
struct BoundConstants {
    double L_H = 0.0;
    double grad_tilde = 0.0;
    double r_l1 = 0.0;
    double v_sup = 0.0;
    double v_grad = 0.0;
    double v_hess = 0.0;
    double d1v1 = 0.0;
    double d2v2 = 0.0;
    std::vector<ClassConstants> cls;

    double log_linf_bound(std::size_t c, double t) const;
    double log_Cx(std::size_t c, double t) const;
    double log_Ct(std::size_t c, double t) const;
    double log_Cxt(std::size_t c, double t) const;
    /// exp(log_Cx); may overflow to infinity.
    double Cx(std::size_t c, double t) const;
};

BoundConstants compute_constants(const Scenario& scenario, const StaticVelocityField& v, const NonlocalOperator& op,
                                 const std::vector<Field2D>& rho0);

/// log(exp(a) + exp(b)) for a, b possibly -inf.
double log_add_exp(double a, double b);

/// observed / exp(log_bound); 0 when nothing is observed.
double bound_ratio(double observed, double log_bound);

struct CheckResult {
    double ratio = 0.0;
    bool pass = true;
};

CheckResult linf_check(const Field2D& rho, const BoundConstants& k, std::size_t c, double t, double tol = 1e-9);

/// sum dy |rho_{i+1,j} - rho_{i,j}| + dx |rho_{i,j+1} - rho_{i,j}|, zero outside the rectangle.
double bv_seminorm(const Field2D& rho);

CheckResult bv_check(const Field2D& rho, const BoundConstants& k, std::size_t c, double t, double tol = 1e-9);

/// Running left-hand side of the space-time BV estimate for one class.
class SpaceTimeBv {
public:
    void add(const Field2D& before, const Field2D& after, double dt);
    double value() const { return sum_; }
    CheckResult check(const BoundConstants& k, std::size_t c, double t, double tol = 1e-9) const;

private:
    double sum_ = 0.0;
};

/// {0, r_max} and 15 log-uniform values in [1e-6 max_rho, max_rho].
std::vector<double> default_kappas(double max_rho, double r_max);

struct EntropyResult {
    double max_residual = 0.0;  // scaled by max(|kappa|, local |rho|)
    int i = -1, j = -1;
    double kappa = 0.0;
};

/**
 * Left-hand side of the per-cell entropy inequality of one accepted step for
 * one class, maximized over cells and kappa. With `local_kappas` the values of
 * the cell and its four neighbours in all three states are tried as well.
 */
EntropyResult entropy_residual(const Field2D& before, const Field2D& mid, const Field2D& after,
                               const DynamicVelocity& J, const StaticVelocityField& v, double dt,
                               const BoundaryPolicy& bc, const std::vector<double>& kappas,
                               bool local_kappas = false);

struct InvarianceResult {
    long violations = 0;  // obstacle-adjacent faces where (v + J) . n_out > 0
    long faces = 0;
    double obstacle_mass = 0.0;  // class mass inside obstacle cells
};

InvarianceResult boundary_invariance_check(const Field2D& rho, const std::vector<char>& obstacle_cells,
                                           const StaticVelocityField& v, const DynamicVelocity& J);

/// U^c(t) = mass(t) / mass(0).
class OutflowSeries {
public:
    explicit OutflowSeries(const std::vector<Field2D>& rho0);
    void record(double t, const std::vector<Field2D>& rho);
    const std::vector<double>& times() const { return t_; }
    const std::vector<std::vector<double>>& values() const { return u_; }  // [sample][class]
    std::vector<double> current(const std::vector<Field2D>& rho) const;

private:
    std::vector<double> m0_;
    std::vector<double> t_;
    std::vector<std::vector<double>> u_;
};

struct LipschitzSample {
    double t = 0.0;
    std::vector<double> distance;  // per class L1 distance
};

/// Runs both initial data on the same time grid and records the per-class L1 distance.
std::vector<LipschitzSample> lipschitz_experiment(const Scenario& scenario, const std::vector<Field2D>& rho_a,
                                                  const std::vector<Field2D>& rho_b, double horizon,
                                                  ConvolutionMode mode, CflPolicy policy);

struct ClassRecord {
    double mass = 0.0;
    double min = 0.0;
    double max = 0.0;
    double U = 1.0;
    double log_linf_bound = 0.0;
    double linf_ratio = 0.0;
    double bv = 0.0;
    double log_bv_bound = 0.0;
    double bv_ratio = 0.0;
    double bvxt = 0.0;
    double log_bvxt_bound = 0.0;
    double bvxt_ratio = 0.0;
    double entropy_residual = 0.0;
    double kernel_ratio = 0.0;
    std::string kernel_worst;
    long boundary_violations = 0;
    double obstacle_mass = 0.0;
    EdgeFlux outflux;
};

struct DiagnosticsRecord {
    double t = 0.0;
    long n = 0;
    double dt = 0.0;
    std::vector<ClassRecord> cls;
};

/// One JSON object on one line.
std::string to_ndjson(const DiagnosticsRecord& rec);

} // namespace nlcl
