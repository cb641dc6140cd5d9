#pragma once

#include <vector>

#include "nlcl/nonlocal.hpp"
#include "nlcl/scenario.hpp"

namespace nlcl {

/// v u + min(0, v)(w - u), written as the upwind select.
inline double flux_static(double v, double u, double w) { return v >= 0.0 ? v * u : v * w; }

/// J u + min(0, J)(w - u)
inline double flux_nonlocal(double u, double w, double J) { return J >= 0.0 ? J * u : J * w; }

enum class CflMode { positivity, bv };

struct CflPolicy {
    CflMode mode = CflMode::positivity;
    double safety = 0.9;
};

const char* to_string(CflMode m);

/**
 * positivity: lambda_axis <= 1 / (2 (eps_max + |v_axis|))
 * bv:         lambda_axis <= 1 / (3 (eps_max L_H + |v_axis|))
 * Axes whose denominator vanishes do not constrain dt; ConfigError if none does.
 */
double cfl_dt(double v1_sup, double v2_sup, double eps_max, double lipschitz, double dx, double dy,
              const CflPolicy& policy);

/// Mass leaving through each rectangle edge (negative for inflow).
struct EdgeFlux {
    double left = 0.0, right = 0.0, bottom = 0.0, top = 0.0;
    double total() const { return left + right + bottom + top; }
    EdgeFlux& operator+=(const EdgeFlux& o);
};

/**
 * Face fluxes of one sweep, upwinded with the edge policy: zero ghosts,
 * zero-gradient ghosts, or no flux at walls. Used by the sweeps and by the
 * entropy check so both see the same boundary.
 */
struct EdgeStates {
    double u = 0.0, w = 0.0;
    bool closed = false;
};

/**
 * rho - dt/dx [V1 + F]_{i-1/2}^{i+1/2} along each row. Optional outputs:
 * per-edge outflux and right-edge outflow per row.
 */
Field2D sweep_x(const Field2D& rho, const InterfaceField& v1, const InterfaceField& J1, double dt,
                const BoundaryPolicy& bc, EdgeFlux* flux = nullptr, std::vector<double>* right_rows = nullptr);

Field2D sweep_y(const Field2D& rho, const InterfaceField& v2, const InterfaceField& J2, double dt,
                const BoundaryPolicy& bc, EdgeFlux* flux = nullptr);

/// Upwind states at x-face k of row j (or y-face k of column i) under the edge policy.
EdgeStates x_face_states(const Field2D& rho, int k, int j, const BoundaryPolicy& bc);
EdgeStates y_face_states(const Field2D& rho, int i, int k, const BoundaryPolicy& bc);

/// Throws StepRejected if any value is below -tol.
void require_nonnegative(const Field2D& f, const char* stage, double tol = 1e-14);

struct SchemeState {
    double t = 0.0;
    long n = 0;
    std::vector<Field2D> rho;
    double last_dt = 0.0;
};

struct StepRecord {
    std::vector<Field2D> before;
    std::vector<Field2D> half;
    std::vector<DynamicVelocity> J;
    Field2D r_omega;
    std::vector<EdgeFlux> outflux;                 // per class
    std::vector<std::vector<double>> right_rows;   // per class, per row
    double dt = 0.0;
};

/**
 * Algorithm driver: r_Omega and every J are computed once from rho^n, then
 * all x-sweeps, then all y-sweeps with the same J.
 */
class RoeStepper {
public:
    RoeStepper(const Scenario& scenario, ConvolutionMode mode, CflPolicy policy);

    double cfl_step() const { return dt_cfl_; }
    const StaticVelocityField& velocity() const { return vel_; }
    NonlocalOperator& nonlocal() { return op_; }
    const NonlocalOperator& nonlocal() const { return op_; }
    const Scenario& scenario() const { return *scenario_; }
    const CflPolicy& policy() const { return policy_; }

    /// Advance by dt (at most the CFL step). Returns the intermediate data of the step.
    StepRecord step(SchemeState& state, double dt);
    /// Advance by min(CFL step, t_end - t).
    StepRecord step(SchemeState& state);

private:
    const Scenario* scenario_;
    CflPolicy policy_;
    StaticVelocityField vel_;
    NonlocalOperator op_;
    double dt_cfl_ = 0.0;
};

} // namespace nlcl
