#include "nlcl/roe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace nlcl {

const char* to_string(CflMode m) { return m == CflMode::bv ? "bv" : "positivity"; }

EdgeFlux& EdgeFlux::operator+=(const EdgeFlux& o)
{
    left += o.left;
    right += o.right;
    bottom += o.bottom;
    top += o.top;
    return *this;
}

double cfl_dt(double v1_sup, double v2_sup, double eps_max, double lipschitz, double dx, double dy,
              const CflPolicy& policy)
{
    if (!(policy.safety > 0.0 && policy.safety <= 1.0))
        throw ConfigError("cfl_safety must lie in (0, 1]");
    if (!(eps_max >= 0.0) || !std::isfinite(v1_sup) || !std::isfinite(v2_sup) || !std::isfinite(eps_max))
        throw ConfigError("CFL inputs must be finite and nonnegative");
    double factor, e;
    if (policy.mode == CflMode::positivity) {
        factor = 2.0;
        e = eps_max;
    } else {
        factor = 3.0;
        e = eps_max * lipschitz;
    }
    double dt = std::numeric_limits<double>::infinity();
    const double den_x = factor * (e + std::abs(v1_sup));
    const double den_y = factor * (e + std::abs(v2_sup));
    if (den_x > 0.0)
        dt = std::min(dt, dx / den_x);
    if (den_y > 0.0)
        dt = std::min(dt, dy / den_y);
    if (!std::isfinite(dt))
        throw ConfigError("all transport speeds are zero; the CFL condition does not fix a time step");
    return policy.safety * dt;
}

EdgeStates x_face_states(const Field2D& rho, int k, int j, const BoundaryPolicy& bc)
{
    const int nx = rho.grid().nx;
    if (k > 0 && k < nx)
        return {rho(k - 1, j), rho(k, j), false};
    if (k == 0) {
        const double in = rho(0, j);
        switch (bc.left) {
        case EdgePolicy::zero:
            return {0.0, in, false};
        case EdgePolicy::outflow:
            return {in, in, false};
        case EdgePolicy::wall:
            return {0.0, in, true};
        }
    }
    const double in = rho(nx - 1, j);
    switch (bc.right) {
    case EdgePolicy::zero:
        return {in, 0.0, false};
    case EdgePolicy::outflow:
        return {in, in, false};
    case EdgePolicy::wall:
        break;
    }
    return {in, 0.0, true};
}

EdgeStates y_face_states(const Field2D& rho, int i, int k, const BoundaryPolicy& bc)
{
    const int ny = rho.grid().ny;
    if (k > 0 && k < ny)
        return {rho(i, k - 1), rho(i, k), false};
    if (k == 0) {
        const double in = rho(i, 0);
        switch (bc.bottom) {
        case EdgePolicy::zero:
            return {0.0, in, false};
        case EdgePolicy::outflow:
            return {in, in, false};
        case EdgePolicy::wall:
            return {0.0, in, true};
        }
    }
    const double in = rho(i, ny - 1);
    switch (bc.top) {
    case EdgePolicy::zero:
        return {in, 0.0, false};
    case EdgePolicy::outflow:
        return {in, in, false};
    case EdgePolicy::wall:
        break;
    }
    return {in, 0.0, true};
}

Field2D sweep_x(const Field2D& rho, const InterfaceField& v1, const InterfaceField& J1, double dt,
                const BoundaryPolicy& bc, EdgeFlux* flux, std::vector<double>* right_rows)
{
    const Grid& g = rho.grid();
    require_same_grid(g, v1.grid(), "x-sweep velocity");
    require_same_grid(g, J1.grid(), "x-sweep dynamic velocity");
    if (v1.axis() != Axis::x || J1.axis() != Axis::x)
        throw StructuralError("x-sweep needs x-face velocities");
    const double lam = dt / g.dx;
    Field2D out(g);
    std::vector<double> f(static_cast<std::size_t>(g.nx) + 1);
    if (right_rows)
        right_rows->assign(static_cast<std::size_t>(g.ny), 0.0);
    for (int j = 0; j < g.ny; ++j) {
        for (int k = 0; k <= g.nx; ++k) {
            const EdgeStates s = x_face_states(rho, k, j, bc);
            f[k] = s.closed ? 0.0 : flux_static(v1(k, j), s.u, s.w) + flux_nonlocal(s.u, s.w, J1(k, j));
        }
        for (int i = 0; i < g.nx; ++i)
            out(i, j) = rho(i, j) - lam * (f[i + 1] - f[i]);
        if (flux) {
            flux->left -= dt * g.dy * f[0];
            flux->right += dt * g.dy * f[g.nx];
        }
        if (right_rows)
            (*right_rows)[j] = dt * g.dy * f[g.nx];
    }
    return out;
}

Field2D sweep_y(const Field2D& rho, const InterfaceField& v2, const InterfaceField& J2, double dt,
                const BoundaryPolicy& bc, EdgeFlux* flux)
{
    const Grid& g = rho.grid();
    require_same_grid(g, v2.grid(), "y-sweep velocity");
    require_same_grid(g, J2.grid(), "y-sweep dynamic velocity");
    if (v2.axis() != Axis::y || J2.axis() != Axis::y)
        throw StructuralError("y-sweep needs y-face velocities");
    const double lam = dt / g.dy;
    Field2D out(g);
    std::vector<double> f(static_cast<std::size_t>(g.ny) + 1);
    for (int i = 0; i < g.nx; ++i) {
        for (int k = 0; k <= g.ny; ++k) {
            const EdgeStates s = y_face_states(rho, i, k, bc);
            f[k] = s.closed ? 0.0 : flux_static(v2(i, k), s.u, s.w) + flux_nonlocal(s.u, s.w, J2(i, k));
        }
        for (int j = 0; j < g.ny; ++j)
            out(i, j) = rho(i, j) - lam * (f[j + 1] - f[j]);
        if (flux) {
            flux->bottom -= dt * g.dx * f[0];
            flux->top += dt * g.dx * f[g.ny];
        }
    }
    return out;
}

void require_nonnegative(const Field2D& f, const char* stage, double tol)
{
    const Grid& g = f.grid();
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double v = f(i, j);
            if (!(v >= -tol)) {
                std::ostringstream os;
                os << stage << ": density " << v << " at cell (" << i << ", " << j << ")";
                throw StepRejected(os.str());
            }
        }
}

RoeStepper::RoeStepper(const Scenario& scenario, ConvolutionMode mode, CflPolicy policy)
    : scenario_(&scenario), policy_(policy), vel_(sample_static_velocity(scenario)), op_(scenario, mode)
{
    dt_cfl_ = cfl_dt(vel_.sup_v1, vel_.sup_v2, scenario.epsilon_max(), op_.lipschitz(), scenario.grid.dx,
                     scenario.grid.dy, policy_);
}

StepRecord RoeStepper::step(SchemeState& state, double dt)
{
    if (!(dt > 0.0) || dt > dt_cfl_ * (1.0 + 1e-12))
        throw StepRejected("time step outside (0, CFL limit]");
    const std::size_t nc = scenario_->classes.size();
    if (state.rho.size() != nc)
        throw StructuralError("state class count does not match scenario");

    StepRecord rec;
    rec.dt = dt;
    rec.before = state.rho;
    rec.r_omega = op_.augmented(state.rho);
    rec.J = op_.evaluate_augmented(rec.r_omega);
    rec.outflux.assign(nc, EdgeFlux{});
    rec.right_rows.assign(nc, {});

    const BoundaryPolicy& bc = scenario_->boundary;
    for (std::size_t c = 0; c < nc; ++c) {
        rec.half.push_back(sweep_x(state.rho[c], vel_.v1, rec.J[c].J1, dt, bc, &rec.outflux[c], &rec.right_rows[c]));
        require_nonnegative(rec.half.back(), "x-sweep");
    }
    for (std::size_t c = 0; c < nc; ++c) {
        Field2D next = sweep_y(rec.half[c], vel_.v2, rec.J[c].J2, dt, bc, &rec.outflux[c]);
        require_nonnegative(next, "y-sweep");
        if (!next.all_finite())
            throw StepRejected("non-finite density after y-sweep");
        state.rho[c] = std::move(next);
    }
    state.t += dt;
    state.n += 1;
    state.last_dt = dt;
    return rec;
}

StepRecord RoeStepper::step(SchemeState& state)
{
    const double remaining = scenario_->t_end - state.t;
    return step(state, std::min(dt_cfl_, remaining));
}

} // namespace nlcl
