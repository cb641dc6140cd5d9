#include "nlcl/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

namespace nlcl {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

double safe_log(double x) { return x > 0.0 ? std::log(x) : neg_inf; }

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

double max_abs(const Field2D& f)
{
    double m = 0.0;
    for (double v : f.values())
        m = std::max(m, std::abs(v));
    return m;
}

// Entropy flux through one face: both face states lifted by kappa minus both lowered.
double entropy_flux(const EdgeStates& s, double v, double J, double kappa)
{
    if (s.closed)
        return 0.0;
    const double uh = std::max(s.u, kappa), wh = std::max(s.w, kappa);
    const double ul = std::min(s.u, kappa), wl = std::min(s.w, kappa);
    return flux_static(v, uh, wh) + flux_nonlocal(uh, wh, J) - flux_static(v, ul, wl) - flux_nonlocal(ul, wl, J);
}

double json_number(double x)
{
    // NDJSON consumers choke on inf/nan; the log-bounds can be -inf for zero data.
    if (std::isfinite(x))
        return x;
    return x > 0 ? std::numeric_limits<double>::max() : -std::numeric_limits<double>::max();
}

} // namespace

double log_add_exp(double a, double b)
{
    if (a == neg_inf)
        return b;
    if (b == neg_inf)
        return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(-std::abs(a - b)));
}

double bound_ratio(double observed, double log_bound)
{
    if (observed == 0.0)
        return 0.0;
    if (log_bound == neg_inf)
        return std::numeric_limits<double>::infinity();
    return std::exp(std::log(std::abs(observed)) - log_bound);
}

double BoundConstants::log_linf_bound(std::size_t c, double t) const
{
    const ClassConstants& k = cls.at(c);
    return safe_log(k.rho_linf) + k.C_inf * t;
}

double BoundConstants::log_Cx(std::size_t c, double t) const
{
    const ClassConstants& k = cls.at(c);
    // e^{2tK1} TV0 + (2K2/K1)(e^{2tK1} - 1) = e^{2tK1} (TV0 + 2K2 (1 - e^{-2tK1}) / K1)
    const double q = k.K1 > 0.0 ? -std::expm1(-2.0 * t * k.K1) / k.K1 : 2.0 * t;
    return 2.0 * t * k.K1 + safe_log(k.tv0 + 2.0 * k.K2 * q);
}

double BoundConstants::log_Ct(std::size_t c, double t) const
{
    const ClassConstants& k = cls.at(c);
    return log_add_exp(safe_log(2.0 * (v_sup + k.epsilon)) + log_Cx(c, t), safe_log(k.B));
}

double BoundConstants::log_Cxt(std::size_t c, double t) const
{
    return safe_log(t) + log_add_exp(log_Cx(c, t), std::log(2.0) + log_Ct(c, t));
}

double BoundConstants::Cx(std::size_t c, double t) const { return std::exp(log_Cx(c, t)); }

BoundConstants compute_constants(const Scenario& scenario, const StaticVelocityField& v, const NonlocalOperator& op,
                                 const std::vector<Field2D>& rho0)
{
    if (rho0.size() != scenario.classes.size())
        throw StructuralError("initial state class count does not match scenario");
    BoundConstants k;
    k.L_H = op.lipschitz();
    k.grad_tilde = op.grad_tilde();
    k.r_l1 = l1_norm(op.augmented(rho0));
    k.v_sup = v.sup;
    k.v_grad = v.grad;
    k.v_hess = v.hess;
    k.d1v1 = v.d1v1;
    k.d2v2 = v.d2v2;
    for (std::size_t c = 0; c < rho0.size(); ++c) {
        ClassConstants cc;
        cc.epsilon = scenario.classes[c].epsilon;
        cc.eta = kernel_norms(scenario.classes[c].sigma);
        cc.A = 2.0 * cc.eta.hess + k.L_H * k.grad_tilde;
        const double eAr = cc.epsilon * cc.A * k.r_l1;
        cc.rho_l1 = l1_norm(rho0[c]);
        cc.rho_linf = max_abs(rho0[c]);
        cc.tv0 = bv_seminorm(rho0[c]);
        cc.C_inf = k.d1v1 + k.d2v2 + 2.0 * eAr;
        cc.K1 = 6.0 * (k.v_grad + eAr);
        cc.c1 = 2.0 * cc.eta.third;
        cc.c2 = 3.0 * cc.eta.hess * cc.eta.hess + 2.0 * k.L_H * k.grad_tilde * cc.eta.hess;
        cc.C_c = cc.c1 * k.r_l1 + cc.c2 * k.r_l1 * k.r_l1;
        cc.K2 = (4.0 * cc.epsilon * cc.C_c + 3.0 * k.v_hess) * cc.rho_l1;
        cc.B = (k.v_grad + eAr) * cc.rho_l1;
        k.cls.push_back(cc);
    }
    return k;
}

CheckResult linf_check(const Field2D& rho, const BoundConstants& k, std::size_t c, double t, double tol)
{
    CheckResult r;
    r.ratio = bound_ratio(max_abs(rho), k.log_linf_bound(c, t));
    r.pass = r.ratio <= 1.0 + tol;
    return r;
}

double bv_seminorm(const Field2D& rho)
{
    const Grid& g = rho.grid();
    auto at = [&](int i, int j) { return g.contains_cell(i, j) ? rho(i, j) : 0.0; };
    double sx = 0.0, sy = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = -1; i < g.nx; ++i)
            sx += std::abs(at(i + 1, j) - at(i, j));
    for (int j = -1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            sy += std::abs(at(i, j + 1) - at(i, j));
    return g.dy * sx + g.dx * sy;
}

CheckResult bv_check(const Field2D& rho, const BoundConstants& k, std::size_t c, double t, double tol)
{
    CheckResult r;
    r.ratio = bound_ratio(bv_seminorm(rho), k.log_Cx(c, t));
    r.pass = r.ratio <= 1.0 + tol;
    return r;
}

void SpaceTimeBv::add(const Field2D& before, const Field2D& after, double dt)
{
    require_same_grid(before.grid(), after.grid(), "space-time BV");
    sum_ += dt * bv_seminorm(before) + l1_distance(after, before);
}

CheckResult SpaceTimeBv::check(const BoundConstants& k, std::size_t c, double t, double tol) const
{
    CheckResult r;
    r.ratio = bound_ratio(sum_, k.log_Cxt(c, t));
    r.pass = r.ratio <= 1.0 + tol;
    return r;
}

std::vector<double> default_kappas(double max_rho, double r_max)
{
    std::vector<double> k{0.0, r_max};
    if (max_rho > 0.0) {
        const double lo = std::log(1e-6 * max_rho), hi = std::log(max_rho);
        for (int m = 0; m < 15; ++m)
            k.push_back(std::exp(lo + (hi - lo) * m / 14.0));
    }
    return k;
}

EntropyResult entropy_residual(const Field2D& before, const Field2D& mid, const Field2D& after,
                               const DynamicVelocity& J, const StaticVelocityField& v, double dt,
                               const BoundaryPolicy& bc, const std::vector<double>& kappas, bool local_kappas)
{
    const Grid& g = before.grid();
    require_same_grid(g, mid.grid(), "entropy check");
    require_same_grid(g, after.grid(), "entropy check");
    const double lx = dt / g.dx, ly = dt / g.dy;
    EntropyResult res;
    res.max_residual = -std::numeric_limits<double>::infinity();

    std::vector<double> ks;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const EdgeStates xl = x_face_states(before, i, j, bc), xr = x_face_states(before, i + 1, j, bc);
            const EdgeStates yb = y_face_states(mid, i, j, bc), yt = y_face_states(mid, i, j + 1, bc);
            // A closed face carries neither static nor dynamic speed.
            const double v1l = xl.closed ? 0.0 : v.v1(i, j), v1r = xr.closed ? 0.0 : v.v1(i + 1, j);
            const double J1l = xl.closed ? 0.0 : J.J1(i, j), J1r = xr.closed ? 0.0 : J.J1(i + 1, j);
            const double v2b = yb.closed ? 0.0 : v.v2(i, j), v2t = yt.closed ? 0.0 : v.v2(i, j + 1);
            const double J2b = yb.closed ? 0.0 : J.J2(i, j), J2t = yt.closed ? 0.0 : J.J2(i, j + 1);

            double scale = 0.0;
            for (const Field2D* f : {&before, &mid, &after})
                for (auto [di, dj] : {std::pair{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}})
                    if (g.contains_cell(i + di, j + dj))
                        scale = std::max(scale, std::abs((*f)(i + di, j + dj)));

            ks = kappas;
            if (local_kappas)
                for (const Field2D* f : {&before, &mid, &after})
                    for (auto [di, dj] : {std::pair{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}})
                        if (g.contains_cell(i + di, j + dj))
                            ks.push_back((*f)(i + di, j + dj));

            for (double kappa : ks) {
                const double lhs =
                    std::abs(after(i, j) - kappa) - std::abs(before(i, j) - kappa) +
                    lx * (entropy_flux(xr, v1r, J1r, kappa) - entropy_flux(xl, v1l, J1l, kappa)) +
                    lx * sgn(mid(i, j) - kappa) * (v1r - v1l) * kappa +
                    lx * sgn(mid(i, j) - kappa) * (J1r - J1l) * kappa +
                    ly * (entropy_flux(yt, v2t, J2t, kappa) - entropy_flux(yb, v2b, J2b, kappa)) +
                    ly * sgn(after(i, j) - kappa) * (v2t - v2b) * kappa +
                    ly * sgn(after(i, j) - kappa) * (J2t - J2b) * kappa;
                const double s = std::max(scale, std::abs(kappa));
                const double scaled = s > 0.0 ? lhs / s : lhs;
                if (scaled > res.max_residual) {
                    res.max_residual = scaled;
                    res.i = i;
                    res.j = j;
                    res.kappa = kappa;
                }
            }
        }
    }
    return res;
}

InvarianceResult boundary_invariance_check(const Field2D& rho, const std::vector<char>& obstacle_cells,
                                           const StaticVelocityField& v, const DynamicVelocity& J)
{
    const Grid& g = rho.grid();
    if (obstacle_cells.size() != g.cell_count())
        throw StructuralError("obstacle mask size does not match grid");
    InvarianceResult out;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (obstacle_cells[g.index(i, j)])
                out.obstacle_mass += g.cell_area() * rho(i, j);

    // x-faces between cells k-1 and k.
    for (int j = 0; j < g.ny; ++j) {
        for (int k = 1; k < g.nx; ++k) {
            const bool l = obstacle_cells[g.index(k - 1, j)], r = obstacle_cells[g.index(k, j)];
            if (l == r)
                continue;
            ++out.faces;
            const double un = v.v1(k, j) + J.J1(k, j);
            // Outward normal of the free region points toward the obstacle cell.
            const double outward = r ? un : -un;
            if (outward > 0.0)
                ++out.violations;
        }
    }
    for (int k = 1; k < g.ny; ++k) {
        for (int i = 0; i < g.nx; ++i) {
            const bool b = obstacle_cells[g.index(i, k - 1)], t = obstacle_cells[g.index(i, k)];
            if (b == t)
                continue;
            ++out.faces;
            const double un = v.v2(i, k) + J.J2(i, k);
            const double outward = t ? un : -un;
            if (outward > 0.0)
                ++out.violations;
        }
    }
    return out;
}

OutflowSeries::OutflowSeries(const std::vector<Field2D>& rho0)
{
    for (const auto& f : rho0) {
        const double m = total_mass(f);
        if (!(m > 0.0))
            throw DiagnosticFailure("outflow series undefined: initial class mass is zero");
        m0_.push_back(m);
    }
}

std::vector<double> OutflowSeries::current(const std::vector<Field2D>& rho) const
{
    std::vector<double> u;
    for (std::size_t c = 0; c < rho.size(); ++c)
        u.push_back(total_mass(rho[c]) / m0_.at(c));
    return u;
}

void OutflowSeries::record(double t, const std::vector<Field2D>& rho)
{
    t_.push_back(t);
    u_.push_back(current(rho));
}

std::vector<LipschitzSample> lipschitz_experiment(const Scenario& scenario, const std::vector<Field2D>& rho_a,
                                                  const std::vector<Field2D>& rho_b, double horizon,
                                                  ConvolutionMode mode, CflPolicy policy)
{
    RoeStepper sa(scenario, mode, policy), sb(scenario, mode, policy);
    SchemeState a{0.0, 0, rho_a, 0.0}, b{0.0, 0, rho_b, 0.0};
    auto sample = [&]() {
        LipschitzSample s;
        s.t = a.t;
        for (std::size_t c = 0; c < a.rho.size(); ++c)
            s.distance.push_back(l1_distance(a.rho[c], b.rho[c]));
        return s;
    };
    std::vector<LipschitzSample> out{sample()};
    const double dt = sa.cfl_step();
    while (a.t < horizon * (1.0 - 1e-12)) {
        const double h = std::min(dt, horizon - a.t);
        sa.step(a, h);
        sb.step(b, h);
        out.push_back(sample());
    }
    return out;
}

std::string to_ndjson(const DiagnosticsRecord& rec)
{
    using nlohmann::json;
    json j;
    j["t"] = rec.t;
    j["n"] = rec.n;
    j["dt"] = rec.dt;
    json classes = json::array();
    for (std::size_t c = 0; c < rec.cls.size(); ++c) {
        const ClassRecord& r = rec.cls[c];
        classes.push_back({{"class", c + 1},
                           {"mass", r.mass},
                           {"min", r.min},
                           {"max", r.max},
                           {"U", r.U},
                           {"log_linf_bound", json_number(r.log_linf_bound)},
                           {"linf_ratio", json_number(r.linf_ratio)},
                           {"bv", r.bv},
                           {"log_bv_bound", json_number(r.log_bv_bound)},
                           {"bv_ratio", json_number(r.bv_ratio)},
                           {"bvxt", r.bvxt},
                           {"log_bvxt_bound", json_number(r.log_bvxt_bound)},
                           {"bvxt_ratio", json_number(r.bvxt_ratio)},
                           {"entropy_residual", json_number(r.entropy_residual)},
                           {"kernel_ratio", json_number(r.kernel_ratio)},
                           {"kernel_worst", r.kernel_worst},
                           {"boundary_violations", r.boundary_violations},
                           {"obstacle_mass", r.obstacle_mass},
                           {"outflux",
                            {{"left", r.outflux.left},
                             {"right", r.outflux.right},
                             {"bottom", r.outflux.bottom},
                             {"top", r.outflux.top}}}});
    }
    j["classes"] = classes;
    return j.dump();
}

} // namespace nlcl
