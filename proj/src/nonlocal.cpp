#include "nlcl/nonlocal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace nlcl {

namespace {

void assemble(DynamicVelocity& out, Axis axis, const InterfaceField& g1, const InterfaceField& g2,
              const InterfaceField& s, double epsilon, const SmoothedHeaviside& h, double r_max)
{
    InterfaceField J(g1.grid(), axis);
    const InterfaceField& ga = axis == Axis::x ? g1 : g2;
    for (std::size_t k = 0; k < J.size(); ++k) {
        const double a = g1.values()[k], b = g2.values()[k];
        const double u = s.values()[k] / r_max;
        J.values()[k] = -epsilon * h(u) * ga.values()[k] / std::sqrt(1.0 + a * a + b * b);
    }
    (axis == Axis::x ? out.J1 : out.J2) = std::move(J);
}

double ratio_of(double observed, double bound)
{
    if (observed == 0.0)
        return 0.0;
    if (!(bound > 0.0))
        return std::numeric_limits<double>::infinity();
    return observed / bound;
}

} // namespace

Field2D augmented_density(const std::vector<Field2D>& rho, const std::vector<MaterialClass>& classes,
                          const Field2D& obstacle_mass)
{
    if (rho.size() != classes.size())
        throw StructuralError("class count does not match density count");
    Field2D r = obstacle_mass;
    for (std::size_t c = 0; c < rho.size(); ++c) {
        require_same_grid(rho[c].grid(), r.grid(), "augmented density");
        const double a = classes[c].alpha;
        auto& rv = r.values();
        const auto& v = rho[c].values();
        for (std::size_t k = 0; k < rv.size(); ++k)
            rv[k] += a * v[k];
    }
    return r;
}

StencilSet face_stencils(double sigma, double sigma_tilde, const Grid& grid, double cutoff, Placement placement)
{
    return {build_stencil(KernelKind::d1, sigma, grid, cutoff, placement),
            build_stencil(KernelKind::d2, sigma, grid, cutoff, placement),
            build_stencil(KernelKind::smoothing, sigma_tilde, grid, cutoff, placement)};
}

DynamicVelocity dynamic_velocity(const Field2D& r, double epsilon, const StencilSet& x_faces,
                                 const StencilSet& y_faces, const SmoothedHeaviside& h, double r_max)
{
    if (!(r_max > 0.0))
        throw ConfigError("r_max must be positive");
    DynamicVelocity out;
    assemble(out, Axis::x, convolve_at_interfaces(r, x_faces.d1), convolve_at_interfaces(r, x_faces.d2),
             convolve_at_interfaces(r, x_faces.smoothing), epsilon, h, r_max);
    assemble(out, Axis::y, convolve_at_interfaces(r, y_faces.d1), convolve_at_interfaces(r, y_faces.d2),
             convolve_at_interfaces(r, y_faces.smoothing), epsilon, h, r_max);
    return out;
}

double first_difference_factor(const KernelBoundInputs& in)
{
    return 2.0 * in.eta.hess + in.lipschitz * in.grad_tilde;
}

double second_difference_constant(const KernelBoundInputs& in, double r_l1)
{
    const double c1 = 2.0 * in.eta.third;
    const double c2 = 3.0 * in.eta.hess * in.eta.hess + 2.0 * in.lipschitz * in.grad_tilde * in.eta.hess;
    return c1 * r_l1 + c2 * r_l1 * r_l1;
}

double KernelBoundReport::max_ratio() const
{
    double m = 0.0;
    for (const auto& r : ratios)
        m = std::max(m, r.ratio);
    return m;
}

const BoundRatio& KernelBoundReport::worst() const
{
    return *std::max_element(ratios.begin(), ratios.end(),
                             [](const BoundRatio& a, const BoundRatio& b) { return a.ratio < b.ratio; });
}

KernelBoundReport verify_kernel_bounds(const DynamicVelocity& J, const Field2D& r, const KernelBoundInputs& in)
{
    const Grid& g = r.grid();
    const double rl1 = l1_norm(r);
    const double eps = in.epsilon;
    const double first = first_difference_factor(in) * eps * rl1;
    const double second = 2.0 * eps * second_difference_constant(in, rl1);

    KernelBoundReport rep;
    auto track = [](BoundRatio& br, double observed, double bound, int a, int b) {
        const double q = ratio_of(observed, bound);
        if (q > br.ratio) {
            br.ratio = q;
            br.a = a;
            br.b = b;
        }
    };

    BoundRatio sup{"sup"};
    for (const InterfaceField* f : {&J.J1, &J.J2})
        for (int b = 0; b < f->count_y(); ++b)
            for (int a = 0; a < f->count_x(); ++a)
                track(sup, std::abs((*f)(a, b)), eps, a, b);
    rep.ratios.push_back(sup);

    // First differences: along x (steps of dx) and along y (steps of dy) for both components.
    const double hx[2] = {g.dx, g.dy};
    const char* dnames[2][2] = {{"J1 x-difference", "J1 y-difference"}, {"J2 x-difference", "J2 y-difference"}};
    const char* snames[2][2] = {{"J1 xx-difference", "J1 yy-difference"}, {"J2 xx-difference", "J2 yy-difference"}};
    const char* mnames[2] = {"J1 mixed difference", "J2 mixed difference"};
    const InterfaceField* comps[2] = {&J.J1, &J.J2};
    for (int c = 0; c < 2; ++c) {
        const InterfaceField& f = *comps[c];
        const int nx = f.count_x(), ny = f.count_y();
        for (int dir = 0; dir < 2; ++dir) {
            BoundRatio d1{dnames[c][dir]}, d2{snames[c][dir]};
            const int ex = dir == 0 ? 1 : 0, ey = dir == 0 ? 0 : 1;
            const double h = hx[dir];
            for (int b = 0; b + ey < ny; ++b)
                for (int a = 0; a + ex < nx; ++a)
                    track(d1, std::abs(f(a + ex, b + ey) - f(a, b)), first * h, a, b);
            for (int b = 0; b + 2 * ey < ny; ++b)
                for (int a = 0; a + 2 * ex < nx; ++a)
                    track(d2, std::abs(f(a + 2 * ex, b + 2 * ey) - 2.0 * f(a + ex, b + ey) + f(a, b)),
                          second * h * h, a + ex, b + ey);
            rep.ratios.push_back(d1);
            rep.ratios.push_back(d2);
        }
        BoundRatio mx{mnames[c]};
        for (int b = 0; b + 1 < ny; ++b)
            for (int a = 0; a + 1 < nx; ++a)
                track(mx, std::abs(f(a + 1, b + 1) - f(a + 1, b) - f(a, b + 1) + f(a, b)), second * g.dx * g.dy, a, b);
        rep.ratios.push_back(mx);
    }
    return rep;
}

void require_kernel_bounds(const KernelBoundReport& rep, double tol)
{
    const BoundRatio& w = rep.worst();
    if (w.ratio > 1.0 + tol) {
        std::ostringstream os;
        os << "kernel bound violated: " << w.name << " ratio " << w.ratio << " at face (" << w.a << ", " << w.b << ")";
        throw DiagnosticFailure(os.str());
    }
}

NonlocalOperator::NonlocalOperator(const Scenario& scenario, ConvolutionMode mode)
    : scenario_(&scenario), heaviside_{scenario.heaviside_slope}, obstacle_(obstacle_density(scenario)),
      conv_(scenario.grid, mode)
{
    const Grid& g = scenario.grid;
    for (const auto& c : scenario.classes) {
        xs_.push_back(face_stencils(c.sigma, scenario.sigma_tilde, g, scenario.kernel_cutoff, Placement::x_face));
        ys_.push_back(face_stencils(c.sigma, scenario.sigma_tilde, g, scenario.kernel_cutoff, Placement::y_face));
        norms_.push_back(kernel_norms(c.sigma));
        ids_.push_back({conv_.add(xs_.back().d1), conv_.add(xs_.back().d2), conv_.add(ys_.back().d1),
                        conv_.add(ys_.back().d2)});
    }
    if (!xs_.empty()) {
        sx_ = conv_.add(xs_.front().smoothing);
        sy_ = conv_.add(ys_.front().smoothing);
    }
}

Field2D NonlocalOperator::augmented(const std::vector<Field2D>& rho) const
{
    return augmented_density(rho, scenario_->classes, obstacle_);
}

std::vector<DynamicVelocity> NonlocalOperator::evaluate(const std::vector<Field2D>& rho)
{
    return evaluate_augmented(augmented(rho));
}

std::vector<DynamicVelocity> NonlocalOperator::evaluate_augmented(const Field2D& r)
{
    ++evaluations_;
    std::vector<DynamicVelocity> out(scenario_->classes.size());
    if (out.empty())
        return out;
    conv_.load(r);
    const InterfaceField ux = conv_.apply(sx_);
    const InterfaceField uy = conv_.apply(sy_);
    for (std::size_t c = 0; c < out.size(); ++c) {
        const double eps = scenario_->classes[c].epsilon;
        assemble(out[c], Axis::x, conv_.apply(ids_[c].d1x), conv_.apply(ids_[c].d2x), ux, eps, heaviside_,
                 scenario_->r_max);
        assemble(out[c], Axis::y, conv_.apply(ids_[c].d1y), conv_.apply(ids_[c].d2y), uy, eps, heaviside_,
                 scenario_->r_max);
    }
    return out;
}

double NonlocalOperator::lipschitz() const { return lipschitz_constant(heaviside_) / scenario_->r_max; }

double NonlocalOperator::grad_tilde() const
{
    if (xs_.empty())
        return 0.0;
    const double scale = std::max(xs_.front().smoothing.mass_scale, ys_.front().smoothing.mass_scale);
    return scale * kernel_norms(scenario_->sigma_tilde).grad;
}

KernelBoundInputs NonlocalOperator::bound_inputs(std::size_t c) const
{
    return {scenario_->classes.at(c).epsilon, norms_.at(c), grad_tilde(), lipschitz()};
}

} // namespace nlcl
