#include "nlcl/convolution.hpp"

#include <algorithm>
#include <complex>
#include <cstring>

#include <fftw3.h>

namespace nlcl {

namespace {

int good_fft_size(int n)
{
    for (int m = std::max(n, 1);; ++m) {
        int k = m;
        for (int p : {2, 3, 5, 7})
            while (k % p == 0)
                k /= p;
        if (k == 1)
            return m;
    }
}

} // namespace

Axis placement_axis(const KernelStencil& st)
{
    if (st.placement == Placement::x_face)
        return Axis::x;
    if (st.placement == Placement::y_face)
        return Axis::y;
    throw StructuralError("stencil is not face-placed");
}

InterfaceField convolve_at_interfaces(const Field2D& r, const KernelStencil& st)
{
    const Grid& g = r.grid();
    if (st.dx != g.dx || st.dy != g.dy)
        throw StructuralError("stencil built for a different mesh spacing");
    InterfaceField out(g, placement_axis(st));
    const double area = g.cell_area();
    for (int b = 0; b < out.count_y(); ++b) {
        for (int a = 0; a < out.count_x(); ++a) {
            double acc = 0.0;
            for (int my = st.lo_y; my <= st.hi_y; ++my) {
                const int h = b - my;
                if (h < 0 || h >= g.ny)
                    continue;
                for (int mx = st.lo_x; mx <= st.hi_x; ++mx) {
                    const int k = a - mx;
                    if (k < 0 || k >= g.nx)
                        continue;
                    acc += st.weight(mx, my) * r(k, h);
                }
            }
            out(a, b) = area * acc;
        }
    }
    return out;
}

Field2D convolve_at_centers(const Field2D& r, const KernelStencil& st)
{
    const Grid& g = r.grid();
    if (st.placement != Placement::center)
        throw StructuralError("stencil is not center-placed");
    Field2D out(g, 0.0);
    const double area = g.cell_area();
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            double acc = 0.0;
            for (int my = st.lo_y; my <= st.hi_y; ++my) {
                const int h = j - my;
                if (h < 0 || h >= g.ny)
                    continue;
                for (int mx = st.lo_x; mx <= st.hi_x; ++mx) {
                    const int k = i - mx;
                    if (k < 0 || k >= g.nx)
                        continue;
                    acc += st.weight(mx, my) * r(k, h);
                }
            }
            out(i, j) = area * acc;
        }
    }
    return out;
}

struct InterfaceConvolver::FftState {
    int px = 0, py = 0, pcx = 0;
    double* real = nullptr;
    fftw_complex* spec = nullptr;
    fftw_complex* work = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;
    std::vector<std::vector<std::complex<double>>> kernels;

    ~FftState()
    {
        if (fwd)
            fftw_destroy_plan(fwd);
        if (inv)
            fftw_destroy_plan(inv);
        fftw_free(real);
        fftw_free(spec);
        fftw_free(work);
    }
    std::size_t nreal() const { return static_cast<std::size_t>(px) * py; }
    std::size_t ncomplex() const { return static_cast<std::size_t>(pcx) * py; }
};

InterfaceConvolver::InterfaceConvolver(const Grid& grid, ConvolutionMode mode) : grid_(grid), mode_(mode) {}
InterfaceConvolver::~InterfaceConvolver() = default;
InterfaceConvolver::InterfaceConvolver(InterfaceConvolver&&) noexcept = default;
InterfaceConvolver& InterfaceConvolver::operator=(InterfaceConvolver&&) noexcept = default;

int InterfaceConvolver::padded_x() const { return fft_ ? fft_->px : 0; }
int InterfaceConvolver::padded_y() const { return fft_ ? fft_->py : 0; }

int InterfaceConvolver::add(const KernelStencil& st)
{
    if (st.dx != grid_.dx || st.dy != grid_.dy)
        throw StructuralError("stencil built for a different mesh spacing");
    placement_axis(st);
    stencils_.push_back(st);
    fft_.reset();
    return static_cast<int>(stencils_.size()) - 1;
}

void InterfaceConvolver::plan()
{
    int wx = 1, wy = 1;
    for (const auto& st : stencils_) {
        wx = std::max(wx, st.width());
        wy = std::max(wy, st.height());
    }
    auto f = std::make_unique<FftState>();
    f->px = good_fft_size(grid_.nx + wx);
    f->py = good_fft_size(grid_.ny + wy);
    f->pcx = f->px / 2 + 1;
    f->real = fftw_alloc_real(f->nreal());
    f->spec = fftw_alloc_complex(f->ncomplex());
    f->work = fftw_alloc_complex(f->ncomplex());
    f->fwd = fftw_plan_dft_r2c_2d(f->py, f->px, f->real, f->spec, FFTW_ESTIMATE);
    f->inv = fftw_plan_dft_c2r_2d(f->py, f->px, f->work, f->real, FFTW_ESTIMATE);

    for (const auto& st : stencils_) {
        std::fill(f->real, f->real + f->nreal(), 0.0);
        for (int my = st.lo_y; my <= st.hi_y; ++my)
            for (int mx = st.lo_x; mx <= st.hi_x; ++mx)
                f->real[static_cast<std::size_t>(my - st.lo_y) * f->px + (mx - st.lo_x)] = st.weight(mx, my);
        fftw_execute(f->fwd);
        std::vector<std::complex<double>> k(f->ncomplex());
        std::memcpy(static_cast<void*>(k.data()), f->spec, sizeof(fftw_complex) * f->ncomplex());
        f->kernels.push_back(std::move(k));
    }
    fft_ = std::move(f);
}

void InterfaceConvolver::load(const Field2D& r)
{
    require_same_grid(r.grid(), grid_, "convolver input");
    loaded_ = r;
    if (mode_ != ConvolutionMode::fft)
        return;
    if (!fft_)
        plan();
    FftState& f = *fft_;
    std::fill(f.real, f.real + f.nreal(), 0.0);
    for (int j = 0; j < grid_.ny; ++j)
        for (int i = 0; i < grid_.nx; ++i)
            f.real[static_cast<std::size_t>(j) * f.px + i] = r(i, j);
    fftw_execute(f.fwd);
}

InterfaceField InterfaceConvolver::apply(int id) const
{
    if (id < 0 || id >= static_cast<int>(stencils_.size()))
        throw IndexError("unknown stencil id");
    const KernelStencil& st = stencils_[static_cast<std::size_t>(id)];
    if (loaded_.size() == 0)
        throw StructuralError("convolver has no density loaded");
    if (mode_ == ConvolutionMode::direct)
        return convolve_at_interfaces(loaded_, st);

    FftState& f = *fft_;
    const auto* rs = reinterpret_cast<const std::complex<double>*>(f.spec);
    auto* w = reinterpret_cast<std::complex<double>*>(f.work);
    const auto& ks = f.kernels[static_cast<std::size_t>(id)];
    for (std::size_t k = 0; k < f.ncomplex(); ++k)
        w[k] = rs[k] * ks[k];
    fftw_execute(f.inv);

    InterfaceField out(grid_, placement_axis(st));
    const double scale = grid_.cell_area() / static_cast<double>(f.nreal());
    for (int b = 0; b < out.count_y(); ++b)
        for (int a = 0; a < out.count_x(); ++a)
            out(a, b) = scale * f.real[static_cast<std::size_t>(b - st.lo_y) * f.px + (a - st.lo_x)];
    return out;
}

} // namespace nlcl
