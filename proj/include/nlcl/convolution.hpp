#pragma once

#include <memory>
#include <vector>

#include "nlcl/grid.hpp"
#include "nlcl/kernels.hpp"

namespace nlcl {

enum class ConvolutionMode { direct, fft };

/// Axis of the faces a face-placed stencil writes to.
Axis placement_axis(const KernelStencil& st);

/**
 * dx*dy * sum_{h,l} r_{h,l} K(p - center(h,l)) at every interface of the
 * stencil's axis, by direct summation. Cells outside the mesh contribute zero.
 */
InterfaceField convolve_at_interfaces(const Field2D& r, const KernelStencil& st);

/// Same quadrature evaluated at cell centers (center-placed stencil).
Field2D convolve_at_centers(const Field2D& r, const KernelStencil& st);

/**
 * Applies a fixed set of face-placed stencils to one density at a time.
 *
 * Register stencils with add(), then load() a density and apply() each id.
 * The fft mode transforms the zero-padded density once per load() and reuses
 * precomputed kernel spectra; the padding exceeds the linear-convolution
 * support so no wrap-around occurs.
 */
class InterfaceConvolver {
public:
    InterfaceConvolver(const Grid& grid, ConvolutionMode mode);
    ~InterfaceConvolver();
    InterfaceConvolver(InterfaceConvolver&&) noexcept;
    InterfaceConvolver& operator=(InterfaceConvolver&&) noexcept;
    InterfaceConvolver(const InterfaceConvolver&) = delete;
    InterfaceConvolver& operator=(const InterfaceConvolver&) = delete;

    int add(const KernelStencil& st);
    void load(const Field2D& r);
    InterfaceField apply(int id) const;

    ConvolutionMode mode() const { return mode_; }
    const Grid& grid() const { return grid_; }
    /// Padded transform extent (0 in direct mode or before the first load).
    int padded_x() const;
    int padded_y() const;

private:
    struct FftState;

    Grid grid_;
    ConvolutionMode mode_;
    std::vector<KernelStencil> stencils_;
    Field2D loaded_;
    std::unique_ptr<FftState> fft_;

    void plan();
};

} // namespace nlcl
