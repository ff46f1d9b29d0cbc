#pragma once

#include <carnot/grid.hpp>

#include <array>
#include <functional>

namespace carnot {

/// Kernel on the first Heisenberg group, evaluated at group offsets
/// z = y^{-1} x = (d1, d2, w). Kernels with a singularity at the origin must
/// carry an excision hole; the removed mass is restored through the moments
/// c0 = int_{N<=hole} K and c1_k = int_{N<=hole} z_k K via a first-order
/// expansion of f in the frame derivatives.
struct KernelComponent {
    std::function<double(double, double, double)> eval;
    double support_N = 0.0;  // gauge support radius, 0 for global kernels
    bool singular_origin = false;
    double hole_N = 0.0;
    double c0 = 0.0;
    std::array<double, 3> c1{0.0, 0.0, 0.0};
};

/// Rejects algebras whose frame differs from X1 = d1 - (y/2) d3,
/// X2 = d2 + (x/2) d3, X3 = d3; the twist handling assumes it.
void require_standard_h1_frame(const StratifiedLieAlgebra& g);

struct ConvolveOptions {
    int threads = 1;
    // Refinement of the per-column tent-weight tables; the default resolves
    // kernels whose t-features are far below the grid spacing.
    double table_resolution = 64.0;
    // Columns closer than this (in units of max(h1,h2)) are split 3x3 in
    // plane to follow the in-plane singularity.
    double subdivide_radius_cells = 4.0;
    // Output restriction; nullptr derives a box from the kernel support, or
    // the full grid for global kernels.
    const SupportBox* output_box = nullptr;
};

/// Group convolution (f * K)(x) = int f(y) K(y^{-1} x) dy on a grid over the
/// first Heisenberg group. Exact in the twist variable up to linear
/// interpolation of f along t: each column (d1, d2) carries a table
/// W(s) = int K(d1, d2, w) tent((s - w)/h3) dw so the inner sum reduces to
/// sum_j f_j W((i3 - j3) h3 + tau) with tau = (x2 d1 - x1 d2)/2.
Field group_convolve(const Grid& grid, const Field& f, const KernelComponent& K,
                     const ConvolveOptions& opt = {});

}  // namespace carnot
