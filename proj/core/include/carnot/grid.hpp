#pragma once

#include <carnot/algebra.hpp>
#include <carnot/group.hpp>
#include <carnot/opcalc.hpp>
#include <carnot/polynomial.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <vector>

namespace carnot {

using Field = std::vector<double>;

/// Uniform tensor grid on a centered box [-L_k, L_k]^n with row-major
/// indexing (last axis fastest). Node k_i sits at lo + i*h; integration uses
/// the constant Haar weight prod_k h_k, exact enough for fields vanishing
/// near the boundary.
struct Grid {
    std::shared_ptr<const StratifiedLieAlgebra> algebra;
    NormConfig norm;
    std::vector<double> lo, hi, h;
    std::vector<int> shape;

    int dim() const { return static_cast<int>(shape.size()); }
    std::size_t size() const;
    std::size_t index(const std::vector<int>& idx) const;
    void unindex(std::size_t flat, std::vector<int>& idx) const;
    double coord(int axis, int i) const { return lo[axis] + h[axis] * i; }
    std::vector<double> node(const std::vector<int>& idx) const;
    void node(const std::vector<int>& idx, std::vector<double>& out) const;
    double cell_volume() const;
    bool same_shape(const Grid& o) const;
};

/// Box large enough that the closed gauge ball B(e, radius) fits with a
/// margin of margin_cells grid cells on every side. Per-layer half-widths
/// come from the quasinorm: |x^{(j)}|_2 <= (radius/eps_j)^j.
Grid make_grid(const StratifiedLieAlgebra& g, const NormConfig& norm, double radius,
               int nodes_per_axis, double margin_cells = 3.0);

/// Componentwise scalar fields representing coordinates of a form in some
/// fixed basis; which basis is the caller's contract.
struct GridForm {
    Grid grid;
    int degree = 0;
    std::vector<Field> comp;
};

GridForm zero_form(const Grid& grid, int degree, int ncomp);

Field eval_on_grid(const Grid& grid, const Polynomial& p);
/// Multilinear interpolation; zero outside the box.
double sample_multilinear(const Grid& grid, const Field& f, const std::vector<double>& x);

double integrate(const Grid& grid, const Field& f);
/// L^p norm; ball_radius > 0 restricts to the gauge ball d(e,x) <= ball_radius.
double lp_norm(const Grid& grid, const Field& f, double p, double ball_radius = 0.0);
double linf_norm(const Grid& grid, const Field& f, double ball_radius = 0.0);
/// Pointwise l2 magnitude across components.
Field magnitude_field(const GridForm& f);
double lp_norm(const GridForm& f, double p, double ball_radius = 0.0);

/// sup_t t |{|u| > t}|^{1/r}.
double weak_mr_norm(const Grid& grid, const Field& f, double r);
/// sup over superlevel sets F of int_F |u| / |F|^{1/r'}; a lower bound for
/// the M^r norm that the weak norm is sandwiched against.
double m_norm_estimate(const Grid& grid, const Field& f, double r);

/// Folland-Stein norm sum_{d(I)<=m} ||X^I u||_p with word weights given by
/// the layer of each generator.
double fs_norm(const Grid& grid, const Field& f, int m, double p);

struct SupportBox {
    bool empty = true;
    std::vector<int> lo, hi;  // inclusive node ranges per axis
};

SupportBox support_box(const Grid& grid, const Field& f, double abs_tol);
SupportBox support_box(const GridForm& f, double rel_tol);
SupportBox box_union(const SupportBox& a, const SupportBox& b);
SupportBox expand_box(const Grid& grid, const SupportBox& b, int cells);
SupportBox full_box(const Grid& grid);
std::size_t box_size(const SupportBox& b);
/// Largest gauge norm over the box (attained at the per-axis worst corner).
double max_gauge_norm_in_box(const Grid& grid, const SupportBox& b);

/// Partial derivative along a coordinate axis, centered O(h^2) with
/// one-sided second-order stencils at the box faces.
Field coordinate_derivative(const Grid& grid, const Field& f, int axis, int threads = 1);
/// Left-invariant frame field X_j = sum_k a_jk(x) d_k applied on the grid.
Field apply_generator(const Grid& grid, const std::vector<std::vector<Polynomial>>& frame,
                      int j, const Field& f, int threads = 1);
Field apply_operator(const Grid& grid, const std::vector<std::vector<Polynomial>>& frame,
                     const OperatorPoly& op, const Field& f, int threads = 1);
std::vector<Field> apply_operator(const Grid& grid,
                                  const std::vector<std::vector<Polynomial>>& frame,
                                  const FormOperator& op, const std::vector<Field>& comps,
                                  int threads = 1);
/// sum_j X_j F_j over the first-layer generators.
Field horizontal_divergence(const Grid& grid,
                            const std::vector<std::vector<Polynomial>>& frame,
                            const std::vector<Field>& comps, int threads = 1);

std::vector<std::vector<double>> ratmat_to_double(const RatMat& a);
/// Pointwise constant matrix applied across component fields.
std::vector<Field> apply_matrix(const std::vector<std::vector<double>>& a,
                                const std::vector<Field>& comps);

/// (1 - v^2)^3 with v^2 = sum_k ((x_k - c_k)/w_k)^2, zero outside v >= 1.
Field bump_field(const Grid& grid, const std::vector<double>& center,
                 const std::vector<double>& widths, double amplitude = 1.0);

struct BumpFamilyOptions {
    int bumps = 5;
    double support_radius = 0.8;    // gauge ball containing every bump
    double min_width_cells = 6.0;   // per-axis floor in units of h
    double max_width_frac = 0.35;   // cap relative to support_radius box
};

struct BumpSpec {
    std::vector<double> center, widths;
    double amplitude = 1.0;
};

/// Random bumps with supports inside the gauge ball of opt.support_radius.
std::vector<BumpSpec> draw_bump_family(const Grid& grid, std::uint64_t seed,
                                       const BumpFamilyOptions& opt = {});

/// Sum of random bumps minus a multiple of a fixed corrector bump chosen so
/// the discrete integral vanishes identically.
Field random_zero_average_field(const Grid& grid, std::uint64_t seed,
                                const BumpFamilyOptions& opt = {});
Field random_bump_sum(const Grid& grid, std::uint64_t seed, const BumpFamilyOptions& opt = {});

/// f <- f - (int f / |B|) 1_B on the gauge ball of the given radius, allowed
/// only while |int f| <= rel_tol * ||f||_1; larger drift is an error.
void project_zero_average(const Grid& grid, Field& f, double ball_radius,
                          double rel_tol = 1e-6);

}  // namespace carnot
