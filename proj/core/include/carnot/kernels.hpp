#pragma once

#include <carnot/convolution.hpp>
#include <carnot/grid.hpp>
#include <carnot/polynomial.hpp>
#include <carnot/rumin.hpp>

#include <cstdint>
#include <map>
#include <vector>

namespace carnot {

/// Finite sum of terms P(x) rho(x)^{s} with polynomial P and quarter-integer
/// exponent s = four_s/4. Closed under coordinate and frame derivatives since
/// the partials of rho are polynomials. With rho weighted-homogeneous of
/// degree w the term P rho^{s} is homogeneous of degree deg(P) + w s.
struct GaugeExpr {
    Polynomial rho;
    std::map<int, Polynomial> parts;  // four_s -> coefficient polynomial

    static GaugeExpr zero(const Polynomial& rho);
    static GaugeExpr power(const Polynomial& rho, int four_s, const Polynomial& coeff);

    GaugeExpr& add(int four_s, const Polynomial& coeff);
    GaugeExpr operator+(const GaugeExpr& o) const;
    GaugeExpr operator-(const GaugeExpr& o) const;
    GaugeExpr operator-() const;
    GaugeExpr scaled(const Rational& c) const;
    GaugeExpr times(const Polynomial& p) const;
    GaugeExpr derivative(int axis) const;
    GaugeExpr frame_derivative(const std::vector<std::vector<Polynomial>>& frame, int j) const;
    bool is_zero() const;
    double eval(const std::vector<double>& x) const;
};

GaugeExpr gauge_apply(const std::vector<std::vector<Polynomial>>& frame,
                      const OperatorPoly& op, const GaugeExpr& e);

/// Common homogeneity degree of all terms under the weighted dilations;
/// throws IdentityError when the expression is not homogeneous.
int gauge_homogeneity(const GaugeExpr& e, const std::vector<int>& weights);

/// Flattened evaluator for three-variable gauge expressions.
struct CompiledGauge {
    struct Mono {
        double c;
        int ex, ey, et;
    };
    std::vector<Mono> rho_terms;
    struct Part {
        double exponent;  // power of rho
        std::vector<Mono> terms;
    };
    std::vector<Part> parts;

    double rho_at(double x, double y, double t) const;
    double operator()(double x, double y, double t) const;
};

CompiledGauge compile_gauge(const GaugeExpr& e);

/// C^2 cutoff in u = N/R: identically 1 for u <= 1/2, identically 0 for
/// u >= 1, quintic smoothstep between.
struct CutoffProfile {
    double R = 1.0;
    double value(double N) const;
    double slope(double N) const;  // derivative in N
};

/// Euclidean bump amp (1 - |x-c|^2/r^2)^3 normalized to unit mass in R^3.
struct RadialBump {
    std::vector<double> center;
    double radius = 1.0;
    double amplitude = 1.0;

    static RadialBump unit_mass(std::vector<double> center, double radius);
    double value(const std::vector<double>& x) const;
};

/// Moments of a homogeneous integrand over the gauge ball N <= eta, computed
/// by exact radial integration and quadrature over the gauge sphere.
struct BallMoments {
    double c0 = 0.0;
    std::array<double, 3> c1{0.0, 0.0, 0.0};
};

BallMoments gauge_ball_moments(const std::function<double(double, double, double)>& f,
                               int degree, double eta, int alpha_panels = 128,
                               int phi_nodes = 256);

/// max_{N(x)=1} d(e, x); converts gauge-ball radii into quasinorm radii.
double gauge_vs_norm_constant(const StratifiedLieAlgebra& g, const NormConfig& norm);

/// Fundamental solution of the sublaplacian on the first Heisenberg group,
/// c rho^{-1/2} with rho = (x^2+y^2)^2 + 16 t^2. The amplitude c is
/// calibrated against (Delta u) * Phi = u on a family of bumps; k1 is the
/// symbolic d_c^* of the solution in degree n-1 coordinates.
struct FundamentalSolution {
    double c = 0.0;
    Polynomial rho;
    GaugeExpr phi_unit;
    std::vector<GaugeExpr> k1_unit;
    CompiledGauge phi_eval;
    std::vector<CompiledGauge> k1_eval;
    std::vector<CompiledGauge> xn_eval;  // X_j N per frame field
    double calibration_residual = 0.0;
    int calibration_nodes = 0;
};

struct CalibrationOptions {
    int fit_bumps = 3;
    int check_bumps = 3;
    double support_radius = 0.65;
    std::uint64_t seed = 7001;
    int threads = 1;
};

FundamentalSolution fundamental_solution_h1(const RuminComplex& cx, const Grid& grid,
                                            const CalibrationOptions& opt = {});

/// Analytic bump and its sublaplacian -(X_1^2 + X_2^2) u on the H1 frame,
/// used so kernel identities are not polluted by stencil error.
Field h1_bump(const Grid& grid, const std::vector<double>& center,
              const std::vector<double>& widths, double amplitude = 1.0);
Field h1_bump_sublaplacian(const Grid& grid, const std::vector<double>& center,
                           const std::vector<double>& widths, double amplitude = 1.0);

/// Convolution kernels derived from the fundamental solution. The hole
/// radius defaults to 1.5 max(h1, h2).
KernelComponent phi_kernel(const FundamentalSolution& fs, const Grid& grid);
std::vector<KernelComponent> truncated_k1(const FundamentalSolution& fs, const Grid& grid,
                                          double R);
std::vector<KernelComponent> tail_k1(const FundamentalSolution& fs, double R);
/// Scalar kernel d_c((1 - psi_R) k1), supported in the annulus R/2 <= N <= R.
KernelComponent annulus_kernel(const FundamentalSolution& fs, const RuminComplex& cx,
                               double R);

}  // namespace carnot
