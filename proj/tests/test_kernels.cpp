#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "carnot/errors.hpp"
#include "carnot/grid.hpp"
#include "carnot/kernels.hpp"
#include "carnot/presets.hpp"
#include "carnot/rumin.hpp"

using namespace carnot;

namespace {

NormConfig h1_norm() {
    NormConfig cfg;
    cfg.eps = {1.0, 0.6};
    return cfg;
}

Polynomial px() { return Polynomial::variable(0, 3); }
Polynomial py() { return Polynomial::variable(1, 3); }
Polynomial pt() { return Polynomial::variable(2, 3); }

Polynomial h1_rho_poly() {
    const Polynomial r2 = px() * px() + py() * py();
    return r2 * r2 + (pt() * pt()).scaled(Rational(16));
}

bool gauge_equal(const GaugeExpr& a, const GaugeExpr& b) { return (a - b).is_zero(); }

}  // namespace

TEST_CASE("gauge expression algebra and derivatives") {
    StratifiedLieAlgebra g = make_heisenberg(1);
    const auto frame = frame_fields(g);
    const Polynomial rho = h1_rho_poly();
    const GaugeExpr rho_e = GaugeExpr::power(rho, 0, rho);

    // X1 rho = 4(x^2+y^2)x - 16yt and X2 rho = 4(x^2+y^2)y + 16xt
    const Polynomial r2 = px() * px() + py() * py();
    const GaugeExpr x1rho = rho_e.frame_derivative(frame, 0);
    const GaugeExpr x2rho = rho_e.frame_derivative(frame, 1);
    CHECK(gauge_equal(x1rho, GaugeExpr::power(rho, 0,
                                              (r2 * px()).scaled(Rational(4)) -
                                                  (py() * pt()).scaled(Rational(16)))));
    CHECK(gauge_equal(x2rho, GaugeExpr::power(rho, 0,
                                              (r2 * py()).scaled(Rational(4)) +
                                                  (px() * pt()).scaled(Rational(16)))));

    // d/dt rho^{1/4} = 8 t rho^{-3/4}
    const GaugeExpr n = GaugeExpr::power(rho, 1, Polynomial::constant(Rational(1), 3));
    const GaugeExpr dn = n.derivative(2);
    CHECK(gauge_equal(dn, GaugeExpr::power(rho, -3, pt().scaled(Rational(8)))));

    // numeric evaluation agrees with the compiled form
    const GaugeExpr mixed = n.times(px()) + GaugeExpr::power(rho, -2, pt());
    const CompiledGauge ce = compile_gauge(mixed);
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> unif(-1.5, 1.5);
    for (int i = 0; i < 50; ++i) {
        const std::vector<double> x = {unif(rng), unif(rng), unif(rng)};
        const double rr = rho.eval_double(x);
        const double expect =
            x[0] * std::pow(rr, 0.25) + x[2] * std::pow(rr, -0.5);
        CHECK(mixed.eval(x) == doctest::Approx(expect).epsilon(1e-12));
        CHECK(ce(x[0], x[1], x[2]) == doctest::Approx(expect).epsilon(1e-12));
    }

    const std::vector<int> weights = {1, 1, 2};
    CHECK(gauge_homogeneity(GaugeExpr::power(rho, -2, Polynomial::constant(Rational(1), 3)),
                            weights) == -2);
    CHECK(gauge_homogeneity(n.times(px()), weights) == 2);
    CHECK_THROWS_AS(gauge_homogeneity(GaugeExpr::power(rho, 0, px() + pt()), weights),
                    IdentityError);
}

TEST_CASE("candidate solution is harmonic, perturbations are not") {
    StratifiedLieAlgebra g = make_heisenberg(1);
    RuminComplex cx = RuminComplex::build(g);
    const auto frame = frame_fields(g);
    const Polynomial rho = h1_rho_poly();
    const GaugeExpr phi =
        GaugeExpr::power(rho, -2, Polynomial::constant(Rational(1), 3));
    CHECK(gauge_apply(frame, cx.laplacian0().m[0][0], phi).is_zero());

    const GaugeExpr wrong = GaugeExpr::power(rho, -2, px());
    CHECK(!gauge_apply(frame, cx.laplacian0().m[0][0], wrong).is_zero());
    const GaugeExpr wrong2 = GaugeExpr::power(rho, -3, Polynomial::constant(Rational(1), 3));
    CHECK(!gauge_apply(frame, cx.laplacian0().m[0][0], wrong2).is_zero());
}

TEST_CASE("cutoff profile is monotone with matching slope") {
    CutoffProfile psi{2.0};
    CHECK(psi.value(0.0) == 1.0);
    CHECK(psi.value(1.0) == 1.0);
    CHECK(psi.value(2.0) == 0.0);
    CHECK(psi.value(3.0) == 0.0);
    CHECK(psi.slope(0.9) == 0.0);
    CHECK(psi.slope(2.1) == 0.0);
    const double eps = 1e-6;
    for (double N : {1.0 + 1e-9, 1.2, 1.5, 1.8, 2.0 - 1e-9}) {
        const double fd = (psi.value(N + eps) - psi.value(N - eps)) / (2.0 * eps);
        CHECK(psi.slope(N) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
    }
    // C1 junctions
    CHECK(psi.value(1.0 + 1e-7) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(psi.value(2.0 - 1e-7) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(std::abs(psi.slope(1.0 + 1e-7)) < 1e-5);
    CHECK(std::abs(psi.slope(2.0 - 1e-7)) < 1e-5);
    for (double N = 1.0; N < 2.0; N += 0.01)
        CHECK(psi.value(N) >= psi.value(N + 0.01) - 1e-15);
}

TEST_CASE("unit mass bump integrates to one") {
    const RadialBump b = RadialBump::unit_mass({0.1, -0.2, 0.05}, 0.4);
    const int n = 80;
    const double h = 2.0 * 0.41 / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j)
            for (int k = 0; k <= n; ++k)
                acc += b.value({0.1 - 0.41 + i * h, -0.2 - 0.41 + j * h,
                                0.05 - 0.41 + k * h});
    acc *= h * h * h;
    CHECK(acc == doctest::Approx(1.0).epsilon(5e-3));
}

TEST_CASE("gauge ball moments match closed forms") {
    // |B(1)| = pi^2/8 and eta^4 scaling
    const auto one = [](double, double, double) { return 1.0; };
    const BallMoments v1 = gauge_ball_moments(one, 0, 1.0);
    CHECK(v1.c0 == doctest::Approx(M_PI * M_PI / 8.0).epsilon(1e-10));
    const BallMoments v07 = gauge_ball_moments(one, 0, 0.7);
    CHECK(v07.c0 == doctest::Approx(M_PI * M_PI / 8.0 * std::pow(0.7, 4)).epsilon(1e-10));
    CHECK(std::abs(v1.c1[0]) < 1e-12);
    CHECK(std::abs(v1.c1[1]) < 1e-12);
    CHECK(std::abs(v1.c1[2]) < 1e-12);

    // int_{N<=eta} rho^{-1/2} = pi^2 eta^2 / 4
    const Polynomial rho = h1_rho_poly();
    const CompiledGauge phi =
        compile_gauge(GaugeExpr::power(rho, -2, Polynomial::constant(Rational(1), 3)));
    const double eta = 0.55;
    const BallMoments mphi = gauge_ball_moments(
        [&phi](double a, double b, double w) { return phi(a, b, w); }, -2, eta);
    CHECK(mphi.c0 == doctest::Approx(M_PI * M_PI * eta * eta / 4.0).epsilon(1e-10));

    // first moments of X2 phi and -X1 phi
    StratifiedLieAlgebra g = make_heisenberg(1);
    const auto frame = frame_fields(g);
    const GaugeExpr phi_e =
        GaugeExpr::power(rho, -2, Polynomial::constant(Rational(1), 3));
    const CompiledGauge k0 = compile_gauge(phi_e.frame_derivative(frame, 1));
    const CompiledGauge k1c = compile_gauge(phi_e.frame_derivative(frame, 0).scaled(
        Rational(-1)));
    const double m8 = M_PI * M_PI * eta * eta / 8.0;
    const BallMoments mk0 = gauge_ball_moments(
        [&k0](double a, double b, double w) { return k0(a, b, w); }, -3, eta);
    CHECK(std::abs(mk0.c0) < 1e-12);
    CHECK(std::abs(mk0.c1[0]) < 1e-12);
    CHECK(mk0.c1[1] == doctest::Approx(-m8).epsilon(1e-9));
    CHECK(std::abs(mk0.c1[2]) < 1e-12);
    const BallMoments mk1 = gauge_ball_moments(
        [&k1c](double a, double b, double w) { return k1c(a, b, w); }, -3, eta);
    CHECK(mk1.c1[0] == doctest::Approx(m8).epsilon(1e-9));
    CHECK(std::abs(mk1.c1[1]) < 1e-12);
    CHECK(std::abs(mk1.c1[2]) < 1e-12);

    // the radial integral diverges once 4 + degree drops to zero
    CHECK_THROWS_AS(gauge_ball_moments(one, -4, 1.0), NumericError);
}

TEST_CASE("gauge to metric radius conversion") {
    StratifiedLieAlgebra g = make_heisenberg(1);
    CHECK(gauge_vs_norm_constant(g, h1_norm()) == doctest::Approx(1.0).epsilon(1e-6));
    NormConfig tight;
    tight.eps = {1.0, 1.0};
    CHECK(gauge_vs_norm_constant(g, tight) == doctest::Approx(1.0).epsilon(1e-6));
}

namespace {

// One calibrated solution shared by the kernel tests below; the grid has to
// be fine enough for the calibration bumps to fit inside their ball.
struct FsFixture {
    StratifiedLieAlgebra g = make_heisenberg(1);
    RuminComplex cx = RuminComplex::build(g);
    Grid grid;
    CalibrationOptions opt;
    FundamentalSolution fs;

    FsFixture() : grid(make_grid(g, h1_norm(), 0.8, 41)) {
        opt.support_radius = 0.65;
        fs = fundamental_solution_h1(cx, grid, opt);
    }
};

const FsFixture& fs_fixture() {
    static const FsFixture fx;
    return fx;
}

}  // namespace

TEST_CASE("fundamental solution calibration and symbolic identities") {
    const FsFixture& fx = fs_fixture();
    const FundamentalSolution& fs = fx.fs;

    CHECK(fs.c > 0.0);
    CHECK(fs.calibration_residual < 0.05);

    // k1 components against hand-computed frame derivatives of rho^{-1/2}:
    // k1_1 = -2 rho^{-3/2} ((x^2+y^2)y + 4xt), k1_2 = 2 rho^{-3/2} ((x^2+y^2)x - 4yt)
    const Polynomial rho = h1_rho_poly();
    const Polynomial r2 = px() * px() + py() * py();
    REQUIRE(fs.k1_unit.size() == 2);
    CHECK(gauge_equal(fs.k1_unit[0],
                      GaugeExpr::power(rho, -6,
                                       (r2 * py()).scaled(Rational(-2)) -
                                           (px() * pt()).scaled(Rational(8)))));
    CHECK(gauge_equal(fs.k1_unit[1],
                      GaugeExpr::power(rho, -6,
                                       (r2 * px()).scaled(Rational(2)) -
                                           (py() * pt()).scaled(Rational(8)))));

    const std::vector<int> weights = {1, 1, 2};
    CHECK(gauge_homogeneity(fs.phi_unit, weights) == -2);
    CHECK(gauge_homogeneity(fs.k1_unit[0], weights) == -3);
    CHECK(gauge_homogeneity(fs.k1_unit[1], weights) == -3);

    // homogeneity of the compiled evaluators under the dilations
    std::mt19937_64 rng(991);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const double x = unif(rng), y = unif(rng), t = unif(rng);
        if (std::pow(fs.phi_eval.rho_at(x, y, t), 0.25) < 0.05) continue;
        for (double lam : {2.0, 0.5}) {
            const double xf = lam * x, yf = lam * y, tf = lam * lam * t;
            CHECK(fs.phi_eval(xf, yf, tf) ==
                  doctest::Approx(std::pow(lam, -2.0) * fs.phi_eval(x, y, t))
                      .epsilon(1e-10));
            CHECK(fs.k1_eval[0](xf, yf, tf) ==
                  doctest::Approx(std::pow(lam, -3.0) * fs.k1_eval[0](x, y, t))
                      .epsilon(1e-10));
        }
    }

    // determinism
    const FundamentalSolution fs2 = fundamental_solution_h1(fx.cx, fx.grid, fx.opt);
    CHECK(fs2.c == fs.c);
    CHECK(fs2.calibration_residual == fs.calibration_residual);
}

TEST_CASE("derived kernels cut off as specified") {
    const FsFixture& fx = fs_fixture();
    const FundamentalSolution& fs = fx.fs;

    const double R = 0.6;
    const auto trunc = truncated_k1(fs, fx.grid, R);
    const auto tail = tail_k1(fs, R);
    REQUIRE(trunc.size() == 2);
    REQUIRE(tail.size() == 2);
    CHECK(trunc[0].support_N == R);
    CHECK(trunc[0].singular_origin);
    CHECK(!tail[0].singular_origin);

    std::mt19937_64 rng(5150);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    int inner = 0, outer = 0, mid = 0;
    while (inner < 30 || outer < 30 || mid < 30) {
        const double x = unif(rng), y = unif(rng), t = unif(rng);
        const double N = std::pow(fs.phi_eval.rho_at(x, y, t), 0.25);
        for (int c = 0; c < 2; ++c) {
            const double full = fs.c * fs.k1_eval[c](x, y, t);
            const double a = trunc[c].eval(x, y, t);
            const double b = tail[c].eval(x, y, t);
            if (N < R / 2 && N > 0.05) {
                CHECK(a == doctest::Approx(full).epsilon(1e-12));
                CHECK(b == 0.0);
                if (c == 0) ++inner;
            } else if (N > R) {
                CHECK(a == 0.0);
                CHECK(b == doctest::Approx(full).epsilon(1e-12));
                if (c == 0) ++outer;
            } else if (N > R / 2 + 1e-3 && N < R - 1e-3) {
                CHECK(a + b == doctest::Approx(full).epsilon(1e-12));
                if (c == 0) ++mid;
            }
        }
    }

    // the excision ball must stay inside the plateau of the cutoff
    CHECK_THROWS_AS(truncated_k1(fs, fx.grid, 0.1), NumericError);
}

TEST_CASE("annulus kernel collapses to its closed form") {
    const FsFixture& fx = fs_fixture();
    const FundamentalSolution& fs = fx.fs;

    const double R = 0.7;
    const KernelComponent ks = annulus_kernel(fs, fx.cx, R);
    CHECK(ks.support_N == R);
    const CutoffProfile psi{R};

    std::mt19937_64 rng(31137);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    int hits = 0;
    while (hits < 200) {
        const double x = unif(rng), y = unif(rng), t = 0.25 * unif(rng);
        const double rho = fs.phi_eval.rho_at(x, y, t);
        const double N = std::pow(rho, 0.25);
        const double got = ks.eval(x, y, t);
        if (N <= R / 2 || N >= R) {
            CHECK(got == 0.0);
            continue;
        }
        // d_c((1 - psi) k1) = -2 c psi'(N) (x^2+y^2) N^{-5} on the annulus
        const double r2 = x * x + y * y;
        const double expect = -2.0 * fs.c * psi.slope(N) * r2 * std::pow(N, -5.0);
        CHECK(got == doctest::Approx(expect).epsilon(1e-10));
        ++hits;
    }
}

namespace {

KernelComponent mollifier(double r0) {
    KernelComponent K;
    K.support_N = r0;
    const double r4 = r0 * r0 * r0 * r0;
    K.eval = [r4](double a, double b, double w) {
        const double q = a * a + b * b;
        const double rho = q * q + 16.0 * w * w;
        const double v = 1.0 - rho / r4;
        return v > 0.0 ? v * v : 0.0;
    };
    return K;
}

KernelComponent mollifier_x1(double r0) {
    // X1 K for the mollifier: -2/r0^4 (1 - rho/r0^4) X1 rho on the support
    KernelComponent K;
    K.support_N = r0;
    const double r4 = r0 * r0 * r0 * r0;
    K.eval = [r4](double a, double b, double w) {
        const double q = a * a + b * b;
        const double rho = q * q + 16.0 * w * w;
        const double v = 1.0 - rho / r4;
        if (v <= 0.0) return 0.0;
        const double x1rho = 4.0 * q * a - 16.0 * b * w;
        return -2.0 / r4 * v * x1rho;
    };
    return K;
}

}  // namespace

TEST_CASE("left invariant fields pass through the convolution") {
    StratifiedLieAlgebra g = make_heisenberg(1);
    Grid grid = make_grid(g, h1_norm(), 1.0, 41);
    const auto frame = frame_fields(g);
    const Field f = bump_field(grid, {0.1, 0.0, 0.1}, {0.5, 0.55, 0.5});
    const Field u = group_convolve(grid, f, mollifier(0.3));
    const Field xu = apply_generator(grid, frame, 0, u);
    const Field ux = group_convolve(grid, f, mollifier_x1(0.3));
    double peak = 0.0, err = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        peak = std::max(peak, std::abs(xu[i]));
        err = std::max(err, std::abs(xu[i] - ux[i]));
    }
    CHECK(peak > 0.0);
    CHECK(err / peak < 0.05);
}

TEST_CASE("young inequalities hold for the mollifier") {
    StratifiedLieAlgebra g = make_heisenberg(1);
    Grid grid = make_grid(g, h1_norm(), 1.0, 33);
    const double eta = 0.3;
    const KernelComponent K = mollifier(eta);
    // closed forms: int K = pi^2 eta^4 / 24, int K^{4/3} = pi^2 eta^4 / 4 * 3/11
    const double mass1 = M_PI * M_PI * std::pow(eta, 4) / 24.0;
    const double mass43 =
        std::pow(M_PI * M_PI * std::pow(eta, 4) / 4.0 * 3.0 / 11.0, 3.0 / 4.0);

    const Field f = random_bump_sum(grid, 808, {3, 0.7, 5.0, 0.3});
    const Field u = group_convolve(grid, f, K);
    CHECK(lp_norm(grid, u, 2.0) <= lp_norm(grid, f, 2.0) * mass1 * 1.02);
    CHECK(lp_norm(grid, u, 2.0) <= lp_norm(grid, f, 4.0 / 3.0) * mass43 * 1.02);
}
