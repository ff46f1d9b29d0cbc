#include <carnot/kernels.hpp>

#include <carnot/errors.hpp>

#include <algorithm>
#include <cmath>

namespace carnot {

GaugeExpr GaugeExpr::zero(const Polynomial& rho) {
    GaugeExpr e;
    e.rho = rho;
    return e;
}

GaugeExpr GaugeExpr::power(const Polynomial& rho, int four_s, const Polynomial& coeff) {
    GaugeExpr e;
    e.rho = rho;
    e.add(four_s, coeff);
    return e;
}

GaugeExpr& GaugeExpr::add(int four_s, const Polynomial& coeff) {
    if (coeff.is_zero()) return *this;
    auto it = parts.find(four_s);
    if (it == parts.end()) {
        parts.emplace(four_s, coeff);
    } else {
        it->second = it->second + coeff;
        if (it->second.is_zero()) parts.erase(it);
    }
    return *this;
}

GaugeExpr GaugeExpr::operator+(const GaugeExpr& o) const {
    GaugeExpr out = *this;
    for (const auto& [fs, p] : o.parts) out.add(fs, p);
    return out;
}

GaugeExpr GaugeExpr::operator-(const GaugeExpr& o) const { return *this + (-o); }

GaugeExpr GaugeExpr::operator-() const { return scaled(Rational(-1)); }

GaugeExpr GaugeExpr::scaled(const Rational& c) const {
    GaugeExpr out = zero(rho);
    if (c == 0) return out;
    for (const auto& [fs, p] : parts) out.add(fs, p.scaled(c));
    return out;
}

GaugeExpr GaugeExpr::times(const Polynomial& p) const {
    GaugeExpr out = zero(rho);
    for (const auto& [fs, q] : parts) out.add(fs, q * p);
    return out;
}

GaugeExpr GaugeExpr::derivative(int axis) const {
    GaugeExpr out = zero(rho);
    const Polynomial drho = rho.derivative(axis);
    for (const auto& [fs, p] : parts) {
        out.add(fs, p.derivative(axis));
        if (fs != 0) out.add(fs - 4, (p * drho).scaled(Rational(fs) / 4));
    }
    return out;
}

GaugeExpr GaugeExpr::frame_derivative(const std::vector<std::vector<Polynomial>>& frame,
                                      int j) const {
    GaugeExpr out = zero(rho);
    for (std::size_t k = 0; k < frame[j].size(); ++k) {
        if (frame[j][k].is_zero()) continue;
        out = out + derivative(static_cast<int>(k)).times(frame[j][k]);
    }
    return out;
}

bool GaugeExpr::is_zero() const {
    if (parts.empty()) return true;
    // Terms whose exponents differ by an integer power of rho can cancel even
    // though no single coefficient vanishes. Within each residue class of
    // four_s mod 4 lift everything to the smallest exponent and test the
    // combined polynomial. Across classes no cancellation is possible as long
    // as rho is not a perfect square, which holds for the gauges used here.
    std::map<int, std::vector<std::pair<int, const Polynomial*>>> classes;
    for (const auto& [fs, p] : parts) classes[((fs % 4) + 4) % 4].push_back({fs, &p});
    for (const auto& [res, terms] : classes) {
        const int base = terms.front().first;
        Polynomial acc = Polynomial::constant(Rational(0), rho.nvars());
        for (const auto& [fs, p] : terms) {
            Polynomial lifted = *p;
            for (int k = 0; k < (fs - base) / 4; ++k) lifted = lifted * rho;
            acc += lifted;
        }
        if (!acc.is_zero()) return false;
    }
    return true;
}

double GaugeExpr::eval(const std::vector<double>& x) const {
    const double r = rho.eval_double(x);
    double acc = 0.0;
    for (const auto& [fs, p] : parts) acc += p.eval_double(x) * std::pow(r, fs / 4.0);
    return acc;
}

GaugeExpr gauge_apply(const std::vector<std::vector<Polynomial>>& frame,
                      const OperatorPoly& op, const GaugeExpr& e) {
    GaugeExpr acc = GaugeExpr::zero(e.rho);
    for (const auto& [mono, coef] : op.terms()) {
        GaugeExpr cur = e;
        for (int j = static_cast<int>(mono.size()) - 1; j >= 0; --j)
            for (unsigned r = 0; r < mono[j]; ++r) cur = cur.frame_derivative(frame, j);
        acc = acc + cur.scaled(coef);
    }
    return acc;
}

namespace {

int weighted_degree(const Polynomial::Exponents& m, const std::vector<int>& weights) {
    int d = 0;
    for (std::size_t i = 0; i < m.size(); ++i) d += static_cast<int>(m[i]) * weights[i];
    return d;
}

int uniform_weighted_degree(const Polynomial& p, const std::vector<int>& weights,
                            const char* what) {
    int deg = 0;
    bool first = true;
    for (const auto& [m, c] : p.terms()) {
        const int d = weighted_degree(m, weights);
        if (first) {
            deg = d;
            first = false;
        } else if (d != deg) {
            throw IdentityError(std::string(what) + " is not weighted homogeneous");
        }
    }
    if (first) throw IdentityError(std::string(what) + " is zero");
    return deg;
}

}  // namespace

int gauge_homogeneity(const GaugeExpr& e, const std::vector<int>& weights) {
    if (e.is_zero()) throw IdentityError("gauge expression is zero");
    const int rho_w = uniform_weighted_degree(e.rho, weights, "gauge polynomial");
    bool have = false;
    int deg = 0;
    for (const auto& [fs, p] : e.parts) {
        if ((rho_w * fs) % 4 != 0)
            throw IdentityError("gauge expression has fractional homogeneity");
        const int shift = rho_w * fs / 4;
        for (const auto& [m, c] : p.terms()) {
            const int d = weighted_degree(m, weights) + shift;
            if (!have) {
                deg = d;
                have = true;
            } else if (d != deg) {
                throw IdentityError("gauge expression is not homogeneous");
            }
        }
    }
    return deg;
}

namespace {

double ipow(double b, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

std::vector<CompiledGauge::Mono> compile_poly(const Polynomial& p) {
    std::vector<CompiledGauge::Mono> out;
    out.reserve(p.terms().size());
    for (const auto& [m, c] : p.terms())
        out.push_back({rat_double(c), static_cast<int>(m[0]), static_cast<int>(m[1]),
                       static_cast<int>(m[2])});
    return out;
}

double eval_monos(const std::vector<CompiledGauge::Mono>& terms, double x, double y,
                  double t) {
    double acc = 0.0;
    for (const auto& m : terms) acc += m.c * ipow(x, m.ex) * ipow(y, m.ey) * ipow(t, m.et);
    return acc;
}

}  // namespace

double CompiledGauge::rho_at(double x, double y, double t) const {
    return eval_monos(rho_terms, x, y, t);
}

double CompiledGauge::operator()(double x, double y, double t) const {
    const double r = rho_at(x, y, t);
    double acc = 0.0;
    for (const auto& part : parts)
        acc += eval_monos(part.terms, x, y, t) * std::pow(r, part.exponent);
    return acc;
}

CompiledGauge compile_gauge(const GaugeExpr& e) {
    if (e.rho.nvars() != 3)
        throw UsageError("compiled gauge expressions require three variables");
    CompiledGauge g;
    g.rho_terms = compile_poly(e.rho);
    for (const auto& [fs, p] : e.parts) g.parts.push_back({fs / 4.0, compile_poly(p)});
    return g;
}

double CutoffProfile::value(double N) const {
    const double u = N / R;
    if (u <= 0.5) return 1.0;
    if (u >= 1.0) return 0.0;
    const double v = 2.0 * u - 1.0;
    return 1.0 - v * v * v * (10.0 + v * (-15.0 + 6.0 * v));
}

double CutoffProfile::slope(double N) const {
    const double u = N / R;
    if (u <= 0.5 || u >= 1.0) return 0.0;
    const double v = 2.0 * u - 1.0;
    const double vm = v - 1.0;
    return -60.0 * v * v * vm * vm / R;
}

RadialBump RadialBump::unit_mass(std::vector<double> center, double radius) {
    if (center.size() != 3) throw UsageError("radial bump is three dimensional");
    RadialBump b;
    b.center = std::move(center);
    b.radius = radius;
    b.amplitude = 315.0 / (64.0 * M_PI * radius * radius * radius);
    return b;
}

double RadialBump::value(const std::vector<double>& x) const {
    double v2 = 0.0;
    for (std::size_t k = 0; k < center.size(); ++k) {
        const double u = (x[k] - center[k]) / radius;
        v2 += u * u;
    }
    if (v2 >= 1.0) return 0.0;
    const double s = 1.0 - v2;
    return amplitude * s * s * s;
}

namespace {

struct GL5 {
    static constexpr double x[5] = {-0.906179845938664, -0.538469310105683, 0.0,
                                    0.538469310105683, 0.906179845938664};
    static constexpr double w[5] = {0.236926885056189, 0.478628670499366,
                                    0.568888888888889, 0.478628670499366,
                                    0.236926885056189};
};

}  // namespace

BallMoments gauge_ball_moments(const std::function<double(double, double, double)>& f,
                               int degree, double eta, int alpha_panels, int phi_nodes) {
    // x = delta_nu(cos phi, sin phi, sinh(v)/4) sweeps the ball as nu runs to
    // eta (1 + sinh^2 v)^{-1/4}; the radial integral of a homogeneous
    // integrand is exact, leaving a smooth integral over (v, phi).
    const int degs[4] = {degree, degree + 1, degree + 1, degree + 2};
    for (int d : degs)
        if (4 + d <= 0) throw NumericError("ball moment diverges at the origin");
    const double V = 40.0;
    const double panel = 2.0 * V / alpha_panels;
    const double dphi = 2.0 * M_PI / phi_nodes;
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    for (int p = 0; p < alpha_panels; ++p) {
        const double v0 = -V + p * panel;
        for (int gq = 0; gq < 5; ++gq) {
            const double v = v0 + 0.5 * panel * (1.0 + GL5::x[gq]);
            const double wv = 0.5 * panel * GL5::w[gq];
            const double sh = std::sinh(v);
            const double ch = std::cosh(v);
            const double that = sh / 4.0;
            double phi_acc[4] = {0.0, 0.0, 0.0, 0.0};
            for (int q = 0; q < phi_nodes; ++q) {
                const double phi = q * dphi;
                const double cx = std::cos(phi);
                const double sx = std::sin(phi);
                const double fv = f(cx, sx, that);
                if (fv == 0.0) continue;
                phi_acc[0] += fv;
                phi_acc[1] += fv * cx;
                phi_acc[2] += fv * sx;
                phi_acc[3] += fv * that;
            }
            for (int m = 0; m < 4; ++m)
                acc[m] += wv * dphi * phi_acc[m] * std::pow(ch, -(2.0 + degs[m]) / 2.0);
        }
    }
    BallMoments out;
    out.c0 = acc[0] * std::pow(eta, 4.0 + degs[0]) / (4.0 * (4.0 + degs[0]));
    for (int k = 0; k < 3; ++k)
        out.c1[k] = acc[k + 1] * std::pow(eta, 4.0 + degs[k + 1]) / (4.0 * (4.0 + degs[k + 1]));
    return out;
}

double gauge_vs_norm_constant(const StratifiedLieAlgebra& g, const NormConfig& norm) {
    if (g.dim() != 3) throw UsageError("gauge comparison constant requires dimension 3");
    const int nphi = 1024, nv = 1024;
    const double V = 8.0;
    double best = 0.0;
    std::vector<double> p(3);
    for (int iv = 0; iv <= nv; ++iv) {
        const double v = -V + 2.0 * V * iv / nv;
        const double ch = std::cosh(v);
        const double nu = 1.0 / std::sqrt(std::sqrt(ch * ch));
        const double t = nu * nu * std::sinh(v) / 4.0;
        for (int iq = 0; iq < nphi; ++iq) {
            const double phi = 2.0 * M_PI * iq / nphi;
            p[0] = nu * std::cos(phi);
            p[1] = nu * std::sin(phi);
            p[2] = t;
            best = std::max(best, norm_inf(g, norm, p));
        }
    }
    p = {0.0, 0.0, 0.25};
    best = std::max(best, norm_inf(g, norm, p));
    p[2] = -0.25;
    best = std::max(best, norm_inf(g, norm, p));
    return best;
}

namespace {

Polynomial h1_rho() {
    const Polynomial x = Polynomial::variable(0, 3);
    const Polynomial y = Polynomial::variable(1, 3);
    const Polynomial t = Polynomial::variable(2, 3);
    const Polynomial r2 = x * x + y * y;
    return r2 * r2 + (t * t).scaled(Rational(16));
}

void for_each_in_box(const Grid& grid, const SupportBox& box,
                     const std::function<void(std::size_t, const std::vector<int>&)>& fn) {
    if (box.empty) return;
    std::vector<int> idx = box.lo;
    for (;;) {
        fn(grid.index(idx), idx);
        int a = grid.dim() - 1;
        for (; a >= 0; --a) {
            if (++idx[a] <= box.hi[a]) break;
            idx[a] = box.lo[a];
        }
        if (a < 0) break;
    }
}

double excision_radius(const Grid& grid) { return 1.5 * std::max(grid.h[0], grid.h[1]); }

}  // namespace

Field h1_bump(const Grid& grid, const std::vector<double>& center,
              const std::vector<double>& widths, double amplitude) {
    return bump_field(grid, center, widths, amplitude);
}

Field h1_bump_sublaplacian(const Grid& grid, const std::vector<double>& center,
                           const std::vector<double>& widths, double amplitude) {
    require_standard_h1_frame(*grid.algebra);
    Field out(grid.size(), 0.0);
    std::vector<int> idx;
    std::vector<double> x;
    for (std::size_t i = 0; i < out.size(); ++i) {
        grid.unindex(i, idx);
        grid.node(idx, x);
        double v2 = 0.0;
        double u[3];
        for (int a = 0; a < 3; ++a) {
            u[a] = x[a] - center[a];
            v2 += u[a] * u[a] / (widths[a] * widths[a]);
        }
        if (v2 >= 1.0) continue;
        const double s = 1.0 - v2;
        auto dd = [&](int a, int b) {
            double r = 24.0 * s * u[a] * u[b] / (widths[a] * widths[a] * widths[b] * widths[b]);
            if (a == b) r -= 6.0 * s * s / (widths[a] * widths[a]);
            return r;
        };
        const double x1sq = dd(0, 0) - x[1] * dd(0, 2) + 0.25 * x[1] * x[1] * dd(2, 2);
        const double x2sq = dd(1, 1) + x[0] * dd(1, 2) + 0.25 * x[0] * x[0] * dd(2, 2);
        out[i] = -amplitude * (x1sq + x2sq);
    }
    return out;
}

FundamentalSolution fundamental_solution_h1(const RuminComplex& cx, const Grid& grid,
                                            const CalibrationOptions& opt) {
    const StratifiedLieAlgebra& g = cx.algebra();
    require_standard_h1_frame(g);
    require_standard_h1_frame(*grid.algebra);
    const auto frame = frame_fields(g);

    FundamentalSolution fs;
    fs.rho = h1_rho();
    fs.phi_unit = GaugeExpr::power(fs.rho, -2, Polynomial::constant(Rational(1), 3));

    const GaugeExpr harmonic = gauge_apply(frame, cx.laplacian0().m[0][0], fs.phi_unit);
    if (!harmonic.is_zero())
        throw IdentityFailure("candidate fundamental solution is not harmonic");

    const FormOperator& dstar = cx.degree(cx.top_degree()).dc_star;
    fs.k1_unit.reserve(dstar.rows());
    for (std::size_t r = 0; r < dstar.rows(); ++r)
        fs.k1_unit.push_back(gauge_apply(frame, dstar.m[r][0], fs.phi_unit));

    fs.phi_eval = compile_gauge(fs.phi_unit);
    for (const auto& k : fs.k1_unit) fs.k1_eval.push_back(compile_gauge(k));

    const GaugeExpr rho_expr = GaugeExpr::power(fs.rho, 0, fs.rho);
    for (int j = 0; j < g.dim(); ++j) {
        GaugeExpr xr = rho_expr.frame_derivative(frame, j);
        if (xr.parts.size() > 1 || (xr.parts.size() == 1 && xr.parts.begin()->first != 0))
            throw IdentityFailure("frame derivative of the gauge polynomial is not polynomial");
        const Polynomial poly = xr.is_zero() ? Polynomial(3) : xr.parts.begin()->second;
        fs.xn_eval.push_back(
            compile_gauge(GaugeExpr::power(fs.rho, -3, poly.scaled(Rational(1) / 4))));
    }

    // Least-squares amplitude from (Delta u) * Phi = u on analytic bumps.
    const double eta = excision_radius(grid);
    KernelComponent unit;
    const CompiledGauge phi = fs.phi_eval;
    unit.eval = [phi](double a, double b, double w) { return phi(a, b, w); };
    unit.support_N = 0.0;
    unit.singular_origin = true;
    unit.hole_N = eta;
    const BallMoments mom = gauge_ball_moments(
        [&phi](double a, double b, double w) { return phi(a, b, w); }, -2, eta);
    unit.c0 = mom.c0;
    unit.c1 = mom.c1;

    BumpFamilyOptions bopt;
    bopt.bumps = 1;
    bopt.support_radius = opt.support_radius;
    bopt.min_width_cells = 8.0;

    double num = 0.0, den = 0.0;
    std::vector<SupportBox> regions;
    std::vector<Field> targets, responses;
    const int total = opt.fit_bumps + opt.check_bumps;
    for (int i = 0; i < total; ++i) {
        const BumpSpec spec = draw_bump_family(grid, opt.seed + i, bopt)[0];
        const Field u = h1_bump(grid, spec.center, spec.widths, spec.amplitude);
        const Field f = h1_bump_sublaplacian(grid, spec.center, spec.widths, spec.amplitude);
        double peak = 0.0;
        for (double v : u) peak = std::max(peak, std::abs(v));
        SupportBox region = expand_box(grid, support_box(grid, u, 1e-3 * peak), 6);
        ConvolveOptions copt;
        copt.threads = opt.threads;
        copt.output_box = &region;
        const Field v = group_convolve(grid, f, unit, copt);
        if (i < opt.fit_bumps) {
            for_each_in_box(grid, region, [&](std::size_t n, const std::vector<int>&) {
                num += v[n] * u[n];
                den += v[n] * v[n];
            });
        } else {
            regions.push_back(region);
            targets.push_back(u);
            responses.push_back(v);
        }
    }
    if (den == 0.0) throw CalibrationFailure("flat response while calibrating the kernel");
    fs.c = num / den;

    double worst = 0.0;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        double peak = 0.0, err = 0.0;
        for_each_in_box(grid, regions[i], [&](std::size_t n, const std::vector<int>&) {
            peak = std::max(peak, std::abs(targets[i][n]));
            err = std::max(err, std::abs(fs.c * responses[i][n] - targets[i][n]));
        });
        worst = std::max(worst, err / peak);
    }
    fs.calibration_residual = worst;
    fs.calibration_nodes = grid.shape[0];
    if (worst > 0.15)
        throw CalibrationFailure("kernel calibration residual is out of range");
    return fs;
}

KernelComponent phi_kernel(const FundamentalSolution& fs, const Grid& grid) {
    const double eta = excision_radius(grid);
    KernelComponent k;
    const CompiledGauge phi = fs.phi_eval;
    const double c = fs.c;
    k.eval = [phi, c](double a, double b, double w) { return c * phi(a, b, w); };
    k.support_N = 0.0;
    k.singular_origin = true;
    k.hole_N = eta;
    const BallMoments mom = gauge_ball_moments(
        [&phi](double a, double b, double w) { return phi(a, b, w); }, -2, eta);
    k.c0 = c * mom.c0;
    for (int i = 0; i < 3; ++i) k.c1[i] = c * mom.c1[i];
    return k;
}

std::vector<KernelComponent> truncated_k1(const FundamentalSolution& fs, const Grid& grid,
                                          double R) {
    const double eta = excision_radius(grid);
    if (eta > 0.5 * R)
        throw NumericError("cutoff radius is too small for the excision ball");
    std::vector<KernelComponent> out;
    for (const auto& comp : fs.k1_eval) {
        KernelComponent k;
        const CompiledGauge ke = comp;
        const double c = fs.c;
        const CutoffProfile prof{R};
        k.eval = [ke, c, prof](double a, double b, double w) {
            const double N = std::pow(ke.rho_at(a, b, w), 0.25);
            if (N >= prof.R) return 0.0;
            return c * prof.value(N) * ke(a, b, w);
        };
        k.support_N = R;
        k.singular_origin = true;
        k.hole_N = eta;
        // psi is identically 1 on the excision ball, so the moments are the
        // plain kernel moments.
        const BallMoments mom = gauge_ball_moments(
            [&ke](double a, double b, double w) { return ke(a, b, w); }, -3, eta);
        k.c0 = c * mom.c0;
        for (int i = 0; i < 3; ++i) k.c1[i] = c * mom.c1[i];
        out.push_back(std::move(k));
    }
    return out;
}

std::vector<KernelComponent> tail_k1(const FundamentalSolution& fs, double R) {
    std::vector<KernelComponent> out;
    for (const auto& comp : fs.k1_eval) {
        KernelComponent k;
        const CompiledGauge ke = comp;
        const double c = fs.c;
        const CutoffProfile prof{R};
        k.eval = [ke, c, prof](double a, double b, double w) {
            const double N = std::pow(ke.rho_at(a, b, w), 0.25);
            if (N <= 0.5 * prof.R) return 0.0;
            return c * (1.0 - prof.value(N)) * ke(a, b, w);
        };
        k.support_N = 0.0;
        out.push_back(std::move(k));
    }
    return out;
}

KernelComponent annulus_kernel(const FundamentalSolution& fs, const RuminComplex& cx,
                               double R) {
    const int n = cx.algebra().dim();
    const FormOperator& dc = cx.degree(n - 1).dc;
    if (dc.rows() != 1 || dc.cols() != fs.k1_eval.size())
        throw IdentityFailure("differential shape does not match the kernel components");
    // d_c((1 - psi) k1) collapses to -sum coef (X_j psi) k1_c away from the
    // origin; requires first-order entries.
    struct Term {
        double coef;
        int j;
        int c;
    };
    std::vector<Term> terms;
    for (std::size_t c = 0; c < dc.cols(); ++c) {
        for (const auto& [mono, coef] : dc.m[0][c].terms()) {
            if (mono_iso_degree(mono) != 1)
                throw UsageError("annulus kernel requires a first-order top differential");
            int j = -1;
            for (std::size_t k = 0; k < mono.size(); ++k)
                if (mono[k] == 1) j = static_cast<int>(k);
            terms.push_back({-rat_double(coef), j, static_cast<int>(c)});
        }
    }
    KernelComponent k;
    const double c = fs.c;
    const CutoffProfile prof{R};
    const std::vector<CompiledGauge> k1 = fs.k1_eval;
    const std::vector<CompiledGauge> xn = fs.xn_eval;
    k.eval = [terms, c, prof, k1, xn](double a, double b, double w) {
        const double N = std::pow(k1[0].rho_at(a, b, w), 0.25);
        if (N <= 0.5 * prof.R || N >= prof.R) return 0.0;
        const double sl = prof.slope(N);
        double acc = 0.0;
        for (const auto& t : terms) acc += t.coef * sl * xn[t.j](a, b, w) * k1[t.c](a, b, w);
        return c * acc;
    };
    k.support_N = R;
    return k;
}

}  // namespace carnot
