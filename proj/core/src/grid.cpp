#include <carnot/grid.hpp>

#include <carnot/errors.hpp>
#include <carnot/parallel.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace carnot {

std::size_t Grid::size() const {
    std::size_t s = 1;
    for (int n : shape) s *= static_cast<std::size_t>(n);
    return s;
}

std::size_t Grid::index(const std::vector<int>& idx) const {
    std::size_t flat = 0;
    for (int a = 0; a < dim(); ++a) flat = flat * shape[a] + idx[a];
    return flat;
}

void Grid::unindex(std::size_t flat, std::vector<int>& idx) const {
    idx.resize(shape.size());
    for (int a = dim() - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(flat % shape[a]);
        flat /= shape[a];
    }
}

std::vector<double> Grid::node(const std::vector<int>& idx) const {
    std::vector<double> x(shape.size());
    node(idx, x);
    return x;
}

void Grid::node(const std::vector<int>& idx, std::vector<double>& out) const {
    out.resize(shape.size());
    for (int a = 0; a < dim(); ++a) out[a] = lo[a] + h[a] * idx[a];
}

double Grid::cell_volume() const {
    double w = 1.0;
    for (double s : h) w *= s;
    return w;
}

bool Grid::same_shape(const Grid& o) const {
    return shape == o.shape && lo == o.lo && h == o.h;
}

Grid make_grid(const StratifiedLieAlgebra& g, const NormConfig& norm, double radius,
               int nodes_per_axis, double margin_cells) {
    if (nodes_per_axis < 8) throw UsageError("grid needs at least 8 nodes per axis");
    if (radius <= 0) throw UsageError("grid radius must be positive");
    if (static_cast<int>(norm.eps.size()) != g.step())
        throw UsageError("norm config does not match the algebra step");
    const double cells = nodes_per_axis - 1 - 2.0 * margin_cells;
    if (cells < 4) throw UsageError("grid margin leaves too few interior cells");

    Grid grid;
    grid.algebra = std::make_shared<StratifiedLieAlgebra>(g);
    grid.norm = norm;
    grid.shape.assign(g.dim(), nodes_per_axis);
    grid.lo.resize(g.dim());
    grid.hi.resize(g.dim());
    grid.h.resize(g.dim());
    for (int k = 0; k < g.dim(); ++k) {
        const int layer = g.layer_of(k);
        const double eps = norm.eps[layer - 1];
        const double bw = std::pow(radius / eps, static_cast<double>(layer));
        const double half = bw * (nodes_per_axis - 1) / cells;
        grid.lo[k] = -half;
        grid.hi[k] = half;
        grid.h[k] = 2.0 * half / (nodes_per_axis - 1);
    }
    return grid;
}

GridForm zero_form(const Grid& grid, int degree, int ncomp) {
    GridForm f;
    f.grid = grid;
    f.degree = degree;
    f.comp.assign(ncomp, Field(grid.size(), 0.0));
    return f;
}

Field eval_on_grid(const Grid& grid, const Polynomial& p) {
    Field out(grid.size());
    std::vector<int> idx;
    std::vector<double> x;
    for (std::size_t i = 0; i < out.size(); ++i) {
        grid.unindex(i, idx);
        grid.node(idx, x);
        out[i] = p.eval_double(x);
    }
    return out;
}

double sample_multilinear(const Grid& grid, const Field& f, const std::vector<double>& x) {
    const int d = grid.dim();
    std::vector<int> base(d);
    std::vector<double> frac(d);
    for (int a = 0; a < d; ++a) {
        const double u = (x[a] - grid.lo[a]) / grid.h[a];
        if (u < 0.0 || u > grid.shape[a] - 1) return 0.0;
        int i0 = static_cast<int>(std::floor(u));
        if (i0 > grid.shape[a] - 2) i0 = grid.shape[a] - 2;
        base[a] = i0;
        frac[a] = u - i0;
    }
    double acc = 0.0;
    std::vector<int> idx(d);
    const unsigned corners = 1u << d;
    for (unsigned c = 0; c < corners; ++c) {
        double w = 1.0;
        for (int a = 0; a < d; ++a) {
            const bool hi = (c >> a) & 1u;
            idx[a] = base[a] + (hi ? 1 : 0);
            w *= hi ? frac[a] : 1.0 - frac[a];
        }
        if (w != 0.0) acc += w * f[grid.index(idx)];
    }
    return acc;
}

double integrate(const Grid& grid, const Field& f) {
    return grid.cell_volume() * pairwise_sum(f);
}

namespace {

std::vector<unsigned char> ball_mask(const Grid& grid, double radius) {
    std::vector<unsigned char> mask(grid.size(), 1);
    if (radius <= 0) return mask;
    std::vector<int> idx;
    std::vector<double> x;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        grid.unindex(i, idx);
        grid.node(idx, x);
        mask[i] = norm_inf(*grid.algebra, grid.norm, x) <= radius ? 1 : 0;
    }
    return mask;
}

}  // namespace

double lp_norm(const Grid& grid, const Field& f, double p, double ball_radius) {
    if (p < 1) throw UsageError("lp_norm requires p >= 1");
    const auto mask = ball_mask(grid, ball_radius);
    std::vector<double> terms(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        terms[i] = mask[i] ? std::pow(std::abs(f[i]), p) : 0.0;
    return std::pow(grid.cell_volume() * pairwise_sum(terms), 1.0 / p);
}

double linf_norm(const Grid& grid, const Field& f, double ball_radius) {
    const auto mask = ball_mask(grid, ball_radius);
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (mask[i]) m = std::max(m, std::abs(f[i]));
    return m;
}

Field magnitude_field(const GridForm& f) {
    Field out(f.grid.size(), 0.0);
    for (const auto& c : f.comp)
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += c[i] * c[i];
    for (double& v : out) v = std::sqrt(v);
    return out;
}

double lp_norm(const GridForm& f, double p, double ball_radius) {
    return lp_norm(f.grid, magnitude_field(f), p, ball_radius);
}

namespace {

// Descending nonzero magnitudes; prefix sums give the superlevel-set data.
std::vector<double> sorted_magnitudes(const Field& f) {
    std::vector<double> v;
    v.reserve(f.size());
    for (double x : f)
        if (x != 0.0) v.push_back(std::abs(x));
    std::sort(v.begin(), v.end(), std::greater<double>());
    return v;
}

}  // namespace

double weak_mr_norm(const Grid& grid, const Field& f, double r) {
    if (r <= 1) throw UsageError("weak norm requires r > 1");
    const auto v = sorted_magnitudes(f);
    const double w = grid.cell_volume();
    double best = 0.0;
    for (std::size_t m = 1; m <= v.size(); ++m)
        best = std::max(best, v[m - 1] * std::pow(m * w, 1.0 / r));
    return best;
}

double m_norm_estimate(const Grid& grid, const Field& f, double r) {
    if (r <= 1) throw UsageError("M-norm estimate requires r > 1");
    const auto v = sorted_magnitudes(f);
    const double w = grid.cell_volume();
    double best = 0.0;
    double prefix = 0.0;
    for (std::size_t m = 1; m <= v.size(); ++m) {
        prefix += v[m - 1];
        best = std::max(best, w * prefix / std::pow(m * w, 1.0 - 1.0 / r));
    }
    return best;
}

namespace {

double fs_norm_rec(const Grid& grid, const std::vector<std::vector<Polynomial>>& frame,
                   const Field& f, int budget, double p) {
    double total = lp_norm(grid, f, p);
    const auto& g = *grid.algebra;
    for (int j = 0; j < g.dim(); ++j) {
        const int w = g.layer_of(j);
        if (w <= budget)
            total += fs_norm_rec(grid, frame, apply_generator(grid, frame, j, f), budget - w, p);
    }
    return total;
}

}  // namespace

double fs_norm(const Grid& grid, const Field& f, int m, double p) {
    if (m < 0) throw UsageError("fs_norm requires m >= 0");
    const auto frame = frame_fields(*grid.algebra);
    return fs_norm_rec(grid, frame, f, m, p);
}

SupportBox support_box(const Grid& grid, const Field& f, double abs_tol) {
    SupportBox box;
    box.lo.assign(grid.dim(), 0);
    box.hi.assign(grid.dim(), -1);
    std::vector<int> idx;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (std::abs(f[i]) <= abs_tol) continue;
        grid.unindex(i, idx);
        if (box.empty) {
            box.lo = idx;
            box.hi = idx;
            box.empty = false;
        } else {
            for (int a = 0; a < grid.dim(); ++a) {
                box.lo[a] = std::min(box.lo[a], idx[a]);
                box.hi[a] = std::max(box.hi[a], idx[a]);
            }
        }
    }
    return box;
}

SupportBox support_box(const GridForm& f, double rel_tol) {
    const Field mag = magnitude_field(f);
    double peak = 0.0;
    for (double v : mag) peak = std::max(peak, v);
    return support_box(f.grid, mag, rel_tol * peak);
}

SupportBox box_union(const SupportBox& a, const SupportBox& b) {
    if (a.empty) return b;
    if (b.empty) return a;
    SupportBox u = a;
    for (std::size_t k = 0; k < u.lo.size(); ++k) {
        u.lo[k] = std::min(u.lo[k], b.lo[k]);
        u.hi[k] = std::max(u.hi[k], b.hi[k]);
    }
    return u;
}

SupportBox expand_box(const Grid& grid, const SupportBox& b, int cells) {
    if (b.empty) return b;
    SupportBox e = b;
    for (int a = 0; a < grid.dim(); ++a) {
        e.lo[a] = std::max(0, b.lo[a] - cells);
        e.hi[a] = std::min(grid.shape[a] - 1, b.hi[a] + cells);
    }
    return e;
}

SupportBox full_box(const Grid& grid) {
    SupportBox b;
    b.empty = false;
    b.lo.assign(grid.dim(), 0);
    b.hi = grid.shape;
    for (int& v : b.hi) --v;
    return b;
}

std::size_t box_size(const SupportBox& b) {
    if (b.empty) return 0;
    std::size_t s = 1;
    for (std::size_t k = 0; k < b.lo.size(); ++k)
        s *= static_cast<std::size_t>(b.hi[k] - b.lo[k] + 1);
    return s;
}

double max_gauge_norm_in_box(const Grid& grid, const SupportBox& b) {
    if (b.empty) return 0.0;
    std::vector<double> worst(grid.dim());
    for (int a = 0; a < grid.dim(); ++a) {
        const double clo = grid.coord(a, b.lo[a]);
        const double chi = grid.coord(a, b.hi[a]);
        worst[a] = std::abs(clo) > std::abs(chi) ? clo : chi;
    }
    return norm_inf(*grid.algebra, grid.norm, worst);
}

Field coordinate_derivative(const Grid& grid, const Field& f, int axis, int threads) {
    const int n = grid.shape[axis];
    if (n < 3) throw UsageError("derivative needs at least 3 nodes per axis");
    std::size_t stride = 1;
    for (int a = axis + 1; a < grid.dim(); ++a) stride *= grid.shape[a];
    const double inv2h = 1.0 / (2.0 * grid.h[axis]);
    Field out(f.size());
    parallel_for(f.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const int k = static_cast<int>((i / stride) % n);
            if (k == 0)
                out[i] = (-3.0 * f[i] + 4.0 * f[i + stride] - f[i + 2 * stride]) * inv2h;
            else if (k == n - 1)
                out[i] = (3.0 * f[i] - 4.0 * f[i - stride] + f[i - 2 * stride]) * inv2h;
            else
                out[i] = (f[i + stride] - f[i - stride]) * inv2h;
        }
    });
    return out;
}

Field apply_generator(const Grid& grid, const std::vector<std::vector<Polynomial>>& frame,
                      int j, const Field& f, int threads) {
    Field out(f.size(), 0.0);
    for (int k = 0; k < grid.dim(); ++k) {
        const Polynomial& a = frame[j][k];
        if (a.terms().empty()) continue;
        const Field df = coordinate_derivative(grid, f, k, threads);
        const Field coef = eval_on_grid(grid, a);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += coef[i] * df[i];
    }
    return out;
}

Field apply_operator(const Grid& grid, const std::vector<std::vector<Polynomial>>& frame,
                     const OperatorPoly& op, const Field& f, int threads) {
    Field out(f.size(), 0.0);
    for (const auto& [mono, coeff] : op.terms()) {
        Field cur = f;
        for (int j = grid.dim() - 1; j >= 0; --j)
            for (unsigned rep = 0; rep < mono[j]; ++rep)
                cur = apply_generator(grid, frame, j, cur, threads);
        const double c = rat_double(coeff);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += c * cur[i];
    }
    return out;
}

std::vector<Field> apply_operator(const Grid& grid,
                                  const std::vector<std::vector<Polynomial>>& frame,
                                  const FormOperator& op, const std::vector<Field>& comps,
                                  int threads) {
    if (comps.size() != op.cols())
        throw UsageError("component count does not match the operator");
    std::vector<Field> out(op.rows(), Field(grid.size(), 0.0));
    for (std::size_t r = 0; r < op.rows(); ++r) {
        for (std::size_t c = 0; c < op.cols(); ++c) {
            if (op.m[r][c].terms().empty()) continue;
            const Field part = apply_operator(grid, frame, op.m[r][c], comps[c], threads);
            for (std::size_t i = 0; i < part.size(); ++i) out[r][i] += part[i];
        }
    }
    return out;
}

Field horizontal_divergence(const Grid& grid,
                            const std::vector<std::vector<Polynomial>>& frame,
                            const std::vector<Field>& comps, int threads) {
    const int m1 = grid.algebra->layers()[0];
    if (static_cast<int>(comps.size()) != m1)
        throw UsageError("horizontal divergence expects one field per first-layer generator");
    Field out(grid.size(), 0.0);
    for (int j = 0; j < m1; ++j) {
        const Field dj = apply_generator(grid, frame, j, comps[j], threads);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += dj[i];
    }
    return out;
}

std::vector<std::vector<double>> ratmat_to_double(const RatMat& a) {
    std::vector<std::vector<double>> out(a.rows(), std::vector<double>(a.cols()));
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) out[r][c] = rat_double(a.at(r, c));
    return out;
}

std::vector<Field> apply_matrix(const std::vector<std::vector<double>>& a,
                                const std::vector<Field>& comps) {
    if (a.empty()) return {};
    if (comps.size() != a[0].size()) throw UsageError("matrix size does not match components");
    const std::size_t n = comps.empty() ? 0 : comps[0].size();
    std::vector<Field> out(a.size(), Field(n, 0.0));
    for (std::size_t r = 0; r < a.size(); ++r)
        for (std::size_t c = 0; c < a[r].size(); ++c) {
            if (a[r][c] == 0.0) continue;
            for (std::size_t i = 0; i < n; ++i) out[r][i] += a[r][c] * comps[c][i];
        }
    return out;
}

Field bump_field(const Grid& grid, const std::vector<double>& center,
                 const std::vector<double>& widths, double amplitude) {
    Field out(grid.size(), 0.0);
    std::vector<int> idx;
    std::vector<double> x;
    for (std::size_t i = 0; i < out.size(); ++i) {
        grid.unindex(i, idx);
        grid.node(idx, x);
        double v2 = 0.0;
        for (int a = 0; a < grid.dim(); ++a) {
            const double u = (x[a] - center[a]) / widths[a];
            v2 += u * u;
        }
        if (v2 < 1.0) {
            const double s = 1.0 - v2;
            out[i] = amplitude * s * s * s;
        }
    }
    return out;
}

namespace {

// Per-axis coordinate caps for points of the gauge ball, shrunk by the layer
// multiplicity so that a full box corner still fits in the ball.
std::vector<double> axis_caps(const Grid& grid, double radius) {
    const auto& g = *grid.algebra;
    std::vector<double> caps(g.dim());
    for (int k = 0; k < g.dim(); ++k) {
        const int layer = g.layer_of(k);
        const double bw = std::pow(radius / grid.norm.eps[layer - 1],
                                   static_cast<double>(layer));
        caps[k] = bw / std::sqrt(static_cast<double>(g.layers()[layer - 1]));
    }
    return caps;
}

BumpSpec draw_bump(const Grid& grid, std::mt19937_64& rng, const BumpFamilyOptions& opt) {
    const auto caps = axis_caps(grid, opt.support_radius);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int attempt = 0; attempt < 256; ++attempt) {
        BumpSpec b;
        b.center.resize(grid.dim());
        b.widths.resize(grid.dim());
        bool ok = true;
        for (int a = 0; a < grid.dim(); ++a) {
            const double wmin = opt.min_width_cells * grid.h[a];
            const double wmax = std::max(wmin, opt.max_width_frac * caps[a]);
            b.widths[a] = wmin + (wmax - wmin) * unit(rng);
            const double cmax = caps[a] - b.widths[a];
            if (cmax <= 0) {
                ok = false;
                b.center[a] = 0.0;
            } else {
                b.center[a] = (2.0 * unit(rng) - 1.0) * cmax;
            }
        }
        const double amp = 0.4 + 0.6 * unit(rng);
        b.amplitude = unit(rng) < 0.5 ? -amp : amp;
        if (!ok) continue;
        SupportBox box;
        box.empty = false;
        box.lo.resize(grid.dim());
        box.hi.resize(grid.dim());
        for (int a = 0; a < grid.dim(); ++a) {
            box.lo[a] = std::max(
                0, static_cast<int>(std::floor((b.center[a] - b.widths[a] - grid.lo[a]) / grid.h[a])));
            box.hi[a] = std::min(
                grid.shape[a] - 1,
                static_cast<int>(std::ceil((b.center[a] + b.widths[a] - grid.lo[a]) / grid.h[a])));
        }
        if (max_gauge_norm_in_box(grid, box) <= opt.support_radius) return b;
    }
    throw NumericError("could not place a bump inside the requested ball");
}

}  // namespace

std::vector<BumpSpec> draw_bump_family(const Grid& grid, std::uint64_t seed,
                                       const BumpFamilyOptions& opt) {
    std::mt19937_64 rng(seed);
    std::vector<BumpSpec> out;
    out.reserve(opt.bumps);
    for (int b = 0; b < opt.bumps; ++b) out.push_back(draw_bump(grid, rng, opt));
    return out;
}

Field random_bump_sum(const Grid& grid, std::uint64_t seed, const BumpFamilyOptions& opt) {
    Field out(grid.size(), 0.0);
    for (const BumpSpec& p : draw_bump_family(grid, seed, opt)) {
        const Field f = bump_field(grid, p.center, p.widths, p.amplitude);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += f[i];
    }
    return out;
}

Field random_zero_average_field(const Grid& grid, std::uint64_t seed,
                                const BumpFamilyOptions& opt) {
    Field f = random_bump_sum(grid, seed, opt);
    const auto caps = axis_caps(grid, opt.support_radius);
    std::vector<double> center(grid.dim(), 0.0);
    std::vector<double> widths(grid.dim());
    for (int a = 0; a < grid.dim(); ++a)
        widths[a] = std::max(opt.min_width_cells * grid.h[a], 0.45 * caps[a]);
    const Field corrector = bump_field(grid, center, widths);
    const double mass = integrate(grid, corrector);
    if (mass <= 0) throw NumericError("corrector bump has nonpositive mass");
    const double drift = integrate(grid, f) / mass;
    for (std::size_t i = 0; i < f.size(); ++i) f[i] -= drift * corrector[i];
    return f;
}

void project_zero_average(const Grid& grid, Field& f, double ball_radius, double rel_tol) {
    const double total = integrate(grid, f);
    const double l1 = lp_norm(grid, f, 1.0);
    if (l1 == 0.0) return;
    if (std::abs(total) > rel_tol * l1)
        throw NumericError("field average exceeds the zero-average tolerance");
    const auto mask = ball_mask(grid, ball_radius);
    std::size_t count = 0;
    for (auto m : mask) count += m;
    if (count == 0) throw NumericError("projection ball contains no grid nodes");
    const double shift = total / (grid.cell_volume() * static_cast<double>(count));
    for (std::size_t i = 0; i < f.size(); ++i)
        if (mask[i]) f[i] -= shift;
}

}  // namespace carnot
