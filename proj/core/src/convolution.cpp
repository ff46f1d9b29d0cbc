#include <carnot/convolution.hpp>

#include <carnot/errors.hpp>
#include <carnot/group.hpp>
#include <carnot/parallel.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

namespace carnot {

void require_standard_h1_frame(const StratifiedLieAlgebra& g) {
    bool ok = g.dim() == 3 && g.step() == 2 && g.layers() == std::vector<int>{2, 1};
    if (ok) {
        const auto frame = frame_fields(g);
        const Polynomial one = Polynomial::constant(Rational(1), 3);
        const Polynomial zero(3);
        const Polynomial x = Polynomial::variable(0, 3);
        const Polynomial y = Polynomial::variable(1, 3);
        const Rational half = Rational(1) / 2;
        ok = frame[0][0] == one && frame[0][1] == zero &&
             frame[0][2] == y.scaled(-half) && frame[1][0] == zero &&
             frame[1][1] == one && frame[1][2] == x.scaled(half) &&
             frame[2][0] == zero && frame[2][1] == zero && frame[2][2] == one;
    }
    if (!ok)
        throw UsageError(
            "grid kernel routines are only available for the standard first Heisenberg frame");
}

namespace {

// Tent-weighted kernel profile of one column, tabulated on a grid uniform in
// xi = sign(s) log(1 + |s|/s0) so the waist of the kernel is resolved without
// a fine global table.
struct WarpTable {
    bool empty = true;
    std::vector<double> sval, W;

    // Samples W at s, s + step, ... with a single monotone walk.
    void fill(double s, double step, int count, double* out) const {
        if (empty) {
            std::fill(out, out + count, 0.0);
            return;
        }
        const int n = static_cast<int>(sval.size());
        int k = static_cast<int>(std::upper_bound(sval.begin(), sval.end(), s) -
                                 sval.begin()) -
                1;
        k = std::clamp(k, 0, n - 2);
        for (int m = 0; m < count; ++m, s += step) {
            while (k + 2 < n && s > sval[k + 1]) ++k;
            double t = (s - sval[k]) / (sval[k + 1] - sval[k]);
            t = std::clamp(t, 0.0, 1.0);
            out[m] = W[k] + t * (W[k + 1] - W[k]);
        }
    }
};

struct ColumnQuad {
    const KernelComponent* K;
    double d1, d2, h3;
    bool hole = false;
    double w_hole = 0.0;
    std::vector<double> ws, kv;  // shared kernel samples

    double tent(double u) const { return std::max(0.0, 1.0 - std::abs(u)); }

    double piece(double a, double b, double s) const {
        if (!(b - a > 0.0)) return 0.0;
        double acc = 0.0;
        double px = a;
        double pg = K->eval(d1, d2, a) * tent((s - a) / h3);
        bool apex = a < s && s < b;
        const auto lo = std::upper_bound(ws.begin(), ws.end(), a);
        const auto hi = std::lower_bound(ws.begin(), ws.end(), b);
        auto emit = [&](double x, double g) {
            acc += 0.5 * (x - px) * (g + pg);
            px = x;
            pg = g;
        };
        for (auto it = lo; it != hi; ++it) {
            const double x = *it;
            if (apex && s < x) {
                emit(s, K->eval(d1, d2, s));
                apex = false;
            }
            if (x == s) apex = false;
            emit(x, kv[static_cast<std::size_t>(it - ws.begin())] * tent((s - x) / h3));
        }
        if (apex) emit(s, K->eval(d1, d2, s));
        emit(b, K->eval(d1, d2, b) * tent((s - b) / h3));
        return acc;
    }

    double value(double s) const {
        const double a = s - h3, b = s + h3;
        if (!hole) return piece(a, b, s);
        return piece(a, std::min(b, -w_hole), s) + piece(std::max(a, w_hole), b, s);
    }
};

WarpTable build_table(const KernelComponent& K, double d1, double d2, double h3,
                      double s_need, double resolution) {
    WarpTable T;
    const double r2 = d1 * d1 + d2 * d2;
    const double r = std::sqrt(r2);
    if (K.support_N > 0.0 && r >= K.support_N) return T;

    double w_sup = std::numeric_limits<double>::infinity();
    if (K.support_N > 0.0) {
        const double R2 = K.support_N * K.support_N;
        w_sup = std::sqrt(std::max(R2 * R2 - r2 * r2, 0.0)) / 4.0;
    }
    ColumnQuad q;
    q.K = &K;
    q.d1 = d1;
    q.d2 = d2;
    q.h3 = h3;
    if (K.singular_origin && r < K.hole_N) {
        const double e2 = K.hole_N * K.hole_N;
        q.w_hole = std::sqrt(std::max(e2 * e2 - r2 * r2, 0.0)) / 4.0;
        q.hole = q.w_hole > 0.0;
    }

    const double s_max = std::min(s_need + 2.0 * h3, w_sup + 2.0 * h3);
    const double w_max = s_max + h3;
    if (q.hole && q.w_hole >= w_max) return T;

    const double t_scale = r2 / 4.0;
    const double s0 = std::max(t_scale, h3 / 16.0);
    const double dxi = 1.0 / resolution;
    const int M = std::max(2, static_cast<int>(std::ceil(std::log1p(s_max / s0) / dxi)) + 1);

    const double dw_floor = std::max(t_scale / 12.0, h3 / 4096.0);
    const double dw_cap = h3 / 8.0;
    std::vector<double> pos;
    double w = q.hole ? q.w_hole : 0.0;
    pos.push_back(w);
    while (w < w_max) {
        w += std::min(dw_cap, std::max(w / 12.0, dw_floor));
        if (w > w_max) w = w_max;
        pos.push_back(w);
    }
    q.ws.reserve(2 * pos.size());
    for (std::size_t i = pos.size(); i-- > (q.hole ? 0u : 1u);) q.ws.push_back(-pos[i]);
    q.ws.insert(q.ws.end(), pos.begin(), pos.end());
    q.kv.resize(q.ws.size());
    for (std::size_t i = 0; i < q.ws.size(); ++i) q.kv[i] = K.eval(d1, d2, q.ws[i]);

    T.sval.resize(2 * M + 1);
    T.W.resize(2 * M + 1);
    double peak = 0.0;
    for (int i = -M; i <= M; ++i) {
        const double xi = i * dxi;
        const double s = (i == 0) ? 0.0 : std::copysign(s0 * std::expm1(std::abs(xi)), xi);
        T.sval[i + M] = s;
        const double v = q.value(s);
        T.W[i + M] = v;
        peak = std::max(peak, std::abs(v));
    }
    T.empty = peak == 0.0;
    if (T.empty) {
        T.sval.clear();
        T.W.clear();
    }
    return T;
}

struct BoxSpan {
    int lo1, hi1, lo2, hi2, lo3, hi3;
    explicit BoxSpan(const SupportBox& b)
        : lo1(b.lo[0]), hi1(b.hi[0]), lo2(b.lo[1]), hi2(b.hi[1]), lo3(b.lo[2]),
          hi3(b.hi[2]) {}
};

SupportBox clip_box(const Grid& grid, const SupportBox& b) {
    SupportBox out = b;
    if (out.empty) return out;
    for (int a = 0; a < 3; ++a) {
        out.lo[a] = std::max(out.lo[a], 0);
        out.hi[a] = std::min(out.hi[a], grid.shape[a] - 1);
        if (out.lo[a] > out.hi[a]) {
            out.empty = true;
            return out;
        }
    }
    return out;
}

}  // namespace

Field group_convolve(const Grid& grid, const Field& f, const KernelComponent& K,
                     const ConvolveOptions& opt) {
    require_standard_h1_frame(*grid.algebra);
    if (f.size() != grid.size()) throw UsageError("field does not match the grid");
    if (!K.eval) throw UsageError("kernel has no evaluator");
    if (K.singular_origin && K.hole_N <= 0.0)
        throw NumericError("kernel is singular at the origin and needs an excision ball");

    Field u(grid.size(), 0.0);
    const SupportBox src = support_box(grid, f, 0.0);
    if (src.empty) return u;

    const double h1 = grid.h[0], h2 = grid.h[1], h3 = grid.h[2];
    SupportBox outb;
    if (opt.output_box) {
        outb = clip_box(grid, *opt.output_box);
    } else if (K.support_N > 0.0) {
        const double R = K.support_N;
        double xmax = 0.0;
        for (int a = 0; a < 2; ++a)
            xmax = std::max(xmax, std::max(std::abs(grid.lo[a]), std::abs(grid.hi[a])));
        const double w_reach = R * R / 4.0 + xmax * R;
        outb = src;
        const int c1 = static_cast<int>(std::ceil(R / h1)) + 1;
        const int c2 = static_cast<int>(std::ceil(R / h2)) + 1;
        const int c3 = static_cast<int>(std::ceil(w_reach / h3)) + 1;
        outb.lo[0] -= c1;
        outb.hi[0] += c1;
        outb.lo[1] -= c2;
        outb.hi[1] += c2;
        outb.lo[2] -= c3;
        outb.hi[2] += c3;
        outb = clip_box(grid, outb);
    } else {
        outb = full_box(grid);
    }
    if (outb.empty) return u;

    const BoxSpan ob(outb), sb(src);
    const int n2 = grid.shape[1], n3 = grid.shape[2];

    // Nonzero t-range per source column; empty columns drop out early.
    const int s1n = sb.hi1 - sb.lo1 + 1, s2n = sb.hi2 - sb.lo2 + 1;
    std::vector<int> occ_lo(static_cast<std::size_t>(s1n) * s2n, n3);
    std::vector<int> occ_hi(static_cast<std::size_t>(s1n) * s2n, -1);
    for (int j1 = sb.lo1; j1 <= sb.hi1; ++j1)
        for (int j2 = sb.lo2; j2 <= sb.hi2; ++j2) {
            const std::size_t base =
                (static_cast<std::size_t>(j1) * n2 + j2) * n3;
            const std::size_t cell =
                static_cast<std::size_t>(j1 - sb.lo1) * s2n + (j2 - sb.lo2);
            for (int j3 = sb.lo3; j3 <= sb.hi3; ++j3)
                if (f[base + j3] != 0.0) {
                    if (j3 < occ_lo[cell]) occ_lo[cell] = j3;
                    occ_hi[cell] = j3;
                }
        }

    // Column tables over the needed offset rectangle.
    const int p1lo = ob.lo1 - sb.hi1, p1hi = ob.hi1 - sb.lo1;
    const int p2lo = ob.lo2 - sb.hi2, p2hi = ob.hi2 - sb.lo2;
    const int p1n = p1hi - p1lo + 1, p2n = p2hi - p2lo + 1;
    const int mlo_all = ob.lo3 - sb.hi3, mhi_all = ob.hi3 - sb.lo3;
    const double mabs = h3 * std::max(std::abs(mlo_all), std::abs(mhi_all));
    double x1max = 0.0, x2max = 0.0;
    {
        const double a0 = grid.lo[0] + ob.lo1 * h1, a1 = grid.lo[0] + ob.hi1 * h1;
        const double b0 = grid.lo[1] + ob.lo2 * h2, b1 = grid.lo[1] + ob.hi2 * h2;
        x1max = std::max(std::abs(a0), std::abs(a1));
        x2max = std::max(std::abs(b0), std::abs(b1));
    }
    auto s_need_for = [&](double d1, double d2) {
        return mabs + 0.5 * (x2max * std::abs(d1) + x1max * std::abs(d2));
    };

    const double sub_R = opt.subdivide_radius_cells * std::max(h1, h2);
    const int q1r = static_cast<int>(std::ceil(sub_R / h1)) + 1;
    const int q2r = static_cast<int>(std::ceil(sub_R / h2)) + 1;
    const int q1lo = std::max(p1lo, -q1r), q1hi = std::min(p1hi, q1r);
    const int q2lo = std::max(p2lo, -q2r), q2hi = std::min(p2hi, q2r);
    const int q1n = std::max(0, q1hi - q1lo + 1), q2n = std::max(0, q2hi - q2lo + 1);

    std::vector<WarpTable> main_tab(static_cast<std::size_t>(p1n) * p2n);
    std::vector<WarpTable> sub_tab(static_cast<std::size_t>(q1n) * q2n * 9);

    {
        const std::size_t jobs = main_tab.size() + sub_tab.size();
        auto build_one = [&](std::size_t j) {
            if (j < main_tab.size()) {
                const int p1 = p1lo + static_cast<int>(j) / p2n;
                const int p2 = p2lo + static_cast<int>(j) % p2n;
                const double d1 = p1 * h1, d2 = p2 * h2;
                if (std::hypot(d1, d2) <= sub_R && q1n > 0 && q2n > 0)
                    return;  // covered by subs
                main_tab[j] =
                    build_table(K, d1, d2, h3, s_need_for(d1, d2), opt.table_resolution);
            } else {
                const std::size_t i = j - main_tab.size();
                const int cell = static_cast<int>(i / 9);
                const int sub = static_cast<int>(i % 9);
                const int p1 = q1lo + cell / q2n, p2 = q2lo + cell % q2n;
                if (std::hypot(p1 * h1, p2 * h2) > sub_R) return;
                const int a = sub / 3 - 1, b = sub % 3 - 1;
                const double d1 = (p1 + a / 3.0) * h1, d2 = (p2 + b / 3.0) * h2;
                sub_tab[i] =
                    build_table(K, d1, d2, h3, s_need_for(d1, d2), opt.table_resolution);
            }
        };
        if (opt.threads <= 1) {
            for (std::size_t j = 0; j < jobs; ++j) build_one(j);
        } else {
            std::atomic<std::size_t> next{0};
            std::exception_ptr err;
            std::mutex err_mu;
            std::vector<std::thread> pool;
            for (int t = 0; t < opt.threads; ++t)
                pool.emplace_back([&] {
                    try {
                        for (;;) {
                            const std::size_t j = next.fetch_add(1);
                            if (j >= jobs) return;
                            build_one(j);
                        }
                    } catch (...) {
                        std::lock_guard<std::mutex> lk(err_mu);
                        if (!err) err = std::current_exception();
                    }
                });
            for (auto& th : pool) th.join();
            if (err) std::rethrow_exception(err);
        }
    }

    // Correlation over output columns; each column is owned by one worker.
    const std::size_t cells =
        static_cast<std::size_t>(ob.hi1 - ob.lo1 + 1) * (ob.hi2 - ob.lo2 + 1);
    const int o2n = ob.hi2 - ob.lo2 + 1;
    const double wplane = h1 * h2;

    auto do_cell = [&](std::size_t c, std::vector<double>& V, std::vector<double>& blend) {
        const int i1 = ob.lo1 + static_cast<int>(c) / o2n;
        const int i2 = ob.lo2 + static_cast<int>(c) % o2n;
        const double x1 = grid.lo[0] + i1 * h1;
        const double x2 = grid.lo[1] + i2 * h2;
        double* uc = u.data() + (static_cast<std::size_t>(i1) * n2 + i2) * n3;

        for (int j1 = sb.lo1; j1 <= sb.hi1; ++j1)
            for (int j2 = sb.lo2; j2 <= sb.hi2; ++j2) {
                const int p1 = i1 - j1, p2 = i2 - j2;
                const double d1 = p1 * h1, d2 = p2 * h2;
                const bool near = std::hypot(d1, d2) <= sub_R && q1n > 0 && q2n > 0;
                const std::size_t cell =
                    static_cast<std::size_t>(j1 - sb.lo1) * s2n + (j2 - sb.lo2);

                if (!near) {
                    const int ja = occ_lo[cell], jb = occ_hi[cell];
                    if (ja > jb) continue;
                    const WarpTable& T =
                        main_tab[static_cast<std::size_t>(p1 - p1lo) * p2n + (p2 - p2lo)];
                    if (T.empty) continue;
                    const double tau = 0.5 * (x2 * d1 - x1 * d2);
                    const int mlo = ob.lo3 - jb;
                    const int len = (ob.hi3 - ob.lo3) + (jb - ja) + 1;
                    V.resize(len);
                    T.fill(tau + mlo * h3, h3, len, V.data());
                    const double* fc =
                        f.data() + (static_cast<std::size_t>(j1) * n2 + j2) * n3;
                    for (int i3 = ob.lo3; i3 <= ob.hi3; ++i3) {
                        double acc = 0.0;
                        const double* vr = V.data() + (i3 - mlo);
                        for (int j3 = ja; j3 <= jb; ++j3) acc += fc[j3] * vr[-j3];
                        uc[i3] += wplane * acc;
                    }
                    continue;
                }

                for (int sub = 0; sub < 9; ++sub) {
                    const int a = sub / 3 - 1, b = sub % 3 - 1;
                    const WarpTable& T =
                        sub_tab[(static_cast<std::size_t>(p1 - q1lo) * q2n + (p2 - q2lo)) *
                                    9 +
                                sub];
                    if (T.empty) continue;
                    // f at the sub-column interpolates the flanking columns.
                    int ja = n3, jb = -1;
                    std::pair<int, double> wa[2] = {{0, 1.0 - std::abs(a) / 3.0},
                                                    {-a, std::abs(a) / 3.0}};
                    std::pair<int, double> wb[2] = {{0, 1.0 - std::abs(b) / 3.0},
                                                    {-b, std::abs(b) / 3.0}};
                    const int na = a == 0 ? 1 : 2, nb = b == 0 ? 1 : 2;
                    for (int ia = 0; ia < na; ++ia)
                        for (int ib = 0; ib < nb; ++ib) {
                            const int k1 = j1 + wa[ia].first, k2 = j2 + wb[ib].first;
                            if (k1 < sb.lo1 || k1 > sb.hi1 || k2 < sb.lo2 || k2 > sb.hi2)
                                continue;
                            const std::size_t kc =
                                static_cast<std::size_t>(k1 - sb.lo1) * s2n + (k2 - sb.lo2);
                            ja = std::min(ja, occ_lo[kc]);
                            jb = std::max(jb, occ_hi[kc]);
                        }
                    if (ja > jb) continue;
                    blend.assign(n3, 0.0);
                    for (int ia = 0; ia < na; ++ia)
                        for (int ib = 0; ib < nb; ++ib) {
                            const int k1 = j1 + wa[ia].first, k2 = j2 + wb[ib].first;
                            if (k1 < sb.lo1 || k1 > sb.hi1 || k2 < sb.lo2 || k2 > sb.hi2)
                                continue;
                            const double w = wa[ia].second * wb[ib].second;
                            const double* fc =
                                f.data() + (static_cast<std::size_t>(k1) * n2 + k2) * n3;
                            for (int j3 = ja; j3 <= jb; ++j3) blend[j3] += w * fc[j3];
                        }
                    const double e1 = (p1 + a / 3.0) * h1, e2 = (p2 + b / 3.0) * h2;
                    const double tau = 0.5 * (x2 * e1 - x1 * e2);
                    const int mlo = ob.lo3 - jb;
                    const int len = (ob.hi3 - ob.lo3) + (jb - ja) + 1;
                    V.resize(len);
                    T.fill(tau + mlo * h3, h3, len, V.data());
                    for (int i3 = ob.lo3; i3 <= ob.hi3; ++i3) {
                        double acc = 0.0;
                        const double* vr = V.data() + (i3 - mlo);
                        for (int j3 = ja; j3 <= jb; ++j3) acc += blend[j3] * vr[-j3];
                        uc[i3] += wplane / 9.0 * acc;
                    }
                }
            }
    };

    if (opt.threads <= 1) {
        std::vector<double> V, blend;
        for (std::size_t c = 0; c < cells; ++c) do_cell(c, V, blend);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr err;
        std::mutex err_mu;
        std::vector<std::thread> pool;
        for (int t = 0; t < opt.threads; ++t)
            pool.emplace_back([&] {
                std::vector<double> V, blend;
                try {
                    for (;;) {
                        const std::size_t c = next.fetch_add(1);
                        if (c >= cells) return;
                        do_cell(c, V, blend);
                    }
                } catch (...) {
                    std::lock_guard<std::mutex> lk(err_mu);
                    if (!err) err = std::current_exception();
                }
            });
        for (auto& th : pool) th.join();
        if (err) std::rethrow_exception(err);
    }

    // Restore the excised mass through the kernel moments.
    if (K.singular_origin &&
        (K.c0 != 0.0 || K.c1[0] != 0.0 || K.c1[1] != 0.0 || K.c1[2] != 0.0)) {
        const auto frame = frame_fields(*grid.algebra);
        const Field xf1 = apply_generator(grid, frame, 0, f, opt.threads);
        const Field xf2 = apply_generator(grid, frame, 1, f, opt.threads);
        const Field ft = coordinate_derivative(grid, f, 2, opt.threads);
        for (int i1 = ob.lo1; i1 <= ob.hi1; ++i1)
            for (int i2 = ob.lo2; i2 <= ob.hi2; ++i2) {
                const std::size_t base = (static_cast<std::size_t>(i1) * n2 + i2) * n3;
                for (int i3 = ob.lo3; i3 <= ob.hi3; ++i3) {
                    const std::size_t n = base + i3;
                    u[n] += f[n] * K.c0 - xf1[n] * K.c1[0] - xf2[n] * K.c1[1] -
                            ft[n] * K.c1[2];
                }
            }
    }
    return u;
}

}  // namespace carnot
