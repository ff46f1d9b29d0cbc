#include "carnot/group.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "carnot/errors.hpp"
#include "carnot/rng.hpp"

namespace carnot {

namespace {

Rational factorial(std::size_t n) {
  Rational f(1);
  for (std::size_t i = 2; i <= n; ++i) f *= Rational(static_cast<long>(i));
  return f;
}

// Sums (-1)^{n-1} / (n m prod r_i! s_i!) over all ways to cut word[pos:] into
// contiguous blocks of shape x^r y^s, r + s >= 1.
void segment_sum(const std::string& w, std::size_t pos, int nblocks, const Rational& invprod,
                 Rational& acc) {
  if (pos == w.size()) {
    Rational v = invprod / (Rational(nblocks) * Rational(static_cast<long>(w.size())));
    if (nblocks % 2 == 0) v = -v;
    acc += v;
    return;
  }
  std::size_t max_a = 0;
  while (pos + max_a < w.size() && w[pos + max_a] == 'x') ++max_a;
  for (std::size_t a = 0; a <= max_a; ++a) {
    std::size_t ypos = pos + a;
    std::size_t max_b = 0;
    while (ypos + max_b < w.size() && w[ypos + max_b] == 'y') ++max_b;
    Rational fa = factorial(a);
    for (std::size_t b = (a == 0 ? 1 : 0); b <= max_b; ++b)
      segment_sum(w, ypos + b, nblocks + 1, invprod / (fa * factorial(b)), acc);
  }
}

}  // namespace

Rational dynkin_coefficient(const std::string& word) {
  Rational acc(0);
  segment_sum(word, 0, 0, Rational(1), acc);
  return acc;
}

const BchExpansion& BchExpansion::up_to(int max_len) {
  static std::mutex mu;
  static std::map<int, BchExpansion> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(max_len);
  if (it != cache.end()) return it->second;
  BchExpansion ex;
  for (int m = 1; m <= max_len; ++m) {
    for (std::uint32_t bits = 0; bits < (1u << m); ++bits) {
      std::string w(m, 'x');
      for (int i = 0; i < m; ++i)
        if (bits & (1u << i)) w[i] = 'y';
      // Right-nested brackets ending in a repeated letter vanish identically.
      if (m >= 2 && w[m - 1] == w[m - 2]) continue;
      Rational c = dynkin_coefficient(w);
      if (!rat_is_zero(c)) ex.terms.push_back({std::move(w), std::move(c)});
    }
  }
  return cache.emplace(max_len, std::move(ex)).first->second;
}

std::vector<double> dilate(const StratifiedLieAlgebra& g, double s, const std::vector<double>& p) {
  std::vector<double> out(p.size());
  for (int k = 0; k < g.dim(); ++k) {
    double f = 1.0;
    for (int t = 0; t < g.layer_of(k); ++t) f *= s;
    out[k] = f * p[k];
  }
  return out;
}

std::vector<Rational> dilate(const StratifiedLieAlgebra& g, const Rational& s,
                             const std::vector<Rational>& p) {
  std::vector<Rational> out(p.size(), Rational(0));
  for (int k = 0; k < g.dim(); ++k)
    out[k] = rat_pow(s, static_cast<unsigned>(g.layer_of(k))) * p[k];
  return out;
}

std::vector<Polynomial> group_law_polynomials(const StratifiedLieAlgebra& g) {
  const int n = g.dim();
  std::vector<Polynomial> u, v;
  for (int i = 0; i < n; ++i) u.push_back(Polynomial::variable(i, 2 * n));
  for (int i = 0; i < n; ++i) v.push_back(Polynomial::variable(n + i, 2 * n));
  return bch_product(g, u, v, Polynomial::constant(Rational(0), 2 * n));
}

namespace {

// Drops every monomial touching variables n..2n-1 and reindexes to n variables.
Polynomial restrict_to_first(const Polynomial& p, int n) {
  Polynomial out = Polynomial::constant(Rational(0), n);
  for (const auto& [e, c] : p.terms()) {
    bool pure = true;
    for (std::size_t i = static_cast<std::size_t>(n); i < e.size(); ++i)
      if (e[i] != 0) {
        pure = false;
        break;
      }
    if (!pure) continue;
    Polynomial::Exponents head(e.begin(), e.begin() + n);
    out.add_term(head, c);
  }
  return out;
}

}  // namespace

std::vector<std::vector<Polynomial>> frame_fields(const StratifiedLieAlgebra& g) {
  const int n = g.dim();
  std::vector<Polynomial> law = group_law_polynomials(g);
  std::vector<std::vector<Polynomial>> a(n, std::vector<Polynomial>());
  for (int j = 0; j < n; ++j) {
    a[j].reserve(n);
    for (int k = 0; k < n; ++k) a[j].push_back(restrict_to_first(law[k].derivative(n + j), n));
  }
  return a;
}

std::vector<std::vector<double>> frame_matrix_at(const std::vector<std::vector<Polynomial>>& frame,
                                                 const std::vector<double>& p) {
  std::vector<std::vector<double>> m(frame.size(), std::vector<double>(frame.size(), 0.0));
  for (std::size_t j = 0; j < frame.size(); ++j)
    for (std::size_t k = 0; k < frame.size(); ++k) m[j][k] = frame[j][k].eval_double(p);
  return m;
}

nlohmann::json NormConfig::to_json() const { return nlohmann::json{{"eps", eps}}; }

NormConfig NormConfig::from_json(const nlohmann::json& j) {
  if (!j.contains("eps") || !j["eps"].is_array()) throw MalformedSpec("norm config needs eps array");
  NormConfig cfg;
  for (const auto& v : j["eps"]) cfg.eps.push_back(v.get<double>());
  if (cfg.eps.empty() || cfg.eps[0] != 1.0) throw MalformedSpec("norm config eps must start at 1");
  return cfg;
}

double norm_inf_partial(const StratifiedLieAlgebra& g, const NormConfig& cfg,
                        const std::vector<double>& p, int top_layer) {
  double best = 0.0;
  for (int l = 1; l <= top_layer; ++l) {
    double s2 = 0.0;
    for (int k = g.layer_begin(l); k < g.layer_end(l); ++k) s2 += p[k] * p[k];
    double term = cfg.eps[l - 1] * std::pow(std::sqrt(s2), 1.0 / l);
    if (term > best) best = term;
  }
  return best;
}

double norm_inf(const StratifiedLieAlgebra& g, const NormConfig& cfg,
                const std::vector<double>& p) {
  return norm_inf_partial(g, cfg, p, g.step());
}

namespace {

// Random point with layers above top_layer zero, scaled to norm <= radius.
std::vector<double> sample_point(const StratifiedLieAlgebra& g, const NormConfig& cfg,
                                 int top_layer, double radius, std::mt19937_64& gen) {
  std::vector<double> p(g.dim(), 0.0);
  for (int l = 1; l <= top_layer; ++l)
    for (int k = g.layer_begin(l); k < g.layer_end(l); ++k) p[k] = rng_symmetric(gen);
  double r = norm_inf_partial(g, cfg, p, top_layer);
  if (r < 1e-12) return p;
  double s = radius * rng_uniform(gen) / r;
  return dilate(g, s, p);
}

struct TriangleScan {
  long violations = 0;
  double max_ratio = 0.0;
};

TriangleScan scan_triangle(const StratifiedLieAlgebra& g, const NormConfig& cfg, int top_layer,
                           long samples, std::uint64_t seed) {
  constexpr double kSlack = 1e-12;
  std::mt19937_64 gen(seed);
  TriangleScan out;
  for (long s = 0; s < samples; ++s) {
    std::vector<double> u = sample_point(g, cfg, top_layer, 10.0, gen);
    std::vector<double> v = sample_point(g, cfg, top_layer, 10.0, gen);
    double nu = norm_inf_partial(g, cfg, u, top_layer);
    double nv = norm_inf_partial(g, cfg, v, top_layer);
    if (nu + nv < 1e-12) continue;
    double nuv = norm_inf_partial(g, cfg, group_mul(g, u, v), top_layer);
    double ratio = nuv / (nu + nv);
    if (ratio > out.max_ratio) out.max_ratio = ratio;
    if (ratio > 1.0 + kSlack) ++out.violations;
  }
  return out;
}

}  // namespace

NormCalibration calibrate_norm(const StratifiedLieAlgebra& g, long samples_per_layer,
                               std::uint64_t seed) {
  NormCalibration cal;
  cal.algebra = g.name();
  cal.samples_per_layer = samples_per_layer;
  cal.seed = seed;
  cal.config.eps.assign(static_cast<std::size_t>(g.step()), 1.0);
  for (int l = 2; l <= g.step(); ++l) {
    bool found = false;
    for (int c = 0; c < 20; ++c) {
      double candidate = 1.0 - 0.05 * c;
      cal.config.eps[l - 1] = candidate;
      std::uint64_t s = seed + 1000003ULL * static_cast<std::uint64_t>(l) +
                        static_cast<std::uint64_t>(c);
      TriangleScan scan = scan_triangle(g, cal.config, l, samples_per_layer, s);
      if (scan.violations == 0) {
        found = true;
        if (scan.max_ratio > cal.max_ratio) cal.max_ratio = scan.max_ratio;
        break;
      }
    }
    if (!found)
      throw CalibrationFailure("no admissible eps for layer " + std::to_string(l) + " of " +
                               g.name());
  }
  return cal;
}

NormCheck verify_norm(const StratifiedLieAlgebra& g, const NormConfig& cfg, long samples,
                      std::uint64_t seed) {
  constexpr double kSlack = 1e-12;
  std::mt19937_64 gen(seed);
  NormCheck chk;
  chk.samples = samples;
  for (long s = 0; s < samples; ++s) {
    std::vector<double> u = sample_point(g, cfg, g.step(), 10.0, gen);
    std::vector<double> v = sample_point(g, cfg, g.step(), 10.0, gen);
    double nu = norm_inf(g, cfg, u);
    double nv = norm_inf(g, cfg, v);
    if (nu + nv >= 1e-12) {
      double ratio = norm_inf(g, cfg, group_mul(g, u, v)) / (nu + nv);
      if (ratio > chk.max_ratio) chk.max_ratio = ratio;
      if (ratio > 1.0 + kSlack) ++chk.triangle_violations;
    }
    if (nu >= 1e-9) {
      double lam = 0.25 + 4.0 * rng_uniform(gen);
      double herr = std::abs(norm_inf(g, cfg, dilate(g, lam, u)) - lam * nu) / (lam * nu);
      if (herr > chk.max_homogeneity_err) chk.max_homogeneity_err = herr;
      double serr = std::abs(norm_inf(g, cfg, group_inverse(u)) - nu) / nu;
      if (serr > chk.max_symmetry_err) chk.max_symmetry_err = serr;
    }
  }
  return chk;
}

nlohmann::json NormCalibration::to_json() const {
  return nlohmann::json{{"algebra", algebra},
                        {"eps", config.eps},
                        {"samples_per_layer", samples_per_layer},
                        {"seed", seed},
                        {"max_ratio", max_ratio}};
}

}  // namespace carnot
