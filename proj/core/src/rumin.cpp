#include "carnot/rumin.hpp"

#include <algorithm>
#include <sstream>

#include "carnot/errors.hpp"

namespace carnot {

namespace {

std::vector<int> lambda_weights(const StratifiedLieAlgebra& g, int h) {
  std::vector<int> w;
  for (std::uint32_t m : basis_masks(g.dim(), h)) w.push_back(mask_weight(g, m));
  return w;
}

RatMat select_columns(const RatMat& a, const std::vector<std::size_t>& cols) {
  RatMat out(a.rows(), cols.size());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) out.at(r, c) = a.at(r, cols[c]);
  return out;
}

Covector dtheta(const StratifiedLieAlgebra& g, int k) {
  Covector out(g.dim(), 2);
  for (const auto& e : g.bracket_table())
    if (e.k == k) out.add((1u << e.i) | (1u << e.j), -e.c);
  return out;
}

/// Row i of the result maps ambient coordinates to the i-th basis coefficient:
/// G^{-1} B^T with G = diag(norms2).
RatMat coords_mat(const WeightedBasis& b) {
  RatMat out(b.dim(), b.columns.rows());
  for (std::size_t i = 0; i < b.dim(); ++i)
    for (std::size_t r = 0; r < b.columns.rows(); ++r)
      out.at(i, r) = b.columns.at(r, i) / b.norms2[i];
  return out;
}

/// Matrix of * : Lambda^h -> Lambda^{n-h} in the mask bases.
RatMat star_matrix(int n, int h) {
  auto src = basis_masks(n, h), dst = basis_masks(n, n - h);
  RatMat s(dst.size(), src.size());
  for (std::size_t c = 0; c < src.size(); ++c) {
    HodgeDual hd = hodge_dual(n, src[c]);
    s.at(static_cast<std::size_t>(mask_position(n, hd.mask)), c) = Rational(hd.sign);
  }
  return s;
}

struct PQResult {
  FormOperator p, q;
  int nilpotency = 0;
};

PQResult make_pq(const NormalOrderContext& ctx, const FormOperator& d, const RatMat& pinv,
                 const RatMat& proj_r, const std::vector<int>& wh, const std::vector<int>& wh1) {
  const StratifiedLieAlgebra& g = ctx.algebra();
  const int n = g.dim();
  FormOperator pinv_op = FormOperator::from_matrix(pinv, n, wh, wh1);
  FormOperator pir = FormOperator::from_matrix(proj_r, n, wh, wh);
  FormOperator m_op = compose(ctx, pinv_op, d);
  FormOperator dd = compose(ctx, m_op, pir) - pir;

  PQResult out;
  out.p = FormOperator::identity(n, wh);
  FormOperator cur = dd;
  Rational sign(-1);
  const int bound = g.step() * n + 1;
  for (int k = 1; !cur.is_zero(); ++k) {
    if (k > bound)
      throw NilpotencyNotReached("D^" + std::to_string(k) + " still nonzero (bound " +
                                 std::to_string(bound) + ")");
    out.p = out.p + cur.scaled(sign);
    sign = -sign;
    out.nilpotency = k;
    cur = compose(ctx, cur, dd);
  }
  out.q = compose(ctx, out.p, pinv_op);
  return out;
}

RatMat pinv_of(const RatMat& m) {
  RatMat c = m.row_space_basis();
  if (c.cols() == 0) return RatMat(m.cols(), m.rows());
  RatMat mc = m * c;
  RatMat gram = mc.transpose() * mc;
  return c * gram.inverse() * mc.transpose();
}

bool check_cograded(const StratifiedLieAlgebra& g, const FormOperator& a, std::string* detail) {
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      for (const auto& [mono, coeff] : a.m[r][c].terms()) {
        (void)coeff;
        if (mono_hom_degree(g, mono) != a.src_weights[c] - a.dst_weights[r]) {
          if (detail) {
            std::ostringstream os;
            os << "entry (" << r << "," << c << ") of a codifferential has d(I) != src - dst";
            *detail = os.str();
          }
          return false;
        }
      }
  return true;
}

}  // namespace

RatMat maurer_cartan_d0(const StratifiedLieAlgebra& g, int h) {
  const int n = g.dim();
  auto src = basis_masks(n, h), dst = basis_masks(n, h + 1);
  RatMat m(dst.size(), src.size());
  if (h >= n) return m;
  for (std::size_t c = 0; c < src.size(); ++c) {
    auto idx = mask_indices(src[c]);
    for (std::size_t t = 0; t < idx.size(); ++t) {
      std::uint32_t left = 0, right = 0;
      for (std::size_t s = 0; s < t; ++s) left |= 1u << idx[s];
      for (std::size_t s = t + 1; s < idx.size(); ++s) right |= 1u << idx[s];
      Covector term =
          Covector::basis(n, left).wedge(dtheta(g, idx[t])).wedge(Covector::basis(n, right));
      if (t % 2) term = term.scaled(Rational(-1));
      for (const auto& [mask, coeff] : term.coeffs())
        m.at(static_cast<std::size_t>(mask_position(n, mask)), c) += coeff;
    }
  }
  return m;
}

FormOperator full_d(const StratifiedLieAlgebra& g, int h) {
  const int n = g.dim();
  auto src = basis_masks(n, h);
  FormOperator d = FormOperator::zero(n, lambda_weights(g, h + 1), lambda_weights(g, h));
  for (std::size_t c = 0; c < src.size(); ++c) {
    for (int j = 0; j < n; ++j) {
      if (src[c] & (1u << j)) continue;
      std::uint32_t dst = src[c] | (1u << j);
      int sign = wedge_sign(1u << j, src[c]);
      d.m[static_cast<std::size_t>(mask_position(n, dst))][c] +=
          OperatorPoly::generator(j, n).scaled(Rational(sign));
    }
  }
  RatMat d0 = maurer_cartan_d0(g, h);
  for (std::size_t r = 0; r < d0.rows(); ++r)
    for (std::size_t c = 0; c < d0.cols(); ++c)
      if (!rat_is_zero(d0.at(r, c))) d.m[r][c] += OperatorPoly::constant(d0.at(r, c), n);
  return d;
}

WeightedBasis e0_basis(const StratifiedLieAlgebra& g, int h) {
  const int n = g.dim();
  auto masks = basis_masks(n, h);
  RatMat stacked = maurer_cartan_d0(g, h);
  if (h > 0) stacked = stacked.vcat(maurer_cartan_d0(g, h - 1).transpose());

  WeightedBasis b;
  b.columns = RatMat(masks.size(), 0);
  for (int w : weights_in_degree(g, h)) {
    std::vector<std::size_t> cols;
    for (std::size_t p = 0; p < masks.size(); ++p)
      if (mask_weight(g, masks[p]) == w) cols.push_back(p);
    RatMat ker = select_columns(stacked, cols).kernel();
    if (ker.cols() == 0) continue;
    std::vector<Rational> norms2;
    RatMat orth = ker.gram_schmidt_columns(norms2);
    RatMat embedded(masks.size(), orth.cols());
    for (std::size_t r = 0; r < cols.size(); ++r)
      for (std::size_t c = 0; c < orth.cols(); ++c) embedded.at(cols[r], c) = orth.at(r, c);
    b.columns = b.columns.hcat(embedded);
    b.weights.insert(b.weights.end(), orth.cols(), w);
    b.norms2.insert(b.norms2.end(), norms2.begin(), norms2.end());
  }
  return b;
}

RatMat d0_pinv(const StratifiedLieAlgebra& g, int h) { return pinv_of(maurer_cartan_d0(g, h)); }

std::pair<FormOperator, FormOperator> build_P_Q(const StratifiedLieAlgebra& g, int h) {
  NormalOrderContext ctx(g);
  RatMat d0 = maurer_cartan_d0(g, h);
  PQResult r = make_pq(ctx, full_d(g, h), pinv_of(d0),
                       RatMat::column_space_projector(d0.row_space_basis(), d0.cols()),
                       lambda_weights(g, h), lambda_weights(g, h + 1));
  return {r.p, r.q};
}

RatMat projection_E0(const StratifiedLieAlgebra& g, int h) {
  WeightedBasis b = e0_basis(g, h);
  return RatMat::column_space_projector(b.columns, b.columns.rows());
}

RuminComplex RuminComplex::build(const StratifiedLieAlgebra& g) {
  RuminComplex rc;
  rc.g_ = std::make_shared<StratifiedLieAlgebra>(g);
  rc.ctx_ = std::make_shared<NormalOrderContext>(*rc.g_);
  const NormalOrderContext& ctx = *rc.ctx_;
  const int n = g.dim();
  rc.degrees_.resize(static_cast<std::size_t>(n) + 1);

  std::vector<std::vector<int>> lw(static_cast<std::size_t>(n) + 2);
  for (int h = 0; h <= n + 1; ++h) lw[h] = lambda_weights(g, h);

  for (int h = 0; h <= n; ++h) {
    DegreeData& dd = rc.degrees_[h];
    dd.h = h;
    dd.d0 = maurer_cartan_d0(g, h);
    dd.d0_pinv = pinv_of(dd.d0);
    dd.proj_r = RatMat::column_space_projector(dd.d0.row_space_basis(), dd.d0.cols());
    dd.e0 = e0_basis(g, h);
    dd.pi_e0 = RatMat::column_space_projector(dd.e0.columns, dd.e0.columns.rows());
    if (h < n) {
      dd.d = full_d(g, h);
      PQResult pq = make_pq(ctx, dd.d, dd.d0_pinv, dd.proj_r, lw[h], lw[h + 1]);
      dd.p_op = pq.p;
      dd.q_op = pq.q;
      dd.nilpotency = pq.nilpotency;
    } else {
      dd.p_op = FormOperator::identity(n, lw[h]);
      dd.q_op = FormOperator::zero(n, lw[h], lw[h + 1]);
      dd.nilpotency = 0;
    }
  }

  for (int h = 0; h <= n; ++h) {
    DegreeData& dd = rc.degrees_[h];
    FormOperator pie = FormOperator::identity(n, lw[h]);
    if (h < n) pie = pie - compose(ctx, dd.q_op, dd.d);
    if (h > 0) pie = pie - compose(ctx, rc.degrees_[h - 1].d, rc.degrees_[h - 1].q_op);
    dd.pi_e = pie;
    dd.pi_e_order = std::max(0, pie.max_iso_degree());
  }

  for (int h = 0; h < n; ++h) {
    DegreeData& dd = rc.degrees_[h];
    const WeightedBasis& src = dd.e0;
    const WeightedBasis& dst = rc.degrees_[h + 1].e0;
    FormOperator include = FormOperator::from_matrix(src.columns, n, lw[h], src.weights);
    FormOperator coords = FormOperator::from_matrix(coords_mat(dst), n, dst.weights, lw[h + 1]);
    dd.dc = compose(ctx, coords, compose(ctx, dd.d, compose(ctx, dd.pi_e, include)));
  }

  for (int h = 0; h <= n; ++h) {
    DegreeData& dd = rc.degrees_[h];
    dd.hodge_xi = coords_mat(rc.degrees_[n - h].e0) * star_matrix(n, h) * dd.e0.columns;
  }

  for (int h = 1; h <= n; ++h) {
    DegreeData& dd = rc.degrees_[h];
    const WeightedBasis& mid0 = rc.degrees_[n - h].e0;
    const WeightedBasis& mid1 = rc.degrees_[n - h + 1].e0;
    FormOperator star_in =
        FormOperator::from_matrix(dd.hodge_xi, n, mid0.weights, dd.e0.weights);
    FormOperator star_out = FormOperator::from_matrix(
        rc.degrees_[n - h + 1].hodge_xi, n, rc.degrees_[h - 1].e0.weights, mid1.weights);
    int sign = (n * (h + 1) + 1) % 2 == 0 ? 1 : -1;
    dd.dc_star =
        compose(ctx, star_out, compose(ctx, rc.degrees_[n - h].dc, star_in)).scaled(Rational(sign));
  }

  return rc;
}

std::vector<int> RuminComplex::e0_dims() const {
  std::vector<int> dims;
  for (const auto& dd : degrees_) dims.push_back(static_cast<int>(dd.e0.dim()));
  return dims;
}

FormOperator RuminComplex::laplacian0() const {
  return compose(*ctx_, degree(1).dc_star, degree(0).dc);
}

FormOperator RuminComplex::laplacian_top() const {
  int n = top_degree();
  return compose(*ctx_, degree(n - 1).dc, degree(n).dc_star);
}

std::vector<std::string> RuminComplex::xi_labels(int h, bool latex) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < degree(h).e0.dim(); ++i) {
    std::ostringstream os;
    if (latex)
      os << "\\xi^{" << h << "}_{" << (i + 1) << "}";
    else
      os << "xi" << h << "_" << (i + 1);
    out.push_back(os.str());
  }
  return out;
}

FormOperator projection_E(const StratifiedLieAlgebra& g, int h) {
  RuminComplex rc = RuminComplex::build(g);
  const NormalOrderContext& ctx = rc.ctx();
  const DegreeData& dd = rc.degree(h);
  const int n = g.dim();
  if (!(compose(ctx, dd.pi_e, dd.pi_e) == dd.pi_e))
    throw IdentityFailure("Pi_E^2 = Pi_E fails at degree " + std::to_string(h));
  if (h < rc.top_degree()) {
    const DegreeData& up = rc.degree(h + 1);
    if (!(compose(ctx, dd.d, dd.pi_e) == compose(ctx, up.pi_e, dd.d)))
      throw IdentityFailure("d Pi_E = Pi_E d fails at degree " + std::to_string(h));
  }
  FormOperator pi0 =
      FormOperator::from_matrix(dd.pi_e0, n, lambda_weights(g, h), lambda_weights(g, h));
  if (!(compose(ctx, pi0, compose(ctx, dd.pi_e, pi0)) == pi0))
    throw IdentityFailure("Pi_E0 Pi_E Pi_E0 = Pi_E0 fails at degree " + std::to_string(h));
  if (!(compose(ctx, dd.pi_e, compose(ctx, pi0, dd.pi_e)) == dd.pi_e))
    throw IdentityFailure("Pi_E Pi_E0 Pi_E = Pi_E fails at degree " + std::to_string(h));
  return dd.pi_e;
}

bool ComplexReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

const CheckResult* ComplexReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

nlohmann::json ComplexReport::to_json() const {
  nlohmann::json j;
  j["algebra"] = algebra;
  j["all_pass"] = all_pass();
  j["e0_dims"] = e0_dims;
  j["pi_e_orders"] = pi_e_orders;
  j["nilpotency"] = nilpotency;
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks)
    j["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  return j;
}

ComplexReport RuminComplex::verify() const {
  const StratifiedLieAlgebra& g = *g_;
  const NormalOrderContext& ctx = *ctx_;
  const int n = top_degree();
  ComplexReport rep;
  rep.algebra = g.name();
  rep.e0_dims = e0_dims();
  for (const auto& dd : degrees_) {
    rep.pi_e_orders.push_back(dd.pi_e_order);
    rep.nilpotency.push_back(dd.nilpotency);
  }
  auto add = [&rep](const std::string& name, bool pass, const std::string& detail = "") {
    rep.checks.push_back({name, pass, detail});
  };

  {
    bool ok = true;
    std::string detail;
    for (int h = 0; h <= n && ok; ++h) {
      auto src = basis_masks(g.dim(), h), dst = basis_masks(g.dim(), h + 1);
      const RatMat& m = degrees_[h].d0;
      for (std::size_t r = 0; r < m.rows() && ok; ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
          if (!rat_is_zero(m.at(r, c)) && mask_weight(g, dst[r]) != mask_weight(g, src[c])) {
            ok = false;
            detail = "degree " + std::to_string(h);
            break;
          }
    }
    add("d0_weight_preserving", ok, detail);
  }
  {
    bool ok = true;
    std::string detail;
    for (int h = 0; h <= n && ok; ++h) {
      const RatMat &m = degrees_[h].d0, &p = degrees_[h].d0_pinv;
      if (!((m * p * m) == m && (p * m * p) == p)) {
        ok = false;
        detail = "degree " + std::to_string(h);
      }
    }
    add("d0_pinv_moore_penrose", ok, detail);
  }
  {
    bool ok = true;
    std::string detail;
    for (int h = 0; h + 1 < n && ok; ++h)
      if (!compose(ctx, degrees_[h + 1].d, degrees_[h].d).is_zero()) {
        ok = false;
        detail = "d d != 0 from degree " + std::to_string(h);
      }
    add("d_squared_zero", ok, detail);
  }
  {
    bool ok = true;
    std::string detail;
    for (int h = 0; h < n && ok; ++h) ok = check_graded(g, degrees_[h].d, &detail);
    add("d_graded", ok, detail);
  }
  {
    bool ok = true;
    for (int h = 0; h <= n; ++h)
      if (degrees_[h].e0.dim() != degrees_[n - h].e0.dim()) ok = false;
    add("e0_dim_duality", ok);
  }
  {
    bool ok = true;
    std::string detail;
    for (int h = 0; h <= n && ok; ++h) {
      const WeightedBasis& b = degrees_[h].e0;
      const WeightedBasis& dual = degrees_[n - h].e0;
      RatMat starred = star_matrix(g.dim(), h) * b.columns;
      if (!(dual.columns * degrees_[h].hodge_xi == starred)) {
        ok = false;
        detail = "*E0^" + std::to_string(h) + " not inside E0^" + std::to_string(n - h);
      }
    }
    add("e0_hodge_duality", ok, detail);
  }
  {
    bool ok = degrees_[0].e0.dim() == 1 && degrees_[n].e0.dim() == 1;
    if (ok) {
      ok = degrees_[0].e0.columns.at(0, 0) == Rational(1) &&
           degrees_[n].e0.columns.at(0, 0) == Rational(1);
    }
    add("e0_boundaries", ok);
  }
  {
    bool ok = true;
    std::string detail;
    for (int h = 0; h < n && ok; ++h) {
      const DegreeData& dd = degrees_[h];
      FormOperator pinv_op = FormOperator::from_matrix(dd.d0_pinv, g.dim(), dd.d.src_weights,
                                                       dd.d.dst_weights);
      FormOperator pir =
          FormOperator::from_matrix(dd.proj_r, g.dim(), dd.d.src_weights, dd.d.src_weights);
      FormOperator m_op = compose(ctx, pinv_op, dd.d);
      if (!(compose(ctx, dd.p_op, compose(ctx, m_op, pir)) == pir &&
            compose(ctx, compose(ctx, m_op, dd.p_op), pir) == pir)) {
        ok = false;
        detail = "degree " + std::to_string(h);
      }
    }
    add("lemma_inversion", ok, detail);
  }
  {
    bool ok = true;
    for (int h = 0; h <= n && ok; ++h)
      for (const auto& [w, part] : homogeneous_parts(degrees_[h].p_op)) {
        (void)part;
        if (w < 0) ok = false;
      }
    add("p_weight_ledger", ok);
  }
  {
    bool ok = true;
    std::string detail;
    for (int h = 0; h <= n && ok; ++h)
      if (!(compose(ctx, degrees_[h].pi_e, degrees_[h].pi_e) == degrees_[h].pi_e)) {
        ok = false;
        detail = "degree " + std::to_string(h);
      }
    add("pi_e_idempotent", ok, detail);
  }
  {
    bool ok = true;
    std::string detail;
    for (int h = 0; h < n && ok; ++h)
      if (!(compose(ctx, degrees_[h].d, degrees_[h].pi_e) ==
            compose(ctx, degrees_[h + 1].pi_e, degrees_[h].d))) {
        ok = false;
        detail = "degree " + std::to_string(h);
      }
    add("pi_e_chain", ok, detail);
  }
  {
    bool ok_sand0 = true, ok_sand = true;
    std::string d0s, ds;
    for (int h = 0; h <= n; ++h) {
      const DegreeData& dd = degrees_[h];
      FormOperator pi0 = FormOperator::from_matrix(dd.pi_e0, g.dim(), lambda_weights(g, h),
                                                   lambda_weights(g, h));
      if (ok_sand0 && !(compose(ctx, pi0, compose(ctx, dd.pi_e, pi0)) == pi0)) {
        ok_sand0 = false;
        d0s = "degree " + std::to_string(h);
      }
      if (ok_sand && !(compose(ctx, dd.pi_e, compose(ctx, pi0, dd.pi_e)) == dd.pi_e)) {
        ok_sand = false;
        ds = "degree " + std::to_string(h);
      }
    }
    add("pi_e0_sandwich", ok_sand0, d0s);
    add("pi_e_sandwich", ok_sand, ds);
  }
  add("pi_e_top_identity",
      degrees_[n].pi_e == FormOperator::identity(g.dim(), lambda_weights(g, n)));
  {
    bool ok = true;
    std::string detail;
    for (int h = 0; h + 1 < n && ok; ++h)
      if (!compose(ctx, degrees_[h + 1].dc, degrees_[h].dc).is_zero()) {
        ok = false;
        detail = "d_c d_c != 0 from degree " + std::to_string(h);
      }
    add("dc_squared_zero", ok, detail);
  }
  {
    bool ok = true;
    std::string detail;
    for (int h = 0; h < n && ok; ++h) ok = check_graded(g, degrees_[h].dc, &detail);
    add("dc_graded", ok, detail);
  }
  {
    bool ok = true;
    std::string detail;
    for (int h = 1; h <= n && ok; ++h) ok = check_cograded(g, degrees_[h].dc_star, &detail);
    add("dcstar_cograded", ok, detail);
  }
  {
    int m1 = g.layer_end(1) - g.layer_begin(1);
    bool ok = static_cast<int>(degrees_[0].dc.rows()) == m1;
    if (ok)
      for (int i = 0; i < m1; ++i)
        if (!(degrees_[0].dc.m[i][0] == OperatorPoly::generator(i, g.dim()))) ok = false;
    add("dc0_horizontal_gradient", ok);
  }
  {
    FormOperator lhs = laplacian_top();
    const DegreeData& dtop = degrees_[n];
    const DegreeData& dzero = degrees_[0];
    FormOperator star_top = FormOperator::from_matrix(dtop.hodge_xi, g.dim(),
                                                      dzero.e0.weights, dtop.e0.weights);
    FormOperator star_back = FormOperator::from_matrix(dzero.hodge_xi, g.dim(),
                                                       dtop.e0.weights, dzero.e0.weights);
    FormOperator rhs = compose(ctx, star_back, compose(ctx, laplacian0(), star_top));
    add("laplacian_conjugation", lhs == rhs);
  }
  {
    bool ok = true;
    FormOperator lap = laplacian0();
    for (const auto& row : lap.m)
      for (const auto& e : row)
        for (const auto& [mono, coeff] : e.terms()) {
          (void)coeff;
          if (mono_iso_degree(mono) == 0) ok = false;
        }
    add("laplacian0_kills_constants", ok);
  }
  if (g.step() == 1) {
    bool ok = true;
    for (int h = 0; h <= n; ++h) {
      const DegreeData& dd = degrees_[h];
      if (!(dd.pi_e == FormOperator::identity(g.dim(), lambda_weights(g, h)))) ok = false;
      if (!(dd.p_op == FormOperator::identity(g.dim(), lambda_weights(g, h)))) ok = false;
      if (!dd.q_op.is_zero()) ok = false;
      if (h < n && !(dd.dc == dd.d)) ok = false;
    }
    add("step1_collapse_to_de_rham", ok);
  }
  return rep;
}

nlohmann::json RuminComplex::to_json() const {
  const StratifiedLieAlgebra& g = *g_;
  nlohmann::json j;
  j["algebra"] = g.name();
  j["dim"] = g.dim();
  j["e0_dims"] = e0_dims();
  j["degrees"] = nlohmann::json::array();
  for (const auto& dd : degrees_) {
    nlohmann::json dj;
    dj["h"] = dd.h;
    dj["e0_dim"] = dd.e0.dim();
    dj["weights"] = dd.e0.weights;
    dj["pi_e_order"] = dd.pi_e_order;
    dj["nilpotency"] = dd.nilpotency;
    auto masks = basis_masks(g.dim(), dd.h);
    nlohmann::json basis = nlohmann::json::array();
    for (std::size_t c = 0; c < dd.e0.dim(); ++c) {
      nlohmann::json col;
      col["norm2"] = rat_str(dd.e0.norms2[c]);
      col["terms"] = nlohmann::json::array();
      for (std::size_t r = 0; r < masks.size(); ++r)
        if (!rat_is_zero(dd.e0.columns.at(r, c)))
          col["terms"].push_back(
              {{"basis", mask_label(masks[r])}, {"coeff", rat_str(dd.e0.columns.at(r, c))}});
      basis.push_back(col);
    }
    dj["basis"] = basis;
    if (dd.h < top_degree()) dj["dc"] = form_operator_to_json(dd.dc);
    if (dd.h > 0) dj["dc_star"] = form_operator_to_json(dd.dc_star);
    j["degrees"].push_back(dj);
  }
  return j;
}

ComplexReport verify_complex(const StratifiedLieAlgebra& g) {
  return RuminComplex::build(g).verify();
}

}  // namespace carnot
