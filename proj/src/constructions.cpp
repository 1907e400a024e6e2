#include "phm/constructions.hpp"

#include <cmath>

#include "phm/rng.hpp"

namespace phm {

MapFrame scenario_map_frame(const Scenario& s, const VecD& x, bool need_split) {
  if (!s.has_map()) throw NotApplicableError("scenario '" + s.id + "' has no map");
  return make_map_frame(s.source, *s.target, s.map_components, x, need_split);
}

AcsFrame scenario_acs_frame(const Scenario& s, const ChartFrame& cf, const MapFrame* mf) {
  if (s.acs) return make_acs_frame(cf, *s.acs);
  if (!s.acs_seed.empty()) {
    if (!mf) throw NotApplicableError("induced structure of '" + s.id + "' needs the map split");
    return make_acs_frame_induced(*mf, s.acs_seed);
  }
  throw NotApplicableError("scenario '" + s.id + "' has no almost contact structure");
}

InducedAcsChecks induced_acs_checks(const MapFrame& mf, const AcsFrame& acs) {
  InducedAcsChecks c;
  c.invariants = acs_invariants_defect(mf.src, acs);
  c.holomorphy = holomorphy_defect(mf, acs.phi);
  return c;
}

// ---------------------------------------------------------------------------
// Cone

ConeChart build_cone(const Scenario& base, double t0, double t1) {
  if (!base.acs)
    throw NotApplicableError("cone over '" + base.id + "': an explicit almost contact structure is required");
  if (!(t0 > 0.0) || !(t1 > t0))
    throw std::invalid_argument("cone t-interval must satisfy 0 < t0 < t1");
  const int m = base.source.dim();
  std::vector<int> up(m);
  for (int i = 0; i < m; ++i) up[i] = i + 1;

  ConeChart cone;
  cone.base_chart = base.source;
  cone.chart.label = "cone(" + base.source.label + ")";
  cone.chart.coords.push_back("t");
  for (const auto& c : base.source.coords) cone.chart.coords.push_back(c);
  cone.chart.box.range.push_back({t0, t1});
  for (const auto& r : base.source.box.range) cone.chart.box.range.push_back(r);

  const Expr t = Expr::coord(0);
  const Expr t2 = Expr::pow(Expr::coord(0), 2);
  cone.chart.metric.assign(m + 1, std::vector<Expr>(m + 1, Expr::number(0.0)));
  cone.chart.metric[0][0] = Expr::number(1.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      cone.chart.metric[i + 1][j + 1] = t2 * base.source.metric[i][j].remap_coords(up);

  // Jhat dt = -(1/t) xi, Jhat X = phi X + t eta(X) dt: the unique ghat-compatible
  // scaling of the cone structure built from (phi, xi, eta).
  cone.Jhat.assign(m + 1, std::vector<Expr>(m + 1, Expr::number(0.0)));
  for (int i = 0; i < m; ++i) {
    cone.Jhat[i + 1][0] = -(base.acs->xi[i].remap_coords(up) / t);
    cone.Jhat[0][i + 1] = t * base.acs->eta[i].remap_coords(up);
    for (int j = 0; j < m; ++j) cone.Jhat[i + 1][j + 1] = base.acs->phi[i][j].remap_coords(up);
  }

  for (int i = 0; i < m; ++i) cone.pi.push_back(Expr::coord(i + 1));
  for (const auto& c : base.map_components) cone.lifted_map.push_back(c.remap_coords(up));
  return cone;
}

ConePointChecks cone_point_checks(const ConeChart& cone, const VecD& xc) {
  ConePointChecks out;
  const ChartFrame cf = make_chart_frame(cone.chart, xc);
  const int mc = cone.chart.dim(), mb = cone.base_chart.dim();

  tension_field_generic(cf, cone.base_chart, cone.pi, &out.tension);

  // Dilation: dpi o dpi* against (1/t^2) id on the base tangent space.
  VecJ pij(mb);
  for (int g = 0; g < mb; ++g) pij[g] = cone.pi[g].eval_j(cf.xj);
  MatJ dpi(mb, mc);
  for (int g = 0; g < mb; ++g)
    for (int i = 0; i < mc; ++i) dpi(g, i) = pij[g].dpart(i);
  MatJ Gb(mb, mb);
  for (int a = 0; a < mb; ++a)
    for (int b = 0; b < mb; ++b) Gb(a, b) = cone.base_chart.metric[a][b].eval_j(pij);
  const MatD A = (dpi * cf.Ginv * dpi.transposed() * Gb).values();
  const double lam2 = 1.0 / (xc[0] * xc[0]);
  MatD R = A;
  for (int i = 0; i < mb; ++i) R(i, i) -= lam2;
  out.dilation = R.frobenius();

  VecJ e0(mc, Jet2(0.0));
  e0[0] = Jet2(1.0);
  out.geodesic_fibers = g_norm(cf.G, cov_deriv_vec(cf, e0, e0));

  MatD Jv(mc, mc);
  for (int i = 0; i < mc; ++i)
    for (int j = 0; j < mc; ++j) Jv(i, j) = cone.Jhat[i][j].eval_d(xc);
  const MatD Gv = cf.G.values();
  out.jhat_square = (Jv * Jv + MatD::identity(mc)).frobenius();
  out.jhat_compat = (Jv.transposed() * Gv * Jv - Gv).frobenius();
  return out;
}

namespace {
std::vector<Expr> maybe_conjugate(const std::vector<Expr>& comps, bool conj) {
  if (!conj) return comps;
  std::vector<Expr> out = comps;
  for (size_t k = 1; k < out.size(); k += 2) out[k] = -out[k];
  return out;
}
}  // namespace

ConeEquivalencePoint cone_equivalences(const Scenario& base, const ConeChart& cone, double t,
                                       const VecD& xbase, bool conjugate_broken) {
  ConeEquivalencePoint r;
  const std::vector<Expr> comps = maybe_conjugate(base.map_components, conjugate_broken);
  const MapFrame mfb = make_map_frame(base.source, *base.target, comps, xbase);
  const AcsFrame acs = make_acs_frame(mfb.src, *base.acs);
  r.holo_base = holomorphy_defect(mfb, acs.phi);
  double taub = 0.0;
  tension_field(mfb, &taub);
  r.phwc_harm_base = std::max(phwc_defect(mfb), taub);
  r.phm_base = std::max(phwc_defect(mfb), f_div_f(mfb).cosymplectic_defect);

  VecD xc(xbase.size() + 1);
  xc[0] = t;
  for (size_t i = 0; i < xbase.size(); ++i) xc[i + 1] = xbase[i];
  std::vector<int> up(base.source.dim());
  for (int i = 0; i < base.source.dim(); ++i) up[i] = i + 1;
  std::vector<Expr> lifted;
  for (const auto& c : comps) lifted.push_back(c.remap_coords(up));
  const MapFrame mfc = make_map_frame(cone.chart, *base.target, lifted, xc);
  const int mc = cone.chart.dim();
  MatJ Jhat(mc, mc);
  for (int i = 0; i < mc; ++i)
    for (int j = 0; j < mc; ++j) Jhat(i, j) = cone.Jhat[i][j].eval_j(mfc.src.xj);
  r.holo_cone = holomorphy_defect(mfc, Jhat);
  double tauc = 0.0;
  tension_field(mfc, &tauc);
  r.phwc_harm_cone = std::max(phwc_defect(mfc), tauc);
  r.phm_cone = std::max(phwc_defect(mfc), f_div_f(mfc).cosymplectic_defect);
  return r;
}

// ---------------------------------------------------------------------------
// Adapted pairs

AdaptedPairFrames adapted_pair(const MapFrame& mf, int orientation) {
  const int m = mf.m();
  if (static_cast<int>(mf.vframe.size()) != 2)
    throw NotApplicableError("adapted pair requires 2-dimensional fibers");
  AdaptedPairFrames ap;
  ap.vframe = mf.vframe;

  auto full_det = [&]() {
    MatD M(m, m);
    int col = 0;
    for (const auto& e : mf.hframe) {
      for (int i = 0; i < m; ++i) M(i, col) = e[i].value();
      ++col;
    }
    for (const auto& v : ap.vframe) {
      for (int i = 0; i < m; ++i) M(i, col) = v[i].value();
      ++col;
    }
    return det(M);
  };
  if (full_det() * orientation < 0)
    for (auto& x : ap.vframe[1]) x = -x;
  ap.orientation_det = full_det() * orientation;

  // J_V v1 = v2, J_V v2 = -v1 via J_V = v2 (G v1)^T - v1 (G v2)^T.
  const VecJ gv1 = mf.src.G.apply(ap.vframe[0]);
  const VecJ gv2 = mf.src.G.apply(ap.vframe[1]);
  MatJ JV(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      JV(i, j) = ap.vframe[1][i] * gv1[j] - ap.vframe[0][i] * gv2[j];
  ap.Jplus = mf.F + JV;
  ap.Jminus = mf.F - JV;

  const MatD Gv = mf.src.G.values();
  for (const MatJ* J : {&ap.Jplus, &ap.Jminus}) {
    const MatD Jv = J->values();
    ap.invariants = std::max(ap.invariants, (Jv * Jv + MatD::identity(m)).frobenius());
    ap.invariants = std::max(ap.invariants, (Jv.transposed() * Gv * Jv - Gv).frobenius());
  }

  // Remark 5.1: nabla^V_E J_V = 0.
  auto vertical_part = [&](const VecJ& w) {
    VecD r(m, 0.0);
    for (const auto& v : ap.vframe) {
      const double c = value_of(inner(mf.src.G, w, v));
      for (int i = 0; i < m; ++i) r[i] += c * v[i].value();
    }
    return r;
  };
  std::vector<VecJ> full = mf.hframe;
  full.insert(full.end(), ap.vframe.begin(), ap.vframe.end());
  for (const auto& E : full)
    for (const auto& V : ap.vframe) {
      const VecD a = vertical_part(cov_deriv_vec(mf.src, E, MatJ(JV).apply(V)));
      const VecD b = vertical_part(cov_deriv_vec(mf.src, E, V));
      VecD jb(m, 0.0);
      const MatD JVv = JV.values();
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) jb[i] += JVv(i, j) * b[j];
      VecD d(m);
      for (int i = 0; i < m; ++i) d[i] = a[i] - jb[i];
      VecJ dj(m);
      for (int i = 0; i < m; ++i) dj[i] = Jet2(d[i]);
      ap.remark51 = std::max(ap.remark51, g_norm(mf.src.G, dj));
    }
  return ap;
}

SuperminimalityReport superminimality(const MapFrame& mf, const AdaptedPairFrames& ap) {
  SuperminimalityReport r;
  const int m = mf.m();
  std::vector<VecJ> full = mf.hframe;
  full.insert(full.end(), ap.vframe.begin(), ap.vframe.end());

  auto max_nabla = [&](const MatJ& J) {
    double worst = 0.0;
    for (const auto& V : ap.vframe) {
      const MatJ nj = cov_deriv_t11(mf.src, V, J);
      for (const auto& e : full) worst = std::max(worst, g_norm(mf.src.G, nj.apply(e)));
    }
    return worst;
  };
  r.superminimal_plus = max_nabla(ap.Jplus);
  r.superminimal_minus = max_nabla(ap.Jminus);

  auto max_nijenhuis = [&](const MatJ& J) {
    double worst = 0.0;
    for (size_t a = 0; a < full.size(); ++a)
      for (size_t b = a + 1; b < full.size(); ++b) {
        const VecJ n = nijenhuis_bracket(J, full[a], full[b]);
        VecJ nv(m);
        for (int i = 0; i < m; ++i) nv[i] = Jet2(n[i].value());
        worst = std::max(worst, g_norm(mf.src.G, nv));
      }
    return worst;
  };
  r.nijenhuis_plus = max_nijenhuis(ap.Jplus);
  r.nijenhuis_minus = max_nijenhuis(ap.Jminus);

  // g(nabla_{J+Y} X + nabla_Y J+X, V) = g(X, (L_V J+ - nabla_V J+) Y)
  for (const auto& X : mf.hframe)
    for (const auto& Y : full)
      for (const auto& V : ap.vframe) {
        const VecJ JY = ap.Jplus.apply(Y);
        const VecJ JX = ap.Jplus.apply(X);
        const VecJ lhs1 = cov_deriv_vec(mf.src, JY, X);
        const VecJ lhs2 = cov_deriv_vec(mf.src, Y, JX);
        const double lhs =
            value_of(inner(mf.src.G, vec_add(lhs1, lhs2), V));
        const MatJ lv = lie_deriv_t11(V, ap.Jplus);
        const MatJ nv = cov_deriv_t11(mf.src, V, ap.Jplus);
        const MatJ diff = lv - nv;
        const double rhs = value_of(inner(mf.src.G, X, diff.apply(Y)));
        r.proof_identity = std::max(r.proof_identity, std::fabs(lhs - rhs));
      }
  return r;
}

CrDefects cr_defect(const MapFrame& mf, const AcsFrame& acs) {
  CrDefects cr;
  cr.commutator = phh_defect(mf, &acs.xi);
  cr.fiber_minimality = g_norm(mf.src.G, cov_deriv_vec(mf.src, acs.xi, acs.xi));
  cr.combined = std::max(cr.commutator, cr.fiber_minimality);
  return cr;
}

double hwc_defect(const MapFrame& mf) {
  const MatD A = mf.AA.values();
  const int tn = A.rows();
  double lam2 = 0.0;
  for (int i = 0; i < tn; ++i) lam2 += A(i, i) / tn;
  MatD R = A;
  for (int i = 0; i < tn; ++i) R(i, i) -= lam2;
  return R.frobenius();
}

// ---------------------------------------------------------------------------
// Flags

double flag_defect(const Scenario& s, const std::string& flag, const VecD& x) {
  const bool map_flag = flag == "phwc" || flag == "phh" || flag == "hwc" || flag == "harmonic" ||
                        flag == "phm" || flag == "cosymplectic" || flag == "superminimal" ||
                        flag == "integrable_pair";
  if (map_flag) {
    const MapFrame mf = scenario_map_frame(s, x);
    if (flag == "phwc") return phwc_defect(mf);
    if (flag == "phh") return phh_defect(mf);
    if (flag == "hwc") return hwc_defect(mf);
    if (flag == "harmonic") {
      double n = 0.0;
      tension_field(mf, &n);
      return n;
    }
    if (flag == "phm") return std::max(phwc_defect(mf), f_div_f(mf).cosymplectic_defect);
    if (flag == "cosymplectic") return f_div_f(mf).cosymplectic_defect;
    const AdaptedPairFrames ap = adapted_pair(mf);
    const SuperminimalityReport sr = superminimality(mf, ap);
    if (flag == "superminimal") return std::min(sr.superminimal_plus, sr.superminimal_minus);
    return std::min(sr.nijenhuis_plus, sr.nijenhuis_minus);  // integrable_pair
  }

  // Structure flags need the almost contact structure.
  std::optional<MapFrame> mf;
  ChartFrame cf;
  if (s.has_map()) {
    mf = scenario_map_frame(s, x);
    cf = mf->src;
  } else {
    cf = make_chart_frame(s.source, x);
  }
  const AcsFrame acs = scenario_acs_frame(s, cf, mf ? &*mf : nullptr);
  if (flag == "normal") return normality_defects(cf, acs).n1;
  const ClassDefects cd = classify_point(cf, acs);
  if (flag == "contact_metric") return cd.contact_metric;
  if (flag == "k_contact") return cd.k_contact;
  if (flag == "sasakian") return cd.sasakian;
  if (flag == "alpha_sasakian") return cd.alpha_sasakian;
  if (flag == "kenmotsu_class") return cd.kenmotsu;
  if (flag == "nearly_cosymplectic") return cd.nearly_cosymplectic;
  if (flag == "quasi_sasakian") return cd.quasi_sasakian;
  if (flag == "semi_cosymplectic") return cd.semi_cosymplectic;
  throw std::invalid_argument("unknown flag '" + flag + "'");
}

VecD sample_box(const Box& box, uint64_t seed, uint64_t index) {
  VecD x(box.dim());
  for (int i = 0; i < box.dim(); ++i) {
    const auto& [lo, hi] = box.range[i];
    x[i] = lo + rng_unit(seed, index, i) * (hi - lo);
  }
  return x;
}

void verify_scenario(const Scenario& s, int points, uint64_t seed, double tol,
                     double fail_threshold) {
  for (const auto& [flag, expected] : s.flags) {
    double worst = 0.0;
    for (int i = 0; i < points; ++i) {
      const VecD x = sample_box(s.source.box, seed, i);
      worst = std::max(worst, flag_defect(s, flag, x));
    }
    if (expected && worst >= tol)
      throw EngineInconsistencyError("scenario '" + s.id + "': flag '" + flag +
                                     "' expected to hold but defect is " + std::to_string(worst));
    if (!expected && worst <= fail_threshold)
      throw EngineInconsistencyError("scenario '" + s.id + "': flag '" + flag +
                                     "' expected to fail but defect is " + std::to_string(worst));
  }
}

}  // namespace phm
