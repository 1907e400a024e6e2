#include "phm/morphism.hpp"

#include <cmath>

#include "phm/rng.hpp"

namespace phm {

std::vector<std::vector<Expr>> standard_J_exprs(int two_n) {
  std::vector<std::vector<Expr>> J(two_n, std::vector<Expr>(two_n, Expr::number(0.0)));
  // J(d/du_k) = d/dv_k, J(d/dv_k) = -d/du_k on coordinate pairs (u_k, v_k).
  for (int k = 0; k + 1 < two_n; k += 2) {
    J[k + 1][k] = Expr::number(1.0);
    J[k][k + 1] = Expr::number(-1.0);
  }
  return J;
}

MapFrame make_map_frame(const RiemannianChart& source, const HermitianTarget& target,
                        const std::vector<Expr>& comps, const VecD& x, bool need_split) {
  MapFrame mf;
  mf.src = make_chart_frame(source, x);
  mf.target = &target;
  mf.comps = &comps;
  const int m = source.dim();
  const int tn = target.chart.dim();

  mf.phij.resize(tn);
  for (int g = 0; g < tn; ++g) mf.phij[g] = comps[g].eval_j(mf.src.xj);

  mf.dphi = MatJ(tn, m);
  for (int g = 0; g < tn; ++g)
    for (int i = 0; i < m; ++i) mf.dphi(g, i) = mf.phij[g].dpart(i);

  mf.Hc = MatJ(tn, tn);
  mf.Jc = MatJ(tn, tn);
  for (int a = 0; a < tn; ++a)
    for (int b = 0; b < tn; ++b) {
      mf.Hc(a, b) = target.chart.metric[a][b].eval_j(mf.phij);
      mf.Jc(a, b) = target.J[a][b].eval_j(mf.phij);
    }

  mf.dstar = mf.src.Ginv * mf.dphi.transposed() * mf.Hc;
  mf.AA = mf.dphi * mf.dstar;

  // Submersion test: singular values of dphi G^{-1/2} via dphi G^-1 dphi^T.
  const MatD B = (mf.dphi * mf.src.Ginv * mf.dphi.transposed()).values();
  const auto [lo, hi] = sym_eigen_range(B);
  mf.submersive = lo > 1e-16;

  VecD y(tn);
  for (int g = 0; g < tn; ++g) y[g] = mf.phij[g].value();
  mf.tgt = make_chart_frame(target.chart, y);
  mf.Jt = MatJ(tn, tn);
  for (int a = 0; a < tn; ++a)
    for (int b = 0; b < tn; ++b) mf.Jt(a, b) = target.J[a][b].eval_j(mf.tgt.xj);

  if (!need_split) return mf;
  if (!mf.submersive || lo <= hi / 1e10)
    throw RankError("map '" + source.label + "' rank drop at sampled point");

  mf.Pinv = mf.dstar * mf.AA.inverse();
  mf.PH = mf.Pinv * mf.dphi;
  mf.PV = MatJ::identity(m) - mf.PH;
  mf.F = mf.Pinv * mf.Jc * mf.dphi;

  std::vector<VecJ> hseeds, vseeds;
  for (int k = 0; k < m; ++k) {
    VecJ e(m, Jet2(0.0));
    e[k] = Jet2(1.0);
    hseeds.push_back(mf.PH.apply(e));
    vseeds.push_back(mf.PV.apply(e));
  }
  GramSchmidtOptions opt;
  opt.drop_degenerate = true;
  opt.drop_tol = 1e-6;
  opt.want = tn;
  mf.hframe = gram_schmidt(mf.src.G, hseeds, opt);
  opt.want = m - tn;
  mf.vframe = gram_schmidt(mf.src.G, vseeds, opt);
  return mf;
}

double phwc_defect(const MapFrame& mf) { return commutator_norm(mf.AA.values(), mf.Jc.values()); }

double adjoint_identity_residual(const MapFrame& mf, unsigned seed) {
  const int m = mf.m(), tn = mf.two_n();
  double worst = 0.0;
  for (int trial = 0; trial < 8; ++trial) {
    VecJ X(m, Jet2(0.0)), E(tn, Jet2(0.0));
    for (int i = 0; i < m; ++i) X[i] = Jet2(rng_sym(seed, trial, i));
    for (int a = 0; a < tn; ++a) E[a] = Jet2(rng_sym(seed, trial, 100 + a));
    const Jet2 lhs = inner(mf.src.G, X, mf.dstar.apply(E));
    const Jet2 rhs = inner(mf.Hc, mf.dphi.apply(X), E);
    worst = std::max(worst, std::fabs(lhs.value() - rhs.value()));
  }
  return worst;
}

double f_cubed_defect(const MapFrame& mf) {
  const MatD F = mf.F.values();
  return (F * F * F + F).frobenius();
}

double f_compat_defect(const MapFrame& mf) {
  std::vector<VecJ> frame = mf.hframe;
  frame.insert(frame.end(), mf.vframe.begin(), mf.vframe.end());
  double worst = 0.0;
  for (const auto& a : frame)
    for (const auto& b : frame) {
      const double v = value_of(inner(mf.src.G, mf.F.apply(a), b)) +
                       value_of(inner(mf.src.G, a, mf.F.apply(b)));
      worst = std::max(worst, std::fabs(v));
    }
  return worst;
}

namespace {
MatD target_operator_columns(const MapFrame& mf, const VecJ& X) {
  // Columns dphi(nabla_X (dphi* e_gamma)) of the operator dphi o nabla_X o dphi*.
  const int m = mf.m(), tn = mf.two_n();
  MatD C(tn, tn);
  for (int g = 0; g < tn; ++g) {
    VecJ s(m);
    for (int i = 0; i < m; ++i) s[i] = mf.dstar(i, g);
    const VecJ ns = cov_deriv_vec(mf.src, X, s);
    const VecJ img = mf.dphi.apply(ns);
    for (int a = 0; a < tn; ++a) C(a, g) = img[a].value();
  }
  return C;
}
}  // namespace

double phh_defect(const MapFrame& mf, const VecJ* X) {
  const MatD J = mf.Jc.values();
  if (X) return commutator_norm(target_operator_columns(mf, *X), J);
  double worst = 0.0;
  for (const auto& e : mf.hframe)
    worst = std::max(worst, commutator_norm(target_operator_columns(mf, e), J));
  return worst;
}

namespace {
VecD tension_from_jets(const ChartFrame& src, const VecJ& phij, const MatJ& dphi,
                       const ChartFrame& tgt, const MatD& H, double* h_norm) {
  const int m = src.dim(), tn = static_cast<int>(phij.size());
  VecD tau(tn, 0.0);
  for (int g = 0; g < tn; ++g) {
    double s = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        double t = phij[g].second(i, j);
        for (int k = 0; k < m; ++k) t -= src.Gam[k](i, j).value() * phij[g].deriv(k);
        double conn = 0.0;
        for (int a = 0; a < tn; ++a)
          for (int b = 0; b < tn; ++b)
            conn += tgt.Gam[g](a, b).value() * dphi(a, i).value() * dphi(b, j).value();
        s += src.Ginv(i, j).value() * (t + conn);
      }
    tau[g] = s;
  }
  if (h_norm) {
    double q = 0.0;
    for (int a = 0; a < tn; ++a)
      for (int b = 0; b < tn; ++b) q += tau[a] * H(a, b) * tau[b];
    *h_norm = std::sqrt(std::max(0.0, q));
  }
  return tau;
}
}  // namespace

VecD tension_field(const MapFrame& mf, double* h_norm) {
  return tension_from_jets(mf.src, mf.phij, mf.dphi, mf.tgt, mf.Hc.values(), h_norm);
}

VecD tension_field_generic(const ChartFrame& src, const RiemannianChart& target,
                           const std::vector<Expr>& comps, double* h_norm) {
  const int tn = target.dim();
  VecJ phij(tn);
  for (int g = 0; g < tn; ++g) phij[g] = comps[g].eval_j(src.xj);
  MatJ dphi(tn, src.dim());
  for (int g = 0; g < tn; ++g)
    for (int i = 0; i < src.dim(); ++i) dphi(g, i) = phij[g].dpart(i);
  VecD y(tn);
  for (int g = 0; g < tn; ++g) y[g] = phij[g].value();
  const ChartFrame tgt = make_chart_frame(target, y);
  return tension_from_jets(src, phij, dphi, tgt, tgt.G.values(), h_norm);
}

FDivFResult f_div_f(const ChartFrame& cf, const MatJ& F, const std::vector<VecJ>& hframe,
                    const std::vector<VecJ>& vframe) {
  const int m = cf.dim();
  FDivFResult r;
  VecD div(m, 0.0), div_h(m, 0.0);
  auto add_term = [&](const VecJ& e, VecD& acc) {
    const MatJ nf = cov_deriv_t11(cf, e, F);
    const VecJ v = nf.apply(e);
    for (int k = 0; k < m; ++k) acc[k] += v[k].value();
  };
  for (const auto& e : hframe) {
    add_term(e, div);
    add_term(e, div_h);
  }
  for (const auto& e : vframe) add_term(e, div);
  r.div_f = div;
  const MatD Fv = F.values();
  r.f_div_f.assign(m, 0.0);
  VecD f_div_h(m, 0.0);
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < m; ++l) {
      r.f_div_f[k] += Fv(k, l) * div[l];
      f_div_h[k] += Fv(k, l) * div_h[l];
    }
  const MatD Gv = cf.G.values();
  double q = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) q += r.f_div_f[i] * Gv(i, j) * r.f_div_f[j];
  r.cosymplectic_defect = std::sqrt(std::max(0.0, q));

  if (!vframe.empty()) {
    // mu^V = mean curvature of the fibers; residual of the split identity
    // mu^V = -(1/(m-2n)) F div^H F.
    const int mv = static_cast<int>(vframe.size());
    VecD mu(m, 0.0);
    for (const auto& v : vframe) {
      const VecJ nv = cov_deriv_vec(cf, v, v);
      for (int k = 0; k < m; ++k) mu[k] += nv[k].value() / mv;
    }
    // horizontal projection of mu: subtract vertical components
    for (const auto& v : vframe) {
      double c = 0.0;
      const VecD vv = values_of(v);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) c += mu[i] * Gv(i, j) * vv[j];
      for (int k = 0; k < m; ++k) mu[k] -= c * vv[k];
    }
    VecD res(m, 0.0);
    for (int k = 0; k < m; ++k) res[k] = mu[k] + f_div_h[k] / mv;
    double q2 = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) q2 += res[i] * Gv(i, j) * res[j];
    r.split_residual = std::sqrt(std::max(0.0, q2));
  }
  return r;
}

FDivFResult f_div_f(const MapFrame& mf) { return f_div_f(mf.src, mf.F, mf.hframe, mf.vframe); }

double tension_decomposition_residual(const MapFrame& mf) {
  const int m = mf.m(), tn = mf.two_n();
  const VecD tau = tension_field(mf, nullptr);

  // div^phi J = trace_g phi^* nabla^N J over a full orthonormal source frame.
  std::vector<VecJ> frame = mf.hframe;
  frame.insert(frame.end(), mf.vframe.begin(), mf.vframe.end());
  VecD divJ(tn, 0.0);
  for (const auto& e : frame) {
    VecD A(tn, 0.0);
    for (int a = 0; a < tn; ++a) {
      Jet2 s(0.0);
      for (int i = 0; i < m; ++i) s = s + mf.dphi(a, i) * e[i];
      A[a] = s.value();
    }
    // (nabla^N_A J)(A), evaluated at phi(x) in target seeding.
    VecJ Aj(tn);
    for (int a = 0; a < tn; ++a) Aj[a] = Jet2(A[a]);
    const MatJ nj = cov_deriv_t11(mf.tgt, Aj, mf.Jt);
    const VecJ v = nj.apply(Aj);
    for (int a = 0; a < tn; ++a) divJ[a] += v[a].value();
  }
  const MatD Jv = mf.Jt.values();
  VecD JdivJ(tn, 0.0);
  for (int a = 0; a < tn; ++a)
    for (int b = 0; b < tn; ++b) JdivJ[a] += Jv(a, b) * divJ[b];

  const FDivFResult fd = f_div_f(mf);
  VecD push(tn, 0.0);
  for (int a = 0; a < tn; ++a)
    for (int i = 0; i < m; ++i) push[a] += mf.dphi(a, i).value() * fd.f_div_f[i];

  const MatD H = mf.Hc.values();
  VecD res(tn, 0.0);
  for (int a = 0; a < tn; ++a) res[a] = tau[a] - (JdivJ[a] - push[a]);
  double q = 0.0;
  for (int a = 0; a < tn; ++a)
    for (int b = 0; b < tn; ++b) q += res[a] * H(a, b) * res[b];
  return std::sqrt(std::max(0.0, q));
}

std::vector<std::pair<std::string, double>> battery_laplacians(const MapFrame& mf) {
  if (!mf.target->standard_J)
    throw NotApplicableError("holomorphic battery requires a standard-J target");
  const int n = mf.two_n() / 2;
  std::vector<CJet> z(n);
  for (int g = 0; g < n; ++g) z[g] = CJet(mf.phij[2 * g], mf.phij[2 * g + 1]);
  std::vector<std::pair<std::string, CJet>> fs;
  for (int g = 0; g < n; ++g) fs.push_back({"z" + std::to_string(g + 1), z[g]});
  for (int g = 0; g < n; ++g)
    for (int d = g; d < n; ++d)
      fs.push_back({"z" + std::to_string(g + 1) + "*z" + std::to_string(d + 1), z[g] * z[d]});
  fs.push_back({"exp(z1)", exp(z[0])});
  std::vector<std::pair<std::string, double>> out;
  for (const auto& [name, f] : fs) {
    const double re = laplace_beltrami(mf.src, f.re);
    const double im = laplace_beltrami(mf.src, f.im);
    out.push_back({name, std::hypot(re, im)});
  }
  return out;
}

double battery_max(const MapFrame& mf) {
  double worst = 0.0;
  for (const auto& [name, v] : battery_laplacians(mf)) worst = std::max(worst, v);
  return worst;
}

double holomorphy_defect(const MapFrame& mf, const MatJ& A) {
  return (mf.dphi.values() * A.values() - mf.Jc.values() * mf.dphi.values()).frobenius();
}

double basic_f_defect(const MapFrame& mf) {
  const MatD PH = mf.PH.values();
  double worst = 0.0;
  for (const auto& V : mf.vframe)
    for (const auto& X : mf.hframe) {
      const VecJ lf = vec_sub(lie_bracket(V, mf.F.apply(X)), mf.F.apply(lie_bracket(V, X)));
      VecD h(mf.m(), 0.0);
      for (int i = 0; i < mf.m(); ++i)
        for (int j = 0; j < mf.m(); ++j) h[i] += PH(i, j) * lf[j].value();
      VecJ hj(mf.m());
      for (int i = 0; i < mf.m(); ++i) hj[i] = Jet2(h[i]);
      worst = std::max(worst, g_norm(mf.src.G, hj));
    }
  return worst;
}

double horizontal_nijenhuis_defect(const MapFrame& mf) {
  const MatD PH = mf.PH.values();
  double worst = 0.0;
  for (size_t a = 0; a < mf.hframe.size(); ++a)
    for (size_t b = a + 1; b < mf.hframe.size(); ++b) {
      const VecJ nij = nijenhuis_bracket(mf.F, mf.hframe[a], mf.hframe[b]);
      VecJ h(mf.m(), Jet2(0.0));
      for (int i = 0; i < mf.m(); ++i) {
        double s = 0.0;
        for (int j = 0; j < mf.m(); ++j) s += PH(i, j) * nij[j].value();
        h[i] = Jet2(s);
      }
      worst = std::max(worst, g_norm(mf.src.G, h));
    }
  return worst;
}

double pullback_kahler_closedness(const MapFrame& mf) {
  const int m = mf.m(), tn = mf.two_n();
  const MatJ Om = mf.Hc * mf.Jc;  // Omega_ab = h(d_a, J d_b)
  MatJ pb(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      Jet2 s(0.0);
      for (int a = 0; a < tn; ++a)
        for (int b = 0; b < tn; ++b) s = s + Om(a, b) * mf.dphi(a, i) * mf.dphi(b, j);
      pb(i, j) = s;
    }
  const FormJ form = form_from_matrix_antisym(pb);
  const FormJ d = ext_deriv(form);
  std::vector<VecJ> frame = mf.hframe;
  frame.insert(frame.end(), mf.vframe.begin(), mf.vframe.end());
  if (m < 3) return 0.0;
  return form_g_norm(d, frame);
}

double transversal_hermitian_residual(const MapFrame& mf, unsigned seed) {
  const int m = mf.m();
  const MatD PH = mf.PH.values();
  auto project_h = [&](const VecJ& v) {
    VecJ h(m, Jet2(0.0));
    for (int i = 0; i < m; ++i) {
      Jet2 s(0.0);
      for (int j = 0; j < m; ++j) s = s + Jet2(PH(i, j)) * v[j];
      h[i] = s;
    }
    return h;
  };
  auto bott = [&](const VecJ& V, const VecJ& X) { return project_h(lie_bracket(V, X)); };
  auto lvg = [&](const VecJ& V, const VecJ& A, const VecJ& B) {
    const Jet2 s = metric_pair(mf.src.G, A, B);
    return dirderiv(V, s).value() -
           value_of(inner(mf.src.G, lie_bracket(V, A), B)) -
           value_of(inner(mf.src.G, A, lie_bracket(V, B)));
  };

  double worst = 0.0;
  // (i), (ii): ambient E with constant pseudo-random coefficients.
  for (int trial = 0; trial < 4; ++trial) {
    VecJ E(m);
    for (int i = 0; i < m; ++i) E[i] = Jet2(rng_sym(seed, trial, 7 + i));
    const MatJ nf = cov_deriv_t11(mf.src, E, mf.F);
    for (const auto& X : mf.hframe) {
      const VecJ nfX = nf.apply(X);
      worst = std::max(worst, std::fabs(value_of(inner(mf.src.G, nfX, X))));
      worst = std::max(worst, std::fabs(value_of(inner(mf.src.G, nfX, mf.F.apply(X)))));
    }
  }
  // (iii), (iv): Bott derivative along vertical frame fields.
  for (const auto& V : mf.vframe)
    for (const auto& X : mf.hframe) {
      const VecJ FX = mf.F.apply(X);
      const VecJ bf = vec_sub(bott(V, FX), project_h(mf.F.apply(bott(V, X))));
      const double i3 = value_of(inner(mf.src.G, bf, X)) + lvg(V, X, FX);
      const double i4 = value_of(inner(mf.src.G, bf, FX)) + 0.5 * lvg(V, FX, FX) - 0.5 * lvg(V, X, X);
      worst = std::max(worst, std::max(std::fabs(i3), std::fabs(i4)));
    }
  return worst;
}

}  // namespace phm
