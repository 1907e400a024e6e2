#include "phm/structures.hpp"

#include <cmath>

namespace phm {

namespace {

VecJ to_jets(const VecD& v) {
  VecJ r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = Jet2(v[i]);
  return r;
}

double gnorm_d(const ChartFrame& cf, const VecD& v) { return g_norm(cf.G, to_jets(v)); }

// Horizontal part with respect to an acs: v - eta(v) xi.
VecJ acs_horizontal(const AcsFrame& acs, const VecJ& v) {
  Jet2 ev(0.0);
  for (size_t i = 0; i < v.size(); ++i) ev = ev + acs.eta[i] * v[i];
  VecJ r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = v[i] - ev * acs.xi[i];
  return r;
}

FormJ eta_form(const AcsFrame& acs, int m) {
  FormJ f(m, 1);
  for (int i = 0; i < m; ++i) f.c[i] = acs.eta[i];
  return f;
}

}  // namespace

AcsFrame make_acs_frame(const ChartFrame& cf, const AcsSpec& spec) {
  const int m = cf.dim();
  AcsFrame acs;
  acs.phi = MatJ(m, m);
  acs.xi.resize(m);
  acs.eta.resize(m);
  for (int i = 0; i < m; ++i) {
    acs.xi[i] = spec.xi[i].eval_j(cf.xj);
    acs.eta[i] = spec.eta[i].eval_j(cf.xj);
    for (int j = 0; j < m; ++j) acs.phi(i, j) = spec.phi[i][j].eval_j(cf.xj);
  }
  // D-frame from projected coordinate seeds, fixed order.
  std::vector<VecJ> seeds;
  for (int k = 0; k < m; ++k) {
    VecJ e(m, Jet2(0.0));
    e[k] = Jet2(1.0);
    seeds.push_back(acs_horizontal(acs, e));
  }
  GramSchmidtOptions opt;
  opt.drop_degenerate = true;
  opt.drop_tol = 1e-6;
  opt.want = m - 1;
  acs.dframe = gram_schmidt(cf.G, seeds, opt);
  return acs;
}

AcsFrame make_acs_frame_induced(const MapFrame& mf, const std::vector<Expr>& seed) {
  const int m = mf.m();
  AcsFrame acs;
  VecJ s(m);
  for (int i = 0; i < m; ++i) s[i] = seed[i].eval_j(mf.src.xj);
  VecJ v = mf.PV.apply(s);
  const double vn = g_norm(mf.src.G, v);
  if (vn < 1e-8)
    throw DegeneracyError("induced almost contact structure: seed field has vanishing vertical projection");
  const Jet2 inv_len = Jet2(1.0) / sqrt(inner(mf.src.G, v, v));
  acs.xi.resize(m);
  for (int i = 0; i < m; ++i) acs.xi[i] = inv_len * v[i];
  acs.phi = mf.F;
  acs.eta.resize(m);
  for (int i = 0; i < m; ++i) {
    Jet2 e(0.0);
    for (int j = 0; j < m; ++j) e = e + mf.src.G(i, j) * acs.xi[j];
    acs.eta[i] = e;
  }
  acs.dframe = mf.hframe;
  return acs;
}

double acs_invariants_defect(const ChartFrame& cf, const AcsFrame& acs) {
  const int m = cf.dim();
  const MatD phi = acs.phi.values();
  const VecD xi = values_of(acs.xi), eta = values_of(acs.eta);
  double worst = 0.0;
  // phi^2 = -I + eta (x) xi
  const MatD p2 = phi * phi;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const double want = (i == j ? -1.0 : 0.0) + xi[i] * eta[j];
      worst = std::max(worst, std::fabs(p2(i, j) - want));
    }
  double ev = 0.0;
  for (int i = 0; i < m; ++i) ev += eta[i] * xi[i];
  worst = std::max(worst, std::fabs(ev - 1.0));
  // g(phi X, phi Y) = g(X,Y) - eta(X) eta(Y) over the full frame
  std::vector<VecJ> frame = acs.dframe;
  frame.push_back(acs.xi);
  for (const auto& X : frame)
    for (const auto& Y : frame) {
      const double lhs = value_of(inner(cf.G, acs.phi.apply(X), acs.phi.apply(Y)));
      Jet2 ex(0.0), ey(0.0);
      for (int i = 0; i < m; ++i) {
        ex = ex + acs.eta[i] * X[i];
        ey = ey + acs.eta[i] * Y[i];
      }
      const double rhs = value_of(inner(cf.G, X, Y)) - ex.value() * ey.value();
      worst = std::max(worst, std::fabs(lhs - rhs));
    }
  return worst;
}

VecD n1_pair(const ChartFrame& cf, const AcsFrame& acs, const VecJ& X, const VecJ& Y) {
  const int m = cf.dim();
  const VecJ nij = nijenhuis_bracket(acs.phi, X, Y);
  const FormJ deta = ext_deriv(eta_form(acs, m));
  const double d = deta(X, Y).value();
  VecD r(m);
  for (int i = 0; i < m; ++i) r[i] = nij[i].value() + d * acs.xi[i].value();
  return r;
}

double n2_pair(const AcsFrame& acs, const VecJ& X, const VecJ& Y) {
  const VecJ lx = lie_deriv_form1(acs.phi.apply(X), acs.eta);
  const VecJ ly = lie_deriv_form1(acs.phi.apply(Y), acs.eta);
  double a = 0.0, b = 0.0;
  for (size_t i = 0; i < X.size(); ++i) {
    a += lx[i].value() * Y[i].value();
    b += ly[i].value() * X[i].value();
  }
  return a - b;
}

MatJ fundamental_two_form(const ChartFrame& cf, const MatJ& phi) { return cf.G * phi; }

ContactTensors contact_tensors(const ChartFrame& cf, const AcsFrame& acs) {
  const int m = cf.dim();
  ContactTensors ct;
  std::vector<VecJ> frame = acs.dframe;
  frame.push_back(acs.xi);

  const FormJ deta = ext_deriv(eta_form(acs, m));
  const MatJ PhiM = fundamental_two_form(cf, acs.phi);
  const FormJ Phi = form_from_matrix_antisym(PhiM);
  const FormJ dPhi = ext_deriv(Phi);

  for (size_t a = 0; a < frame.size(); ++a)
    for (size_t b = a + 1; b < frame.size(); ++b) {
      ct.n1_max = std::max(ct.n1_max, gnorm_d(cf, n1_pair(cf, acs, frame[a], frame[b])));
      ct.n2_max = std::max(ct.n2_max, std::fabs(n2_pair(acs, frame[a], frame[b])));
      const double gate =
          0.5 * deta(frame[a], frame[b]).value() - Phi(frame[a], frame[b]).value();
      ct.contact_defect = std::max(ct.contact_defect, std::fabs(gate));
    }
  ct.deta_norm = form_g_norm(deta, frame);
  if (m >= 3) {
    ct.dphi_norm = form_g_norm(dPhi, frame);
    FormJ eta1 = eta_form(acs, m);
    const FormJ etaPhi = wedge_1_2(acs.eta, Phi);
    FormJ resid(m, 3);
    for (size_t i = 0; i < resid.c.size(); ++i)
      resid.c[i] = dPhi.c[i] - 2.0 * etaPhi.c[i];
    ct.kenmotsu_dphi_residual = form_g_norm(resid, frame);
  }
  const MatJ h = 0.5 * lie_deriv_t11(acs.xi, acs.phi);
  double hn = 0.0;
  for (const auto& e : frame) hn = std::max(hn, g_norm(cf.G, h.apply(e)));
  ct.h_tensor_norm = hn;
  return ct;
}

FoliationInvariants foliation_invariants(const ChartFrame& cf, const std::vector<VecJ>& hframe,
                                         const std::vector<VecJ>& vframe) {
  const int m = cf.dim();
  FoliationInvariants fi;
  fi.mu_h.assign(m, 0.0);
  fi.mu_v.assign(m, 0.0);

  auto vertical_part = [&](const VecJ& w) {
    VecD r(m, 0.0);
    for (const auto& v : vframe) {
      const double c = value_of(inner(cf.G, w, v));
      const VecD vv = values_of(v);
      for (int i = 0; i < m; ++i) r[i] += c * vv[i];
    }
    return r;
  };
  auto horizontal_part = [&](const VecJ& w) {
    VecD r = values_of(w);
    for (const auto& v : vframe) {
      const double c = value_of(inner(cf.G, w, v));
      const VecD vv = values_of(v);
      for (int i = 0; i < m; ++i) r[i] -= c * vv[i];
    }
    return r;
  };

  const int hn = static_cast<int>(hframe.size());
  std::vector<std::vector<VecD>> B(hn, std::vector<VecD>(hn, VecD(m, 0.0)));
  for (int a = 0; a < hn; ++a)
    for (int b = 0; b < hn; ++b) {
      const VecJ nab = cov_deriv_vec(cf, hframe[a], hframe[b]);
      const VecJ nba = cov_deriv_vec(cf, hframe[b], hframe[a]);
      VecJ s(m);
      for (int i = 0; i < m; ++i) s[i] = 0.5 * (nab[i] + nba[i]);
      B[a][b] = vertical_part(s);
    }
  for (int a = 0; a < hn; ++a)
    for (int i = 0; i < m; ++i) fi.mu_h[i] += B[a][a][i] / hn;
  fi.mu_h_norm = gnorm_d(cf, fi.mu_h);

  for (const auto& v : vframe) {
    const VecJ nv = cov_deriv_vec(cf, v, v);
    const VecD h = horizontal_part(nv);
    for (int i = 0; i < m; ++i) fi.mu_v[i] += h[i] / static_cast<double>(vframe.size());
  }
  if (!vframe.empty()) fi.mu_v_norm = gnorm_d(cf, fi.mu_v);

  for (int a = 0; a < hn; ++a)
    for (int b = 0; b < hn; ++b) {
      const VecJ br = lie_bracket(hframe[a], hframe[b]);
      fi.i_h_norm = std::max(fi.i_h_norm, gnorm_d(cf, vertical_part(br)));
      VecD asym(m);
      for (int i = 0; i < m; ++i) asym[i] = B[a][b][i] - B[b][a][i];
      fi.b_sym_residual = std::max(fi.b_sym_residual, vecd_norm(asym));
    }

  for (const auto& V : vframe)
    for (int a = 0; a < hn; ++a)
      for (int b = 0; b < hn; ++b) {
        const Jet2 gxy = metric_pair(cf.G, hframe[a], hframe[b]);
        const double lvg = dirderiv(V, gxy).value() -
                           value_of(inner(cf.G, lie_bracket(V, hframe[a]), hframe[b])) -
                           value_of(inner(cf.G, hframe[a], lie_bracket(V, hframe[b])));
        const double gbv = value_of(inner(cf.G, to_jets(B[a][b]), V));
        fi.cor21_residual = std::max(fi.cor21_residual, std::fabs(lvg + 2.0 * gbv));
      }
  return fi;
}

double phwc_foliation_defect(const ChartFrame& cf, const MatJ& F, const MatJ& PH,
                             const std::vector<VecJ>& hframe, const std::vector<VecJ>& vframe) {
  const int m = cf.dim();
  auto vertical_part = [&](const VecJ& w) {
    VecD r(m, 0.0);
    for (const auto& v : vframe) {
      const double c = value_of(inner(cf.G, w, v));
      const VecD vv = values_of(v);
      for (int i = 0; i < m; ++i) r[i] += c * vv[i];
    }
    return r;
  };
  auto bfun = [&](const VecJ& X, const VecJ& Y) {
    const VecJ nxy = cov_deriv_vec(cf, X, Y);
    const VecJ nyx = cov_deriv_vec(cf, Y, X);
    VecJ s(m);
    for (int i = 0; i < m; ++i) s[i] = 0.5 * (nxy[i] + nyx[i]);
    return vertical_part(s);
  };
  const MatD PHv = PH.values();
  double worst = 0.0;
  for (size_t a = 0; a < hframe.size(); ++a)
    for (size_t b = 0; b < hframe.size(); ++b) {
      const VecD b1 = bfun(F.apply(hframe[a]), F.apply(hframe[b]));
      const VecD b2 = bfun(hframe[a], hframe[b]);
      VecD d(m);
      for (int i = 0; i < m; ++i) d[i] = b1[i] - b2[i];
      worst = std::max(worst, gnorm_d(cf, d));
    }
  for (const auto& V : vframe)
    for (const auto& X : hframe) {
      const VecJ t1 = lie_bracket(V, F.apply(X));
      const VecJ t2 = F.apply(lie_bracket(V, X));
      VecD d(m, 0.0);
      for (int i = 0; i < m; ++i) {
        double s = 0.0;
        for (int j = 0; j < m; ++j) s += PHv(i, j) * (t1[j].value() - t2[j].value());
        d[i] = s;
      }
      worst = std::max(worst, gnorm_d(cf, d));
    }
  return worst;
}

ClassDefects classify_point(const ChartFrame& cf, const AcsFrame& acs) {
  const int m = cf.dim();
  ClassDefects cd;
  std::vector<VecJ> frame = acs.dframe;
  frame.push_back(acs.xi);

  const ContactTensors ct = contact_tensors(cf, acs);
  cd.contact_metric = ct.contact_defect;
  cd.normal = ct.n1_max;

  const MatJ lg = lie_deriv_metric(cf.G, acs.xi);
  double killing = 0.0;
  for (const auto& a : frame)
    for (const auto& b : frame) {
      Jet2 s(0.0);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) s = s + a[i] * lg(i, j) * b[j];
      killing = std::max(killing, std::fabs(s.value()));
    }
  cd.k_contact = cd.contact_metric + killing;

  // nabla phi on frame pairs, and the model tensors of each class.
  const auto eta_of = [&](const VecJ& v) {
    Jet2 s(0.0);
    for (int i = 0; i < m; ++i) s = s + acs.eta[i] * v[i];
    return s.value();
  };
  double nearly = 0.0, sas = 0.0, ken = 0.0;
  double fit_num = 0.0, fit_den = 0.0;
  std::vector<std::vector<VecD>> nphi(frame.size(), std::vector<VecD>(frame.size()));
  std::vector<std::vector<VecD>> model(frame.size(), std::vector<VecD>(frame.size()));
  for (size_t a = 0; a < frame.size(); ++a) {
    const MatJ np = cov_deriv_t11(cf, frame[a], acs.phi);
    for (size_t b = 0; b < frame.size(); ++b) {
      nphi[a][b] = values_of(np.apply(frame[b]));
      // alpha-Sasakian model: g(X,Y) xi - eta(Y) X
      const double gab = value_of(inner(cf.G, frame[a], frame[b]));
      const double etb = eta_of(frame[b]);
      VecD mo(m);
      for (int i = 0; i < m; ++i)
        mo[i] = gab * acs.xi[i].value() - etb * frame[a][i].value();
      model[a][b] = mo;
    }
  }
  const MatD Gv = cf.G.values();
  auto gdot = [&](const VecD& u, const VecD& v) {
    double s = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) s += u[i] * Gv(i, j) * v[j];
    return s;
  };
  for (size_t a = 0; a < frame.size(); ++a)
    for (size_t b = 0; b < frame.size(); ++b) {
      VecD sym(m);
      for (int i = 0; i < m; ++i) sym[i] = 0.5 * (nphi[a][b][i] + nphi[b][a][i]);
      nearly = std::max(nearly, gnorm_d(cf, sym));

      VecD ds(m);
      for (int i = 0; i < m; ++i) ds[i] = nphi[a][b][i] - model[a][b][i];
      sas = std::max(sas, gnorm_d(cf, ds));

      const VecD phia = values_of(acs.phi.apply(frame[a]));
      const double gpab = gdot(phia, values_of(frame[b]));
      const double etb = eta_of(frame[b]);
      VecD dk(m);
      for (int i = 0; i < m; ++i)
        dk[i] = nphi[a][b][i] - (gpab * acs.xi[i].value() - etb * phia[i]);
      ken = std::max(ken, gnorm_d(cf, dk));

      fit_num += gdot(nphi[a][b], model[a][b]);
      fit_den += gdot(model[a][b], model[a][b]);
    }
  cd.nearly_cosymplectic = nearly;
  cd.sasakian = sas;
  cd.kenmotsu = ken;
  cd.alpha_fit = fit_den > 1e-14 ? fit_num / fit_den : 0.0;
  double alpha_res = 0.0;
  for (size_t a = 0; a < frame.size(); ++a)
    for (size_t b = 0; b < frame.size(); ++b) {
      VecD d(m);
      for (int i = 0; i < m; ++i) d[i] = nphi[a][b][i] - cd.alpha_fit * model[a][b][i];
      alpha_res = std::max(alpha_res, gnorm_d(cf, d));
    }
  cd.alpha_sasakian = alpha_res;
  cd.quasi_sasakian = cd.normal + ct.dphi_norm;

  // semi-cosymplectic: |delta Phi| + |delta eta|
  const MatJ PhiM = fundamental_two_form(cf, acs.phi);
  const FormJ Phi = form_from_matrix_antisym(PhiM);
  const VecJ dPhi = codifferential_2(cf, Phi, frame);
  const double deta = codifferential_1(cf, acs.eta, frame);
  double dphinorm2 = 0.0;
  const MatD Gi = cf.Ginv.values();
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) dphinorm2 += dPhi[i].value() * Gi(i, j) * dPhi[j].value();
  cd.semi_cosymplectic = std::sqrt(std::max(0.0, dphinorm2)) + std::fabs(deta);
  return cd;
}

NormalityDefects normality_defects(const ChartFrame& cf, const AcsFrame& acs) {
  const int m = cf.dim();
  NormalityDefects nd;
  std::vector<VecJ> frame = acs.dframe;
  frame.push_back(acs.xi);
  for (size_t a = 0; a < frame.size(); ++a)
    for (size_t b = a + 1; b < frame.size(); ++b)
      nd.n1 = std::max(nd.n1, gnorm_d(cf, n1_pair(cf, acs, frame[a], frame[b])));

  const VecJ mu = cov_deriv_vec(cf, acs.xi, acs.xi);
  const FormJ deta = ext_deriv(eta_form(acs, m));
  double inv = 0.0;
  for (size_t a = 0; a < acs.dframe.size(); ++a)
    for (size_t b = a + 1; b < acs.dframe.size(); ++b) {
      const double lhs = deta(acs.phi.apply(acs.dframe[a]), acs.phi.apply(acs.dframe[b])).value();
      const double rhs = deta(acs.dframe[a], acs.dframe[b]).value();
      inv = std::max(inv, std::fabs(lhs - rhs));
    }
  nd.fiber_form = g_norm(cf.G, mu) + inv;

  const MatJ np = cov_deriv_t11(cf, acs.xi, acs.phi);
  for (const auto& e : frame) nd.parallel_phi = std::max(nd.parallel_phi, g_norm(cf.G, np.apply(e)));
  return nd;
}

WFormResult w_form(const ChartFrame& cf, const std::vector<VecJ>& hframe,
                   const std::vector<VecJ>& vframe) {
  const int m = cf.dim();
  const int two_n = static_cast<int>(hframe.size());
  const FoliationInvariants fi = foliation_invariants(cf, hframe, vframe);
  const MatD Gv = cf.G.values();
  auto flat = [&](const VecD& v) {
    VecD r(m, 0.0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) r[i] += Gv(i, j) * v[j];
    return r;
  };
  const VecD muh = flat(fi.mu_h), muv = flat(fi.mu_v);
  WFormResult wr;
  wr.w.assign(m, 0.0);
  VecD walt(m, 0.0);
  for (int i = 0; i < m; ++i) {
    wr.w[i] = (two_n - 2) * muh[i] - (m - two_n / 2) * muv[i];       // printed: (m - n)
    walt[i] = (two_n - 2) * muh[i] - (m - two_n) * muv[i];           // variant: (m - 2n)
  }
  const MatD Gi = cf.Ginv.values();
  auto onorm = [&](const VecD& w) {
    double s = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) s += w[i] * Gi(i, j) * w[j];
    return std::sqrt(std::max(0.0, s));
  };
  wr.norm = onorm(wr.w);
  wr.norm_alt = onorm(walt);
  return wr;
}

double one_form_closedness_fd(const std::function<VecD(const VecD&)>& field, const ChartFrame& cf,
                              double step) {
  const int m = cf.dim();
  MatD dW(m, m);
  for (int i = 0; i < m; ++i) {
    VecD xp = cf.x, xm = cf.x;
    xp[i] += step;
    xm[i] -= step;
    const VecD wp = field(xp), wm = field(xm);
    for (int j = 0; j < m; ++j) dW(i, j) = (wp[j] - wm[j]) / (2.0 * step);
  }
  FormJ f(m, 2);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) f.at({i, j}) = Jet2(dW(i, j) - dW(j, i));
  std::vector<VecJ> frame = orthonormal_frame(cf);
  if (m < 2) return 0.0;
  return form_g_norm(f, frame);
}

CosymplecticIdentity cosymplectic_identity(const ChartFrame& cf, const MatJ& F,
                                           const std::vector<VecJ>& hframe,
                                           const std::vector<VecJ>& vframe) {
  const int m = cf.dim();
  const int two_n = static_cast<int>(hframe.size());
  const FoliationInvariants fi = foliation_invariants(cf, hframe, vframe);
  const MatD Gv = cf.G.values();
  VecD lhs(m, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      lhs[i] += Gv(i, j) * (two_n * fi.mu_h[j] - (m - two_n) * fi.mu_v[j]);

  const std::vector<VecJ> hf = hermitian_frame(cf.G, F, hframe);
  const FormJ Phi = form_from_matrix_antisym(fundamental_two_form(cf, F));
  const FormJ dPhi = ext_deriv(Phi);
  VecD sigma(m, 0.0);
  for (int j = 0; j < m; ++j) {
    VecJ ej(m, Jet2(0.0));
    ej[j] = Jet2(1.0);
    double s = 0.0;
    for (size_t p = 0; p + 1 < hf.size(); p += 2) s += dPhi(hf[p], hf[p + 1], ej).value();
    sigma[j] = s;
  }
  CosymplecticIdentity ci;
  const MatD Gi = cf.Ginv.values();
  auto onorm = [&](const VecD& w) {
    double s = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) s += w[i] * Gi(i, j) * w[j];
    return std::sqrt(std::max(0.0, s));
  };
  VecD dplus(m), dminus(m);
  for (int i = 0; i < m; ++i) {
    dplus[i] = lhs[i] - sigma[i];
    dminus[i] = lhs[i] + sigma[i];
  }
  ci.residual_plus = onorm(dplus);
  ci.residual_minus = onorm(dminus);
  ci.residual = std::min(ci.residual_plus, ci.residual_minus);
  ci.lhs_norm = onorm(lhs);
  return ci;
}

OlszakBlair olszak_blair(const ChartFrame& cf, const AcsFrame& acs, double tol) {
  const int m = cf.dim();
  const ContactTensors ct = contact_tensors(cf, acs);
  if (ct.contact_defect >= tol)
    throw NotApplicableError("olszak/blair requires a contact-metric structure (contact defect " +
                             std::to_string(ct.contact_defect) + ")");
  OlszakBlair ob;
  ob.h_tensor_norm = ct.h_tensor_norm;
  std::vector<VecJ> frame = acs.dframe;
  frame.push_back(acs.xi);
  const MatJ h = 0.5 * lie_deriv_t11(acs.xi, acs.phi);
  const FormJ deta = ext_deriv(eta_form(acs, m));

  const auto eta_of = [&](const VecJ& v) {
    Jet2 s(0.0);
    for (int i = 0; i < m; ++i) s = s + acs.eta[i] * v[i];
    return s.value();
  };

  std::vector<MatJ> nphi_by;  // nabla_{frame[a]} phi
  for (const auto& X : frame) nphi_by.push_back(cov_deriv_t11(cf, X, acs.phi));

  for (size_t a = 0; a < frame.size(); ++a) {
    const VecJ& X = frame[a];
    const VecJ phiX = acs.phi.apply(X);
    const MatJ nphi_phiX = cov_deriv_t11(cf, phiX, acs.phi);
    for (size_t b = 0; b < frame.size(); ++b) {
      const VecJ& Y = frame[b];
      // Olszak: (nabla_X phi)Y + (nabla_phiX phi) phiY
      //         = 2 g(X,Y) xi - eta(Y)(X + hX + eta(X) xi)
      const VecJ t1 = nphi_by[a].apply(Y);
      const VecJ t2 = nphi_phiX.apply(acs.phi.apply(Y));
      const double gxy = value_of(inner(cf.G, X, Y));
      const double ex = eta_of(X), ey = eta_of(Y);
      const VecD hX = values_of(h.apply(X));
      VecD res(m);
      for (int i = 0; i < m; ++i) {
        const double rhs = 2.0 * gxy * acs.xi[i].value() -
                           ey * (X[i].value() + hX[i] + ex * acs.xi[i].value());
        res[i] = t1[i].value() + t2[i].value() - rhs;
      }
      ob.olszak = std::max(ob.olszak, gnorm_d(cf, res));

      // Horizontal (1,2)-symplectic part of the same combination.
      VecJ comb(m);
      for (int i = 0; i < m; ++i) comb[i] = t1[i] + t2[i];
      const VecJ combH = acs_horizontal(acs, comb);
      if (a < acs.dframe.size() && b < acs.dframe.size())
        ob.sympl12 = std::max(ob.sympl12, g_norm(cf.G, combH));

      // Blair: 2 g((nabla_X phi)Y, Z) = g(N^(1)(Y,Z), phi X)
      //        + d_std eta(phi Y, X) eta(Z) - d_std eta(phi Z, X) eta(Y)
      for (size_t c = 0; c < frame.size(); ++c) {
        const VecJ& Z = frame[c];
        const double lhs = 2.0 * value_of(inner(cf.G, t1, Z));
        const VecD n1 = n1_pair(cf, acs, Y, Z);
        const double g_n1 = value_of(inner(cf.G, to_jets(n1), phiX));
        const double d1 = deta(acs.phi.apply(Y), X).value() * eta_of(Z);
        const double d2 = deta(acs.phi.apply(Z), X).value() * eta_of(Y);
        ob.blair = std::max(ob.blair, std::fabs(lhs - (g_n1 + d1 - d2)));
      }
    }
  }
  return ob;
}

double complex_distribution_integrability(const ChartFrame& cf, const MatJ& F,
                                          const std::vector<VecJ>& hframe,
                                          const std::vector<VecJ>& vframe) {
  const int m = cf.dim();
  // Sections of T^0 + T^{0,1}: the vertical frame (kernel) and e - i F e... the
  // (-i)-eigenvectors are e + i F e.  Complex fields are (real, imaginary) pairs.
  struct CVecJ {
    VecJ re, im;
  };
  std::vector<CVecJ> sections;
  VecJ zero(m, Jet2(0.0));
  for (const auto& v : vframe) sections.push_back({v, zero});
  for (const auto& e : hframe) sections.push_back({e, F.apply(e)});

  // P_+ = (-F^2 - iF)/2 projects onto the (+i)-eigenbundle.
  const MatD Fv = F.values();
  const MatD A = -0.5 * (Fv * Fv);
  const MatD B = -0.5 * Fv;
  const MatD Gv = cf.G.values();

  double worst = 0.0;
  for (size_t s = 0; s < sections.size(); ++s)
    for (size_t t = s + 1; t < sections.size(); ++t) {
      const auto& [pr, pi] = sections[s];
      const auto& [qr, qi] = sections[t];
      const VecJ br_re = vec_sub(lie_bracket(pr, qr), lie_bracket(pi, qi));
      const VecJ br_im = vec_add(lie_bracket(pr, qi), lie_bracket(pi, qr));
      // P_+ applied to the complex bracket
      VecD wre(m, 0.0), wim(m, 0.0);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          wre[i] += A(i, j) * br_re[j].value() - B(i, j) * br_im[j].value();
          wim[i] += A(i, j) * br_im[j].value() + B(i, j) * br_re[j].value();
        }
      double q = 0.0;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) q += wre[i] * Gv(i, j) * wre[j] + wim[i] * Gv(i, j) * wim[j];
      worst = std::max(worst, std::sqrt(std::max(0.0, q)));
    }
  return worst;
}

std::vector<VecJ> hermitian_frame(const MatJ& G, const MatJ& F, const std::vector<VecJ>& hframe) {
  std::vector<VecJ> out;
  const size_t want = hframe.size();
  for (const auto& cand : hframe) {
    if (out.size() >= want) break;
    VecJ u = cand;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : out) {
        const Jet2 c = inner(G, b, u);
        for (size_t i = 0; i < u.size(); ++i) u[i] = u[i] - c * b[i];
      }
    const Jet2 r2 = inner(G, u, u);
    if (std::sqrt(std::max(0.0, r2.value())) < 1e-8) continue;
    const Jet2 il = Jet2(1.0) / sqrt(r2);
    for (auto& x : u) x = il * x;
    out.push_back(u);
    // Partner F u, re-orthonormalized for numerical hygiene.
    VecJ w = F.apply(u);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : out) {
        const Jet2 c = inner(G, b, w);
        for (size_t i = 0; i < w.size(); ++i) w[i] = w[i] - c * b[i];
      }
    const Jet2 w2 = inner(G, w, w);
    if (std::sqrt(std::max(0.0, w2.value())) < 1e-8)
      throw DegeneracyError("hermitian_frame: F does not rotate the horizontal space");
    const Jet2 iw = Jet2(1.0) / sqrt(w2);
    for (auto& x : w) x = iw * x;
    out.push_back(w);
  }
  if (out.size() != want) throw DegeneracyError("hermitian_frame: could not complete the frame");
  return out;
}

}  // namespace phm
