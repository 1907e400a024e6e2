// Acceptance suite: one line per criterion, every tolerance pinned in code.
// Settings: 200 sample points, seed 7, tol 1e-8, fail threshold 0.1.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "phm/config.hpp"

using namespace phm;

namespace {

constexpr int kPoints = 200;
constexpr uint64_t kSeed = 7;
constexpr double kTol = 1e-8;
constexpr double kFail = 0.1;

int g_failures = 0;
std::vector<std::string> g_notes;

struct Criterion {
  std::string name;
  bool ok = true;
  std::chrono::steady_clock::time_point start;

  explicit Criterion(std::string n) : name(std::move(n)), start(std::chrono::steady_clock::now()) {}

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      g_notes.push_back(name + ": " + what);
    }
  }
  void close() {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    require(secs < 30.0, "exceeded the 30 s budget (" + std::to_string(secs) + " s)");
    std::printf("[%s] %s  (%.1f s)\n", ok ? "PASS" : "FAIL", name.c_str(), secs);
    if (!ok) ++g_failures;
  }
};

std::string fmt(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3g", v);
  return b;
}

const std::vector<const char*> kPhwcEntries = {"flat_projection", "hopf",    "sasakian_r3",
                                               "sasakian_r5",     "kenmotsu", "skewed_fibration",
                                               "composed_phm"};

// --------------------------------------------------------------------------

void criterion1_ad_against_finite_differences() {
  Criterion c("1. AD gradients/Hessians match central differences (1e-6 rel, 100 points)");
  const double h = 1e-4;
  for (const auto& id : catalog_ids()) {
    const Scenario s = catalog_lookup(id, {}, false);
    struct Field {
      const RiemannianChart* chart;
      const Expr* e;
    };
    std::vector<Field> fields;
    for (const auto& row : s.source.metric)
      for (const auto& e : row) fields.push_back({&s.source, &e});
    for (const auto& e : s.map_components) fields.push_back({&s.source, &e});
    if (s.acs) {
      for (const auto& row : s.acs->phi)
        for (const auto& e : row) fields.push_back({&s.source, &e});
      for (const auto& e : s.acs->xi) fields.push_back({&s.source, &e});
      for (const auto& e : s.acs->eta) fields.push_back({&s.source, &e});
    }
    if (s.target) {
      for (const auto& row : s.target->chart.metric)
        for (const auto& e : row) fields.push_back({&s.target->chart, &e});
    }
    double worst = 0.0;
    for (int p = 0; p < 100; ++p) {
      for (const auto& [chart, expr] : fields) {
        const VecD x = sample_box(chart->box, kSeed + 17, p);
        const int m = chart->dim();
        std::vector<Jet2> xj;
        for (int i = 0; i < m; ++i) xj.push_back(Jet2::variable(x[i], i, m));
        const Jet2 j = expr->eval_j(xj);
        for (int i = 0; i < m; ++i) {
          VecD xp = x, xm = x;
          xp[i] += h;
          xm[i] -= h;
          const double fd = (expr->eval_d(xp) - expr->eval_d(xm)) / (2 * h);
          worst = std::max(worst, std::fabs(j.deriv(i) - fd) / std::max(1.0, std::fabs(fd)));
          for (int k = 0; k <= i; ++k) {
            double fdh;
            if (i == k) {
              fdh = (expr->eval_d(xp) - 2 * expr->eval_d(x) + expr->eval_d(xm)) / (h * h);
            } else {
              VecD xpp = x, xpm = x, xmp = x, xmm = x;
              xpp[i] += h;
              xpp[k] += h;
              xpm[i] += h;
              xpm[k] -= h;
              xmp[i] -= h;
              xmp[k] += h;
              xmm[i] -= h;
              xmm[k] -= h;
              fdh = (expr->eval_d(xpp) - expr->eval_d(xpm) - expr->eval_d(xmp) +
                     expr->eval_d(xmm)) /
                    (4 * h * h);
            }
            worst = std::max(worst, std::fabs(j.second(i, k) - fdh) / std::max(1.0, std::fabs(fdh)));
          }
        }
      }
    }
    c.require(worst < 1e-6, std::string(id) + ": AD vs FD relative error " + fmt(worst));
  }
  c.close();
}

void criterion2_lemma21() {
  Criterion c("2. Lemma 2.1: ((L_V F)X)^H < 1e-8 on all PHWC entries");
  for (const char* id : kPhwcEntries) {
    const Scenario s = catalog_lookup(id, {}, false);
    double worst = 0.0;
    for (int p = 0; p < kPoints; ++p)
      worst = std::max(worst, basic_f_defect(scenario_map_frame(s, sample_box(s.source.box, kSeed, p))));
    c.require(worst < kTol, std::string(id) + ": defect " + fmt(worst));
  }
  c.close();
}

void criterion3_lemma22_prop23() {
  Criterion c("3. Lemma 2.2 / Prop 2.3: Nijenhuis, integrability, pulled-back Kaehler form");
  for (const char* id : kPhwcEntries) {
    const Scenario s = catalog_lookup(id, {}, false);
    double nij = 0.0, integ = 0.0, pull = 0.0;
    for (int p = 0; p < kPoints; ++p) {
      const MapFrame mf = scenario_map_frame(s, sample_box(s.source.box, kSeed, p));
      nij = std::max(nij, horizontal_nijenhuis_defect(mf));
      integ = std::max(integ, complex_distribution_integrability(mf.src, mf.F, mf.hframe, mf.vframe));
      if (s.target->kahler) pull = std::max(pull, pullback_kahler_closedness(mf));
    }
    c.require(nij < kTol, std::string(id) + ": horizontal Nijenhuis " + fmt(nij));
    c.require(integ < kTol, std::string(id) + ": complex distribution " + fmt(integ));
    c.require(pull < kTol, std::string(id) + ": d(pullback Kaehler form) " + fmt(pull));
  }
  c.close();
}

void criterion4_theorem31() {
  Criterion c("4. Theorem 3.1: battery <-> PHWC + cosymplectic on standard-J entries");
  const std::vector<const char*> entries = {"flat_projection", "hopf",        "sasakian_r3",
                                            "sasakian_r5",     "kenmotsu",    "composed_phm",
                                            "skewed_fibration", "shear",      "warped_twist",
                                            "superminimal_product", "cone_over_sasakian_r3"};
  for (const char* id : entries) {
    const Scenario s = catalog_lookup(id, {}, false);
    double battery = 0.0, structural = 0.0;
    for (int p = 0; p < kPoints; ++p) {
      const MapFrame mf = scenario_map_frame(s, sample_box(s.source.box, kSeed, p));
      battery = std::max(battery, battery_max(mf));
      structural =
          std::max(structural, std::max(phwc_defect(mf), f_div_f(mf).cosymplectic_defect));
    }
    c.require((battery < kTol) == (structural < kTol),
              std::string(id) + ": routes disagree (battery " + fmt(battery) + ", structural " +
                  fmt(structural) + ")");
    if (std::string(id) == "skewed_fibration") {
      c.require(std::fabs(battery - 1.0) < 1e-6, "skewed battery max " + fmt(battery) + " != 1");
      c.require(std::fabs(structural - 1.0) < 1e-6,
                "skewed cosymplectic defect " + fmt(structural) + " != 1");
    }
    if (std::string(id) == "flat_projection" || std::string(id) == "hopf" ||
        std::string(id) == "composed_phm")
      c.require(battery < kTol, std::string(id) + ": expected PHM, battery " + fmt(battery));
  }
  c.close();
}

void criterion5_decomposition() {
  Criterion c("5. Eq. (3): tension decomposition residual < 1e-8 on PHWC entries");
  for (const char* id : kPhwcEntries) {
    const Scenario s = catalog_lookup(id, {}, false);
    double worst = 0.0;
    for (int p = 0; p < kPoints; ++p)
      worst = std::max(
          worst, tension_decomposition_residual(scenario_map_frame(s, sample_box(s.source.box, kSeed, p))));
    c.require(worst < kTol, std::string(id) + ": residual " + fmt(worst));
  }
  // Negative-side cross check: on skewed both sides independently equal (1,0).
  const Scenario s = catalog_lookup("skewed_fibration", {}, false);
  double tau_dev = 0.0, rhs_dev = 0.0;
  for (int p = 0; p < kPoints; ++p) {
    const MapFrame mf = scenario_map_frame(s, sample_box(s.source.box, kSeed, p));
    const VecD tau = tension_field(mf, nullptr);
    tau_dev = std::max(tau_dev, std::hypot(tau[0] - 1.0, tau[1]));
    const FDivFResult fd = f_div_f(mf);
    VecD push(2, 0.0);
    for (int a = 0; a < 2; ++a)
      for (int i = 0; i < 3; ++i) push[a] += mf.dphi(a, i).value() * fd.f_div_f[i];
    rhs_dev = std::max(rhs_dev, std::hypot(-push[0] - 1.0, -push[1]));
  }
  c.require(tau_dev < 1e-6, "skewed tau deviates from (1,0) by " + fmt(tau_dev));
  c.require(rhs_dev < 1e-6, "skewed decomposition side deviates from (1,0) by " + fmt(rhs_dev));
  c.close();
}

void criterion6_theorem41() {
  Criterion c("6. Theorem 4.1: three-way normality equivalence");
  for (const char* id : {"sasakian_r3", "sasakian_r5", "kenmotsu"}) {
    const Scenario s = catalog_lookup(id, {}, false);
    double worst = 0.0;
    for (int p = 0; p < kPoints; ++p) {
      const ChartFrame cf = make_chart_frame(s.source, sample_box(s.source.box, kSeed, p));
      const AcsFrame acs = make_acs_frame(cf, *s.acs);
      const NormalityDefects nd = normality_defects(cf, acs);
      worst = std::max({worst, nd.n1, nd.fiber_form, nd.parallel_phi});
    }
    c.require(worst < kTol, std::string(id) + ": normality defect " + fmt(worst));
  }
  const Scenario s = catalog_lookup("skewed_fibration", {}, false);
  double lo = 1e9, n1_at_pair = 0.0, muv = 0.0;
  for (int p = 0; p < kPoints; ++p) {
    const ChartFrame cf = make_chart_frame(s.source, sample_box(s.source.box, kSeed, p));
    const AcsFrame acs = make_acs_frame(cf, *s.acs);
    const NormalityDefects nd = normality_defects(cf, acs);
    lo = std::min({lo, nd.n1, nd.fiber_form, nd.parallel_phi});
    VecJ dx(3, Jet2(0.0));
    dx[1] = Jet2(1.0);
    const VecD n1 = n1_pair(cf, acs, dx, acs.xi);
    VecJ n1j(3);
    for (int i = 0; i < 3; ++i) n1j[i] = Jet2(n1[i]);
    n1_at_pair = std::max(n1_at_pair, std::fabs(g_norm(cf.G, n1j) - 1.0));
    muv = std::max(muv, std::fabs(g_norm(cf.G, cov_deriv_vec(cf, acs.xi, acs.xi)) - 1.0));
  }
  c.require(lo >= 0.5, "skewed: some normality defect below 0.5 (min " + fmt(lo) + ")");
  c.require(n1_at_pair < 1e-6, "skewed: |N1(dx, xi)| deviates from 1 by " + fmt(n1_at_pair));
  c.require(muv < 1e-6, "skewed: ||mu^V|| deviates from 1 by " + fmt(muv));
  c.close();
}

void criterion7_classes() {
  Criterion c("7. Prop 3.3 classes, W-form, Olszak and Blair identities");
  {
    const Scenario s = catalog_lookup("sasakian_r3", {}, false);
    double contact = 0, kcon = 0, sas = 0, alpha_dev = 0, wnorm = 0;
    for (int p = 0; p < kPoints; ++p) {
      const MapFrame mf = scenario_map_frame(s, sample_box(s.source.box, kSeed, p));
      const AcsFrame acs = make_acs_frame(mf.src, *s.acs);
      const ClassDefects cd = classify_point(mf.src, acs);
      contact = std::max(contact, cd.contact_metric);
      kcon = std::max(kcon, cd.k_contact);
      sas = std::max(sas, cd.sasakian);
      alpha_dev = std::max(alpha_dev, std::fabs(cd.alpha_fit - 1.0));
      wnorm = std::max(wnorm, w_form(mf.src, mf.hframe, mf.vframe).norm);
    }
    c.require(contact < kTol, "sasakian_r3 contact defect " + fmt(contact));
    c.require(kcon < kTol, "sasakian_r3 K-contact defect " + fmt(kcon));
    c.require(sas < kTol, "sasakian_r3 Sasakian defect " + fmt(sas));
    c.require(alpha_dev < 1e-6, "sasakian_r3 fitted alpha deviates by " + fmt(alpha_dev));
    c.require(wnorm < kTol, "sasakian_r3 W-form norm " + fmt(wnorm));
  }
  {
    const Scenario s = catalog_lookup("kenmotsu", {}, false);
    double ken = 0, muv = 0, deta = 0;
    for (int p = 0; p < kPoints; ++p) {
      const ChartFrame cf = make_chart_frame(s.source, sample_box(s.source.box, kSeed, p));
      const AcsFrame acs = make_acs_frame(cf, *s.acs);
      ken = std::max(ken, classify_point(cf, acs).kenmotsu);
      muv = std::max(muv, g_norm(cf.G, cov_deriv_vec(cf, acs.xi, acs.xi)));
      deta = std::max(deta, contact_tensors(cf, acs).deta_norm);
    }
    c.require(ken < kTol, "kenmotsu class defect " + fmt(ken));
    c.require(muv < kTol, "kenmotsu mu^V " + fmt(muv));
    c.require(deta < 1e-10, "kenmotsu d(eta) " + fmt(deta));
  }
  for (const char* id : {"sasakian_r3", "sasakian_r5"}) {
    const Scenario s = catalog_lookup(id, {}, false);
    double olszak = 0, blair = 0, htn = 0;
    for (int p = 0; p < kPoints; ++p) {
      const ChartFrame cf = make_chart_frame(s.source, sample_box(s.source.box, kSeed, p));
      const AcsFrame acs = make_acs_frame(cf, *s.acs);
      const OlszakBlair ob = olszak_blair(cf, acs, kFail);
      olszak = std::max(olszak, ob.olszak);
      blair = std::max(blair, ob.blair);
      htn = std::max(htn, ob.h_tensor_norm);
    }
    c.require(olszak < kTol, std::string(id) + " Olszak residual " + fmt(olszak));
    c.require(blair < kTol, std::string(id) + " Blair residual " + fmt(blair));
    c.require(htn < 1e-9, std::string(id) + " h-tensor norm " + fmt(htn));
  }
  c.close();
}

void criterion8_cone_suite() {
  Criterion c("8. Section-5 cone suite: projection, equivalences, adapted pairs");
  {
    const Scenario base = catalog_lookup("sasakian_r3", {}, false);
    const ConeChart cone = build_cone(base, 0.5, 2.0);
    double tension = 0, dilation = 0, geodesic = 0;
    for (int p = 0; p < kPoints; ++p) {
      const ConePointChecks pc = cone_point_checks(cone, sample_box(cone.chart.box, kSeed, p));
      tension = std::max(tension, pc.tension);
      dilation = std::max(dilation, pc.dilation);
      geodesic = std::max(geodesic, pc.geodesic_fibers);
    }
    c.require(tension < kTol, "cone projection tension " + fmt(tension));
    c.require(dilation < kTol, "cone dilation residual " + fmt(dilation));
    c.require(geodesic < 1e-9, "cone fiber geodesic defect " + fmt(geodesic));

    // Prop 5.1 (i),(ii),(iv): both-pass on the positive map, and the conjugated
    // variant keeps both sides of each item on the same side.
    auto agree = [](double a, double b) {
      return (a < kTol && b < kTol) || (a >= kFail && b >= kFail);
    };
    bool pattern = true;
    for (int p = 0; p < 64; ++p) {
      const VecD xc = sample_box(cone.chart.box, kSeed + 2, p);
      const VecD xb(xc.begin() + 1, xc.end());
      const ConeEquivalencePoint eq = cone_equivalences(base, cone, xc[0], xb, false);
      const ConeEquivalencePoint eqc = cone_equivalences(base, cone, xc[0], xb, true);
      pattern = pattern && agree(eq.holo_base, eq.holo_cone) && eq.holo_base < kTol;
      pattern = pattern && agree(eq.phwc_harm_base, eq.phwc_harm_cone) && eq.phwc_harm_base < kTol;
      pattern = pattern && agree(eq.phm_base, eq.phm_cone) && eq.phm_base < kTol;
      pattern = pattern && agree(eqc.holo_base, eqc.holo_cone) && eqc.holo_base >= kFail;
      pattern = pattern && agree(eqc.phwc_harm_base, eqc.phwc_harm_cone);
      pattern = pattern && agree(eqc.phm_base, eqc.phm_cone);
    }
    c.require(pattern, "Prop 5.1 equivalence pattern broken");
  }
  {
    double remark = 0;
    for (const char* id : {"superminimal_product", "warped_twist", "cone_over_sasakian_r3"}) {
      const Scenario s = catalog_lookup(id, {}, false);
      double ident = 0;
      for (int p = 0; p < kPoints; ++p) {
        const MapFrame mf = scenario_map_frame(s, sample_box(s.source.box, kSeed, p));
        const AdaptedPairFrames ap = adapted_pair(mf);
        remark = std::max(remark, ap.remark51);
        ident = std::max(ident, superminimality(mf, ap).proof_identity);
      }
      c.require(ident < kTol, std::string(id) + " proof-identity residual " + fmt(ident));
    }
    c.require(remark < kTol, "Remark 5.1 residual " + fmt(remark));
  }
  {
    const Scenario s = catalog_lookup("superminimal_product", {}, false);
    double sup = 0, nij = 0;
    for (int p = 0; p < kPoints; ++p) {
      const MapFrame mf = scenario_map_frame(s, sample_box(s.source.box, kSeed, p));
      const SuperminimalityReport sr = superminimality(mf, adapted_pair(mf));
      sup = std::max({sup, sr.superminimal_plus, sr.superminimal_minus});
      nij = std::max({nij, sr.nijenhuis_plus, sr.nijenhuis_minus});
    }
    c.require(sup < 1e-9, "superminimal_product superminimality " + fmt(sup));
    c.require(nij < 1e-9, "superminimal_product Nijenhuis " + fmt(nij));
  }
  {
    const Scenario s = catalog_lookup("warped_twist", {}, false);
    double sup = 1e9, nij = 0;
    for (int p = 0; p < kPoints; ++p) {
      const MapFrame mf = scenario_map_frame(s, sample_box(s.source.box, kSeed, p));
      const SuperminimalityReport sr = superminimality(mf, adapted_pair(mf));
      sup = std::min({sup, sr.superminimal_plus, sr.superminimal_minus});
      nij = std::max({nij, sr.nijenhuis_plus, sr.nijenhuis_minus});
    }
    c.require(sup >= kFail, "warped_twist superminimality defect " + fmt(sup) + " below 0.1");
    c.require(nij < kTol, "warped_twist Nijenhuis " + fmt(nij));
  }
  c.close();
}

void criterion9_determinism() {
  Criterion c("9. Determinism: byte-identical reports across worker counts");
  nlohmann::json doc;
  doc["scenario"] = "sasakian_r3";
  doc["checks"] = {"phm", "normality", "classify", "lemma21", "wform", "cr"};
  doc["points"] = kPoints;
  doc["seed"] = 7;
  doc["format"] = "json";
  RunConfig cfg = load_config(doc);
  cfg.threads = 1;
  const std::string one = emit_report(cfg, run_checks(cfg));
  cfg.threads = 4;
  const std::string four = emit_report(cfg, run_checks(cfg));
  cfg.threads = 2;
  const std::string two = emit_report(cfg, run_checks(cfg));
  c.require(one == four && one == two, "reports differ across thread counts");
  c.require(!one.empty() && one.find("\"verdict\":\"pass\"") != std::string::npos,
            "report content unexpected");
  c.close();
}

void criterion10_parser() {
  Criterion c("10. Parser: corpus accepts/rejects and round-trips");
  const std::vector<std::string> coords = {"x", "y", "t"};
  const std::vector<std::string> valid = {
      "1", "2.5", "1e2", "3.5e-1", "x", "y", "t", "x+y", "x-y", "x*y", "x/y", "x+y*t",
      "(x+y)*t", "x-y-t", "2/4/2", "x^2", "x^3", "x^-1", "x^0", "-x", "-x^2", "-(x+y)",
      "sin(x)", "cos(y)", "tan(t)", "exp(x)", "log(2+t)", "sqrt(1+x^2)", "sinh(x)", "cosh(y)",
      "tanh(t)", "atan(x*y)", "exp(2*t)", "exp(-x)", "sin(x)^2+cos(x)^2", "1/2*(x+y)",
      "x^2*sin(y)+3", "4/(1+x^2+y^2+t^2)^2", "(x*y*t)^2", "exp(sin(cos(x)))", " x + y ",
      "(((x)))", "x*(y+t)/(2+cos(y))", "1.5*10", "-1*-1", "(1-x)^2", "t^2*x-t*y^3",
      "x/(1+y^2)", "2*-x", "x*x*x", "cos(x-y)+sin(x+y)"};
  const std::vector<std::string> invalid = {
      "",      "  ",    "x+",    "*x",     "x y",      "(x+y",  "x+y)",
      "1/2*(dzish)", "foo(x)", "sin(x,y)", "sin()",  "sin",      "x^",    "x^y",
      "x^2^3", "x^999", "--x",   "1.",     "1e",       ".5",    "2**3"};
  int accepted = 0, rejected = 0;
  bool roundtrip = true;
  for (const auto& text : valid) {
    try {
      const Expr e = parse_expression(text, coords);
      ++accepted;
      const std::string printed = e.print(coords);
      const Expr again = parse_expression(printed, coords);
      roundtrip = roundtrip && structurally_equal(e, again) && again.print(coords) == printed;
    } catch (const ParseError&) {
    }
  }
  for (const auto& text : invalid) {
    try {
      (void)parse_expression(text, coords);
    } catch (const ParseError&) {
      ++rejected;
    }
  }
  c.require(accepted == static_cast<int>(valid.size()),
            "only " + std::to_string(accepted) + "/" + std::to_string(valid.size()) +
                " valid expressions accepted");
  c.require(rejected == static_cast<int>(invalid.size()),
            "only " + std::to_string(rejected) + "/" + std::to_string(invalid.size()) +
                " invalid expressions rejected");
  c.require(valid.size() >= 50 && invalid.size() >= 20, "corpus too small");
  c.require(roundtrip, "round-trip property violated");
  c.close();
}

}  // namespace

int main() {
  criterion1_ad_against_finite_differences();
  criterion2_lemma21();
  criterion3_lemma22_prop23();
  criterion4_theorem31();
  criterion5_decomposition();
  criterion6_theorem41();
  criterion7_classes();
  criterion8_cone_suite();
  criterion9_determinism();
  criterion10_parser();
  if (!g_notes.empty()) {
    std::printf("\nfailure detail:\n");
    for (const auto& n : g_notes) std::printf("  - %s\n", n.c_str());
  }
  std::printf("\n%d of 10 criteria passed\n", 10 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
