#include "phm/runner.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace phm {

namespace {

struct PointCtx {
  const Scenario* scn = nullptr;
  VecD x;
  std::optional<ChartFrame> cf_;
  std::optional<MapFrame> mf_;
  std::optional<AcsFrame> acs_;

  ChartFrame& chart() {
    if (scn->has_map()) return map().src;
    if (!cf_) cf_ = make_chart_frame(scn->source, x);
    return *cf_;
  }
  MapFrame& map() {
    if (!scn->has_map()) throw NotApplicableError("scenario has no map");
    if (!mf_) mf_ = scenario_map_frame(*scn, x);
    return *mf_;
  }
  AcsFrame& acs() {
    if (!acs_) {
      if (scn->acs)
        acs_ = make_acs_frame(chart(), *scn->acs);
      else if (!scn->acs_seed.empty())
        acs_ = make_acs_frame_induced(map(), scn->acs_seed);
      else
        throw NotApplicableError("scenario has no almost contact structure");
    }
    return *acs_;
  }
};

using RowValues = std::vector<std::pair<std::string, double>>;

struct RunPrep {
  bool phwc_holds = true;          // PHWC within fail threshold at the probe point
  std::optional<ConeChart> cone;   // built once for the cone check
};

// 0 when both sides of an equivalence land on the same side of the window,
// otherwise the magnitude of the disagreement.
double consistency_defect(double L, double R, double tol, double fail) {
  const bool both_pass = L < tol && R < tol;
  const bool both_fail = L >= fail && R >= fail;
  if (both_pass || both_fail) return 0.0;
  return std::max(L, R);
}

int fiber_dim(PointCtx& ctx) {
  MapFrame& mf = ctx.map();
  return mf.m() - mf.two_n();
}

RowValues eval_check(const std::string& check, PointCtx& ctx, const RunConfig& cfg,
                     const RunPrep& prep, uint64_t index, VecD* coords_used) {
  const double tol = cfg.tol, fail = cfg.fail_threshold;
  *coords_used = ctx.x;

  if (check == "phwc") return {{"phwc", phwc_defect(ctx.map())}};

  if (check == "phh") {
    if (!prep.phwc_holds)
      throw NotApplicableError("phh is stated for maps that are PHWC");
    return {{"phh", phh_defect(ctx.map())}};
  }

  if (check == "induced_f") {
    MapFrame& mf = ctx.map();
    return {{"induced_f", f_cubed_defect(mf)}, {"induced_f.compat", f_compat_defect(mf)}};
  }

  if (check == "tension") {
    double n = 0.0;
    tension_field(ctx.map(), &n);
    return {{"tension", n}};
  }

  if (check == "decomposition") {
    if (!prep.phwc_holds)
      throw NotApplicableError("the tension decomposition is stated for PHWC maps");
    return {{"decomposition", tension_decomposition_residual(ctx.map())}};
  }

  if (check == "cosymplectic") {
    const FDivFResult fd = f_div_f(ctx.map());
    return {{"cosymplectic", fd.cosymplectic_defect},
            {"cosymplectic.split_residual", fd.split_residual}};
  }

  if (check == "phm") {
    MapFrame& mf = ctx.map();
    const double structural = std::max(phwc_defect(mf), f_div_f(mf).cosymplectic_defect);
    RowValues rows{{"phm", structural}};
    if (mf.target->standard_J) rows.push_back({"phm.battery", battery_max(mf)});
    return rows;
  }

  if (check == "lemma21") return {{"lemma21", basic_f_defect(ctx.map())}};

  if (check == "lemma22") {
    MapFrame& mf = ctx.map();
    RowValues rows{{"lemma22", horizontal_nijenhuis_defect(mf)}};
    if (mf.target->kahler)
      rows.push_back({"lemma22.pullback_closed", pullback_kahler_closedness(mf)});
    return rows;
  }

  if (check == "prop21") {
    const unsigned s = static_cast<unsigned>(cfg.seed ^ (index * 2654435761ULL));
    return {{"prop21", transversal_hermitian_residual(ctx.map(), s)}};
  }

  if (check == "cor21") {
    MapFrame& mf = ctx.map();
    const FoliationInvariants fi = foliation_invariants(mf.src, mf.hframe, mf.vframe);
    const double pf = phwc_foliation_defect(mf.src, mf.F, mf.PH, mf.hframe, mf.vframe);
    return {{"cor21", std::max(fi.cor21_residual, pf)}};
  }

  if (check == "integrability") {
    MapFrame& mf = ctx.map();
    return {{"integrability",
             complex_distribution_integrability(mf.src, mf.F, mf.hframe, mf.vframe)}};
  }

  if (check == "normality") {
    if (ctx.scn->has_map() && fiber_dim(ctx) != 1)
      throw NotApplicableError("normality requires 1-dimensional fibers");
    AcsFrame& acs = ctx.acs();
    const NormalityDefects nd = normality_defects(ctx.chart(), acs);
    const double worst = std::max({nd.n1, nd.fiber_form, nd.parallel_phi});
    return {{"normality", worst},
            {"normality.n1", nd.n1},
            {"normality.fiber_form", nd.fiber_form},
            {"normality.parallel_phi", nd.parallel_phi}};
  }

  if (check == "classify") {
    AcsFrame& acs = ctx.acs();
    const ClassDefects cd = classify_point(ctx.chart(), acs);
    const std::vector<std::pair<std::string, double>> classes = {
        {"contact_metric", cd.contact_metric},
        {"k_contact", cd.k_contact},
        {"sasakian", cd.sasakian},
        {"alpha_sasakian", cd.alpha_sasakian},
        {"kenmotsu_class", cd.kenmotsu},
        {"nearly_cosymplectic", cd.nearly_cosymplectic},
        {"quasi_sasakian", cd.quasi_sasakian},
        {"semi_cosymplectic", cd.semi_cosymplectic},
        {"normal", cd.normal}};
    double parent = 0.0;
    RowValues rows{{"classify", 0.0}};
    for (const auto& [name, defect] : classes) {
      rows.push_back({"classify." + name, defect});
      const auto it = ctx.scn->flags.find(name);
      if (it != ctx.scn->flags.end() && it->second) parent = std::max(parent, defect);
    }
    rows[0].second = parent;
    return rows;
  }

  if (check == "wform") {
    MapFrame& mf = ctx.map();
    const WFormResult wf = w_form(mf.src, mf.hframe, mf.vframe);
    const Scenario* scn = ctx.scn;
    auto field = [scn](const VecD& x) {
      const MapFrame m = scenario_map_frame(*scn, x);
      return w_form(m.src, m.hframe, m.vframe).w;
    };
    const double closed = one_form_closedness_fd(field, mf.src, 1e-5);
    return {{"wform", wf.norm}, {"wform.alt", wf.norm_alt}, {"wform.closedness", closed}};
  }

  if (check == "cosymp_identity") {
    MapFrame& mf = ctx.map();
    const CosymplecticIdentity ci = cosymplectic_identity(mf.src, mf.F, mf.hframe, mf.vframe);
    const double cos = f_div_f(mf).cosymplectic_defect;
    return {{"cosymp_identity", consistency_defect(ci.residual, cos, tol, fail)},
            {"cosymp_identity.residual_plus", ci.residual_plus},
            {"cosymp_identity.residual_minus", ci.residual_minus}};
  }

  if (check == "olszak" || check == "blair") {
    AcsFrame& acs = ctx.acs();
    const OlszakBlair ob = olszak_blair(ctx.chart(), acs, fail);
    if (check == "olszak")
      return {{"olszak", ob.olszak}, {"olszak.sympl12", ob.sympl12}};
    return {{"blair", ob.blair}};
  }

  if (check == "cone") {
    if (!prep.cone) throw NotApplicableError("cone check needs an explicit structure and a map");
    const ConeChart& cone = *prep.cone;
    const VecD xc = sample_box(cone.chart.box, cfg.seed, index);
    *coords_used = xc;
    VecD xb(xc.begin() + 1, xc.end());
    const ConePointChecks pc = cone_point_checks(cone, xc);
    const ConeEquivalencePoint eq = cone_equivalences(*ctx.scn, cone, xc[0], xb, false);
    const ConeEquivalencePoint eqc = cone_equivalences(*ctx.scn, cone, xc[0], xb, true);
    double parent = std::max({pc.tension, pc.dilation, pc.geodesic_fibers, pc.jhat_square,
                              pc.jhat_compat});
    parent = std::max(parent, consistency_defect(eq.holo_base, eq.holo_cone, tol, fail));
    parent = std::max(parent, consistency_defect(eq.phwc_harm_base, eq.phwc_harm_cone, tol, fail));
    parent = std::max(parent, consistency_defect(eq.phm_base, eq.phm_cone, tol, fail));
    parent = std::max(parent, consistency_defect(eqc.holo_base, eqc.holo_cone, tol, fail));
    parent = std::max(parent,
                      consistency_defect(eqc.phwc_harm_base, eqc.phwc_harm_cone, tol, fail));
    parent = std::max(parent, consistency_defect(eqc.phm_base, eqc.phm_cone, tol, fail));
    return {{"cone", parent},
            {"cone.pi_tension", pc.tension},
            {"cone.pi_dilation", pc.dilation},
            {"cone.pi_geodesic", pc.geodesic_fibers},
            {"cone.jhat_square", pc.jhat_square},
            {"cone.jhat_compat", pc.jhat_compat},
            {"cone.equiv_i_base", eq.holo_base},
            {"cone.equiv_i_cone", eq.holo_cone},
            {"cone.equiv_i_base_conj", eqc.holo_base},
            {"cone.equiv_i_cone_conj", eqc.holo_cone},
            {"cone.equiv_ii_base", eq.phwc_harm_base},
            {"cone.equiv_ii_cone", eq.phwc_harm_cone},
            {"cone.equiv_iv_base", eq.phm_base},
            {"cone.equiv_iv_cone", eq.phm_cone}};
  }

  if (check == "adapted_pair") {
    if (fiber_dim(ctx) != 2) throw NotApplicableError("adapted pair requires 2-dimensional fibers");
    const AdaptedPairFrames ap = adapted_pair(ctx.map());
    return {{"adapted_pair", std::max(ap.invariants, ap.remark51)},
            {"adapted_pair.orientation", ap.orientation_det > 0 ? 0.0 : 1.0}};
  }

  if (check == "superminimal") {
    if (fiber_dim(ctx) != 2)
      throw NotApplicableError("superminimality requires 2-dimensional fibers");
    if (!prep.phwc_holds) throw NotApplicableError("superminimality is stated for PHWC maps");
    MapFrame& mf = ctx.map();
    const AdaptedPairFrames ap = adapted_pair(mf);
    const SuperminimalityReport sr = superminimality(mf, ap);
    auto viol = [&](double a, double b) { return (a < tol && b >= tol) ? b : 0.0; };
    const double parent =
        std::max({sr.proof_identity, viol(sr.superminimal_plus, sr.nijenhuis_plus),
                  viol(sr.superminimal_minus, sr.nijenhuis_minus)});
    return {{"superminimal", parent},
            {"superminimal.defect_plus", sr.superminimal_plus},
            {"superminimal.defect_minus", sr.superminimal_minus},
            {"superminimal.nijenhuis_plus", sr.nijenhuis_plus},
            {"superminimal.nijenhuis_minus", sr.nijenhuis_minus},
            {"superminimal.proof_identity", sr.proof_identity}};
  }

  if (check == "cr") {
    if (fiber_dim(ctx) != 1) throw NotApplicableError("the CR condition requires 1-dimensional fibers");
    AcsFrame& acs = ctx.acs();
    const CrDefects cr = cr_defect(ctx.map(), acs);
    const NormalityDefects nd = normality_defects(ctx.chart(), acs);
    return {{"cr", cr.combined},
            {"cr.commutator", cr.commutator},
            {"cr.fiber_minimality", cr.fiber_minimality},
            {"~cr.normality", std::max({nd.n1, nd.fiber_form, nd.parallel_phi})}};
  }

  throw std::invalid_argument("unknown check '" + check + "'");
}

}  // namespace

const std::vector<std::string>& check_registry() {
  static const std::vector<std::string> names = {
      "phwc",        "phh",     "induced_f", "tension",     "decomposition", "cosymplectic",
      "phm",         "lemma21", "lemma22",   "prop21",      "cor21",         "integrability",
      "normality",   "classify", "wform",    "cosymp_identity", "olszak",    "blair",
      "cone",        "adapted_pair", "superminimal", "cr"};
  return names;
}

const std::vector<std::pair<std::string, std::vector<std::string>>>& check_operation_map() {
  static const std::vector<std::pair<std::string, std::vector<std::string>>> table = {
      {"phwc", {"differential_and_adjoint", "phwc_defect"}},
      {"phh", {"phh_defect"}},
      {"induced_f", {"induced_f_structure"}},
      {"tension", {"tension_field"}},
      {"decomposition", {"tension_decomposition_residual"}},
      {"cosymplectic", {"f_div_f"}},
      {"phm", {"phm_verdict", "pullback_laplacian"}},
      {"lemma21", {"lie_derivative_basic_f"}},
      {"lemma22", {"nijenhuis"}},
      {"prop21", {"covariant_derivative_transversal"}},
      {"cor21", {"foliation_invariants", "phwc_foliation_defect"}},
      {"integrability", {"complex_distribution_integrability"}},
      {"normality", {"normality_equivalence", "contact_tensors", "induced_almost_contact"}},
      {"classify", {"classify_acs"}},
      {"wform", {"w_form"}},
      {"cosymp_identity", {"cosymplectic_identity_residual"}},
      {"olszak", {"olszak_and_blair_residuals"}},
      {"blair", {"olszak_and_blair_residuals"}},
      {"cone", {"build_cone", "cone_equivalences"}},
      {"adapted_pair", {"adapted_pair"}},
      {"superminimal", {"superminimality_and_integrability"}},
      {"cr", {"cr_defect"}},
  };
  return table;
}

std::vector<CheckReport> run_checks(const RunConfig& cfg) {
  const Scenario& scn = cfg.scenario;
  const int npts = cfg.points;

  RunPrep prep;
  if (scn.has_map()) {
    const VecD x0 = sample_box(scn.source.box, cfg.seed, 0);
    try {
      const MapFrame mf0 = scenario_map_frame(scn, x0);
      prep.phwc_holds = phwc_defect(mf0) < cfg.fail_threshold;
    } catch (const RankError&) {
      prep.phwc_holds = false;
    }
    if (scn.acs.has_value())
      prep.cone.emplace(build_cone(scn, scn.cone_t0, scn.cone_t1));
  }

  // Applicability probe at the first sample.
  std::vector<std::string> applicable;
  std::vector<CheckReport> na_reports;
  for (const auto& check : cfg.checks) {
    PointCtx ctx;
    ctx.scn = &scn;
    ctx.x = sample_box(scn.source.box, cfg.seed, 0);
    VecD coords;
    try {
      (void)eval_check(check, ctx, cfg, prep, 0, &coords);
      applicable.push_back(check);
    } catch (const NotApplicableError&) {
      CheckReport r;
      r.name = check;
      r.verdict = Verdict::NotApplicable;
      na_reports.push_back(r);
    }
  }

  struct PointResult {
    std::vector<RowValues> rows;  // one per applicable check
    std::vector<VecD> coords;
    std::exception_ptr error;
  };
  std::vector<PointResult> results(npts);

  auto worker = [&](int begin, int step) {
    for (int i = begin; i < npts; i += step) {
      PointResult& pr = results[i];
      try {
        PointCtx ctx;
        ctx.scn = &scn;
        ctx.x = sample_box(scn.source.box, cfg.seed, static_cast<uint64_t>(i));
        for (const auto& check : applicable) {
          VecD coords;
          pr.rows.push_back(eval_check(check, ctx, cfg, prep, static_cast<uint64_t>(i), &coords));
          pr.coords.push_back(coords);
        }
      } catch (...) {
        pr.error = std::current_exception();
      }
    }
  };
  const int nthreads = std::max(1, cfg.threads);
  if (nthreads == 1) {
    worker(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker, t, nthreads);
    for (auto& th : pool) th.join();
  }
  for (int i = 0; i < npts; ++i)
    if (results[i].error) std::rethrow_exception(results[i].error);

  // Aggregate rows in the order they first appear, per check.
  std::vector<CheckReport> reports;
  std::map<std::string, double> agg_max;  // for the consistency rules
  for (size_t c = 0; c < applicable.size(); ++c) {
    const size_t nrows = results.empty() ? 0 : results[0].rows[c].size();
    for (size_t r = 0; r < nrows; ++r) {
      const std::string& name = results[0].rows[c][r].first;
      CheckReport rep;
      rep.name = name;
      double sum = 0.0;
      for (int i = 0; i < npts; ++i) {
        const double v = results[i].rows[c][r].second;
        sum += v;
        if (rep.worst_index < 0 || v > rep.max) {
          rep.max = v;
          rep.worst_index = i;
          rep.worst_coords = results[i].coords[c];
        }
      }
      rep.mean = sum / npts;
      rep.verdict = verdict_of(rep.max, cfg.tol, cfg.fail_threshold);
      agg_max[name] = rep.max;
      if (name.rfind('~', 0) != 0) reports.push_back(rep);
    }
  }
  reports.insert(reports.end(), na_reports.begin(), na_reports.end());

  // Cross-route consistency rules (Theorem 3.1, Theorem 4.1, Cor 4.1, Theorem 5.1).
  auto has = [&](const std::string& n) { return agg_max.count(n) > 0; };
  auto strongly_inconsistent = [&](const std::string& a, const std::string& b) {
    if (!has(a) || !has(b)) return false;
    const double L = agg_max[a], R = agg_max[b];
    return (L < cfg.tol && R >= cfg.fail_threshold) || (R < cfg.tol && L >= cfg.fail_threshold);
  };
  if (strongly_inconsistent("phm", "phm.battery"))
    throw EngineInconsistencyError(
        "PHM routes disagree: structural defect " + std::to_string(agg_max["phm"]) +
        " vs holomorphic battery " + std::to_string(agg_max["phm.battery"]));
  if (strongly_inconsistent("normality.n1", "normality.fiber_form") ||
      strongly_inconsistent("normality.n1", "normality.parallel_phi") ||
      strongly_inconsistent("normality.fiber_form", "normality.parallel_phi"))
    throw EngineInconsistencyError("normality three-way equivalence violated");
  if (has("cr") && has("~cr.normality") && agg_max["cr"] < cfg.tol &&
      agg_max["~cr.normality"] >= cfg.fail_threshold)
    throw EngineInconsistencyError("CR condition holds but the induced structure is not normal");
  if (strongly_inconsistent("superminimal.defect_plus", "superminimal.nijenhuis_plus") &&
      agg_max["superminimal.defect_plus"] < cfg.tol)
    throw EngineInconsistencyError("superminimal fibers with non-integrable adapted structure");
  if (strongly_inconsistent("superminimal.defect_minus", "superminimal.nijenhuis_minus") &&
      agg_max["superminimal.defect_minus"] < cfg.tol)
    throw EngineInconsistencyError("superminimal fibers with non-integrable adapted structure");
  return reports;
}

std::string emit_report(const RunConfig& cfg, const std::vector<CheckReport>& checks) {
  ReportHeader hdr;
  hdr.scenario = cfg.scenario_name;
  hdr.seed = cfg.seed;
  hdr.points = cfg.points;
  hdr.tol = cfg.tol;
  return cfg.format == "json" ? emit_report_json(hdr, checks) : emit_report_text(hdr, checks);
}

}  // namespace phm
