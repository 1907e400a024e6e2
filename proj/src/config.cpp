#include "phm/config.hpp"

#include <algorithm>
#include <cmath>

namespace phm {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError(path + ": " + msg);
}

double want_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

std::string want_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

std::vector<std::string> want_string_array(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of strings");
  std::vector<std::string> out;
  for (size_t i = 0; i < j.size(); ++i)
    out.push_back(want_string(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Expr parse_at(const std::string& text, const std::vector<std::string>& coords,
              const std::string& path) {
  try {
    return parse_expression(text, coords);
  } catch (const ParseError& e) {
    fail(path, e.what());
  }
}

std::vector<std::vector<Expr>> want_expr_matrix(const json& j, const std::vector<std::string>& coords,
                                                int n, const std::string& path) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    fail(path, "expected a " + std::to_string(n) + "x" + std::to_string(n) + " matrix of expressions");
  std::vector<std::vector<Expr>> out;
  for (int i = 0; i < n; ++i) {
    const json& row = j[i];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      fail(path + "[" + std::to_string(i) + "]", "expected a row of " + std::to_string(n) + " expressions");
    std::vector<Expr> r;
    for (int k = 0; k < n; ++k)
      r.push_back(parse_at(want_string(row[k], path + "[" + std::to_string(i) + "][" +
                                                  std::to_string(k) + "]"),
                           coords,
                           path + "[" + std::to_string(i) + "][" + std::to_string(k) + "]"));
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<Expr> want_expr_vector(const json& j, const std::vector<std::string>& coords, int n,
                                   const std::string& path) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    fail(path, "expected " + std::to_string(n) + " expressions");
  std::vector<Expr> out;
  for (int i = 0; i < n; ++i)
    out.push_back(parse_at(want_string(j[i], path + "[" + std::to_string(i) + "]"), coords,
                           path + "[" + std::to_string(i) + "]"));
  return out;
}

Box want_box(const json& j, int n, const std::string& path) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    fail(path, "expected " + std::to_string(n) + " [lo, hi] intervals");
  Box b;
  for (int i = 0; i < n; ++i) {
    const json& r = j[i];
    const std::string p = path + "[" + std::to_string(i) + "]";
    if (!r.is_array() || r.size() != 2) fail(p, "expected [lo, hi]");
    const double lo = want_number(r[0], p), hi = want_number(r[1], p);
    if (!(lo < hi)) fail(p, "interval requires lo < hi");
    b.range.push_back({lo, hi});
  }
  return b;
}

RiemannianChart load_chart(const json& j, const std::string& path, const std::string& label) {
  RiemannianChart c;
  c.label = j.count("label") ? want_string(j.at("label"), path + ".label") : label;
  if (!j.count("coords")) fail(path, "missing 'coords'");
  c.coords = want_string_array(j.at("coords"), path + ".coords");
  if (c.coords.empty()) fail(path + ".coords", "at least one coordinate required");
  if (static_cast<int>(c.coords.size()) > kMaxVars)
    fail(path + ".coords", "at most " + std::to_string(kMaxVars) + " coordinates supported");
  const int n = static_cast<int>(c.coords.size());
  if (!j.count("metric")) fail(path, "missing 'metric'");
  c.metric = want_expr_matrix(j.at("metric"), c.coords, n, path + ".metric");
  if (!j.count("box")) fail(path, "missing 'box'");
  c.box = want_box(j.at("box"), n, path + ".box");
  // Probe: numeric symmetry and positive definiteness at deterministic samples.
  for (int p = 0; p < 5; ++p) {
    const VecD x = sample_box(c.box, 2024, p);
    MatD g(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        try {
          g(a, b) = c.metric[a][b].eval_d(x);
        } catch (const DomainError& e) {
          fail(path + ".metric", std::string("evaluation failed at a probe point: ") + e.what());
        }
      }
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (std::fabs(g(a, b) - g(b, a)) > 1e-9)
          fail(path + ".metric", "not numerically symmetric at a probe point");
    if (smallest_eigenvalue_sym(g) <= 1e-10)
      fail(path + ".metric", "not positive definite at a probe point");
  }
  return c;
}

Scenario load_inline_scenario(const json& j, const std::string& path) {
  Scenario s;
  s.id = "inline";
  s.source = load_chart(j, path, "inline chart");
  const int m = s.source.dim();
  if (j.count("map")) {
    const json& mj = j.at("map");
    if (!mj.count("target")) fail(path + ".map", "missing 'target'");
    HermitianTarget t;
    t.chart = load_chart(mj.at("target"), path + ".map.target", "inline target");
    const int tn = t.chart.dim();
    if (tn % 2 != 0) fail(path + ".map.target.coords", "target dimension must be even");
    if (mj.at("target").count("J")) {
      const json& jj = mj.at("target").at("J");
      if (jj.is_string() && jj.get<std::string>() == "standard") {
        t.J = standard_J_exprs(tn);
        t.standard_J = true;
      } else {
        t.J = want_expr_matrix(jj, t.chart.coords, tn, path + ".map.target.J");
      }
    } else {
      t.J = standard_J_exprs(tn);
      t.standard_J = true;
    }
    if (mj.at("target").count("kahler"))
      t.kahler = mj.at("target").at("kahler").get<bool>();
    if (!mj.count("components")) fail(path + ".map", "missing 'components'");
    s.map_components =
        want_expr_vector(mj.at("components"), s.source.coords, tn, path + ".map.components");
    // J invariants probe
    for (int p = 0; p < 3; ++p) {
      const VecD y = sample_box(t.chart.box, 4086, p);
      MatD Jv(tn, tn), Hv(tn, tn);
      for (int a = 0; a < tn; ++a)
        for (int b = 0; b < tn; ++b) {
          Jv(a, b) = t.J[a][b].eval_d(y);
          Hv(a, b) = t.chart.metric[a][b].eval_d(y);
        }
      if ((Jv * Jv + MatD::identity(tn)).frobenius() > 1e-12)
        fail(path + ".map.target.J", "J^2 + I exceeds 1e-12 at a probe point");
      if ((Jv.transposed() * Hv * Jv - Hv).frobenius() > 1e-10)
        fail(path + ".map.target.J", "metric is not Hermitian for J at a probe point");
    }
    s.target = std::move(t);
  }
  if (j.count("acs")) {
    const json& aj = j.at("acs");
    AcsSpec acs;
    if (!aj.count("phi") || !aj.count("xi") || !aj.count("eta"))
      fail(path + ".acs", "needs 'phi', 'xi' and 'eta'");
    acs.phi = want_expr_matrix(aj.at("phi"), s.source.coords, m, path + ".acs.phi");
    acs.xi = want_expr_vector(aj.at("xi"), s.source.coords, m, path + ".acs.xi");
    acs.eta = want_expr_vector(aj.at("eta"), s.source.coords, m, path + ".acs.eta");
    s.acs = std::move(acs);
  }
  if (j.count("acs_seed"))
    s.acs_seed = want_expr_vector(j.at("acs_seed"), s.source.coords, m, path + ".acs_seed");
  return s;
}

}  // namespace

RunConfig load_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
  RunConfig cfg;
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    static const std::vector<std::string> known = {"scenario", "params",         "checks",
                                                   "points",   "seed",           "tol",
                                                   "fail_threshold", "format",   "threads"};
    if (std::find(known.begin(), known.end(), key) == known.end())
      fail(key, "unknown configuration field");
  }
  if (!doc.count("scenario")) fail("scenario", "missing");
  std::map<std::string, double> params;
  if (doc.count("params")) {
    if (!doc.at("params").is_object()) fail("params", "expected an object of numbers");
    for (const auto& [k, v] : doc.at("params").items())
      params[k] = want_number(v, "params." + k);
  }
  const json& sj = doc.at("scenario");
  if (sj.is_string()) {
    std::string id = sj.get<std::string>();
    if (id.rfind("catalog:", 0) == 0) id = id.substr(8);
    try {
      cfg.scenario = catalog_lookup(id, params);
    } catch (const CatalogError& e) {
      fail("scenario", e.what());
    }
    cfg.scenario_name = id;
  } else if (sj.is_object()) {
    if (!params.empty()) fail("params", "parameters are only valid with catalog scenarios");
    cfg.scenario = load_inline_scenario(sj, "scenario");
    cfg.scenario_name = "inline";
  } else {
    fail("scenario", "expected a catalog id string or an inline scenario object");
  }

  if (doc.count("checks")) {
    cfg.checks = want_string_array(doc.at("checks"), "checks");
    if (cfg.checks.empty()) fail("checks", "at least one check required");
    for (const auto& c : cfg.checks) {
      const auto& reg = check_registry();
      if (std::find(reg.begin(), reg.end(), c) == reg.end())
        fail("checks", "unknown check '" + c + "'");
    }
  } else {
    cfg.checks = check_registry();
  }

  if (doc.count("points")) {
    const double p = want_number(doc.at("points"), "points");
    if (p < 1 || p != std::floor(p)) fail("points", "expected a positive integer");
    cfg.points = static_cast<int>(p);
  }
  if (doc.count("seed")) {
    const double s = want_number(doc.at("seed"), "seed");
    if (s < 0 || s != std::floor(s)) fail("seed", "expected a nonnegative integer");
    cfg.seed = static_cast<uint64_t>(s);
  }
  if (doc.count("tol")) cfg.tol = want_number(doc.at("tol"), "tol");
  if (doc.count("fail_threshold"))
    cfg.fail_threshold = want_number(doc.at("fail_threshold"), "fail_threshold");
  if (!(cfg.tol > 0)) fail("tol", "must be positive");
  if (!(cfg.tol < cfg.fail_threshold)) fail("tol", "must be below fail_threshold");
  if (doc.count("format")) {
    cfg.format = want_string(doc.at("format"), "format");
    if (cfg.format != "json" && cfg.format != "text") fail("format", "expected 'json' or 'text'");
  }
  if (doc.count("threads")) {
    const double t = want_number(doc.at("threads"), "threads");
    if (t < 1 || t != std::floor(t)) fail("threads", "expected a positive integer");
    cfg.threads = static_cast<int>(t);
  }
  return cfg;
}

}  // namespace phm
