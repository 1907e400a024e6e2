#include "phm/catalog.hpp"

#include <cmath>

namespace phm {

namespace {

Expr P(const RiemannianChart& c, const std::string& text) {
  return parse_expression(text, c.coords);
}

std::vector<std::vector<Expr>> zero_matrix(int n) {
  return std::vector<std::vector<Expr>>(n, std::vector<Expr>(n, Expr::number(0.0)));
}

std::vector<std::vector<Expr>> identity_metric(int n, double scale = 1.0) {
  auto g = zero_matrix(n);
  for (int i = 0; i < n; ++i) g[i][i] = Expr::number(scale);
  return g;
}

Box cube(int n, double lo, double hi) {
  Box b;
  for (int i = 0; i < n; ++i) b.range.push_back({lo, hi});
  return b;
}

HermitianTarget flat_target(int two_n, double scale = 1.0) {
  HermitianTarget t;
  t.chart.label = "C^" + std::to_string(two_n / 2);
  for (int k = 0; k < two_n / 2; ++k) {
    t.chart.coords.push_back("u" + std::to_string(k + 1));
    t.chart.coords.push_back("v" + std::to_string(k + 1));
  }
  t.chart.metric = identity_metric(two_n, scale);
  t.chart.box = cube(two_n, -10.0, 10.0);
  t.J = standard_J_exprs(two_n);
  t.standard_J = true;
  t.kahler = true;
  return t;
}

double get_param(const std::map<std::string, double>& params, const std::string& name,
                 double fallback, double lo, double hi, bool integer = false) {
  double v = fallback;
  if (auto it = params.find(name); it != params.end()) v = it->second;
  if (v < lo || v > hi)
    throw CatalogError("parameter '" + name + "' out of range [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]");
  if (integer && v != std::floor(v)) throw CatalogError("parameter '" + name + "' must be an integer");
  return v;
}

void check_param_names(const std::map<std::string, double>& params,
                       std::initializer_list<const char*> known) {
  for (const auto& [k, v] : params) {
    bool ok = false;
    for (const char* n : known) ok = ok || k == n;
    if (!ok) throw CatalogError("unknown parameter '" + k + "'");
  }
}

// --------------------------------------------------------------------------

Scenario make_flat_projection(const std::map<std::string, double>& params) {
  check_param_names(params, {"n", "k"});
  const int n = static_cast<int>(get_param(params, "n", 1, 1, 3, true));
  const int k = static_cast<int>(get_param(params, "k", 1, 0, 3, true));
  const int m = 2 * n + k;
  Scenario s;
  s.id = "flat_projection";
  s.source.label = "R^" + std::to_string(m);
  for (int i = 0; i < n; ++i) {
    s.source.coords.push_back("x" + std::to_string(i + 1));
    s.source.coords.push_back("y" + std::to_string(i + 1));
  }
  for (int i = 0; i < k; ++i) s.source.coords.push_back("t" + std::to_string(i + 1));
  s.source.metric = identity_metric(m);
  s.source.box = cube(m, -1.0, 1.0);
  s.target = flat_target(2 * n);
  for (int i = 0; i < 2 * n; ++i) s.map_components.push_back(Expr::coord(i));
  if (k == 1) {
    AcsSpec acs;
    acs.phi = zero_matrix(m);
    for (int i = 0; i < n; ++i) {
      acs.phi[2 * i + 1][2 * i] = Expr::number(1.0);
      acs.phi[2 * i][2 * i + 1] = Expr::number(-1.0);
    }
    acs.xi.assign(m, Expr::number(0.0));
    acs.eta.assign(m, Expr::number(0.0));
    acs.xi[m - 1] = Expr::number(1.0);
    acs.eta[m - 1] = Expr::number(1.0);
    s.acs = acs;
  }
  s.flags = {{"phwc", true}, {"phh", true},          {"hwc", true},
             {"harmonic", true}, {"phm", true},      {"cosymplectic", true}};
  if (k == 1) {
    s.flags.insert({{"normal", true},
                    {"nearly_cosymplectic", true},
                    {"quasi_sasakian", true},
                    {"semi_cosymplectic", true},
                    {"alpha_sasakian", true},
                    {"contact_metric", false},
                    {"k_contact", false},
                    {"sasakian", false},
                    {"kenmotsu_class", false}});
  }
  s.notes = "Flat product projection C^n x R^k -> C^n; every condition holds trivially.";
  return s;
}

Scenario make_shear(const std::map<std::string, double>& params) {
  check_param_names(params, {});
  Scenario s;
  s.id = "shear";
  s.source.label = "R^2";
  s.source.coords = {"x", "y"};
  s.source.metric = identity_metric(2);
  s.source.box = cube(2, -1.0, 1.0);
  s.target = flat_target(2);
  s.map_components = {P(s.source, "x+y"), P(s.source, "y")};
  s.flags = {{"phwc", false}, {"hwc", false}, {"harmonic", true}, {"phm", false}};
  s.notes = "Linear shear of the plane; invertible but not weakly conformal, the canonical "
            "negative witness for the commutation condition.";
  return s;
}

Scenario make_skewed_fibration(const std::map<std::string, double>& params) {
  check_param_names(params, {});
  Scenario s;
  s.id = "skewed_fibration";
  s.source.label = "skewed R^3";
  s.source.coords = {"t", "x", "y"};
  s.source.metric = zero_matrix(3);
  s.source.metric[0][0] = P(s.source, "exp(2*x)");
  s.source.metric[1][1] = Expr::number(1.0);
  s.source.metric[2][2] = Expr::number(1.0);
  s.source.box = {{{-0.5, 0.5}, {-0.35, -0.05}, {-0.3, 0.3}}};
  s.target = flat_target(2);
  s.map_components = {P(s.source, "x"), P(s.source, "y")};
  AcsSpec acs;
  acs.phi = zero_matrix(3);
  acs.phi[2][1] = Expr::number(1.0);   // phi dx = dy-direction
  acs.phi[1][2] = Expr::number(-1.0);  // phi dy = -dx-direction
  acs.xi = {P(s.source, "exp(-x)"), Expr::number(0.0), Expr::number(0.0)};
  acs.eta = {P(s.source, "exp(x)"), Expr::number(0.0), Expr::number(0.0)};
  s.acs = acs;
  s.flags = {{"phwc", true},     {"phh", true},          {"hwc", true},
             {"harmonic", false}, {"phm", false},        {"cosymplectic", false},
             {"normal", false},   {"contact_metric", false}, {"nearly_cosymplectic", false},
             {"sasakian", false}, {"kenmotsu_class", false}, {"quasi_sasakian", false},
             {"semi_cosymplectic", false}, {"alpha_sasakian", false}};
  s.notes = "Riemannian submersion with non-minimal fibers: weakly conformal yet not harmonic, "
            "the engineered negative for the tension and normality suites.";
  return s;
}

void sasakian_common(Scenario& s, int n) {
  // eta = (dz - sum y_i dx_i)/2, xi = 2 d/dz, g = eta(x)eta + (1/4) sum (dx^2+dy^2).
  const int m = 2 * n + 1;
  auto name_x = [&](int i) { return n == 1 ? std::string("x") : "x" + std::to_string(i + 1); };
  auto name_y = [&](int i) { return n == 1 ? std::string("y") : "y" + std::to_string(i + 1); };
  for (int i = 0; i < n; ++i) {
    s.source.coords.push_back(name_x(i));
    s.source.coords.push_back(name_y(i));
  }
  s.source.coords.push_back("z");
  s.source.metric = zero_matrix(m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const std::string yi = name_y(i), yj = name_y(j);
      std::string e = "(" + yi + "*" + yj + (i == j ? "+1" : "") + ")/4";
      s.source.metric[2 * i][2 * j] = P(s.source, e);
    }
  for (int i = 0; i < n; ++i) {
    s.source.metric[2 * i + 1][2 * i + 1] = P(s.source, "1/4");
    s.source.metric[2 * i][m - 1] = P(s.source, "-" + name_y(i) + "/4");
    s.source.metric[m - 1][2 * i] = P(s.source, "-" + name_y(i) + "/4");
  }
  s.source.metric[m - 1][m - 1] = P(s.source, "1/4");
  s.source.box = cube(m, -0.8, 0.8);

  AcsSpec acs;
  acs.phi = zero_matrix(m);
  for (int i = 0; i < n; ++i) {
    // phi(d/dy_i) = d/dx_i + y_i d/dz, phi(d/dx_i) = -d/dy_i, phi(d/dz) = 0.
    acs.phi[2 * i][2 * i + 1] = Expr::number(1.0);
    acs.phi[m - 1][2 * i + 1] = P(s.source, name_y(i));
    acs.phi[2 * i + 1][2 * i] = Expr::number(-1.0);
  }
  acs.xi.assign(m, Expr::number(0.0));
  acs.xi[m - 1] = Expr::number(2.0);
  acs.eta.assign(m, Expr::number(0.0));
  for (int i = 0; i < n; ++i) acs.eta[2 * i] = P(s.source, "-" + name_y(i) + "/2");
  acs.eta[m - 1] = P(s.source, "1/2");
  s.acs = acs;

  s.target = flat_target(2 * n, 0.25);
  // Projection (.., x_i, y_i, ..) -> (y_i, x_i): this order makes the map
  // holomorphic for the standard target rotation.
  for (int i = 0; i < n; ++i) {
    s.map_components.push_back(Expr::coord(2 * i + 1));
    s.map_components.push_back(Expr::coord(2 * i));
  }
  s.flags = {{"phwc", true},      {"phh", true},           {"hwc", true},
             {"harmonic", true},  {"phm", true},           {"cosymplectic", true},
             {"normal", true},    {"contact_metric", true}, {"k_contact", true},
             {"sasakian", true},  {"alpha_sasakian", true}, {"quasi_sasakian", true},
             {"kenmotsu_class", false}, {"nearly_cosymplectic", false},
             {"semi_cosymplectic", false}};
}

Scenario make_sasakian_r3(const std::map<std::string, double>& params) {
  check_param_names(params, {});
  Scenario s;
  s.id = "sasakian_r3";
  s.source.label = "sasakian R^3";
  sasakian_common(s, 1);
  s.notes = "Standard Sasakian structure on R^3 with the Reeb fibration onto the flat plane.";
  return s;
}

Scenario make_sasakian_r5(const std::map<std::string, double>& params) {
  check_param_names(params, {});
  Scenario s;
  s.id = "sasakian_r5";
  s.source.label = "sasakian R^5";
  sasakian_common(s, 2);
  s.notes = "Standard Sasakian structure on R^5 with the Reeb fibration onto flat C^2.";
  return s;
}

Scenario make_kenmotsu(const std::map<std::string, double>& params) {
  check_param_names(params, {});
  Scenario s;
  s.id = "kenmotsu";
  s.source.label = "kenmotsu R^3";
  s.source.coords = {"t", "x", "y"};
  s.source.metric = zero_matrix(3);
  s.source.metric[0][0] = Expr::number(1.0);
  s.source.metric[1][1] = P(s.source, "exp(2*t)");
  s.source.metric[2][2] = P(s.source, "exp(2*t)");
  s.source.box = {{{-0.4, 0.4}, {-0.6, 0.6}, {-0.6, 0.6}}};
  s.target = flat_target(2);
  s.map_components = {P(s.source, "x"), P(s.source, "y")};
  AcsSpec acs;
  acs.phi = zero_matrix(3);
  acs.phi[2][1] = Expr::number(1.0);
  acs.phi[1][2] = Expr::number(-1.0);
  acs.xi = {Expr::number(1.0), Expr::number(0.0), Expr::number(0.0)};
  acs.eta = {Expr::number(1.0), Expr::number(0.0), Expr::number(0.0)};
  s.acs = acs;
  s.flags = {{"phwc", true},     {"phh", true},            {"hwc", true},
             {"harmonic", true}, {"phm", true},            {"cosymplectic", true},
             {"normal", true},   {"kenmotsu_class", true}, {"contact_metric", false},
             {"sasakian", false}, {"alpha_sasakian", false}, {"nearly_cosymplectic", false},
             {"quasi_sasakian", false}, {"semi_cosymplectic", false}};
  s.notes = "Warped product R x_{e^t} C, the model Kenmotsu manifold; the projection is a "
            "horizontally homothetic harmonic morphism of warped-product type.";
  return s;
}

Scenario make_hopf(const std::map<std::string, double>& params) {
  check_param_names(params, {});
  Scenario s;
  s.id = "hopf";
  s.source.label = "S^3 (stereographic)";
  s.source.coords = {"x", "y", "z"};
  const std::string rho = "(x^2+y^2+z^2)";
  const std::string den = "(4*z^2+(1-" + rho + ")^2)";
  s.source.metric = zero_matrix(3);
  for (int i = 0; i < 3; ++i) s.source.metric[i][i] = P(s.source, "4/(1+" + rho + ")^2");
  s.source.box = cube(3, 0.25, 0.75);
  HermitianTarget t = flat_target(2);
  t.chart.label = "S^2 (stereographic)";
  t.chart.metric[0][0] = parse_expression("4/(1+u1^2+v1^2)^2", t.chart.coords);
  t.chart.metric[1][1] = t.chart.metric[0][0];
  s.target = t;
  s.map_components = {P(s.source, "(4*x*z+2*y*(1-" + rho + "))/" + den),
                      P(s.source, "(4*y*z-2*x*(1-" + rho + "))/" + den)};
  s.acs_seed = {Expr::number(0.0), Expr::number(0.0), Expr::number(1.0)};
  s.flags = {{"phwc", true},     {"phh", true},  {"hwc", true},
             {"harmonic", true}, {"phm", true},  {"cosymplectic", true},
             {"normal", true},   {"contact_metric", true}, {"k_contact", true},
             {"sasakian", true}, {"alpha_sasakian", true}, {"kenmotsu_class", false}};
  s.notes = "Hopf fibration in stereographic charts with round metrics on both sides; the "
            "chart omits the poles and the circle z2 = 0, so the sampling box stays away from "
            "both.";
  return s;
}

Scenario make_superminimal_product(const std::map<std::string, double>& params) {
  check_param_names(params, {"n"});
  const int n = static_cast<int>(get_param(params, "n", 1, 1, 2, true));
  Scenario s;
  s.id = "superminimal_product";
  const int m = 2 * n + 2;
  s.source.label = "C^" + std::to_string(n) + " x C";
  for (int i = 0; i < n + 1; ++i) {
    s.source.coords.push_back("x" + std::to_string(i + 1));
    s.source.coords.push_back("y" + std::to_string(i + 1));
  }
  s.source.metric = identity_metric(m);
  s.source.box = cube(m, -1.0, 1.0);
  s.target = flat_target(2 * n);
  for (int i = 0; i < 2 * n; ++i) s.map_components.push_back(Expr::coord(i));
  s.flags = {{"phwc", true},     {"phh", true}, {"hwc", true},
             {"harmonic", true}, {"phm", true}, {"cosymplectic", true},
             {"superminimal", true}, {"integrable_pair", true}};
  s.notes = "Flat product projection with complex one-dimensional fibers; both adapted "
            "structures are parallel.";
  return s;
}

Scenario make_warped_twist(const std::map<std::string, double>& params) {
  check_param_names(params, {"c"});
  const double c = get_param(params, "c", 1.0, 0.2, 3.0);
  Scenario s;
  s.id = "warped_twist";
  s.source.label = "C x_f C (warped)";
  s.source.coords = {"x1", "y1", "x2", "y2"};
  s.source.metric = zero_matrix(4);
  s.source.metric[0][0] = Expr::number(1.0);
  s.source.metric[1][1] = Expr::number(1.0);
  char warp[64];
  std::snprintf(warp, sizeof warp, "exp(%.17g*x1)", 2.0 * c);
  s.source.metric[2][2] = P(s.source, warp);
  s.source.metric[3][3] = P(s.source, warp);
  s.source.box = cube(4, -0.3, 0.3);
  s.target = flat_target(2);
  s.map_components = {P(s.source, "x1"), P(s.source, "y1")};
  s.flags = {{"phwc", true},      {"phh", true},  {"hwc", true},
             {"harmonic", false}, {"phm", false}, {"cosymplectic", false},
             {"superminimal", false}, {"integrable_pair", true}};
  s.notes = "Base-warped fiber metric: the adapted structures stay integrable (they are the "
            "constant product structures) while the fibers fail to be superminimal - the "
            "witness that integrability does not force superminimality.";
  return s;
}

Scenario make_composed_phm(const std::map<std::string, double>& params) {
  check_param_names(params, {});
  Scenario s;
  s.id = "composed_phm";
  s.source.label = "kenmotsu R^5";
  s.source.coords = {"t", "x1", "y1", "x2", "y2"};
  s.source.metric = zero_matrix(5);
  s.source.metric[0][0] = Expr::number(1.0);
  for (int i = 1; i < 5; ++i) s.source.metric[i][i] = P(s.source, "exp(2*t)");
  s.source.box = {{{-0.4, 0.4}, {0.3, 0.6}, {-0.5, 0.5}, {-0.5, 0.5}, {-0.5, 0.5}}};
  s.target = flat_target(4);
  s.map_components = {P(s.source, "x1"), P(s.source, "y1"), P(s.source, "x2+x1^2-y1^2"),
                      P(s.source, "y2+2*x1*y1")};
  AcsSpec acs;
  acs.phi = zero_matrix(5);
  for (int i = 0; i < 2; ++i) {
    acs.phi[2 * i + 2][2 * i + 1] = Expr::number(1.0);
    acs.phi[2 * i + 1][2 * i + 2] = Expr::number(-1.0);
  }
  acs.xi.assign(5, Expr::number(0.0));
  acs.xi[0] = Expr::number(1.0);
  acs.eta.assign(5, Expr::number(0.0));
  acs.eta[0] = Expr::number(1.0);
  s.acs = acs;
  s.flags = {{"phwc", true},     {"phh", true},            {"hwc", false},
             {"harmonic", true}, {"phm", true},            {"cosymplectic", true},
             {"normal", true},   {"kenmotsu_class", true}};
  s.notes = "Warped-product projection onto C^2 composed with the holomorphic non-conformal "
            "map (z1, z2) -> (z1, z2 + z1^2): pulls holomorphic functions back to harmonic "
            "ones without being weakly conformal.";
  return s;
}

Scenario make_cone_over_sasakian_r3(const std::map<std::string, double>& params) {
  check_param_names(params, {"t0", "t1"});
  const double t0 = get_param(params, "t0", 0.5, 0.1, 5.0);
  const double t1 = get_param(params, "t1", 2.0, 0.1, 5.0);
  if (!(t0 < t1)) throw CatalogError("cone interval requires t0 < t1");
  Scenario base = catalog_lookup("sasakian_r3", {}, false);
  const ConeChart cone = build_cone(base, t0, t1);
  Scenario s;
  s.id = "cone_over_sasakian_r3";
  s.source = cone.chart;
  s.target = base.target;
  s.map_components = cone.lifted_map;
  s.cone_t0 = t0;
  s.cone_t1 = t1;
  s.flags = {{"phwc", true},     {"phh", true}, {"hwc", true},
             {"harmonic", true}, {"phm", true}, {"cosymplectic", true},
             {"superminimal", true}, {"integrable_pair", true}};
  s.notes = "Warped cone over the Sasakian R^3 with the lifted Reeb projection; complex "
            "two-dimensional fibers spanned by the cone direction and the Reeb field.";
  return s;
}

using Builder = Scenario (*)(const std::map<std::string, double>&);
struct Entry {
  const char* id;
  Builder build;
  const char* doc;
};

const Entry kEntries[] = {
    {"flat_projection", &make_flat_projection,
     "Flat product projection C^n x R^k -> C^n.  Parameters: n in [1,3] (default 1), "
     "k in [0,3] (default 1; k = 1 carries the product almost contact structure)."},
    {"hopf", &make_hopf,
     "Hopf fibration S^3 -> S^2 in stereographic charts, round metrics on both sides.  "
     "No parameters."},
    {"sasakian_r3", &make_sasakian_r3,
     "Standard Sasakian R^3 with Reeb projection onto the flat plane.  No parameters."},
    {"sasakian_r5", &make_sasakian_r5,
     "Standard Sasakian R^5 with Reeb projection onto flat C^2.  No parameters."},
    {"kenmotsu", &make_kenmotsu,
     "Model Kenmotsu manifold R x_{e^t} C with its warped-product projection.  No parameters."},
    {"skewed_fibration", &make_skewed_fibration,
     "Riemannian submersion with non-minimal fibers (g = e^{2x} dt^2 + dx^2 + dy^2); the "
     "engineered negative witness.  No parameters."},
    {"shear", &make_shear,
     "Plane shear (x,y) -> (x+y, y); fails weak conformality with commutator norm sqrt(10).  "
     "No parameters."},
    {"superminimal_product", &make_superminimal_product,
     "Flat product projection with complex 1-dimensional fibers.  Parameter: n in [1,2] "
     "(default 1)."},
    {"warped_twist", &make_warped_twist,
     "Warped product C x_f C with f = e^{c x1}: integrable adapted structures, "
     "non-superminimal fibers.  Parameter: c in [0.2, 3] (default 1)."},
    {"cone_over_sasakian_r3", &make_cone_over_sasakian_r3,
     "Warped cone over sasakian_r3 with the lifted projection (2-dimensional fibers).  "
     "Parameters: t0, t1 in [0.1, 5] (defaults 0.5, 2.0), t0 < t1."},
    {"composed_phm", &make_composed_phm,
     "Kenmotsu R^5 projection composed with the holomorphic non-conformal map "
     "(z1,z2) -> (z1, z2+z1^2).  No parameters."},
};

}  // namespace

std::vector<std::string> catalog_ids() {
  std::vector<std::string> ids;
  for (const auto& e : kEntries) ids.push_back(e.id);
  return ids;
}

Scenario catalog_lookup(const std::string& id, const std::map<std::string, double>& params,
                        bool verify) {
  for (const auto& e : kEntries) {
    if (id == e.id) {
      Scenario s = e.build(params);
      if (verify) verify_scenario(s);
      return s;
    }
  }
  throw CatalogError("unknown catalog id '" + id + "'");
}

std::string catalog_doc(const std::string& id) {
  for (const auto& e : kEntries)
    if (id == e.id) return e.doc;
  throw CatalogError("unknown catalog id '" + id + "'");
}

}  // namespace phm
