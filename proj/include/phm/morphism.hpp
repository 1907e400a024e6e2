// Per-point analysis of a smooth map between charts: differential and adjoint,
// horizontal/vertical splitting, PHWC and PHH defects, induced f-structure,
// tension field, cosymplectic condition and the holomorphic test battery.

#pragma once

#include "phm/geometry.hpp"

namespace phm {

struct RankError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotApplicableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct HermitianTarget {
  RiemannianChart chart;                  // metric h, dimension 2n
  std::vector<std::vector<Expr>> J;       // almost complex structure components
  bool standard_J = false;                // J constant equal to the canonical block rotation
  bool kahler = false;                    // established by checks at build time
};

// Canonical block rotation J(d/du_k) = d/dv_k on coordinates (u1,v1,...).
std::vector<std::vector<Expr>> standard_J_exprs(int two_n);

// All map-level data evaluated at one source point.
struct MapFrame {
  ChartFrame src;
  const HermitianTarget* target = nullptr;
  const std::vector<Expr>* comps = nullptr;

  VecJ phij;       // map components as source jets, order 2
  MatJ dphi;       // 2n x m Jacobian, order 1
  MatJ Hc, Jc;     // h and J composed with the map, source jets, order 2
  MatJ dstar;      // adjoint d(phi)^*, m x 2n, order 1
  MatJ AA;         // dphi o dstar, endomorphism of the target tangent space
  bool submersive = false;

  // Populated when the split is available (submersive points only).
  MatJ Pinv;       // horizontal-lift inverse dstar (AA)^-1
  MatJ PH, PV;     // projectors onto horizontal/vertical distributions
  std::vector<VecJ> hframe, vframe;  // g-orthonormal frames, fixed seed order
  MatJ F;          // induced f-structure dphi^+ o J o dphi

  ChartFrame tgt;  // target chart seeded at phi(x) in target variables
  MatJ Jt;         // J at phi(x), target seeding

  int m() const { return src.dim(); }
  int two_n() const { return dphi.rows(); }
};

// Evaluates the map at x.  When `need_split` the horizontal/vertical splitting
// and induced F are constructed; a rank drop raises RankError.
MapFrame make_map_frame(const RiemannianChart& source, const HermitianTarget& target,
                        const std::vector<Expr>& comps, const VecD& x, bool need_split = true);

// || [dphi o dphi*, J] ||_F at phi(x); zero iff PHWC at x.
double phwc_defect(const MapFrame& mf);

// Residual of the adjoint's defining identity g(X, dphi* E) = h(dphi X, E)
// for deterministic pseudo-random X, E.
double adjoint_identity_residual(const MapFrame& mf, unsigned seed);

// ||F^3 + F||_F (exact f-structure identity, holds PHWC or not).
double f_cubed_defect(const MapFrame& mf);

// max |g(F e_a, e_b) + g(e_a, F e_b)| over full-frame pairs; ~0 iff PHWC.
double f_compat_defect(const MapFrame& mf);

// PHH defect: max over the horizontal frame X (or the given X) of
// || [dphi o nabla_X o dphi*, J] ||_F with the target coordinate frame
// providing the sections that are differentiated.
double phh_defect(const MapFrame& mf, const VecJ* X = nullptr);

// Tension field tau(phi) in target coordinates plus its h-norm.
VecD tension_field(const MapFrame& mf, double* h_norm = nullptr);
// Same for a map into a plain Riemannian chart (used for cone projections).
VecD tension_field_generic(const ChartFrame& src, const RiemannianChart& target,
                           const std::vector<Expr>& comps, double* h_norm = nullptr);

struct FDivFResult {
  VecD div_f;               // div F = trace nabla F
  VecD f_div_f;             // F(div F)
  double cosymplectic_defect = 0.0;  // g-norm of F div F
  double split_residual = 0.0;       // || mu^V + (1/(m-2n)) F div^H F ||_g
};
// Works for the induced F of a map frame or any supplied f-structure field.
FDivFResult f_div_f(const ChartFrame& cf, const MatJ& F, const std::vector<VecJ>& hframe,
                    const std::vector<VecJ>& vframe);
FDivFResult f_div_f(const MapFrame& mf);

// || tau(phi) - (J div^phi J - dphi(F div F)) ||_h  (tension decomposition).
double tension_decomposition_residual(const MapFrame& mf);

// Laplacian of f o phi for a holomorphic battery member on a standard-J target.
// Battery: z^g, z^g z^d (g <= d), exp(z^1).
std::vector<std::pair<std::string, double>> battery_laplacians(const MapFrame& mf);
double battery_max(const MapFrame& mf);

// || dphi o A - J o dphi ||_F for a (1,1) field A on the source (holomorphy).
double holomorphy_defect(const MapFrame& mf, const MatJ& A);

// Lemma 2.1 defect: max over vertical V, horizontal X of ||((L_V F)X)^H||_g.
double basic_f_defect(const MapFrame& mf);

// Lemma 2.2: max horizontal Nijenhuis defect ||[F,F](X,Y)^H||_g over the
// horizontal frame, and closedness of the pulled-back Kaehler form.
double horizontal_nijenhuis_defect(const MapFrame& mf);
double pullback_kahler_closedness(const MapFrame& mf);

// Prop. 2.1 (i)-(iv) residual with deterministic pseudo-random ambient fields.
double transversal_hermitian_residual(const MapFrame& mf, unsigned seed);

}  // namespace phm
