// Derived geometries: the induced almost contact structure of a 1-fiber
// submersion, the warped cone over an almost contact manifold, adapted
// Hermitian pairs on 2-fiber submersions with the superminimality criterion,
// the pointwise CR condition, and the scenario type the catalog produces.

#pragma once

#include <map>
#include <optional>

#include "phm/structures.hpp"

namespace phm {

struct Scenario {
  std::string id;
  RiemannianChart source;
  std::optional<HermitianTarget> target;
  std::vector<Expr> map_components;
  std::optional<AcsSpec> acs;     // explicit structure
  std::vector<Expr> acs_seed;     // orientation seed for the induced structure
  std::map<std::string, bool> flags;
  std::string notes;
  double cone_t0 = 0.5, cone_t1 = 2.0;

  bool has_map() const { return target.has_value(); }
  bool has_acs() const { return acs.has_value() || !acs_seed.empty(); }
};

MapFrame scenario_map_frame(const Scenario& s, const VecD& x, bool need_split = true);

// Explicit structure when present, otherwise the induced one from the seed.
AcsFrame scenario_acs_frame(const Scenario& s, const ChartFrame& cf, const MapFrame* mf);

struct InducedAcsChecks {
  double invariants = 0;   // acs axioms
  double holomorphy = 0;   // || dphi o phi - J o dphi ||
};
InducedAcsChecks induced_acs_checks(const MapFrame& mf, const AcsFrame& acs);

// ---------------------------------------------------------------------------
// Cone construction

struct ConeChart {
  RiemannianChart chart;                 // coordinates (t, base...), ghat = dt^2 + t^2 g
  std::vector<std::vector<Expr>> Jhat;   // cone complex structure
  std::vector<Expr> pi;                  // projection onto the base
  RiemannianChart base_chart;
  std::vector<Expr> lifted_map;          // base map composed with pi (when present)
};

// Requires an explicit almost contact structure on the base scenario and a
// t-interval bounded away from zero.
ConeChart build_cone(const Scenario& base, double t0, double t1);

struct ConePointChecks {
  double tension = 0;           // || tau(pi) ||
  double dilation = 0;          // || dpi o dpi* - (1/t^2) id ||
  double geodesic_fibers = 0;   // || nabla_{d/dt} d/dt ||
  double jhat_square = 0;       // || Jhat^2 + I ||
  double jhat_compat = 0;       // || Jhat^T ghat Jhat - ghat ||
};
ConePointChecks cone_point_checks(const ConeChart& cone, const VecD& xc);

// Defect pairs for Prop. 5.1 (i), (ii), (iv): base map at x, lifted map at
// (t, x).  Both sides of each equivalence are reported.
struct ConeEquivalencePoint {
  double holo_base = 0, holo_cone = 0;
  double phwc_harm_base = 0, phwc_harm_cone = 0;
  double phm_base = 0, phm_cone = 0;
};
ConeEquivalencePoint cone_equivalences(const Scenario& base, const ConeChart& cone, double t,
                                       const VecD& xbase, bool conjugate_broken);

// ---------------------------------------------------------------------------
// Adapted Hermitian pairs (2-dimensional fibers)

struct AdaptedPairFrames {
  MatJ Jplus, Jminus;
  std::vector<VecJ> vframe;     // oriented orthonormal vertical frame (2 vectors)
  double invariants = 0;        // (J pm)^2 + I and metric compatibility
  double remark51 = 0;          // max || nabla^V_E J_V ||
  double orientation_det = 0;   // full-frame determinant against the chart orientation
};
AdaptedPairFrames adapted_pair(const MapFrame& mf, int orientation = +1);

struct SuperminimalityReport {
  double superminimal_plus = 0, superminimal_minus = 0;  // max_V ||(nabla_V J pm) e||
  double nijenhuis_plus = 0, nijenhuis_minus = 0;        // max ||N^{J pm}(X,Y)||
  double proof_identity = 0;                             // two-route bracket identity
};
SuperminimalityReport superminimality(const MapFrame& mf, const AdaptedPairFrames& ap);

// CR condition for 1-fiber submersions.  The commutator as printed captures
// the horizontal part of nabla_xi phi only; the normality conclusion also
// needs minimal fibers, so both defects are reported and the composite is the
// sound premise for the cross-reference to the normality defects.
struct CrDefects {
  double commutator = 0;        // || [dphi o nabla_xi o dphi*, J] ||
  double fiber_minimality = 0;  // || nabla_xi xi ||
  double combined = 0;
};
CrDefects cr_defect(const MapFrame& mf, const AcsFrame& acs);

// HWC defect: distance of dphi o dphi* from a multiple of the identity.
double hwc_defect(const MapFrame& mf);

// Per-flag defect used for catalog self-verification and the runner.
double flag_defect(const Scenario& s, const std::string& flag, const VecD& x);

// Re-derives every expected flag on a small deterministic sample; throws
// EngineInconsistencyError on mismatch.
struct EngineInconsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
void verify_scenario(const Scenario& s, int points = 12, uint64_t seed = 1, double tol = 1e-7,
                     double fail_threshold = 0.05);

// Samples a point of a box with the counter-based generator.
VecD sample_box(const Box& box, uint64_t seed, uint64_t index);

}  // namespace phm
