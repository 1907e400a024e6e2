// f-structure and almost contact tensor calculus: Nijenhuis and contact
// tensors, foliation invariants, class predicates, normality equivalences,
// the W-form and the Olszak/Blair cross-check identities.
//
// Convention note: the exterior derivative of the geometry module is the
// standard one.  Contact-geometry identities are stated in the literature with
// the 1/2-convention, so within this module the contact gate compares Phi with
// (1/2) d_std(eta), and N^(1) = [phi,phi] + d_std(eta) (x) xi, which coincides
// with the usual [phi,phi] + 2 d_contact(eta) (x) xi.

#pragma once

#include "phm/morphism.hpp"

namespace phm {

struct AcsSpec {
  std::vector<std::vector<Expr>> phi;  // m x m
  std::vector<Expr> xi;                // m components
  std::vector<Expr> eta;               // m covector components
};

// An almost contact structure evaluated at a point, with a g-orthonormal frame
// of the contact distribution D = ker eta.
struct AcsFrame {
  MatJ phi;
  VecJ xi;
  VecJ eta;
  std::vector<VecJ> dframe;
};

AcsFrame make_acs_frame(const ChartFrame& cf, const AcsSpec& spec);
// Induced structure of a 1-fiber submersion: xi is the normalized vertical
// projection of the seed field, phi the induced F, eta = g(., xi).
AcsFrame make_acs_frame_induced(const MapFrame& mf, const std::vector<Expr>& seed);

// max of || phi^2 + I - eta (x) xi ||, |eta(xi) - 1| and the metric
// compatibility residual over frame pairs.
double acs_invariants_defect(const ChartFrame& cf, const AcsFrame& acs);

// N^(1)(X,Y) = [phi,phi](X,Y) + d_std(eta)(X,Y) xi  evaluated at value level.
VecD n1_pair(const ChartFrame& cf, const AcsFrame& acs, const VecJ& X, const VecJ& Y);
double n2_pair(const AcsFrame& acs, const VecJ& X, const VecJ& Y);

MatJ fundamental_two_form(const ChartFrame& cf, const MatJ& phi);  // Phi_ij = g(d_i, phi d_j)

struct ContactTensors {
  double n1_max = 0;        // over full-frame pairs
  double n2_max = 0;
  double contact_defect = 0;  // max |(1/2) d eta - Phi| over frame pairs
  double deta_norm = 0;       // ||d eta||_g (standard convention)
  double dphi_norm = 0;       // ||d Phi||_g
  double kenmotsu_dphi_residual = 0;  // ||d Phi - 2 eta ^ Phi||_g
  double h_tensor_norm = 0;   // ||(1/2) L_xi phi||
};
ContactTensors contact_tensors(const ChartFrame& cf, const AcsFrame& acs);

struct FoliationInvariants {
  VecD mu_h, mu_v;            // mean curvature vectors (coordinate components)
  double mu_h_norm = 0, mu_v_norm = 0;
  double b_sym_residual = 0;  // max asymmetry of B^H (exact by construction)
  double cor21_residual = 0;  // (L_V g)(X,Y) + 2 g(B^H(X,Y), V)
  double i_h_norm = 0;        // max ||I^H(X,Y)||
};
FoliationInvariants foliation_invariants(const ChartFrame& cf, const std::vector<VecJ>& hframe,
                                         const std::vector<VecJ>& vframe);

// max of ||B^H(FX,FY) - B^H(X,Y)|| and ||(bott_V F)X|| over frames.
double phwc_foliation_defect(const ChartFrame& cf, const MatJ& F, const MatJ& PH,
                             const std::vector<VecJ>& hframe, const std::vector<VecJ>& vframe);

struct ClassDefects {
  double contact_metric = 0;
  double k_contact = 0;
  double sasakian = 0;
  double alpha_sasakian = 0;
  double alpha_fit = 0;  // fitted alpha, not a defect
  double kenmotsu = 0;
  double nearly_cosymplectic = 0;
  double quasi_sasakian = 0;
  double semi_cosymplectic = 0;
  double normal = 0;
};
ClassDefects classify_point(const ChartFrame& cf, const AcsFrame& acs);

struct NormalityDefects {
  double n1 = 0;             // max ||N^(1)|| over frame pairs
  double fiber_form = 0;     // ||mu^V|| + max |d eta(phi X, phi Y) - d eta(X,Y)|
  double parallel_phi = 0;   // max ||(nabla_xi phi) E||
};
NormalityDefects normality_defects(const ChartFrame& cf, const AcsFrame& acs);

struct WFormResult {
  VecD w;             // coordinate components of W-flat, printed coefficients
  double norm = 0;        // g-norm with the printed (m - n) coefficient
  double norm_alt = 0;    // variant with (m - 2n)
};
WFormResult w_form(const ChartFrame& cf, const std::vector<VecJ>& hframe,
                   const std::vector<VecJ>& vframe);

// Central-difference closedness probe ||dW|| of a 1-form sampled as a field.
double one_form_closedness_fd(const std::function<VecD(const VecD&)>& field, const ChartFrame& cf,
                              double step);

struct CosymplecticIdentity {
  double residual_plus = 0;   // || lhs - sigma ||
  double residual_minus = 0;  // || lhs + sigma ||
  double residual = 0;        // min of the two orientations
  double lhs_norm = 0;
};
CosymplecticIdentity cosymplectic_identity(const ChartFrame& cf, const MatJ& F,
                                           const std::vector<VecJ>& hframe,
                                           const std::vector<VecJ>& vframe);

struct OlszakBlair {
  double olszak = 0;
  double blair = 0;
  double sympl12 = 0;  // horizontal (1,2)-symplectic defect
  double h_tensor_norm = 0;
};
// Requires a contact-metric structure; throws NotApplicableError (carrying the
// contact defect in its message) otherwise.
OlszakBlair olszak_blair(const ChartFrame& cf, const AcsFrame& acs, double tol);

// Complex distribution integrability: max || P_+ [A,B] || over sections A,B of
// T^0 + T^{0,1}, with P_+ the (+i)-eigenprojector of F.
double complex_distribution_integrability(const ChartFrame& cf, const MatJ& F,
                                          const std::vector<VecJ>& hframe,
                                          const std::vector<VecJ>& vframe);

// F-adapted Hermitian frame {f_i, F f_i} spanning the horizontal space.
std::vector<VecJ> hermitian_frame(const MatJ& G, const MatJ& F, const std::vector<VecJ>& hframe);

}  // namespace phm
