#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "orbitope/function_space.hpp"
#include "orbitope/group.hpp"
#include "orbitope/lifts.hpp"
#include "orbitope/sdp.hpp"

namespace orbitope {

/// Linear functional on the canonical basis up to a degree bound; exact.
struct PseudoExpectation {
  int ambient_n = 0;
  Domain domain = Domain::Even;
  int degree_bound = 0;
  std::map<std::uint32_t, Rational> values;  // canonical basis keys

  static PseudoExpectation evaluation_at(const SignVector& x, Domain domain, int degree_bound);
  static PseudoExpectation uniform(Domain domain, int n, int degree_bound);

  /// E(1) = 1 and every basis element of degree <= bound has a value.
  void validate() const;

  Rational operator()(const CubeFunction& f) const;
  Rational operator()(const EvenFunction& f) const;
  Rational value_of_key(std::uint32_t key) const;
};

/// The functional of the parity separation argument: evaluation at the
/// all-ones-but-last point p, extended by zero on the middle level. E(1) = 1.
PseudoExpectation parity_separating_functional(int n);

/// Facet of PAR_n used in the separation argument:
/// (n-2) e_0 + e_{n} - sum_{i<n} e_i.
EvenFunction parity_facet_function(int n);

struct MomentMatrix {
  std::vector<std::uint32_t> index_keys;  // canonical basis keys, degree <= k
  RatMatrix M;
};

/// M[I][J] = E(b_I b_J), products routed through the function algebra so the
/// EVEN reductions apply.
MomentMatrix moment_matrix(const PseudoExpectation& E, int k);

struct SeparationVerdict {
  bool psd = false;
  bool rank_one_identity = false;  // M = v v^T with v_I = E(b_I), exact
  Rational facet_value;            // E of the parity facet function
  bool separates = false;
  std::optional<RatVec> psd_witness;
};

/// Exact PSD check of the degree-<=k moment matrix plus the facet value.
SeparationVerdict verify_separation(const PseudoExpectation& E, int k, int n);

// ---- theta bodies ----

struct ThetaBody {
  PsdLiftSpec lift;
  std::optional<LiftedRep> rep;
  Domain domain = Domain::Even;
  int n = 0;
  std::vector<SignVector> points;
};

/// Explicit lift of conv(coords(X)) from the bilinear forms H_E on V; exact.
/// V must contain the constants; when a group is supplied the matching
/// lifted representation rho(g) = theta(g^{-1})^T comes along.
ThetaBody build_theta_body(const CubeSubspace& V, const std::vector<SignVector>& X,
                           const std::vector<CubeFunction>& coords,
                           const std::optional<GroupSpec>& group = std::nullopt);
ThetaBody build_theta_body(const EvenSubspace& V, const std::vector<SignVector>& X,
                           const std::vector<EvenFunction>& coords,
                           const std::optional<GroupSpec>& group = std::nullopt);

/// TH_k of EVEN_n or C_n with the n coordinate functions.
ThetaBody theta_body_level(Domain domain, int n, int k,
                           const std::optional<GroupSpec>& group = std::nullopt);

struct MembershipVerdict {
  bool member = false;
  bool boundary = false;
  double margin = 0.0;
  std::string detail;
};

/// SDP feasibility of the fiber over z.
MembershipVerdict theta_body_membership(const Eigen::VectorXd& z, const ThetaBody& body,
                                        const SdpOptions& options = {});

/// Node-based relaxation Q_k(CUT_n) as an explicit psd lift over
/// z in R^{C(n,2)} (moment matrix with y_0 = 1, y_ij = z_ij).
ThetaBody build_Qk_cut(int n, int k);

// ---- sum-of-squares certificates ----

template <class F>
struct SosSummand {
  Rational scale;  // nonnegative
  F fn;            // summand contributes scale * fn^2
};

template <class F>
struct SosCertificate {
  F target;
  std::vector<SosSummand<F>> summands;
  Subspace<F> subspace;
};

using CubeSosCertificate = SosCertificate<CubeFunction>;
using EvenSosCertificate = SosCertificate<EvenFunction>;

struct SosVerifyResult {
  bool ok = false;
  std::optional<SignVector> violating_point;
  std::string detail;
};

/// Pointwise identity target = sum scale_j fn_j^2 on X (exact when tol = 0),
/// plus exact span membership of every summand in the tagged subspace.
SosVerifyResult sos_certificate_verify(const CubeSosCertificate& cert,
                                       const std::vector<SignVector>& X, double tol = 0.0);
SosVerifyResult sos_certificate_verify(const EvenSosCertificate& cert,
                                       const std::vector<SignVector>& X, double tol = 0.0);

struct SosSearchOutcome {
  enum class Status { Found, Infeasible, NumericalFailure } status =
      Status::NumericalFailure;
  std::optional<CubeSosCertificate> cube_cert;
  std::optional<EvenSosCertificate> even_cert;
  /// When infeasible: value of a separating pseudo-expectation on the target
  /// (negative), with E(f^2) >= 0 on the subspace.
  std::optional<double> separating_value;
  std::string detail;
};

/// Gram-matrix SDP with pointwise constraints over the exhaustive X.
SosSearchOutcome sos_certificate_search(const CubeFunction& target, const CubeSubspace& V,
                                        const std::vector<SignVector>& X,
                                        const SdpOptions& options = {});
SosSearchOutcome sos_certificate_search(const EvenFunction& target, const EvenSubspace& V,
                                        const std::vector<SignVector>& X,
                                        const SdpOptions& options = {});

// ---- theta-rank probing ----

struct FacetProbe {
  std::string name;
  bool certified = false;
  std::optional<double> separating_value;
};

struct ThetaRankReport {
  int level = 0;
  bool exact = false;  // all facets certified
  std::vector<FacetProbe> facets;
};

/// All facets of PAR_n (the odd-set inequalities, plus the box facets for
/// n >= 4) probed at level k.
ThetaRankReport theta_rank_probe_parity(int n, int k, const SdpOptions& options = {},
                                        int threads = 1);
/// Facets 1 +- x_i of the square/hypercube [-1,1]^n at level k.
ThetaRankReport theta_rank_probe_cube(int n, int k, const SdpOptions& options = {});

// ---- certificate restriction (cube doubling) ----

/// Variable-duplication substitution x_{m+i} = x_i from C_{2m} to C_m.
CubeFunction fold_duplicate(const CubeFunction& f);

/// Certificate over C_{2m} whose summands split as g + e_{2m} h with low
/// degrees; substituting x_{m+i} = x_i yields a certificate over C_m.
CubeSosCertificate restrict_certificate(const CubeSosCertificate& cert);

}  // namespace orbitope
