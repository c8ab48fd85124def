#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "orbitope/function_space.hpp"
#include "orbitope/group.hpp"
#include "orbitope/sdp.hpp"

namespace orbitope {

/// Psd lift P = pi(S^d_+ ∩ L): the slice L is stored as offset + span of a
/// linearly independent basis, and pi(Y)_i = <P_i, Y> with <A,B> = tr(A B).
struct PsdLiftSpec {
  int d = 0;
  int ambient_dim = 0;
  RatMatrix offset;
  std::vector<RatMatrix> slice_basis;
  std::vector<RatMatrix> projection;

  void validate() const;
  RatVec project(const RatMatrix& Y) const;
};

/// Lifted representation: exact d x d images of the group generators.
struct LiftedRep {
  GroupSpec spec;
  int dimension = 0;
  std::vector<RatMatrix> generator_images;
};

/// Extends generator images over the group with an exact homomorphism check.
std::map<SignedPermutation, RatMatrix> materialize_exact(const LiftedRep& rep,
                                                         std::size_t cap = kDefaultGroupCap);
MatrixRepresentation to_double(const LiftedRep& rep);

/// Equality-constraint form of the affine slice: <lhs_l, Y> = rhs_l.
struct SliceEquations {
  std::vector<RatMatrix> lhs;
  RatVec rhs;
};
SliceEquations slice_to_equations(const PsdLiftSpec& lift);
/// offset + independent basis spanning {Y symmetric : <lhs_l,Y> = rhs_l}.
std::pair<RatMatrix, std::vector<RatMatrix>> equations_to_slice(const SliceEquations& eq, int d);

struct EquivarianceVerdict {
  bool equivariant = false;
  std::optional<SignedPermutation> witness;
  std::string detail;
};

/// Exact check of the two equivariance conditions: congruence by rho(g)
/// stabilizes the slice, and the projection intertwines the actions. Checks
/// every enumerated element when the group fits under the cap.
EquivarianceVerdict verify_equivariance(const PsdLiftSpec& lift, const LiftedRep& rep,
                                        const GroupSpec& spec,
                                        std::size_t cap = kDefaultGroupCap);

// ---- fixtures ----

/// Elliptope lift of the square [-1,1]^2 (size 3).
PsdLiftSpec square_lift_fixture();
/// blockdiag(1, g) representation of the dihedral group for the square lift.
LiftedRep square_lift_rep();

/// Three 2x2 blocks packed into a block-diagonal 6x6 slice.
PsdLiftSpec hyperboloid_lift_fixture();
/// The x1 <-> x2 swap made equivariant by permuting the first block.
LiftedRep hyperboloid_swap12_rep();
/// Natural (failing) candidate for the full S_3: permute the three blocks.
LiftedRep hyperboloid_s3_block_rep();

// ---- LP lifts ----

/// Symmetric LP lift data: P = proj(R^m_+ ∩ (offset + span(basis))).
struct LpLiftSpec {
  int m = 0;
  int ambient_dim = 0;
  RatVec offset;
  std::vector<RatVec> basis;
  std::vector<RatVec> projection_rows;
};

/// Diagonal embedding of an LP lift into a psd lift of the same size.
PsdLiftSpec lp_lift_to_psd(const LpLiftSpec& lp);
/// Permutation action theta on the LP coordinates, as a lifted representation.
LiftedRep lp_rep_to_psd(const GroupSpec& spec, const std::vector<SignedPermutation>& theta_perms,
                        int m);

/// l1-ball LP lift in R^{2n} (simplex coordinates y+, y-).
LpLiftSpec l1_ball_lp_lift(int n);
/// Chained PAR_3 dynamic-programming lift of PAR_n, 4(n-2) inequalities.
LpLiftSpec parity_dp_lp_lift(int n);
/// Segment [0,1] = {y in R^2_+ : y1 + y2 = 1}.
LpLiftSpec segment_lp_lift();

// ---- factorization (slack identity) ----

struct Factorization {
  std::vector<Eigen::VectorXd> points;   // orbit of x0 (deterministic order)
  std::vector<Eigen::MatrixXd> A;        // A(x) per point
  Eigen::MatrixXd B;                     // B(ell)
  double ell_max = 0;
  double max_slack_violation = 0;        // max |ell_max - ell(x) - <A(x),B>|
  double min_eig_A = 0;
  double min_eig_B = 0;
  bool verified = false;
};

/// Builds A over the orbit (fiber point, stabilizer averaging, equivariant
/// extension when a representation is given) and B(ell) from the dual of the
/// maximization over the lift; verifies the slack identity numerically.
Factorization factorize_lift(const PsdLiftSpec& lift, const std::optional<GroupSpec>& spec,
                             const std::optional<LiftedRep>& rep, const RatVec& x0,
                             const RatVec& ell, double tau_slack = 1e-6,
                             double tau_psd = 1e-8, const SdpOptions& options = {});

// ---- invariant-subspace extraction ----

struct ExtractionResult {
  Domain domain = Domain::Cube;
  CubeSubspace cube;
  EvenSubspace even;
  bool regular_path = false;
  std::vector<int> grades_present;
  int dimension() const {
    return domain == Domain::Cube ? cube.dimension() : even.dimension();
  }
};

/// Regular orbitope path: the span of the matrix entry functions of rho
/// restricted to the simply transitive normal subgroup N. Exact.
ExtractionResult extract_invariant_subspace_regular(const LiftedRep& rep,
                                                    const GroupSpec& normal_subgroup,
                                                    const RatVec& x0);

/// General path: eigenspace projectors of the averaged fiber point A(x0),
/// entry functions x -> rho(x) P_W rho(x)^T expanded in the character basis.
/// The representation must be orthogonal (exactly, or it is orthogonalized
/// first and the lift conjugated accordingly).
ExtractionResult extract_invariant_subspace_general(const PsdLiftSpec& lift, const LiftedRep& rep,
                                                    const GroupSpec& spec, const RatVec& x0,
                                                    double eigen_gap_tol = 1e-6,
                                                    const SdpOptions& options = {});

/// Congruence change of coordinates of the whole lift: Y -> Q Y Q^T.
PsdLiftSpec conjugate_lift(const PsdLiftSpec& lift, const RatMatrix& Q);

/// Feasibility of the fiber {Y psd in the slice : pi(Y) = z}.
FeasibilityReport lift_fiber_feasible(const PsdLiftSpec& lift, const Eigen::VectorXd& z,
                                      const SdpOptions& options = {});

/// The SDP "max ell(pi(Y)) over the lift" in standard form.
SdpProblem lift_maximization_problem(const PsdLiftSpec& lift, const RatVec& ell);

/// max ell(pi(Y)) over the lift.
SdpSolution maximize_over_lift(const PsdLiftSpec& lift, const RatVec& ell,
                               const SdpOptions& options = {});

}  // namespace orbitope
