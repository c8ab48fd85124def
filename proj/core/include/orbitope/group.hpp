#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "orbitope/function_space.hpp"
#include "orbitope/rational_matrix.hpp"

namespace orbitope {

/// Signed permutation of [n]: the matrix with entry signs[i] in row i,
/// column perm^{-1}(i). Acts on column vectors: (g·x)_i = signs_i x_{perm^{-1}(i)}.
class SignedPermutation {
 public:
  SignedPermutation() = default;
  SignedPermutation(std::vector<int> perm, std::vector<int> signs);

  static SignedPermutation identity(int n);
  /// Swap of two one-based coordinates, positive signs.
  static SignedPermutation transposition(int n, int i, int j);
  /// Identity permutation with the listed one-based coordinates negated.
  static SignedPermutation sign_flip(int n, const std::vector<int>& flipped);

  int ambient_n() const { return static_cast<int>(perm_.size()); }
  /// Forward map, 0-based: coordinate j lands at position perm()[j].
  const std::vector<int>& perm() const { return perm_; }
  /// Sign applied at output position i (0-based).
  const std::vector<int>& signs() const { return signs_; }

  int sign_parity() const;
  bool is_pure_sign() const;
  bool is_identity() const;
  int flipped_count() const;

  /// Composition acting as: (this * o)·x = this·(o·x).
  SignedPermutation operator*(const SignedPermutation& o) const;
  SignedPermutation inverse() const;

  RatMatrix matrix() const;
  Eigen::MatrixXd matrix_double() const;

  RatVec act(const RatVec& x) const;
  Eigen::VectorXd act(const Eigen::VectorXd& x) const;
  SignVector act(const SignVector& x) const;

  auto operator<=>(const SignedPermutation&) const = default;

 private:
  std::vector<int> perm_;
  std::vector<int> signs_;
};

/// (g·f)(x) = f(g^{-1}·x); multiplicative over pointwise products.
CubeFunction act_on_function(const SignedPermutation& g, const CubeFunction& f);
/// Requires even sign parity so that EVEN_n is preserved.
EvenFunction act_on_function(const SignedPermutation& g, const EvenFunction& f);

/// g · X := g X g^T.
RatMatrix act_on_symmetric(const SignedPermutation& g, const RatMatrix& X);
Eigen::MatrixXd act_on_symmetric(const SignedPermutation& g, const Eigen::MatrixXd& X);

enum class GroupKind { SymmetricGroup, NCube, NParity, GCube, GParity, Dihedral8, Custom };

struct GroupSpec {
  GroupKind kind = GroupKind::Custom;
  int ambient_n = 0;
  std::vector<SignedPermutation> generators;
  bool declared_abelian = false;  // only consulted for Custom

  static GroupSpec symmetric(int n);
  static GroupSpec n_cube(int n);
  static GroupSpec n_parity(int n);
  static GroupSpec g_cube(int n);
  static GroupSpec g_parity(int n);
  static GroupSpec dihedral8();
  static GroupSpec custom(int n, std::vector<SignedPermutation> gens, bool declared_abelian = false);

  std::string name() const;
  bool generators_commute() const;
};

inline constexpr std::size_t kDefaultGroupCap = 1'000'000;
inline constexpr std::size_t kDefaultOrbitCap = std::size_t{1} << 20;

/// Generator closure; deterministic ascending order. Throws past the cap.
std::vector<SignedPermutation> enumerate_group(const GroupSpec& spec,
                                               std::size_t cap = kDefaultGroupCap);

std::vector<RatVec> orbit(const GroupSpec& spec, const RatVec& x0,
                          std::size_t cap = kDefaultOrbitCap);

struct OrbitPoint {
  RatVec point;
  SignedPermutation witness;  // witness · x0 = point
};
std::vector<OrbitPoint> orbit_with_witnesses(const GroupSpec& spec, const RatVec& x0,
                                             std::size_t cap = kDefaultOrbitCap);

/// Generators (full element list) of {g in G : g·x0 = x0}.
GroupSpec stabilizer(const GroupSpec& spec, const RatVec& x0,
                     std::size_t cap = kDefaultGroupCap);

/// Applies the product of (id + eps) operators, f ↦ f + eps·f, left to right.
/// Each eps must be a pure sign element; on the EVEN domain each must flip an
/// even number of coordinates.
CubeFunction annihilator_apply(const std::vector<SignedPermutation>& eps, const CubeFunction& f);
EvenFunction annihilator_apply(const std::vector<SignedPermutation>& eps, const EvenFunction& f);

/// Representation given by images of the group's generators.
struct MatrixRepresentation {
  GroupSpec spec;
  int dimension = 0;
  std::vector<Eigen::MatrixXd> generator_images;
};

/// Extends generator images over the whole group by closure; rejects
/// assignments that fail the homomorphism property beyond hom_tol.
std::map<SignedPermutation, Eigen::MatrixXd> materialize(
    const MatrixRepresentation& rep, double hom_tol = 1e-8,
    std::size_t cap = kDefaultGroupCap);

struct OrthogonalizationResult {
  Eigen::MatrixXd Q;
  MatrixRepresentation orthogonal_rep;
  /// max over g of ||rho'(g) rho'(g)^T - I||_F after conjugation
  double orthogonality_defect = 0.0;
};

/// Q = (sum_g rho(g) rho(g)^T)^{-1/2} by symmetric eigendecomposition; the
/// conjugated representation Q rho(g) Q^{-1} is orthogonal.
OrthogonalizationResult orthogonalize_representation(const MatrixRepresentation& rep,
                                                     double eig_floor = 1e-12,
                                                     std::size_t cap = kDefaultGroupCap);

}  // namespace orbitope
