#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orbitope/function_space.hpp"
#include "orbitope/group.hpp"

namespace orbitope {

/// Seed for the reproducible random-element batches used by the checks below.
inline constexpr unsigned kInvariantsSeed = 971203u;

long long binomial(int n, int k);

/// D_{n,k}: C(n,k) for odd n, min(C(n,k), C(n,n/2)/2) for even n. 1 <= k <= n/2.
long long d_parity_threshold(int n, int k);

/// Largest dimension of a real irreducible representation of the group, for
/// the abelian groups the library supports (N_cube, N_parity, commuting
/// Custom): always 1. Errors otherwise.
int alpha_bound(const GroupSpec& spec, int d);

struct IrreducibilityVerdict {
  bool irreducible = false;
  int grade_dimension = 0;
  int checked_elements = 0;
  std::optional<std::string> witness;  // text form of a failing element
};

/// Certifies that every basis element (plus a seeded random batch) of Pol_k
/// generates the whole grade under the group action (exact orbit-span rank).
IrreducibilityVerdict irreducibility_check(int k, const GroupSpec& spec, int n, Domain domain,
                                           int random_batch = 4, unsigned seed = kInvariantsSeed);

struct InvarianceViolation {
  int generator_index = -1;
  int basis_index = -1;
};

struct InvarianceVerdict {
  bool invariant = false;
  std::optional<InvarianceViolation> violation;
};

InvarianceVerdict invariance_check(const CubeSubspace& V, const GroupSpec& spec);
InvarianceVerdict invariance_check(const EvenSubspace& V, const GroupSpec& spec);

/// f = g + e_n h with both parts of low degree (cube-domain split).
struct CubeSplit {
  CubeFunction g;
  CubeFunction h;
};

enum class ContainmentStatus { Contained, ThresholdNotMet, NotInvariant, Failed };

struct ContainmentVerdict {
  ContainmentStatus status = ContainmentStatus::Failed;
  std::string detail;
  std::optional<InvarianceViolation> invariance_violation;
  std::vector<CubeSplit> splits;  // cube domain only, one per basis element
};

/// Even domain: dim V < D_{n,k} forces V inside Pol_{<=k-1}.
ContainmentVerdict containment_bound_check(const EvenSubspace& V, const GroupSpec& spec, int k);
/// Cube domain: dim V < C(n,k), k <= n/2 forces every element into the form
/// g + e_n h with deg g, deg h <= k-1; the split is returned.
ContainmentVerdict containment_bound_check(const CubeSubspace& V, const GroupSpec& spec, int k);

struct DecompositionReport {
  int ambient_n = 0;
  Domain domain = Domain::Cube;
  std::string group;
  std::vector<int> grade_dims;      // indexed by grade
  std::vector<bool> grade_irreducible;
  int total_dimension = 0;          // sum of grade_dims
  bool all_irreducible = false;
  /// verdict text per supplied subspace, when containment checks were run
  std::vector<std::pair<std::string, std::string>> containment_verdicts;
  std::string to_json(bool pretty = false) const;
};

/// Full per-grade decomposition summary of F(C_n,R) or F(EVEN_n,R).
DecompositionReport decompose(Domain domain, int n, const GroupSpec& spec,
                              int random_batch = 4, unsigned seed = kInvariantsSeed);

}  // namespace orbitope
