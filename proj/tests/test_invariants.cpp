#include <doctest.h>

#include "orbitope/invariants.hpp"

using namespace orbitope;

TEST_CASE("D_{n,k} values") {
  CHECK(d_parity_threshold(8, 2) == 28);   // min(28, 35)
  CHECK(d_parity_threshold(9, 2) == 36);   // C(9,2)
  CHECK(d_parity_threshold(4, 2) == 3);    // min(6, 3)
  CHECK(d_parity_threshold(4, 1) == 3);    // min(4, 3)
  CHECK(d_parity_threshold(12, 3) == 220); // min(220, 462)
  CHECK_THROWS(d_parity_threshold(8, 5));
  CHECK_THROWS(d_parity_threshold(8, 0));
}

TEST_CASE("alpha bound") {
  CHECK(alpha_bound(GroupSpec::n_parity(6), 10) == 1);
  CHECK(alpha_bound(GroupSpec::n_cube(5), 3) == 1);
  auto commuting = GroupSpec::custom(3, {SignedPermutation::sign_flip(3, {1}),
                                         SignedPermutation::sign_flip(3, {2})});
  CHECK(alpha_bound(commuting, 4) == 1);
  auto nonabelian = GroupSpec::custom(3, GroupSpec::symmetric(3).generators);
  CHECK_THROWS_WITH_AS(alpha_bound(nonabelian, 4), doctest::Contains("alpha bound unsupported"),
                       Error);
  CHECK_THROWS(alpha_bound(GroupSpec::g_parity(4), 2));
}

TEST_CASE("irreducibility of grades") {
  // Pol_1(C_3) under G_cube
  auto v = irreducibility_check(1, GroupSpec::g_cube(3), 3, Domain::Cube);
  CHECK(v.irreducible);
  CHECK(v.grade_dimension == 3);

  // Pol_2(EVEN_4) under G_parity: the halved middle level
  auto w = irreducibility_check(2, GroupSpec::g_parity(4), 4, Domain::Even);
  CHECK(w.irreducible);
  CHECK(w.grade_dimension == 3);

  // all grades of C_n for n <= 6
  for (int n = 2; n <= 6; ++n)
    for (int k = 0; k <= n; ++k) {
      auto r = irreducibility_check(k, GroupSpec::g_cube(n), n, Domain::Cube);
      CHECK(r.irreducible);
      CHECK(r.grade_dimension == binomial(n, k));
    }

  // a strictly smaller group fails to act irreducibly on Pol_1(C_3)
  auto small = GroupSpec::custom(3, {SignedPermutation::sign_flip(3, {1})});
  auto bad = irreducibility_check(1, small, 3, Domain::Cube);
  CHECK_FALSE(bad.irreducible);
  CHECK(bad.witness.has_value());
}

TEST_CASE("invariance check") {
  // Pol_1(C_3) is G_cube-invariant
  CubeSubspace pol1{3, {}};
  for (int i = 1; i <= 3; ++i)
    pol1.basis.push_back(CubeFunction::monomial(SubsetMask::from_indices({i}, 3)));
  CHECK(invariance_check(pol1, GroupSpec::g_cube(3)).invariant);

  // span{e_1} is not S_3-invariant; witness is a (generator, basis) pair
  CubeSubspace just_e1{3, {CubeFunction::monomial(SubsetMask::from_indices({1}, 3))}};
  auto verdict = invariance_check(just_e1, GroupSpec::symmetric(3));
  CHECK_FALSE(verdict.invariant);
  REQUIRE(verdict.violation.has_value());
  CHECK(verdict.violation->basis_index == 0);

  // span{1, x_1, x_2} on C_2 under the dihedral group
  CubeSubspace lowdeg{2, {CubeFunction::constant(2, make_rational(1)),
                          CubeFunction::monomial(SubsetMask::from_indices({1}, 2)),
                          CubeFunction::monomial(SubsetMask::from_indices({2}, 2))}};
  CHECK(invariance_check(lowdeg, GroupSpec::dihedral8()).invariant);
}

TEST_CASE("containment bound, even domain") {
  // span{1, e_1+...+e_n} on EVEN_9, k=2: dim 2 < 36. This span is invariant
  // under the permutation action (not under sign switches), so the invariance
  // precondition is checked against S_9.
  int n = 9;
  EvenFunction sum(n);
  for (int i = 1; i <= n; ++i)
    sum = sum + EvenFunction::basis_element(SubsetMask::from_indices({i}, n));
  EvenSubspace V{n, {EvenFunction::constant(n, make_rational(1)), sum}};
  auto verdict = containment_bound_check(V, GroupSpec::symmetric(n), 2);
  CHECK(verdict.status == ContainmentStatus::Contained);
  auto not_inv = containment_bound_check(V, GroupSpec::g_parity(n), 2);
  CHECK(not_inv.status == ContainmentStatus::NotInvariant);

  // Pol_2(EVEN_8) has dim 28 = D_{8,2}: threshold not met
  EvenSubspace pol2{8, {}};
  for (const auto& f : canonical_basis_even(8))
    if (f.degree() == 2) pol2.basis.push_back(f);
  CHECK(pol2.dimension() == 28);
  auto boundary = containment_bound_check(pol2, GroupSpec::g_parity(8), 2);
  CHECK(boundary.status == ContainmentStatus::ThresholdNotMet);

  // non-invariant subspace is reported with its violation
  EvenSubspace bad{9, {EvenFunction::basis_element(SubsetMask::from_indices({1}, 9))}};
  auto nv = containment_bound_check(bad, GroupSpec::g_parity(9), 2);
  CHECK(nv.status == ContainmentStatus::NotInvariant);
  CHECK(nv.invariance_violation.has_value());
}

TEST_CASE("containment bound, cube domain") {
  // span{1, e_n} on C_6, k=2: every element splits as g + e_n h, deg <= 1
  int n = 6;
  CubeSubspace V{n, {CubeFunction::constant(n, make_rational(1)),
                     CubeFunction::monomial(SubsetMask((1u << n) - 1, n))}};
  auto verdict = containment_bound_check(V, GroupSpec::g_cube(n), 2);
  CHECK(verdict.status == ContainmentStatus::Contained);
  REQUIRE(verdict.splits.size() == 2);
  CHECK(verdict.splits[0].g == CubeFunction::constant(n, make_rational(1)));
  CHECK(verdict.splits[0].h.is_zero());
  CHECK(verdict.splits[1].g.is_zero());
  CHECK(verdict.splits[1].h == CubeFunction::constant(n, make_rational(1)));
}

TEST_CASE("decomposition report") {
  auto rep = decompose(Domain::Even, 6, GroupSpec::g_parity(6));
  CHECK(rep.total_dimension == 32);
  CHECK(rep.all_irreducible);
  CHECK(rep.grade_dims == std::vector<int>{1, 6, 15, 10});
  auto cube = decompose(Domain::Cube, 5, GroupSpec::g_cube(5));
  CHECK(cube.total_dimension == 32);
  CHECK(cube.grade_dims == std::vector<int>{1, 5, 10, 10, 5, 1});
  CHECK(cube.to_json().find("\"total_dimension\":32") != std::string::npos);
}
