#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "orbitope/group.hpp"

using namespace orbitope;

namespace {

RatVec rvec(std::initializer_list<int> xs) {
  RatVec v;
  for (int x : xs) v.push_back(make_rational(x));
  return v;
}

long long factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

}  // namespace

TEST_CASE("act_on_point conventions") {
  auto g = SignedPermutation::transposition(3, 1, 2);
  CHECK(g.act(rvec({1, -1, 1})) == rvec({-1, 1, 1}));

  auto eps = SignedPermutation::sign_flip(3, {1, 2});
  CHECK(eps.act(rvec({1, 1, 1})) == rvec({-1, -1, 1}));

  // matches multiplication by the signed permutation matrix
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    int n = 2 + static_cast<int>(rng() % 3);
    auto elements = enumerate_group(GroupSpec::g_cube(n), 10000);
    const auto& h = elements[rng() % elements.size()];
    RatVec x;
    for (int i = 0; i < n; ++i) x.push_back(make_rational(static_cast<int>(rng() % 7) - 3));
    CHECK(h.act(x) == h.matrix() * x);
  }
}

TEST_CASE("group orders for canned specs") {
  for (int n = 2; n <= 5; ++n) {
    CHECK(enumerate_group(GroupSpec::g_cube(n)).size() == (1u << n) * factorial(n));
    CHECK(enumerate_group(GroupSpec::g_parity(n)).size() == (1u << (n - 1)) * factorial(n));
    CHECK(enumerate_group(GroupSpec::symmetric(n)).size() == static_cast<size_t>(factorial(n)));
    CHECK(enumerate_group(GroupSpec::n_cube(n)).size() == (1u << n));
    CHECK(enumerate_group(GroupSpec::n_parity(n)).size() == (1u << (n - 1)));
  }
  CHECK(enumerate_group(GroupSpec::dihedral8()).size() == 8);
  for (const auto& g : enumerate_group(GroupSpec::g_parity(4))) CHECK(g.sign_parity() == 1);
}

TEST_CASE("group axioms on enumerated elements") {
  auto elements = enumerate_group(GroupSpec::dihedral8());
  for (const auto& g : elements) {
    CHECK((g * g.inverse()).is_identity());
    for (const auto& h : elements) {
      auto gh = g * h;
      CHECK(std::find(elements.begin(), elements.end(), gh) != elements.end());
    }
  }
}

TEST_CASE("action on functions") {
  auto g = SignedPermutation::transposition(3, 1, 2);
  auto e1 = CubeFunction::monomial(SubsetMask::from_indices({1}, 3));
  CHECK(act_on_function(g, e1) == CubeFunction::monomial(SubsetMask::from_indices({2}, 3)));

  auto eps = SignedPermutation::sign_flip(4, {1, 3});
  auto f1 = EvenFunction::basis_element(SubsetMask::from_indices({1}, 4));
  CHECK(act_on_function(eps, f1) == f1.scaled(make_rational(-1)));

  auto odd = SignedPermutation::sign_flip(4, {1});
  CHECK_THROWS(act_on_function(odd, f1));

  // (g.f)(x) = f(g^{-1} x) exhaustively
  std::mt19937_64 rng(17);
  auto elements = enumerate_group(GroupSpec::g_cube(4));
  for (int rep = 0; rep < 30; ++rep) {
    const auto& h = elements[rng() % elements.size()];
    CubeFunction f(4);
    for (int t = 0; t < 4; ++t)
      f = f + CubeFunction::monomial(SubsetMask(rng() % 16, 4), make_rational(static_cast<int>(rng() % 9) - 4));
    CubeFunction hf = act_on_function(h, f);
    auto hinv = h.inverse();
    for (const auto& x : SignVector::all(4)) CHECK(evaluate(hf, x) == evaluate(f, hinv.act(x)));
  }
}

TEST_CASE("action is multiplicative and compatible with composition") {
  std::mt19937_64 rng(29);
  auto elements = enumerate_group(GroupSpec::g_parity(4));
  auto random_even_fn = [&](int n) {
    EvenFunction f(n);
    auto basis = canonical_basis_even(n);
    for (int t = 0; t < 4; ++t)
      f = f + basis[rng() % basis.size()].scaled(make_rational(static_cast<int>(rng() % 9) - 4));
    return f;
  };
  for (int rep = 0; rep < 100; ++rep) {
    const auto& g = elements[rng() % elements.size()];
    const auto& h = elements[rng() % elements.size()];
    EvenFunction f = random_even_fn(4);
    EvenFunction k = random_even_fn(4);
    CHECK(act_on_function(g, multiply(f, k)) ==
          multiply(act_on_function(g, f), act_on_function(g, k)));
    CHECK(act_on_function(g * h, f) == act_on_function(g, act_on_function(h, f)));
  }
}

TEST_CASE("act_on_symmetric") {
  auto id = SignedPermutation::identity(2);
  RatMatrix X(2, 2);
  X.at(0, 0) = 1; X.at(0, 1) = 1; X.at(1, 0) = 1; X.at(1, 1) = 1;
  CHECK(act_on_symmetric(id, X) == X);

  auto eps = SignedPermutation::sign_flip(2, {1});
  RatMatrix Y = act_on_symmetric(eps, X);
  CHECK(Y.at(0, 1) == make_rational(-1));
  CHECK(Y.at(0, 0) == 1);

  // g.(x x^T) = (g.x)(g.x)^T exhaustively on C_3
  for (const auto& g : enumerate_group(GroupSpec::g_cube(3)))
    for (const auto& x : SignVector::all(3)) {
      RatVec xv;
      for (int c : x.to_ints()) xv.push_back(make_rational(c));
      RatMatrix xxt(3, 3);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) xxt.at(i, j) = xv[i] * xv[j];
      RatVec gx = g.act(xv);
      RatMatrix gxxt(3, 3);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) gxxt.at(i, j) = gx[i] * gx[j];
      CHECK(act_on_symmetric(g, xxt) == gxxt);
    }
}

TEST_CASE("orbits") {
  RatVec ones3 = rvec({1, 1, 1});
  auto orb = orbit(GroupSpec::g_cube(3), ones3);
  CHECK(orb.size() == 8);

  RatVec ones4 = rvec({1, 1, 1, 1});
  auto orb_even = orbit(GroupSpec::g_parity(4), ones4);
  CHECK(orb_even.size() == 8);
  for (const auto& p : orb_even) {
    int negs = 0;
    for (const auto& c : p) negs += (c < 0);
    CHECK(negs % 2 == 0);
  }

  CHECK(orbit(GroupSpec::symmetric(4), ones4) == std::vector<RatVec>{ones4});

  // deterministic ordering + witnesses map to their points
  auto pts = orbit_with_witnesses(GroupSpec::g_parity(4), ones4);
  for (size_t i = 1; i < pts.size(); ++i) CHECK(pts[i - 1].point < pts[i].point);
  for (const auto& p : pts) CHECK(p.witness.act(ones4) == p.point);

  // orbit closure: G_parity maps EVEN_4 into itself
  for (const auto& g : enumerate_group(GroupSpec::g_parity(4)))
    for (const auto& x : SignVector::all_even(4)) CHECK(g.act(x).even_parity());
}

TEST_CASE("stabilizers") {
  CHECK(enumerate_group(stabilizer(GroupSpec::g_cube(3), rvec({1, 1, 1}))).size() == 6);
  CHECK(enumerate_group(stabilizer(GroupSpec::g_parity(4), rvec({1, 1, 1, 1}))).size() == 24);
  CHECK(enumerate_group(stabilizer(GroupSpec::n_parity(4), rvec({1, 1, 1, 1}))).size() == 1);
}

TEST_CASE("semidirect decomposition of G_parity") {
  for (int n = 2; n <= 4; ++n) {
    auto sym = enumerate_group(GroupSpec::symmetric(n));
    auto nparity = enumerate_group(GroupSpec::n_parity(n));
    std::set<SignedPermutation> seen;
    for (const auto& eps : nparity)
      for (const auto& h : sym) CHECK(seen.insert(eps * h).second);  // unique product
    CHECK(seen.size() == enumerate_group(GroupSpec::g_parity(n)).size());
  }
}

TEST_CASE("annihilator operators") {
  // (id+eps_3) x_{1,2} = 2 x_{1,2} on C_3
  auto x12 = CubeFunction::monomial(SubsetMask::from_indices({1, 2}, 3));
  auto r = annihilator_apply({SignedPermutation::sign_flip(3, {3})}, x12);
  CHECK(r == x12.scaled(make_rational(2)));

  // (id+eps_3) x_{1,3} = 0
  auto x13 = CubeFunction::monomial(SubsetMask::from_indices({1, 3}, 3));
  CHECK(annihilator_apply({SignedPermutation::sign_flip(3, {3})}, x13).is_zero());

  // prod_{i=k+2..n} (id+eps_{k+1,i}) e_{1..k} = 2^{n-k-1} e_{1..k} on EVEN_6, k=2
  int n = 6, k = 2;
  auto target = EvenFunction::basis_element(SubsetMask::from_indices({1, 2}, n));
  std::vector<SignedPermutation> ops;
  for (int i = k + 2; i <= n; ++i) ops.push_back(SignedPermutation::sign_flip(n, {k + 1, i}));
  CHECK(annihilator_apply(ops, target) == target.scaled(make_rational(8)));

  // operators commute: permuted order gives identical output
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    auto shuffled = ops;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(annihilator_apply(shuffled, target) == annihilator_apply(ops, target));
  }

  // single flip on the Even domain violates parity
  auto f = EvenFunction::basis_element(SubsetMask::from_indices({1}, 4));
  CHECK_THROWS(annihilator_apply({SignedPermutation::sign_flip(4, {2})}, f));
}

TEST_CASE("orthogonalize_representation") {
  // already-orthogonal rep stays orthogonal
  auto spec = GroupSpec::dihedral8();
  MatrixRepresentation rep;
  rep.spec = spec;
  rep.dimension = 2;
  for (const auto& g : spec.generators) rep.generator_images.push_back(g.matrix_double());
  auto res = orthogonalize_representation(rep);
  CHECK(res.orthogonality_defect < 1e-12);

  // conjugated rep comes back orthogonal within 1e-10
  std::mt19937_64 rng(97);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXd S(2, 2);
    do {
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) S(i, j) = gauss(rng);
    } while (std::abs(S.determinant()) < 0.1);
    MatrixRepresentation conj = rep;
    for (auto& m : conj.generator_images) m = S * m * S.inverse();
    auto r2 = orthogonalize_representation(conj);
    CHECK(r2.orthogonality_defect <= 1e-10);
  }

  // 1-dimensional sign representation of S_2
  MatrixRepresentation sgn;
  sgn.spec = GroupSpec::symmetric(2);
  sgn.dimension = 1;
  sgn.generator_images.push_back(-Eigen::MatrixXd::Identity(1, 1));
  auto r3 = orthogonalize_representation(sgn);
  CHECK(r3.orthogonality_defect < 1e-14);

  // a non-homomorphism assignment is rejected
  MatrixRepresentation bad;
  bad.spec = GroupSpec::symmetric(3);
  bad.dimension = 1;
  bad.generator_images = {Eigen::MatrixXd::Constant(1, 1, 2.0),
                          Eigen::MatrixXd::Constant(1, 1, 1.0)};
  CHECK_THROWS(materialize(bad));
}

TEST_CASE("orbit and enumeration caps") {
  RatVec ones(8, make_rational(1));
  CHECK_THROWS_WITH_AS(orbit(GroupSpec::g_cube(8), ones, 100), doctest::Contains("cap"), Error);
  CHECK_THROWS_WITH_AS(enumerate_group(GroupSpec::g_cube(8), 1000), doctest::Contains("cap"),
                       Error);
}
