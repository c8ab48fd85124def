#include <doctest.h>

#include <random>

#include "orbitope/function_space.hpp"

using namespace orbitope;

namespace {

SignVector point(std::initializer_list<int> coords) {
  std::uint32_t mask = 0;
  int i = 0;
  for (int c : coords) {
    if (c == -1) mask |= (1u << i);
    ++i;
  }
  return SignVector{mask, i};
}

CubeFunction random_cube_fn(int n, std::mt19937_64& rng, int max_terms = 6) {
  std::uniform_int_distribution<std::uint32_t> mask(0, (1u << n) - 1);
  std::uniform_int_distribution<int> coeff(-5, 5);
  std::uniform_int_distribution<int> nterms(1, max_terms);
  CubeFunction f(n);
  int t = nterms(rng);
  for (int i = 0; i < t; ++i)
    f = f + CubeFunction::monomial(SubsetMask(mask(rng), n), make_rational(coeff(rng)));
  return f;
}

}  // namespace

TEST_CASE("evaluate on cube and even basis elements") {
  // e_{1,2} at (-1,-1,1,1)
  auto e12 = CubeFunction::monomial(SubsetMask::from_indices({1, 2}, 4));
  CHECK(evaluate(e12, point({-1, -1, 1, 1})) == 1);

  // middle-level element (e_{1,2}+e_{3,4})/2 at (1,1,-1,-1) on EVEN_4
  auto b12 = EvenFunction::basis_element(SubsetMask::from_indices({1, 2}, 4));
  CHECK(evaluate(b12, point({1, 1, -1, -1})) == 1);

  // facet function (n-2) + e_n - sum_{i<n} e_i at the all-ones point, n = 8
  int n = 8;
  EvenFunction facet = EvenFunction::constant(n, make_rational(n - 2));
  facet = facet + EvenFunction::basis_element(SubsetMask::from_indices({n}, n));
  for (int i = 1; i < n; ++i)
    facet = facet - EvenFunction::basis_element(SubsetMask::from_indices({i}, n));
  CHECK(evaluate(facet, SignVector{0, n}) == 0);

  CHECK_THROWS(evaluate(b12, point({1, 1, 1, -1})));  // odd parity
  CHECK_THROWS(evaluate(e12, point({1, 1, 1})));      // dimension mismatch
}

TEST_CASE("multiplication rules") {
  // cube: e_1 * e_{1,2} = e_2
  auto e1 = CubeFunction::monomial(SubsetMask::from_indices({1}, 4));
  auto e12 = CubeFunction::monomial(SubsetMask::from_indices({1, 2}, 4));
  CHECK(multiply(e1, e12) == CubeFunction::monomial(SubsetMask::from_indices({2}, 4)));

  // EVEN_4: e_1 * e_{2,3} = e_4  (|I sym J| = 3 > n/2). The middle-level
  // monomial e_{2,3} enters through reduce_to_even, which rewrites it on the
  // canonical key {1,4}.
  auto f1 = EvenFunction::basis_element(SubsetMask::from_indices({1}, 4));
  auto f23 = reduce_to_even(CubeFunction::monomial(SubsetMask::from_indices({2, 3}, 4)));
  CHECK(multiply(f1, f23) == EvenFunction::basis_element(SubsetMask::from_indices({4}, 4)));

  // EVEN_4: e_1 * e_2 = (e_{1,2}+e_{3,4})/2, stored on the canonical key {1,2}
  auto f2 = EvenFunction::basis_element(SubsetMask::from_indices({2}, 4));
  CHECK(multiply(f1, f2) == EvenFunction::basis_element(SubsetMask::from_indices({1, 2}, 4)));

  CHECK_THROWS(multiply(e1, CubeFunction::monomial(SubsetMask::from_indices({1}, 3))));
}

TEST_CASE("canonical bases") {
  auto even3 = canonical_basis_even(3);
  CHECK(even3.size() == 4);  // {1, e_1, e_2, e_3}
  auto even4 = canonical_basis_even(4);
  CHECK(even4.size() == 8);  // 1 + 4 + 3 middle pairs
  auto cube2 = canonical_basis_cube(2);
  CHECK(cube2.size() == 4);
  CHECK(linearly_independent(even4));

  // full rank of the evaluation matrix on EVEN_n
  for (int n = 2; n <= 10; ++n) {
    auto basis = canonical_basis_even(n);
    auto pts = SignVector::all_even(n);
    RatMatrix M(static_cast<int>(basis.size()), static_cast<int>(pts.size()));
    for (size_t i = 0; i < basis.size(); ++i)
      for (size_t j = 0; j < pts.size(); ++j) M.at(i, j) = evaluate(basis[i], pts[j]);
    CHECK(rank(M) == (1 << (n - 1)));
  }
}

TEST_CASE("reduce_to_even") {
  // n=3: x_1 x_2 -> e_3
  auto f = CubeFunction::monomial(SubsetMask::from_indices({1, 2}, 3));
  CHECK(reduce_to_even(f) == EvenFunction::basis_element(SubsetMask::from_indices({3}, 3)));
  // n=4: x_1 x_2 -> middle element keyed {1,2}
  auto g = CubeFunction::monomial(SubsetMask::from_indices({1, 2}, 4));
  CHECK(reduce_to_even(g) == EvenFunction::basis_element(SubsetMask::from_indices({1, 2}, 4)));
  // n=3: x_1 x_2 x_3 -> constant 1
  auto h = CubeFunction::monomial(SubsetMask::from_indices({1, 2, 3}, 3));
  CHECK(reduce_to_even(h) == EvenFunction::constant(3, make_rational(1)));

  // evaluation agrees on every point of EVEN_n
  std::mt19937_64 rng(7);
  for (int n = 2; n <= 9; ++n)
    for (int rep = 0; rep < 10; ++rep) {
      CubeFunction c = random_cube_fn(n, rng);
      EvenFunction e = reduce_to_even(c);
      for (const auto& x : SignVector::all_even(n)) CHECK(evaluate(c, x) == evaluate(e, x));
    }
}

TEST_CASE("graded components") {
  auto f = EvenFunction::constant(5, make_rational(3)) +
           EvenFunction::basis_element(SubsetMask::from_indices({1}, 5), make_rational(2));
  auto g1 = graded_component(f, 1);
  CHECK(g1 == EvenFunction::basis_element(SubsetMask::from_indices({1}, 5), make_rational(2)));

  auto m = CubeFunction::monomial(SubsetMask::from_indices({1, 2, 3}, 4));
  CHECK(graded_component(m, 3) == m);
  CHECK(graded_component(m, 2).is_zero());
  CHECK_THROWS(graded_component(m, 5));

  // components sum back to f
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    CubeFunction c = random_cube_fn(6, rng);
    CubeFunction sum(6);
    for (int k = 0; k <= 6; ++k) sum = sum + graded_component(c, k);
    CHECK(sum == c);
  }
}

TEST_CASE("pointwise consistency of multiply") {
  std::mt19937_64 rng(23);
  for (int n = 2; n <= 8; ++n)
    for (int rep = 0; rep < 5; ++rep) {
      CubeFunction f = random_cube_fn(n, rng), g = random_cube_fn(n, rng);
      CubeFunction fg = multiply(f, g);
      for (const auto& x : SignVector::all(n))
        CHECK(evaluate(fg, x) == evaluate(f, x) * evaluate(g, x));
      EvenFunction fe = reduce_to_even(f), ge = reduce_to_even(g);
      EvenFunction fge = multiply(fe, ge);
      for (const auto& x : SignVector::all_even(n))
        CHECK(evaluate(fge, x) == evaluate(fe, x) * evaluate(ge, x));
    }
}

TEST_CASE("multiplication is commutative and associative") {
  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 30; ++rep) {
    int n = 3 + static_cast<int>(rng() % 6);
    CubeFunction f = random_cube_fn(n, rng), g = random_cube_fn(n, rng), h = random_cube_fn(n, rng);
    CHECK(multiply(f, g) == multiply(g, f));
    CHECK(multiply(multiply(f, g), h) == multiply(f, multiply(g, h)));
    EvenFunction fe = reduce_to_even(f), ge = reduce_to_even(g), he = reduce_to_even(h);
    CHECK(multiply(fe, ge) == multiply(ge, fe));
    CHECK(multiply(multiply(fe, ge), he) == multiply(fe, multiply(ge, he)));
  }
}

TEST_CASE("text round trip") {
  std::mt19937_64 rng(41);
  for (int rep = 0; rep < 25; ++rep) {
    int n = 2 + static_cast<int>(rng() % 7);
    CubeFunction f = random_cube_fn(n, rng);
    CHECK(cube_from_text(to_text(f), n) == f);
    EvenFunction e = reduce_to_even(f);
    CHECK(even_from_text(to_text(e), n) == e);
  }
  CHECK(to_text(CubeFunction(3)) == "0");
  CHECK(cube_from_text("0", 3).is_zero());
  auto f = cube_from_text("-3/2 * x{} + 1 * x{1,3}", 3);
  CHECK(evaluate(f, point({1, 1, 1})) == make_rational(-1, 2));
}

TEST_CASE("zero pruning keeps structural equality") {
  auto a = CubeFunction::monomial(SubsetMask::from_indices({1}, 3));
  auto b = a - a;
  CHECK(b.is_zero());
  CHECK(b == CubeFunction(3));
  CHECK(b.coeffs().empty());
}

TEST_CASE("exhaustive pointwise consistency at the n = 12 cap") {
  std::mt19937_64 rng(1212);
  CubeFunction f = random_cube_fn(12, rng), g = random_cube_fn(12, rng);
  CubeFunction fg = multiply(f, g);
  for (const auto& x : SignVector::all(12))
    REQUIRE(evaluate(fg, x) == evaluate(f, x) * evaluate(g, x));
}

TEST_CASE("middle-level canonical representative contains index 1") {
  CHECK(EvenFunction::canonical_key(0b1100u, 4) == 0b0011u);
  CHECK(EvenFunction::canonical_key(0b0011u, 4) == 0b0011u);
  CHECK(EvenFunction::canonical_key(0b111000u, 6) == 0b000111u);
  CHECK(EvenFunction::is_canonical_key(0b000111u, 6));
  CHECK_FALSE(EvenFunction::is_canonical_key(0b111000u, 6));
}
