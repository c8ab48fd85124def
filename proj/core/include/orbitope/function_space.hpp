#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "orbitope/rational.hpp"
#include "orbitope/rational_matrix.hpp"

namespace orbitope {

inline constexpr int kMaxAmbientN = 30;

enum class Domain { Cube, Even };

/// Subset of [n] encoded as a bitmask; bit i stands for index i+1.
struct SubsetMask {
  std::uint32_t bits = 0;
  int ambient_n = 0;

  SubsetMask() = default;
  SubsetMask(std::uint32_t b, int n);
  static SubsetMask from_indices(const std::vector<int>& one_based, int n);

  int size() const;
  SubsetMask complement() const;
  SubsetMask sym_diff(const SubsetMask& o) const;
  bool contains(int one_based_index) const;
  std::vector<int> indices() const;  // one-based, ascending

  auto operator<=>(const SubsetMask&) const = default;
};

/// Point of {-1,1}^n; bit i set means x_{i+1} = -1.
struct SignVector {
  std::uint32_t neg_mask = 0;
  int n = 0;

  int coord(int one_based_index) const;
  bool even_parity() const { return (__builtin_popcount(neg_mask) & 1) == 0; }
  /// Product over the subset: x^I = (-1)^{|I ∩ neg|}.
  int monomial_value(std::uint32_t subset_bits) const {
    return (__builtin_popcount(neg_mask & subset_bits) & 1) ? -1 : 1;
  }
  static std::vector<SignVector> all(int n);
  static std::vector<SignVector> all_even(int n);
  std::vector<int> to_ints() const;

  auto operator<=>(const SignVector&) const = default;
};

using CoeffMap = std::map<std::uint32_t, Rational>;

/// Square-free polynomial function on the hypercube C_n = {-1,1}^n.
class CubeFunction {
 public:
  CubeFunction() = default;
  explicit CubeFunction(int n) : n_(n) { check_n(n); }
  CubeFunction(int n, CoeffMap coeffs);

  static CubeFunction monomial(const SubsetMask& mask, Rational c = Rational(1));
  static CubeFunction constant(int n, Rational c);

  int ambient_n() const { return n_; }
  const CoeffMap& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  int degree() const;

  CubeFunction operator+(const CubeFunction& o) const;
  CubeFunction operator-(const CubeFunction& o) const;
  CubeFunction scaled(const Rational& c) const;
  bool operator==(const CubeFunction& o) const = default;

 private:
  static void check_n(int n);
  int n_ = 0;
  CoeffMap coeffs_;  // zero coefficients pruned
};

/// Function on EVEN_n in the canonical basis: keys I with |I| < n/2, plus for
/// even n the middle-level keys containing index 1, standing for (e_I+e_{I^c})/2.
class EvenFunction {
 public:
  EvenFunction() = default;
  explicit EvenFunction(int n) : n_(n) { check_n(n); }
  EvenFunction(int n, CoeffMap coeffs);  // keys must be canonical

  static EvenFunction basis_element(const SubsetMask& canonical_key, Rational c = Rational(1));
  static EvenFunction constant(int n, Rational c);

  int ambient_n() const { return n_; }
  const CoeffMap& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  int degree() const;

  EvenFunction operator+(const EvenFunction& o) const;
  EvenFunction operator-(const EvenFunction& o) const;
  EvenFunction scaled(const Rational& c) const;
  bool operator==(const EvenFunction& o) const = default;

  /// Canonical key for subset bits (complement / middle-level tie-break).
  static std::uint32_t canonical_key(std::uint32_t bits, int n);
  static bool is_canonical_key(std::uint32_t bits, int n);

 private:
  static void check_n(int n);
  int n_ = 0;
  CoeffMap coeffs_;
};

Rational evaluate(const CubeFunction& f, const SignVector& x);
Rational evaluate(const EvenFunction& f, const SignVector& x);

CubeFunction multiply(const CubeFunction& f, const CubeFunction& g);
EvenFunction multiply(const EvenFunction& f, const EvenFunction& g);

std::vector<CubeFunction> canonical_basis_cube(int n);
std::vector<EvenFunction> canonical_basis_even(int n);

/// Rewrites f modulo x_i^2 = 1 and x^I = x^{I^c}; evaluation agrees on EVEN_n.
EvenFunction reduce_to_even(const CubeFunction& f);

CubeFunction graded_component(const CubeFunction& f, int k);
EvenFunction graded_component(const EvenFunction& f, int k);

/// Coefficient vector in the full canonical basis ordering (by degree, then mask).
RatVec coefficient_vector(const CubeFunction& f);
RatVec coefficient_vector(const EvenFunction& f);
int basis_dimension(Domain domain, int n);

/// Text form: sorted `coefficient * x{i1,i2,...}` terms joined with " + ".
std::string to_text(const CubeFunction& f);
std::string to_text(const EvenFunction& f);
CubeFunction cube_from_text(const std::string& text, int n);
EvenFunction even_from_text(const std::string& text, int n);

/// Linearly independent list of same-domain functions with its grade profile.
template <class F>
struct Subspace {
  int ambient_n = 0;
  std::vector<F> basis;

  int dimension() const { return static_cast<int>(basis.size()); }
  /// Count of basis members by top degree.
  std::map<int, int> grade_profile() const {
    std::map<int, int> p;
    for (const auto& f : basis) p[f.degree()]++;
    return p;
  }
};

using CubeSubspace = Subspace<CubeFunction>;
using EvenSubspace = Subspace<EvenFunction>;

/// Exact rank check that the listed functions are linearly independent.
bool linearly_independent(const std::vector<CubeFunction>& fns);
bool linearly_independent(const std::vector<EvenFunction>& fns);

}  // namespace orbitope
