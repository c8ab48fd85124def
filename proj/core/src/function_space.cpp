#include "orbitope/function_space.hpp"

#include <algorithm>
#include <sstream>

namespace orbitope {

namespace {

std::uint32_t full_mask(int n) { return (n == 32) ? ~0u : ((1u << n) - 1u); }

void check_mask_range(std::uint32_t bits, int n) {
  if (n < 1 || n > kMaxAmbientN) throw Error("ambient n out of supported range [1,30]");
  if (bits & ~full_mask(n)) throw Error("subset contains an index outside 1..n");
}

void prune(CoeffMap& m) {
  for (auto it = m.begin(); it != m.end();)
    it = (it->second == 0) ? m.erase(it) : std::next(it);
}

/// Ordering used for coefficient vectors: by degree, then by mask value.
template <class KeyPred>
std::vector<std::uint32_t> ordered_keys(int n, KeyPred keep) {
  std::vector<std::uint32_t> keys;
  for (std::uint32_t m = 0; m <= full_mask(n); ++m)
    if (keep(m)) keys.push_back(m);
  std::stable_sort(keys.begin(), keys.end(), [](std::uint32_t a, std::uint32_t b) {
    int pa = __builtin_popcount(a), pb = __builtin_popcount(b);
    return pa != pb ? pa < pb : a < b;
  });
  return keys;
}

}  // namespace

SubsetMask::SubsetMask(std::uint32_t b, int n) : bits(b), ambient_n(n) { check_mask_range(b, n); }

SubsetMask SubsetMask::from_indices(const std::vector<int>& one_based, int n) {
  std::uint32_t b = 0;
  for (int i : one_based) {
    if (i < 1 || i > n) throw Error("subset index outside 1..n");
    b |= (1u << (i - 1));
  }
  return SubsetMask(b, n);
}

int SubsetMask::size() const { return __builtin_popcount(bits); }

SubsetMask SubsetMask::complement() const { return SubsetMask(~bits & full_mask(ambient_n), ambient_n); }

SubsetMask SubsetMask::sym_diff(const SubsetMask& o) const {
  if (ambient_n != o.ambient_n) throw Error("subset ambient dimension mismatch");
  return SubsetMask(bits ^ o.bits, ambient_n);
}

bool SubsetMask::contains(int one_based_index) const {
  return (bits >> (one_based_index - 1)) & 1u;
}

std::vector<int> SubsetMask::indices() const {
  std::vector<int> out;
  for (int i = 0; i < ambient_n; ++i)
    if ((bits >> i) & 1u) out.push_back(i + 1);
  return out;
}

int SignVector::coord(int one_based_index) const {
  return ((neg_mask >> (one_based_index - 1)) & 1u) ? -1 : 1;
}

std::vector<SignVector> SignVector::all(int n) {
  std::vector<SignVector> pts;
  for (std::uint32_t m = 0; m <= full_mask(n); ++m) pts.push_back({m, n});
  return pts;
}

std::vector<SignVector> SignVector::all_even(int n) {
  std::vector<SignVector> pts;
  for (std::uint32_t m = 0; m <= full_mask(n); ++m)
    if ((__builtin_popcount(m) & 1) == 0) pts.push_back({m, n});
  return pts;
}

std::vector<int> SignVector::to_ints() const {
  std::vector<int> v(n);
  for (int i = 1; i <= n; ++i) v[i - 1] = coord(i);
  return v;
}

void CubeFunction::check_n(int n) {
  if (n < 1 || n > kMaxAmbientN) throw Error("ambient n out of supported range [1,30]");
}

CubeFunction::CubeFunction(int n, CoeffMap coeffs) : n_(n), coeffs_(std::move(coeffs)) {
  check_n(n);
  for (const auto& [mask, c] : coeffs_) check_mask_range(mask, n);
  prune(coeffs_);
}

CubeFunction CubeFunction::monomial(const SubsetMask& mask, Rational c) {
  CubeFunction f(mask.ambient_n);
  if (c != 0) f.coeffs_[mask.bits] = std::move(c);
  return f;
}

CubeFunction CubeFunction::constant(int n, Rational c) {
  return monomial(SubsetMask(0, n), std::move(c));
}

int CubeFunction::degree() const {
  int d = 0;
  for (const auto& [mask, c] : coeffs_) d = std::max(d, __builtin_popcount(mask));
  return d;
}

CubeFunction CubeFunction::operator+(const CubeFunction& o) const {
  if (n_ != o.n_) throw Error("function dimension mismatch");
  CubeFunction r = *this;
  for (const auto& [mask, c] : o.coeffs_) r.coeffs_[mask] += c;
  prune(r.coeffs_);
  return r;
}

CubeFunction CubeFunction::operator-(const CubeFunction& o) const { return *this + o.scaled(Rational(-1)); }

CubeFunction CubeFunction::scaled(const Rational& c) const {
  CubeFunction r(n_);
  if (c == 0) return r;
  for (const auto& [mask, v] : coeffs_) r.coeffs_[mask] = v * c;
  return r;
}

void EvenFunction::check_n(int n) {
  if (n < 1 || n > kMaxAmbientN) throw Error("ambient n out of supported range [1,30]");
}

std::uint32_t EvenFunction::canonical_key(std::uint32_t bits, int n) {
  check_mask_range(bits, n);
  const int sz = __builtin_popcount(bits);
  const std::uint32_t comp = ~bits & full_mask(n);
  if (2 * sz < n) return bits;
  if (2 * sz > n) return comp;
  // middle level (n even): pick the representative containing index 1
  return (bits & 1u) ? bits : comp;
}

bool EvenFunction::is_canonical_key(std::uint32_t bits, int n) {
  return canonical_key(bits, n) == bits;
}

EvenFunction::EvenFunction(int n, CoeffMap coeffs) : n_(n), coeffs_(std::move(coeffs)) {
  check_n(n);
  for (const auto& [mask, c] : coeffs_)
    if (!is_canonical_key(mask, n)) throw Error("EvenFunction: non-canonical basis key");
  prune(coeffs_);
}

EvenFunction EvenFunction::basis_element(const SubsetMask& key, Rational c) {
  EvenFunction f(key.ambient_n);
  if (!is_canonical_key(key.bits, key.ambient_n)) throw Error("EvenFunction: non-canonical basis key");
  if (c != 0) f.coeffs_[key.bits] = std::move(c);
  return f;
}

EvenFunction EvenFunction::constant(int n, Rational c) {
  return basis_element(SubsetMask(0, n), std::move(c));
}

int EvenFunction::degree() const {
  int d = 0;
  for (const auto& [mask, c] : coeffs_) d = std::max(d, __builtin_popcount(mask));
  return d;
}

EvenFunction EvenFunction::operator+(const EvenFunction& o) const {
  if (n_ != o.n_) throw Error("function dimension mismatch");
  EvenFunction r = *this;
  for (const auto& [mask, c] : o.coeffs_) r.coeffs_[mask] += c;
  prune(r.coeffs_);
  return r;
}

EvenFunction EvenFunction::operator-(const EvenFunction& o) const { return *this + o.scaled(Rational(-1)); }

EvenFunction EvenFunction::scaled(const Rational& c) const {
  EvenFunction r(n_);
  if (c == 0) return r;
  for (const auto& [mask, v] : coeffs_) r.coeffs_[mask] = v * c;
  return r;
}

Rational evaluate(const CubeFunction& f, const SignVector& x) {
  if (x.n != f.ambient_n()) throw Error("evaluate: dimension mismatch");
  Rational s;
  for (const auto& [mask, c] : f.coeffs()) s += c * x.monomial_value(mask);
  return s;
}

Rational evaluate(const EvenFunction& f, const SignVector& x) {
  if (x.n != f.ambient_n()) throw Error("evaluate: dimension mismatch");
  if (!x.even_parity()) throw Error("evaluate: odd-parity point passed to an EvenFunction");
  // On EVEN_n, x^I = x^{I^c}, so the middle-level element (e_I+e_{I^c})/2
  // evaluates to x^I as well.
  Rational s;
  for (const auto& [mask, c] : f.coeffs()) s += c * x.monomial_value(mask);
  return s;
}

CubeFunction multiply(const CubeFunction& f, const CubeFunction& g) {
  if (f.ambient_n() != g.ambient_n()) throw Error("multiply: dimension mismatch");
  CoeffMap out;
  for (const auto& [mi, ci] : f.coeffs())
    for (const auto& [mj, cj] : g.coeffs()) out[mi ^ mj] += ci * cj;
  return CubeFunction(f.ambient_n(), std::move(out));
}

EvenFunction multiply(const EvenFunction& f, const EvenFunction& g) {
  if (f.ambient_n() != g.ambient_n()) throw Error("multiply: dimension mismatch");
  const int n = f.ambient_n();
  // Products of basis elements reduce by symmetric difference followed by
  // re-canonicalization; this is the three-case multiplication rule, and it
  // also covers middle-level elements since e_I = e_{I^c} pointwise on EVEN_n.
  CoeffMap out;
  for (const auto& [mi, ci] : f.coeffs())
    for (const auto& [mj, cj] : g.coeffs())
      out[EvenFunction::canonical_key(mi ^ mj, n)] += ci * cj;
  return EvenFunction(n, std::move(out));
}

std::vector<CubeFunction> canonical_basis_cube(int n) {
  if (n < 1 || n > kMaxAmbientN) throw Error("ambient n out of supported range [1,30]");
  if (n > 20) throw Error("canonical_basis_cube: basis of size 2^n too large for n > 20");
  std::vector<CubeFunction> basis;
  for (std::uint32_t m : ordered_keys(n, [](std::uint32_t) { return true; }))
    basis.push_back(CubeFunction::monomial(SubsetMask(m, n)));
  return basis;
}

std::vector<EvenFunction> canonical_basis_even(int n) {
  if (n < 1 || n > kMaxAmbientN) throw Error("ambient n out of supported range [1,30]");
  if (n > 21) throw Error("canonical_basis_even: basis of size 2^{n-1} too large for n > 21");
  std::vector<EvenFunction> basis;
  for (std::uint32_t m : ordered_keys(n, [n](std::uint32_t k) { return EvenFunction::is_canonical_key(k, n); }))
    basis.push_back(EvenFunction::basis_element(SubsetMask(m, n)));
  return basis;
}

EvenFunction reduce_to_even(const CubeFunction& f) {
  const int n = f.ambient_n();
  CoeffMap out;
  for (const auto& [mask, c] : f.coeffs()) out[EvenFunction::canonical_key(mask, n)] += c;
  return EvenFunction(n, std::move(out));
}

CubeFunction graded_component(const CubeFunction& f, int k) {
  if (k < 0 || k > f.ambient_n()) throw Error("graded_component: grade out of range");
  CoeffMap out;
  for (const auto& [mask, c] : f.coeffs())
    if (__builtin_popcount(mask) == k) out[mask] = c;
  return CubeFunction(f.ambient_n(), std::move(out));
}

EvenFunction graded_component(const EvenFunction& f, int k) {
  if (k < 0 || k > f.ambient_n() / 2) throw Error("graded_component: grade out of range");
  CoeffMap out;
  for (const auto& [mask, c] : f.coeffs())
    if (__builtin_popcount(mask) == k) out[mask] = c;
  return EvenFunction(f.ambient_n(), std::move(out));
}

int basis_dimension(Domain domain, int n) {
  return domain == Domain::Cube ? (1 << n) : (1 << (n - 1));
}

namespace {

template <class F, class KeyFilter>
RatVec coefficient_vector_impl(const F& f, KeyFilter keep) {
  const int n = f.ambient_n();
  auto keys = ordered_keys(n, keep);
  RatVec v(keys.size(), Rational(0));
  for (size_t i = 0; i < keys.size(); ++i) {
    auto it = f.coeffs().find(keys[i]);
    if (it != f.coeffs().end()) v[i] = it->second;
  }
  return v;
}

}  // namespace

RatVec coefficient_vector(const CubeFunction& f) {
  return coefficient_vector_impl(f, [](std::uint32_t) { return true; });
}

RatVec coefficient_vector(const EvenFunction& f) {
  const int n = f.ambient_n();
  return coefficient_vector_impl(f, [n](std::uint32_t k) { return EvenFunction::is_canonical_key(k, n); });
}

namespace {

std::string term_text(std::uint32_t mask, const Rational& c) {
  std::ostringstream os;
  os << to_string(c) << " * x{";
  bool first = true;
  for (int i = 0; i < 32; ++i)
    if ((mask >> i) & 1u) {
      if (!first) os << ",";
      os << (i + 1);
      first = false;
    }
  os << "}";
  return os.str();
}

std::string map_text(const CoeffMap& coeffs) {
  if (coeffs.empty()) return "0";
  // sorted by degree then mask, matching the coefficient-vector ordering
  std::vector<std::pair<std::uint32_t, Rational>> terms(coeffs.begin(), coeffs.end());
  std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    int pa = __builtin_popcount(a.first), pb = __builtin_popcount(b.first);
    return pa != pb ? pa < pb : a.first < b.first;
  });
  std::string out;
  for (size_t i = 0; i < terms.size(); ++i) {
    if (i) out += " + ";
    out += term_text(terms[i].first, terms[i].second);
  }
  return out;
}

CoeffMap map_from_text(const std::string& text, int n) {
  CoeffMap out;
  std::string t = text;
  if (t.empty()) throw Error("parse: empty function text");
  // split on '+' that separates terms; coefficients carry their own sign
  std::vector<std::string> parts;
  size_t pos = 0;
  while (true) {
    size_t next = t.find(" + ", pos);
    if (next == std::string::npos) {
      parts.push_back(t.substr(pos));
      break;
    }
    parts.push_back(t.substr(pos, next - pos));
    pos = next + 3;
  }
  if (parts.size() == 1) {
    std::string only = parts[0];
    only.erase(std::remove_if(only.begin(), only.end(), ::isspace), only.end());
    if (only == "0") return out;
  }
  for (const auto& part : parts) {
    auto star = part.find('*');
    if (star == std::string::npos) throw Error("parse: term missing '*': " + part);
    auto coeff = parse_rational(part.substr(0, star));
    if (!coeff) throw Error("parse: bad coefficient in term: " + part);
    auto open = part.find('{', star);
    auto close = part.find('}', star);
    if (open == std::string::npos || close == std::string::npos || close < open)
      throw Error("parse: bad subset braces in term: " + part);
    std::vector<int> idx;
    std::string inside = part.substr(open + 1, close - open - 1);
    std::stringstream ss(inside);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      try {
        idx.push_back(std::stoi(item));
      } catch (...) {
        throw Error("parse: bad index '" + item + "' in term: " + part);
      }
    }
    SubsetMask m = SubsetMask::from_indices(idx, n);
    out[m.bits] += *coeff;
  }
  return out;
}

}  // namespace

std::string to_text(const CubeFunction& f) { return map_text(f.coeffs()); }
std::string to_text(const EvenFunction& f) { return map_text(f.coeffs()); }

CubeFunction cube_from_text(const std::string& text, int n) {
  return CubeFunction(n, map_from_text(text, n));
}

EvenFunction even_from_text(const std::string& text, int n) {
  CoeffMap raw = map_from_text(text, n);
  CoeffMap canon;
  for (auto& [mask, c] : raw) {
    if (!EvenFunction::is_canonical_key(mask, n)) throw Error("parse: non-canonical EVEN basis key");
    canon[mask] = c;
  }
  return EvenFunction(n, std::move(canon));
}

namespace {

template <class F>
bool independent_impl(const std::vector<F>& fns) {
  if (fns.empty()) return true;
  RowEchelon ech(static_cast<int>(coefficient_vector(fns.front()).size()));
  for (const auto& f : fns)
    if (!ech.insert(coefficient_vector(f))) return false;
  return true;
}

}  // namespace

bool linearly_independent(const std::vector<CubeFunction>& fns) { return independent_impl(fns); }
bool linearly_independent(const std::vector<EvenFunction>& fns) { return independent_impl(fns); }

}  // namespace orbitope
