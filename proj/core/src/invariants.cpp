#include "orbitope/invariants.hpp"

#include <json.hpp>
#include <random>

namespace orbitope {

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

long long d_parity_threshold(int n, int k) {
  if (k < 1 || 2 * k > n) throw Error("d_parity_threshold: require 1 <= k <= n/2");
  if (n % 2 == 1) return binomial(n, k);
  return std::min(binomial(n, k), binomial(n, n / 2) / 2);
}

int alpha_bound(const GroupSpec& spec, int /*d*/) {
  switch (spec.kind) {
    case GroupKind::NCube:
    case GroupKind::NParity:
      return 1;
    case GroupKind::Custom:
      if (spec.declared_abelian || spec.generators_commute()) return 1;
      throw Error("alpha bound unsupported for non-abelian groups");
    default:
      if (spec.generators_commute()) return 1;
      throw Error("alpha bound unsupported for non-abelian groups");
  }
}

namespace {

/// Dimension of the smallest invariant subspace containing f: closure of
/// span{f} under the generators, exact rank over the rationals.
template <class F>
int orbit_span_dimension(const F& f, const GroupSpec& spec, int full_dim) {
  RowEchelon ech(full_dim);
  std::vector<F> frontier;
  if (ech.insert(coefficient_vector(f))) frontier.push_back(f);
  while (!frontier.empty()) {
    std::vector<F> next;
    for (const auto& fn : frontier)
      for (const auto& g : spec.generators) {
        F im = act_on_function(g, fn);
        if (ech.insert(coefficient_vector(im))) next.push_back(std::move(im));
      }
    frontier = std::move(next);
  }
  return ech.rank();
}

template <class F>
std::vector<F> grade_basis(Domain domain, int n, int k);

template <>
std::vector<CubeFunction> grade_basis<CubeFunction>(Domain, int n, int k) {
  std::vector<CubeFunction> out;
  for (const auto& f : canonical_basis_cube(n))
    if (f.degree() == k) out.push_back(f);
  return out;
}

template <>
std::vector<EvenFunction> grade_basis<EvenFunction>(Domain, int n, int k) {
  std::vector<EvenFunction> out;
  for (const auto& f : canonical_basis_even(n))
    if (f.degree() == k) out.push_back(f);
  return out;
}

template <class F>
IrreducibilityVerdict irreducibility_impl(int k, const GroupSpec& spec, int n, Domain domain,
                                          int random_batch, unsigned seed) {
  auto basis = grade_basis<F>(domain, n, k);
  IrreducibilityVerdict v;
  v.grade_dimension = static_cast<int>(basis.size());
  const int full_dim = basis_dimension(domain, n);
  std::vector<F> candidates = basis;
  std::mt19937_64 rng(seed + 1000003u * static_cast<unsigned>(k));
  std::uniform_int_distribution<int> coeff(-3, 3);
  for (int r = 0; r < random_batch; ++r) {
    F f(n);
    for (const auto& b : basis) f = f + b.scaled(make_rational(coeff(rng)));
    if (!f.is_zero()) candidates.push_back(std::move(f));
  }
  v.checked_elements = static_cast<int>(candidates.size());
  for (const auto& f : candidates) {
    if (orbit_span_dimension(f, spec, full_dim) != v.grade_dimension) {
      v.irreducible = false;
      v.witness = to_text(f);
      return v;
    }
  }
  v.irreducible = true;
  return v;
}

}  // namespace

IrreducibilityVerdict irreducibility_check(int k, const GroupSpec& spec, int n, Domain domain,
                                           int random_batch, unsigned seed) {
  if (n > 12) throw Error("irreducibility_check: n > 12 exceeds the enumeration budget");
  if (domain == Domain::Cube) {
    if (k < 0 || k > n) throw Error("irreducibility_check: grade out of range");
    return irreducibility_impl<CubeFunction>(k, spec, n, domain, random_batch, seed);
  }
  if (k < 0 || 2 * k > n) throw Error("irreducibility_check: grade out of range");
  return irreducibility_impl<EvenFunction>(k, spec, n, domain, random_batch, seed);
}

namespace {

template <class F>
InvarianceVerdict invariance_impl(const Subspace<F>& V, const GroupSpec& spec) {
  InvarianceVerdict out;
  if (V.basis.empty()) {
    out.invariant = true;
    return out;
  }
  RowEchelon ech(static_cast<int>(coefficient_vector(V.basis.front()).size()));
  for (const auto& f : V.basis) ech.insert(coefficient_vector(f));
  for (size_t gi = 0; gi < spec.generators.size(); ++gi)
    for (size_t fi = 0; fi < V.basis.size(); ++fi) {
      F im = act_on_function(spec.generators[gi], V.basis[fi]);
      if (!ech.contains(coefficient_vector(im))) {
        out.invariant = false;
        out.violation = InvarianceViolation{static_cast<int>(gi), static_cast<int>(fi)};
        return out;
      }
    }
  out.invariant = true;
  return out;
}

}  // namespace

InvarianceVerdict invariance_check(const CubeSubspace& V, const GroupSpec& spec) {
  return invariance_impl(V, spec);
}
InvarianceVerdict invariance_check(const EvenSubspace& V, const GroupSpec& spec) {
  return invariance_impl(V, spec);
}

ContainmentVerdict containment_bound_check(const EvenSubspace& V, const GroupSpec& spec, int k) {
  const int n = V.ambient_n;
  ContainmentVerdict out;
  auto inv = invariance_check(V, spec);
  if (!inv.invariant) {
    out.status = ContainmentStatus::NotInvariant;
    out.invariance_violation = inv.violation;
    out.detail = "subspace is not invariant under the supplied generators";
    return out;
  }
  long long threshold = d_parity_threshold(n, k);
  if (V.dimension() >= threshold) {
    out.status = ContainmentStatus::ThresholdNotMet;
    out.detail = "dim V = " + std::to_string(V.dimension()) + " >= D_{n,k} = " + std::to_string(threshold);
    return out;
  }
  for (const auto& f : V.basis)
    if (f.degree() > k - 1) {
      out.status = ContainmentStatus::Failed;
      out.detail = "invariant subspace below threshold contains degree-" +
                   std::to_string(f.degree()) + " element: " + to_text(f);
      return out;
    }
  out.status = ContainmentStatus::Contained;
  out.detail = "V is contained in Pol_{<=" + std::to_string(k - 1) + "}";
  return out;
}

ContainmentVerdict containment_bound_check(const CubeSubspace& V, const GroupSpec& spec, int k) {
  const int n = V.ambient_n;
  ContainmentVerdict out;
  if (k < 1 || 2 * k > n) throw Error("containment_bound_check: require 1 <= k <= n/2");
  auto inv = invariance_check(V, spec);
  if (!inv.invariant) {
    out.status = ContainmentStatus::NotInvariant;
    out.invariance_violation = inv.violation;
    out.detail = "subspace is not invariant under the supplied generators";
    return out;
  }
  long long threshold = binomial(n, k);
  if (V.dimension() >= threshold) {
    out.status = ContainmentStatus::ThresholdNotMet;
    out.detail = "dim V = " + std::to_string(V.dimension()) + " >= C(n,k) = " + std::to_string(threshold);
    return out;
  }
  const std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1u);
  for (const auto& f : V.basis) {
    CoeffMap low, high;
    for (const auto& [mask, c] : f.coeffs()) {
      int deg = __builtin_popcount(mask);
      if (deg <= k - 1)
        low[mask] = c;
      else if (deg >= n - k + 1)
        high[mask ^ full] = c;  // e_n * x^{I} = x^{I^c}
      else {
        out.status = ContainmentStatus::Failed;
        out.detail = "element has middle-degree mass at degree " + std::to_string(deg);
        return out;
      }
    }
    out.splits.push_back(CubeSplit{CubeFunction(n, std::move(low)), CubeFunction(n, std::move(high))});
  }
  out.status = ContainmentStatus::Contained;
  out.detail = "every element splits as g + e_n h with deg <= " + std::to_string(k - 1);
  return out;
}

DecompositionReport decompose(Domain domain, int n, const GroupSpec& spec, int random_batch,
                              unsigned seed) {
  DecompositionReport rep;
  rep.ambient_n = n;
  rep.domain = domain;
  rep.group = spec.name();
  const int top = (domain == Domain::Cube) ? n : n / 2;
  rep.all_irreducible = true;
  for (int k = 0; k <= top; ++k) {
    auto v = irreducibility_check(k, spec, n, domain, random_batch, seed);
    rep.grade_dims.push_back(v.grade_dimension);
    rep.grade_irreducible.push_back(v.irreducible);
    rep.total_dimension += v.grade_dimension;
    if (!v.irreducible) rep.all_irreducible = false;
  }
  return rep;
}

std::string DecompositionReport::to_json(bool pretty) const {
  nlohmann::json j;
  j["ambient_n"] = ambient_n;
  j["domain"] = domain == Domain::Cube ? "cube" : "even";
  j["group"] = group;
  j["grade_dims"] = grade_dims;
  j["total_dimension"] = total_dimension;
  if (!grade_irreducible.empty()) {
    j["grade_irreducible"] = grade_irreducible;
    j["all_irreducible"] = all_irreducible;
  }
  if (!containment_verdicts.empty()) {
    nlohmann::json c = nlohmann::json::object();
    for (const auto& [name, verdict] : containment_verdicts) c[name] = verdict;
    j["containment"] = std::move(c);
  }
  return pretty ? j.dump(2) : j.dump();
}

}  // namespace orbitope
