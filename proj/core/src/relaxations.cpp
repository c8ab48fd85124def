#include "orbitope/relaxations.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace orbitope {

namespace {

RatVec sym_coords(const RatMatrix& m) {
  const int d = m.rows();
  RatVec v;
  v.reserve(d * (d + 1) / 2);
  for (int i = 0; i < d; ++i) v.push_back(m.at(i, i));
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) v.push_back(m.at(i, j));
  return v;
}

RatVec pairing_row(const RatMatrix& m) {
  const int d = m.rows();
  RatVec v;
  v.reserve(d * (d + 1) / 2);
  for (int i = 0; i < d; ++i) v.push_back(m.at(i, i));
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) v.push_back(m.at(i, j) * 2);
  return v;
}

RatMatrix sym_from_coords(const RatVec& v, int d) {
  RatMatrix m(d, d);
  int t = 0;
  for (int i = 0; i < d; ++i) m.at(i, i) = v[t++];
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      m.at(i, j) = v[t];
      m.at(j, i) = v[t];
      ++t;
    }
  return m;
}

std::vector<std::uint32_t> keys_up_to_degree(Domain domain, int n, int k) {
  std::vector<std::uint32_t> keys;
  const std::uint32_t full = (1u << n) - 1u;
  for (std::uint32_t m = 0; m <= full; ++m) {
    if (__builtin_popcount(m) > k) continue;
    if (domain == Domain::Even && !EvenFunction::is_canonical_key(m, n)) continue;
    keys.push_back(m);
  }
  std::stable_sort(keys.begin(), keys.end(), [](std::uint32_t a, std::uint32_t b) {
    int pa = __builtin_popcount(a), pb = __builtin_popcount(b);
    return pa != pb ? pa < pb : a < b;
  });
  return keys;
}

CubeFunction key_fn(std::uint32_t key, int n, const CubeFunction*) {
  return CubeFunction::monomial(SubsetMask(key, n));
}
EvenFunction key_fn(std::uint32_t key, int n, const EvenFunction*) {
  return EvenFunction::basis_element(SubsetMask(key, n));
}

}  // namespace

PseudoExpectation PseudoExpectation::evaluation_at(const SignVector& x, Domain domain,
                                                   int degree_bound) {
  if (domain == Domain::Even && !x.even_parity())
    throw Error("PseudoExpectation: odd-parity point for the Even domain");
  PseudoExpectation E;
  E.ambient_n = x.n;
  E.domain = domain;
  E.degree_bound = degree_bound;
  for (std::uint32_t key : keys_up_to_degree(domain, x.n, degree_bound))
    E.values[key] = x.monomial_value(key);
  return E;
}

PseudoExpectation PseudoExpectation::uniform(Domain domain, int n, int degree_bound) {
  PseudoExpectation E;
  E.ambient_n = n;
  E.domain = domain;
  E.degree_bound = degree_bound;
  for (std::uint32_t key : keys_up_to_degree(domain, n, degree_bound))
    E.values[key] = (key == 0) ? 1 : 0;
  return E;
}

Rational PseudoExpectation::value_of_key(std::uint32_t key) const {
  auto it = values.find(key);
  if (it == values.end())
    throw Error("PseudoExpectation: missing value for a basis element (degree bound too small?)");
  return it->second;
}

void PseudoExpectation::validate() const {
  if (value_of_key(0) != 1) throw Error("PseudoExpectation: E(1) must equal 1");
  for (std::uint32_t key : keys_up_to_degree(domain, ambient_n, degree_bound))
    value_of_key(key);
}

Rational PseudoExpectation::operator()(const CubeFunction& f) const {
  if (domain != Domain::Cube || f.ambient_n() != ambient_n)
    throw Error("PseudoExpectation: domain mismatch");
  Rational s;
  for (const auto& [key, c] : f.coeffs()) s += c * value_of_key(key);
  return s;
}

Rational PseudoExpectation::operator()(const EvenFunction& f) const {
  if (domain != Domain::Even || f.ambient_n() != ambient_n)
    throw Error("PseudoExpectation: domain mismatch");
  Rational s;
  for (const auto& [key, c] : f.coeffs()) s += c * value_of_key(key);
  return s;
}

PseudoExpectation parity_separating_functional(int n) {
  if (n < 3) throw Error("parity_separating_functional: n >= 3 required");
  // Mimics evaluation at p = (1,...,1,-1), which has odd parity; on the
  // middle level the pair average vanishes.
  PseudoExpectation E;
  E.ambient_n = n;
  E.domain = Domain::Even;
  E.degree_bound = n / 2;
  const std::uint32_t last = 1u << (n - 1);
  for (std::uint32_t key : keys_up_to_degree(Domain::Even, n, n / 2)) {
    if (n % 2 == 0 && 2 * __builtin_popcount(key) == n)
      E.values[key] = 0;
    else
      E.values[key] = (key & last) ? -1 : 1;
  }
  return E;
}

EvenFunction parity_facet_function(int n) {
  if (n < 3) throw Error("parity_facet_function: n >= 3 required");
  EvenFunction f = EvenFunction::constant(n, make_rational(n - 2));
  f = f + EvenFunction::basis_element(SubsetMask::from_indices({n}, n));
  for (int i = 1; i < n; ++i)
    f = f - EvenFunction::basis_element(SubsetMask::from_indices({i}, n));
  return f;
}

MomentMatrix moment_matrix(const PseudoExpectation& E, int k) {
  const int n = E.ambient_n;
  if (E.domain == Domain::Even && 2 * k > n) throw Error("moment_matrix: k above n/2");
  E.validate();
  MomentMatrix out;
  out.index_keys = keys_up_to_degree(E.domain, n, k);
  const int d = static_cast<int>(out.index_keys.size());
  out.M = RatMatrix(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) {
      Rational v;
      if (E.domain == Domain::Even) {
        EvenFunction prod = multiply(key_fn(out.index_keys[a], n, (const EvenFunction*)nullptr),
                                     key_fn(out.index_keys[b], n, (const EvenFunction*)nullptr));
        v = E(prod);
      } else {
        CubeFunction prod = multiply(key_fn(out.index_keys[a], n, (const CubeFunction*)nullptr),
                                     key_fn(out.index_keys[b], n, (const CubeFunction*)nullptr));
        v = E(prod);
      }
      out.M.at(a, b) = v;
      out.M.at(b, a) = v;
    }
  return out;
}

SeparationVerdict verify_separation(const PseudoExpectation& E, int k, int n) {
  if (E.domain != Domain::Even) throw Error("verify_separation: Even-domain functional expected");
  SeparationVerdict out;
  MomentMatrix mm = moment_matrix(E, k);
  const int d = static_cast<int>(mm.index_keys.size());
  // Rank-one identity M = v v^T with v_I = E(b_I): stronger than psd, exact.
  RatVec v(d);
  for (int i = 0; i < d; ++i) v[i] = E.value_of_key(mm.index_keys[i]);
  bool rank_one = true;
  for (int i = 0; i < d && rank_one; ++i)
    for (int j = 0; j < d; ++j)
      if (mm.M.at(i, j) != v[i] * v[j]) {
        rank_one = false;
        break;
      }
  out.rank_one_identity = rank_one;
  if (rank_one) {
    out.psd = true;
  } else {
    auto verdict = psd_check_exact(mm.M);
    out.psd = verdict.psd;
    out.psd_witness = verdict.witness;
  }
  out.facet_value = E(parity_facet_function(n));
  out.separates = out.psd && out.facet_value < 0;
  return out;
}

namespace {

template <class F>
ThetaBody build_theta_body_impl(const Subspace<F>& V, const std::vector<SignVector>& X,
                                const std::vector<F>& coords,
                                const std::optional<GroupSpec>& group, Domain domain) {
  if (V.basis.empty()) throw Error("build_theta_body: empty subspace");
  if (X.empty()) throw Error("build_theta_body: empty point set");
  const int n = V.ambient_n;
  const int d = V.dimension();
  for (const auto& x : X)
    if (x.n != n) throw Error("build_theta_body: point dimension mismatch");

  // V must contain the constants (so E(1) = 1 is expressible in the slice).
  {
    RowEchelon ech(static_cast<int>(coefficient_vector(V.basis.front()).size()));
    for (const auto& f : V.basis)
      if (!ech.insert(coefficient_vector(f))) throw Error("build_theta_body: basis dependent");
    F one = F(n) + key_fn(0u, n, (const F*)nullptr);
    if (!ech.contains(coefficient_vector(one)))
      throw Error("build_theta_body: V does not contain the constants");
  }
  // When the coordinates are the n standard ones, X must span R^n.
  if (static_cast<int>(coords.size()) >= n) {
    RatMatrix pts(static_cast<int>(X.size()), n);
    for (size_t t = 0; t < X.size(); ++t)
      for (int i = 1; i <= n; ++i) pts.at(static_cast<int>(t), i - 1) = X[t].coord(i);
    if (rank(pts) < n) throw Error("build_theta_body: X does not span R^n");
  }

  ThetaBody body;
  body.domain = domain;
  body.n = n;
  body.points = X;
  body.lift.d = d;
  body.lift.ambient_dim = static_cast<int>(coords.size());

  // Gram images G_x = v(x) v(x)^T of the evaluation vectors.
  std::vector<RatMatrix> G;
  G.reserve(X.size());
  for (const auto& x : X) {
    RatVec vx(d);
    for (int i = 0; i < d; ++i) vx[i] = evaluate(V.basis[i], x);
    RatMatrix g(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) g.at(i, j) = vx[i] * vx[j];
    G.push_back(std::move(g));
  }
  const Rational invN = make_rational(1, static_cast<long>(X.size()));
  RatMatrix offset(d, d);
  for (const auto& g : G) offset = offset + g;
  body.lift.offset = offset.scaled(invN);
  {
    RowEchelon ech(d * (d + 1) / 2);
    for (size_t t = 1; t < G.size(); ++t) {
      RatMatrix diff = G[t] - G[0];
      if (ech.insert(sym_coords(diff))) body.lift.slice_basis.push_back(std::move(diff));
    }
  }
  // Projection matrices P_i solving <P_i, G_x> = coord_i(x) for all x.
  {
    const int D = d * (d + 1) / 2;
    RatMatrix sys(static_cast<int>(X.size()), D);
    for (size_t t = 0; t < X.size(); ++t) {
      RatVec row = pairing_row(G[t]);
      for (int c = 0; c < D; ++c) sys.at(static_cast<int>(t), c) = row[c];
    }
    for (const auto& coord : coords) {
      RatVec rhs;
      rhs.reserve(X.size());
      for (const auto& x : X) rhs.push_back(evaluate(coord, x));
      auto sol = solve_linear(sys, rhs);
      if (!sol)
        throw Error("build_theta_body: projection not well-defined (coordinate not expressible)");
      body.lift.projection.push_back(sym_from_coords(*sol, d));
    }
  }

  if (group) {
    if (group->ambient_n != n) throw Error("build_theta_body: group dimension mismatch");
    // theta(g): matrix of f -> g.f on the basis of V; rho(g) = theta(g^{-1})^T.
    const int full_dim = static_cast<int>(coefficient_vector(V.basis.front()).size());
    RatMatrix basis_cols(full_dim, d);
    for (int j = 0; j < d; ++j) {
      RatVec cv = coefficient_vector(V.basis[j]);
      for (int r = 0; r < full_dim; ++r) basis_cols.at(r, j) = cv[r];
    }
    LiftedRep rep;
    rep.spec = *group;
    rep.dimension = d;
    for (const auto& g : group->generators) {
      SignedPermutation ginv = g.inverse();
      RatMatrix theta(d, d);
      for (int j = 0; j < d; ++j) {
        F image = act_on_function(ginv, V.basis[j]);
        RatVec cv = coefficient_vector(image);
        auto coordv = solve_linear(basis_cols, cv);
        if (!coordv) throw Error("build_theta_body: V is not invariant under the group");
        for (int i = 0; i < d; ++i) theta.at(i, j) = (*coordv)[i];
      }
      rep.generator_images.push_back(theta.transpose());
    }
    body.rep = std::move(rep);
  }
  return body;
}

}  // namespace

ThetaBody build_theta_body(const CubeSubspace& V, const std::vector<SignVector>& X,
                           const std::vector<CubeFunction>& coords,
                           const std::optional<GroupSpec>& group) {
  return build_theta_body_impl(V, X, coords, group, Domain::Cube);
}

ThetaBody build_theta_body(const EvenSubspace& V, const std::vector<SignVector>& X,
                           const std::vector<EvenFunction>& coords,
                           const std::optional<GroupSpec>& group) {
  return build_theta_body_impl(V, X, coords, group, Domain::Even);
}

ThetaBody theta_body_level(Domain domain, int n, int k, const std::optional<GroupSpec>& group) {
  if (domain == Domain::Even) {
    if (n < 3) throw Error("theta_body_level: Even domain needs n >= 3");
    if (k < 0 || 2 * k > n) throw Error("theta_body_level: level out of range");
    EvenSubspace V{n, {}};
    for (std::uint32_t key : keys_up_to_degree(Domain::Even, n, k))
      V.basis.push_back(EvenFunction::basis_element(SubsetMask(key, n)));
    std::vector<EvenFunction> coords;
    for (int i = 1; i <= n; ++i)
      coords.push_back(EvenFunction::basis_element(SubsetMask::from_indices({i}, n)));
    return build_theta_body(V, SignVector::all_even(n), coords, group);
  }
  if (k < 0 || k > n) throw Error("theta_body_level: level out of range");
  CubeSubspace V{n, {}};
  for (std::uint32_t key : keys_up_to_degree(Domain::Cube, n, k))
    V.basis.push_back(CubeFunction::monomial(SubsetMask(key, n)));
  std::vector<CubeFunction> coords;
  for (int i = 1; i <= n; ++i)
    coords.push_back(CubeFunction::monomial(SubsetMask::from_indices({i}, n)));
  return build_theta_body(V, SignVector::all(n), coords, group);
}

MembershipVerdict theta_body_membership(const Eigen::VectorXd& z, const ThetaBody& body,
                                        const SdpOptions& options) {
  if (z.size() != body.lift.ambient_dim) throw Error("theta_body_membership: dimension mismatch");
  SliceEquations eqs = slice_to_equations(body.lift);
  std::vector<BlockMat> A;
  Eigen::VectorXd b(static_cast<Eigen::Index>(eqs.lhs.size()) + z.size());
  for (size_t i = 0; i < eqs.lhs.size(); ++i) {
    A.push_back(BlockMat{{eqs.lhs[i].to_double()}});
    b(static_cast<Eigen::Index>(i)) = to_double(eqs.rhs[i]);
  }
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    A.push_back(BlockMat{{body.lift.projection[i].to_double()}});
    b(static_cast<Eigen::Index>(eqs.lhs.size()) + i) = z(i);
  }
  auto rep = solve_feasibility({body.lift.d}, A, b, options);
  MembershipVerdict out;
  out.margin = rep.margin;
  out.detail = rep.message;
  switch (rep.kind) {
    case FeasibilityReport::Kind::StrictlyFeasible:
      out.member = true;
      break;
    case FeasibilityReport::Kind::BoundaryFeasible:
      out.member = true;
      out.boundary = true;
      break;
    case FeasibilityReport::Kind::Infeasible:
      out.member = false;
      break;
    case FeasibilityReport::Kind::NumericalFailure:
      throw Error("theta_body_membership: solver failure: " + rep.message);
  }
  return out;
}

ThetaBody build_Qk_cut(int n, int k) {
  if (k < 1 || 2 * k > n) throw Error("build_Qk_cut: require 1 <= k <= n/2");
  auto keys = keys_up_to_degree(Domain::Cube, n, k);
  const int d = static_cast<int>(keys.size());
  std::map<std::uint32_t, int> key_index;
  for (int i = 0; i < d; ++i) key_index[keys[i]] = i;

  ThetaBody body;
  body.domain = Domain::Cube;
  body.n = n;
  body.points = SignVector::all(n);
  body.lift.d = d;
  body.lift.offset = RatMatrix::identity(d);  // y_0 = 1 on the diagonal
  // one basis matrix per nonempty symmetric difference value
  std::map<std::uint32_t, RatMatrix> patterns;
  for (int a = 0; a < d; ++a)
    for (int bidx = 0; bidx < d; ++bidx) {
      std::uint32_t key = keys[a] ^ keys[bidx];
      if (key == 0) continue;
      auto it = patterns.try_emplace(key, RatMatrix(d, d)).first;
      it->second.at(a, bidx) = 1;
    }
  for (auto& [key, m] : patterns) body.lift.slice_basis.push_back(m);
  // projection onto the pairwise moments z_ij
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      int a = key_index.at(1u << (i - 1));
      int bidx = key_index.at(1u << (j - 1));
      RatMatrix p(d, d);
      p.at(a, bidx) = make_rational(1, 2);
      p.at(bidx, a) = make_rational(1, 2);
      body.lift.projection.push_back(std::move(p));
    }
  body.lift.ambient_dim = static_cast<int>(body.lift.projection.size());
  return body;
}

namespace {

template <class F>
SosVerifyResult verify_impl(const SosCertificate<F>& cert, const std::vector<SignVector>& X,
                            double tol) {
  SosVerifyResult out;
  for (const auto& s : cert.summands)
    if (s.scale < 0) {
      out.detail = "negative summand scale";
      return out;
    }
  // span membership, exact
  if (!cert.subspace.basis.empty()) {
    RowEchelon ech(static_cast<int>(coefficient_vector(cert.subspace.basis.front()).size()));
    for (const auto& f : cert.subspace.basis) ech.insert(coefficient_vector(f));
    for (const auto& s : cert.summands)
      if (!s.fn.is_zero() && !ech.contains(coefficient_vector(s.fn))) {
        out.detail = "summand outside the tagged subspace";
        return out;
      }
  } else if (!cert.summands.empty()) {
    out.detail = "summands with an empty subspace tag";
    return out;
  }
  for (const auto& x : X) {
    Rational lhs = evaluate(cert.target, x);
    Rational rhs;
    for (const auto& s : cert.summands) {
      Rational v = evaluate(s.fn, x);
      rhs += s.scale * v * v;
    }
    Rational diff = lhs - rhs;
    bool bad = (tol == 0.0) ? (diff != 0) : (std::abs(to_double(diff)) > tol);
    if (bad) {
      out.violating_point = x;
      out.detail = "pointwise identity fails";
      return out;
    }
  }
  out.ok = true;
  return out;
}

template <class F>
SosSearchOutcome search_impl(const F& target, const Subspace<F>& V,
                             const std::vector<SignVector>& X, const SdpOptions& options) {
  SosSearchOutcome out;
  const int m = V.dimension();
  if (m == 0) throw Error("sos_certificate_search: empty subspace");
  for (const auto& x : X)
    if (evaluate(target, x) < 0)
      throw Error("sos_certificate_search: target is negative on X");

  // Exact presolve of the pointwise Gram constraints <b(x)b(x)^T, Q> = t(x).
  const int D = m * (m + 1) / 2;
  RowEchelon ech(D, /*track=*/true);
  std::vector<size_t> kept;          // indices into X
  std::vector<Rational> kept_rhs;
  std::vector<RatVec> inserted_rhs;  // rhs aligned with echelon insert order
  std::vector<RatVec> bvals;
  bvals.reserve(X.size());
  for (size_t t = 0; t < X.size(); ++t) {
    RatVec bx(m);
    for (int i = 0; i < m; ++i) bx[i] = evaluate(V.basis[i], X[t]);
    bvals.push_back(bx);
  }
  std::vector<Rational> tvals;
  tvals.reserve(X.size());
  for (const auto& x : X) tvals.push_back(evaluate(target, x));

  std::vector<Rational> inserted_t;
  for (size_t t = 0; t < X.size(); ++t) {
    RatVec row;
    row.reserve(D);
    for (int i = 0; i < m; ++i) row.push_back(bvals[t][i] * bvals[t][i]);
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) row.push_back(bvals[t][i] * bvals[t][j] * 2);
    if (ech.contains(row)) {
      auto comb = ech.combination_for(row);
      Rational predicted;
      for (size_t c = 0; c < comb->size(); ++c) predicted += (*comb)[c] * inserted_t[c];
      if (predicted != tvals[t]) {
        // No symmetric Q at all satisfies the constraints: the combination is
        // a separating functional vanishing on all squares from V.
        Rational gap = predicted - tvals[t];
        out.status = SosSearchOutcome::Status::Infeasible;
        out.separating_value = (gap > 0) ? -to_double(gap) : to_double(gap);
        out.detail = "pointwise constraints inconsistent at linear level";
        return out;
      }
      inserted_t.push_back(tvals[t]);  // keep index spaces aligned
      ech.insert(row);                 // no-op rank-wise, consumes an index
    } else {
      ech.insert(row);
      inserted_t.push_back(tvals[t]);
      kept.push_back(t);
      kept_rhs.push_back(tvals[t]);
    }
  }

  std::vector<BlockMat> A;
  Eigen::VectorXd rhs(kept.size());
  for (size_t c = 0; c < kept.size(); ++c) {
    Eigen::VectorXd bx(m);
    for (int i = 0; i < m; ++i) bx(i) = to_double(bvals[kept[c]][i]);
    A.push_back(BlockMat{{(bx * bx.transpose()).eval()}});
    rhs(static_cast<Eigen::Index>(c)) = to_double(kept_rhs[c]);
  }
  auto rep = solve_feasibility({m}, A, rhs, options);
  if (rep.kind == FeasibilityReport::Kind::NumericalFailure) {
    out.status = SosSearchOutcome::Status::NumericalFailure;
    out.detail = rep.message;
    return out;
  }
  if (rep.kind == FeasibilityReport::Kind::Infeasible) {
    out.status = SosSearchOutcome::Status::Infeasible;
    if (rep.farkas) {
      double val = 0;
      for (size_t c = 0; c < kept.size(); ++c)
        val -= (*rep.farkas)(static_cast<Eigen::Index>(c)) * to_double(kept_rhs[c]);
      out.separating_value = val;  // E(target) < 0 with E psd on squares from V
    }
    out.detail = "no Gram matrix exists; separating pseudo-expectation extracted";
    return out;
  }

  // Extract summands by eigendecomposition of the Gram matrix.
  Eigen::MatrixXd Q = rep.Y.blocks[0];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q);
  const double lmax = std::max(1.0, es.eigenvalues().maxCoeff());
  SosCertificate<F> cert;
  cert.target = target;
  cert.subspace = V;
  std::string clamp_note;
  for (int i = 0; i < m; ++i) {
    double lambda = es.eigenvalues()(i);
    if (lambda < -1e-8 * lmax) {
      out.status = SosSearchOutcome::Status::NumericalFailure;
      out.detail = "Gram matrix has a significantly negative eigenvalue";
      return out;
    }
    if (lambda <= 1e-10 * lmax) {
      if (lambda < 0) clamp_note = "; negative eigenvalues clamped";
      continue;
    }
    F fn(V.ambient_n);
    for (int j = 0; j < m; ++j) {
      double cj = es.eigenvectors()(j, i);
      if (cj != 0.0) fn = fn + V.basis[j].scaled(rational_from_double(cj));
    }
    cert.summands.push_back({rational_from_double(lambda), std::move(fn)});
  }
  out.status = SosSearchOutcome::Status::Found;
  out.detail = "certificate found" + clamp_note;
  if constexpr (std::is_same_v<F, CubeFunction>)
    out.cube_cert = std::move(cert);
  else
    out.even_cert = std::move(cert);
  return out;
}

}  // namespace

SosVerifyResult sos_certificate_verify(const CubeSosCertificate& cert,
                                       const std::vector<SignVector>& X, double tol) {
  return verify_impl(cert, X, tol);
}
SosVerifyResult sos_certificate_verify(const EvenSosCertificate& cert,
                                       const std::vector<SignVector>& X, double tol) {
  return verify_impl(cert, X, tol);
}

SosSearchOutcome sos_certificate_search(const CubeFunction& target, const CubeSubspace& V,
                                        const std::vector<SignVector>& X,
                                        const SdpOptions& options) {
  return search_impl(target, V, X, options);
}
SosSearchOutcome sos_certificate_search(const EvenFunction& target, const EvenSubspace& V,
                                        const std::vector<SignVector>& X,
                                        const SdpOptions& options) {
  return search_impl(target, V, X, options);
}

ThetaRankReport theta_rank_probe_parity(int n, int k, const SdpOptions& options, int threads) {
  if (n < 3) throw Error("theta_rank_probe_parity: n >= 3 required");
  if (k < 1 || 2 * k > n) throw Error("theta_rank_probe_parity: level out of range");
  EvenSubspace V{n, {}};
  for (std::uint32_t key : keys_up_to_degree(Domain::Even, n, k))
    V.basis.push_back(EvenFunction::basis_element(SubsetMask(key, n)));
  auto X = SignVector::all_even(n);

  struct Job {
    std::string name;
    EvenFunction target;
  };
  std::vector<Job> jobs;
  // odd-set facets: sum_{A^c} x_i - sum_A x_i <= n-2
  for (std::uint32_t a = 0; a < (1u << n); ++a) {
    if ((__builtin_popcount(a) & 1) == 0) continue;
    EvenFunction f = EvenFunction::constant(n, make_rational(n - 2));
    for (int i = 1; i <= n; ++i) {
      auto e = EvenFunction::basis_element(SubsetMask::from_indices({i}, n));
      f = ((a >> (i - 1)) & 1u) ? f + e : f - e;
    }
    jobs.push_back({"odd_set{" + std::to_string(a) + "}", std::move(f)});
  }
  if (n >= 4) {
    for (int i = 1; i <= n; ++i) {
      auto e = EvenFunction::basis_element(SubsetMask::from_indices({i}, n));
      jobs.push_back({"box_upper{" + std::to_string(i) + "}",
                      EvenFunction::constant(n, make_rational(1)) - e});
      jobs.push_back({"box_lower{" + std::to_string(i) + "}",
                      EvenFunction::constant(n, make_rational(1)) + e});
    }
  }

  ThetaRankReport report;
  report.level = k;
  report.facets.resize(jobs.size());
  threads = std::max(1, threads);
  auto worker = [&](size_t begin, size_t step) {
    for (size_t t = begin; t < jobs.size(); t += step) {
      auto outcome = sos_certificate_search(jobs[t].target, V, X, options);
      FacetProbe probe;
      probe.name = jobs[t].name;
      probe.certified = outcome.status == SosSearchOutcome::Status::Found;
      probe.separating_value = outcome.separating_value;
      report.facets[t] = std::move(probe);
    }
  };
  if (threads == 1) {
    worker(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker, static_cast<size_t>(t), threads);
    for (auto& th : pool) th.join();
  }
  report.exact =
      std::all_of(report.facets.begin(), report.facets.end(), [](const FacetProbe& p) {
        return p.certified;
      });
  return report;
}

ThetaRankReport theta_rank_probe_cube(int n, int k, const SdpOptions& options) {
  if (k < 0 || k > n) throw Error("theta_rank_probe_cube: level out of range");
  CubeSubspace V{n, {}};
  for (std::uint32_t key : keys_up_to_degree(Domain::Cube, n, k))
    V.basis.push_back(CubeFunction::monomial(SubsetMask(key, n)));
  auto X = SignVector::all(n);
  ThetaRankReport report;
  report.level = k;
  for (int i = 1; i <= n; ++i)
    for (int sign : {+1, -1}) {
      CubeFunction target = CubeFunction::constant(n, make_rational(1)) +
                            CubeFunction::monomial(SubsetMask::from_indices({i}, n),
                                                   make_rational(sign));
      auto outcome = sos_certificate_search(target, V, X, options);
      FacetProbe probe;
      probe.name = std::string(sign > 0 ? "box_lower{" : "box_upper{") + std::to_string(i) + "}";
      probe.certified = outcome.status == SosSearchOutcome::Status::Found;
      probe.separating_value = outcome.separating_value;
      report.facets.push_back(std::move(probe));
    }
  report.exact =
      std::all_of(report.facets.begin(), report.facets.end(), [](const FacetProbe& p) {
        return p.certified;
      });
  return report;
}

CubeFunction fold_duplicate(const CubeFunction& f) {
  const int n = f.ambient_n();
  if (n % 2 != 0) throw Error("fold_duplicate: ambient dimension must be even");
  const int m = n / 2;
  const std::uint32_t low_mask = (1u << m) - 1u;
  CoeffMap out;
  for (const auto& [key, c] : f.coeffs()) out[(key & low_mask) ^ (key >> m)] += c;
  return CubeFunction(m, std::move(out));
}

CubeSosCertificate restrict_certificate(const CubeSosCertificate& cert) {
  const int n = cert.target.ambient_n();
  if (n % 2 != 0) throw Error("restrict_certificate: ambient dimension must be even");
  const int m = n / 2;

  // Split-form precondition: no summand carries degree-m terms.
  for (const auto& s : cert.summands)
    for (const auto& [key, c] : s.fn.coeffs())
      if (__builtin_popcount(key) == m)
        throw Error("restrict_certificate: summands not in split form (degree-" +
                    std::to_string(m) + " term present)");

  auto fold = [&](const CubeFunction& f) { return fold_duplicate(f); };

  CubeSosCertificate out;
  out.target = fold(cert.target);
  out.subspace.ambient_n = m;
  {
    RowEchelon ech(1 << m);
    for (const auto& f : cert.subspace.basis) {
      CubeFunction folded = fold(f);
      if (!folded.is_zero() && ech.insert(coefficient_vector(folded)))
        out.subspace.basis.push_back(std::move(folded));
    }
  }
  for (const auto& s : cert.summands) out.summands.push_back({s.scale, fold(s.fn)});

  auto check = verify_impl(out, SignVector::all(m), 1e-6);
  if (!check.ok)
    throw Error("restrict_certificate: restricted certificate fails verification (" +
                check.detail + ")");
  return out;
}

}  // namespace orbitope
