#include "orbitope/group.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace orbitope {

SignedPermutation::SignedPermutation(std::vector<int> perm, std::vector<int> signs)
    : perm_(std::move(perm)), signs_(std::move(signs)) {
  if (perm_.size() != signs_.size()) throw Error("SignedPermutation: size mismatch");
  std::vector<bool> seen(perm_.size(), false);
  for (int p : perm_) {
    if (p < 0 || p >= static_cast<int>(perm_.size()) || seen[p])
      throw Error("SignedPermutation: perm is not a bijection");
    seen[p] = true;
  }
  for (int s : signs_)
    if (s != 1 && s != -1) throw Error("SignedPermutation: signs must be +1/-1");
}

SignedPermutation SignedPermutation::identity(int n) {
  std::vector<int> p(n), s(n, 1);
  for (int i = 0; i < n; ++i) p[i] = i;
  return SignedPermutation(std::move(p), std::move(s));
}

SignedPermutation SignedPermutation::transposition(int n, int i, int j) {
  if (i < 1 || j < 1 || i > n || j > n || i == j) throw Error("transposition: bad indices");
  SignedPermutation g = identity(n);
  std::swap(g.perm_[i - 1], g.perm_[j - 1]);
  return g;
}

SignedPermutation SignedPermutation::sign_flip(int n, const std::vector<int>& flipped) {
  SignedPermutation g = identity(n);
  for (int i : flipped) {
    if (i < 1 || i > n) throw Error("sign_flip: bad index");
    g.signs_[i - 1] = -g.signs_[i - 1];
  }
  return g;
}

int SignedPermutation::sign_parity() const {
  int p = 1;
  for (int s : signs_) p *= s;
  return p;
}

bool SignedPermutation::is_pure_sign() const {
  for (int j = 0; j < ambient_n(); ++j)
    if (perm_[j] != j) return false;
  return true;
}

bool SignedPermutation::is_identity() const {
  return is_pure_sign() && std::all_of(signs_.begin(), signs_.end(), [](int s) { return s == 1; });
}

int SignedPermutation::flipped_count() const {
  return static_cast<int>(std::count(signs_.begin(), signs_.end(), -1));
}

SignedPermutation SignedPermutation::operator*(const SignedPermutation& o) const {
  const int n = ambient_n();
  if (n != o.ambient_n()) throw Error("SignedPermutation: dimension mismatch");
  // (this*o)·x = this·(o·x): perm = this.perm ∘ o.perm,
  // sign at output i: signs_[i] * o.signs_[perm^{-1}(i)].
  std::vector<int> p(n), s(n);
  for (int j = 0; j < n; ++j) p[j] = perm_[o.perm_[j]];
  std::vector<int> inv(n);
  for (int j = 0; j < n; ++j) inv[perm_[j]] = j;
  for (int i = 0; i < n; ++i) s[i] = signs_[i] * o.signs_[inv[i]];
  return SignedPermutation(std::move(p), std::move(s));
}

SignedPermutation SignedPermutation::inverse() const {
  const int n = ambient_n();
  std::vector<int> p(n), s(n);
  for (int j = 0; j < n; ++j) p[perm_[j]] = j;
  for (int j = 0; j < n; ++j) s[j] = signs_[perm_[j]];
  return SignedPermutation(std::move(p), std::move(s));
}

RatMatrix SignedPermutation::matrix() const {
  const int n = ambient_n();
  RatMatrix m(n, n);
  for (int j = 0; j < n; ++j) m.at(perm_[j], j) = signs_[perm_[j]];
  return m;
}

Eigen::MatrixXd SignedPermutation::matrix_double() const {
  const int n = ambient_n();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) m(perm_[j], j) = signs_[perm_[j]];
  return m;
}

RatVec SignedPermutation::act(const RatVec& x) const {
  const int n = ambient_n();
  if (static_cast<int>(x.size()) != n) throw Error("act_on_point: dimension mismatch");
  RatVec y(n);
  for (int j = 0; j < n; ++j) y[perm_[j]] = Rational(signs_[perm_[j]]) * x[j];
  return y;
}

Eigen::VectorXd SignedPermutation::act(const Eigen::VectorXd& x) const {
  const int n = ambient_n();
  if (x.size() != n) throw Error("act_on_point: dimension mismatch");
  Eigen::VectorXd y(n);
  for (int j = 0; j < n; ++j) y(perm_[j]) = signs_[perm_[j]] * x(j);
  return y;
}

SignVector SignedPermutation::act(const SignVector& x) const {
  const int n = ambient_n();
  if (x.n != n) throw Error("act_on_point: dimension mismatch");
  std::uint32_t out = 0;
  for (int j = 0; j < n; ++j) {
    bool neg = (x.neg_mask >> j) & 1u;
    if (signs_[perm_[j]] < 0) neg = !neg;
    if (neg) out |= (1u << perm_[j]);
  }
  return SignVector{out, n};
}

namespace {

/// g·e_I = (prod_{j in I} signs[perm[j]]) e_{perm(I)}.
std::pair<std::uint32_t, int> act_on_monomial(const SignedPermutation& g, std::uint32_t mask) {
  std::uint32_t image = 0;
  int sgn = 1;
  for (int j = 0; j < g.ambient_n(); ++j)
    if ((mask >> j) & 1u) {
      image |= (1u << g.perm()[j]);
      sgn *= g.signs()[g.perm()[j]];
    }
  return {image, sgn};
}

}  // namespace

CubeFunction act_on_function(const SignedPermutation& g, const CubeFunction& f) {
  if (g.ambient_n() != f.ambient_n()) throw Error("act_on_function: dimension mismatch");
  CoeffMap out;
  for (const auto& [mask, c] : f.coeffs()) {
    auto [im, sgn] = act_on_monomial(g, mask);
    out[im] += Rational(sgn) * c;
  }
  return CubeFunction(f.ambient_n(), std::move(out));
}

EvenFunction act_on_function(const SignedPermutation& g, const EvenFunction& f) {
  if (g.ambient_n() != f.ambient_n()) throw Error("act_on_function: dimension mismatch");
  if (g.sign_parity() != 1) throw Error("act_on_function: parity violation on Even domain");
  const int n = f.ambient_n();
  CoeffMap out;
  for (const auto& [mask, c] : f.coeffs()) {
    auto [im, sgn] = act_on_monomial(g, mask);
    out[EvenFunction::canonical_key(im, n)] += Rational(sgn) * c;
  }
  return EvenFunction(n, std::move(out));
}

RatMatrix act_on_symmetric(const SignedPermutation& g, const RatMatrix& X) {
  if (X.rows() != g.ambient_n() || X.cols() != g.ambient_n())
    throw Error("act_on_symmetric: dimension mismatch");
  RatMatrix m = g.matrix();
  return m * X * m.transpose();
}

Eigen::MatrixXd act_on_symmetric(const SignedPermutation& g, const Eigen::MatrixXd& X) {
  if (X.rows() != g.ambient_n() || X.cols() != g.ambient_n())
    throw Error("act_on_symmetric: dimension mismatch");
  Eigen::MatrixXd m = g.matrix_double();
  return m * X * m.transpose();
}

GroupSpec GroupSpec::symmetric(int n) {
  GroupSpec s{GroupKind::SymmetricGroup, n, {}, n <= 2};
  for (int i = 1; i < n; ++i) s.generators.push_back(SignedPermutation::transposition(n, i, i + 1));
  return s;
}

GroupSpec GroupSpec::n_cube(int n) {
  GroupSpec s{GroupKind::NCube, n, {}, true};
  for (int i = 1; i <= n; ++i) s.generators.push_back(SignedPermutation::sign_flip(n, {i}));
  return s;
}

GroupSpec GroupSpec::n_parity(int n) {
  GroupSpec s{GroupKind::NParity, n, {}, true};
  for (int i = 2; i <= n; ++i) s.generators.push_back(SignedPermutation::sign_flip(n, {1, i}));
  return s;
}

GroupSpec GroupSpec::g_cube(int n) {
  GroupSpec s = symmetric(n);
  s.kind = GroupKind::GCube;
  s.declared_abelian = (n == 1);
  s.generators.push_back(SignedPermutation::sign_flip(n, {1}));
  return s;
}

GroupSpec GroupSpec::g_parity(int n) {
  if (n < 2) throw Error("g_parity needs n >= 2");
  GroupSpec s = symmetric(n);
  s.kind = GroupKind::GParity;
  s.declared_abelian = false;
  s.generators.push_back(SignedPermutation::sign_flip(n, {1, 2}));
  return s;
}

GroupSpec GroupSpec::dihedral8() {
  // Symmetries of the square: quarter turn and axis reflection.
  SignedPermutation rot({1, 0}, {-1, 1});  // (x1,x2) -> (-x2,x1)
  SignedPermutation refl = SignedPermutation::transposition(2, 1, 2);
  return GroupSpec{GroupKind::Dihedral8, 2, {rot, refl}, false};
}

GroupSpec GroupSpec::custom(int n, std::vector<SignedPermutation> gens, bool declared_abelian) {
  for (const auto& g : gens)
    if (g.ambient_n() != n) throw Error("custom group: generator dimension mismatch");
  return GroupSpec{GroupKind::Custom, n, std::move(gens), declared_abelian};
}

std::string GroupSpec::name() const {
  switch (kind) {
    case GroupKind::SymmetricGroup: return "s_" + std::to_string(ambient_n);
    case GroupKind::NCube: return "n_cube:" + std::to_string(ambient_n);
    case GroupKind::NParity: return "n_parity:" + std::to_string(ambient_n);
    case GroupKind::GCube: return "g_cube:" + std::to_string(ambient_n);
    case GroupKind::GParity: return "g_parity:" + std::to_string(ambient_n);
    case GroupKind::Dihedral8: return "dihedral8";
    case GroupKind::Custom: return "custom:" + std::to_string(ambient_n);
  }
  return "unknown";
}

bool GroupSpec::generators_commute() const {
  for (size_t i = 0; i < generators.size(); ++i)
    for (size_t j = i + 1; j < generators.size(); ++j)
      if (!(generators[i] * generators[j] == generators[j] * generators[i])) return false;
  return true;
}

std::vector<SignedPermutation> enumerate_group(const GroupSpec& spec, std::size_t cap) {
  std::set<SignedPermutation> seen;
  std::deque<SignedPermutation> queue;
  seen.insert(SignedPermutation::identity(spec.ambient_n));
  queue.push_back(*seen.begin());
  while (!queue.empty()) {
    SignedPermutation g = queue.front();
    queue.pop_front();
    for (const auto& gen : spec.generators) {
      SignedPermutation h = gen * g;
      if (seen.insert(h).second) {
        if (seen.size() > cap) throw Error("enumerate_group: cap exceeded");
        queue.push_back(std::move(h));
      }
    }
  }
  return {seen.begin(), seen.end()};
}

std::vector<RatVec> orbit(const GroupSpec& spec, const RatVec& x0, std::size_t cap) {
  auto pts = orbit_with_witnesses(spec, x0, cap);
  std::vector<RatVec> out;
  out.reserve(pts.size());
  for (auto& p : pts) out.push_back(std::move(p.point));
  return out;
}

std::vector<OrbitPoint> orbit_with_witnesses(const GroupSpec& spec, const RatVec& x0, std::size_t cap) {
  if (static_cast<int>(x0.size()) != spec.ambient_n) throw Error("orbit: dimension mismatch");
  std::map<RatVec, SignedPermutation> seen;
  std::deque<RatVec> queue;
  seen.emplace(x0, SignedPermutation::identity(spec.ambient_n));
  queue.push_back(x0);
  while (!queue.empty()) {
    RatVec x = queue.front();
    queue.pop_front();
    const SignedPermutation gx = seen.at(x);
    for (const auto& gen : spec.generators) {
      RatVec y = gen.act(x);
      if (!seen.count(y)) {
        if (seen.size() + 1 > cap) throw Error("orbit: cap exceeded");
        seen.emplace(y, gen * gx);
        queue.push_back(std::move(y));
      }
    }
  }
  std::vector<OrbitPoint> out;
  out.reserve(seen.size());
  for (auto& [pt, w] : seen) out.push_back(OrbitPoint{pt, w});
  return out;  // map order = lexicographic
}

GroupSpec stabilizer(const GroupSpec& spec, const RatVec& x0, std::size_t cap) {
  auto elements = enumerate_group(spec, cap);
  std::vector<SignedPermutation> stab;
  for (const auto& g : elements)
    if (g.act(x0) == x0) stab.push_back(g);
  GroupSpec out = GroupSpec::custom(spec.ambient_n, std::move(stab));
  return out;
}

namespace {

void require_pure_sign_ops(const std::vector<SignedPermutation>& eps, int n, bool even_domain) {
  for (const auto& e : eps) {
    if (e.ambient_n() != n) throw Error("annihilator_apply: dimension mismatch");
    if (!e.is_pure_sign()) throw Error("annihilator_apply: operator is not a pure sign element");
    if (even_domain && (e.flipped_count() % 2) != 0)
      throw Error("annihilator_apply: parity violation on Even domain");
  }
}

}  // namespace

CubeFunction annihilator_apply(const std::vector<SignedPermutation>& eps, const CubeFunction& f) {
  require_pure_sign_ops(eps, f.ambient_n(), false);
  CubeFunction out = f;
  for (const auto& e : eps) out = out + act_on_function(e, out);
  return out;
}

EvenFunction annihilator_apply(const std::vector<SignedPermutation>& eps, const EvenFunction& f) {
  require_pure_sign_ops(eps, f.ambient_n(), true);
  EvenFunction out = f;
  for (const auto& e : eps) out = out + act_on_function(e, out);
  return out;
}

std::map<SignedPermutation, Eigen::MatrixXd> materialize(const MatrixRepresentation& rep,
                                                         double hom_tol, std::size_t cap) {
  const auto& spec = rep.spec;
  if (rep.generator_images.size() != spec.generators.size())
    throw Error("materialize: one image per generator required");
  for (const auto& m : rep.generator_images)
    if (m.rows() != rep.dimension || m.cols() != rep.dimension)
      throw Error("materialize: image dimension mismatch");

  std::map<SignedPermutation, Eigen::MatrixXd> images;
  std::deque<SignedPermutation> queue;
  images[SignedPermutation::identity(spec.ambient_n)] =
      Eigen::MatrixXd::Identity(rep.dimension, rep.dimension);
  queue.push_back(SignedPermutation::identity(spec.ambient_n));
  while (!queue.empty()) {
    SignedPermutation g = queue.front();
    queue.pop_front();
    const Eigen::MatrixXd mg = images.at(g);
    for (size_t k = 0; k < spec.generators.size(); ++k) {
      SignedPermutation h = spec.generators[k] * g;
      Eigen::MatrixXd mh = rep.generator_images[k] * mg;
      auto it = images.find(h);
      if (it == images.end()) {
        if (images.size() + 1 > cap) throw Error("materialize: cap exceeded");
        images.emplace(std::move(h), std::move(mh));
        queue.push_back(spec.generators[k] * g);
      } else {
        double defect = (it->second - mh).norm();
        double scale = 1.0 + it->second.norm();
        if (defect > hom_tol * scale)
          throw Error("materialize: generator images do not extend to a homomorphism");
      }
    }
  }
  return images;
}

OrthogonalizationResult orthogonalize_representation(const MatrixRepresentation& rep,
                                                     double eig_floor, std::size_t cap) {
  auto images = materialize(rep, 1e-6, cap);
  const int d = rep.dimension;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (const auto& [g, mg] : images) m += mg * mg.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) throw Error("orthogonalize: eigendecomposition failed");
  Eigen::VectorXd ev = es.eigenvalues();
  if (ev.minCoeff() < eig_floor * std::max(1.0, ev.maxCoeff()))
    throw Error("orthogonalize: sum rho rho^T numerically singular (not a representation?)");
  Eigen::VectorXd inv_sqrt = ev.array().rsqrt();
  Eigen::MatrixXd Q = es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().transpose();
  Eigen::MatrixXd Qinv = es.eigenvectors() * ev.array().sqrt().matrix().asDiagonal() *
                         es.eigenvectors().transpose();

  OrthogonalizationResult out;
  out.Q = Q;
  out.orthogonal_rep.spec = rep.spec;
  out.orthogonal_rep.dimension = d;
  for (const auto& gi : rep.generator_images) out.orthogonal_rep.generator_images.push_back(Q * gi * Qinv);

  double defect = 0.0;
  for (const auto& [g, mg] : images) {
    Eigen::MatrixXd r = Q * mg * Qinv;
    defect = std::max(defect, (r * r.transpose() - Eigen::MatrixXd::Identity(d, d)).norm());
  }
  out.orthogonality_defect = defect;
  return out;
}

}  // namespace orbitope
