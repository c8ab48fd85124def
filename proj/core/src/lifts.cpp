#include "orbitope/lifts.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "orbitope/invariants.hpp"

namespace orbitope {

namespace {

Rational ratdot(const RatMatrix& a, const RatMatrix& b) {
  Rational s;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (a.at(i, j) != 0 && b.at(i, j) != 0) s += a.at(i, j) * b.at(i, j);
  return s;
}

/// Plain coordinates of a symmetric matrix: diagonal then upper off-diagonal.
RatVec sym_coords(const RatMatrix& m) {
  const int d = m.rows();
  RatVec v;
  v.reserve(d * (d + 1) / 2);
  for (int i = 0; i < d; ++i) v.push_back(m.at(i, i));
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) v.push_back(m.at(i, j));
  return v;
}

/// Row of the pairing <N, .> in plain coordinates (off-diagonals doubled).
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

void require_symmetric(const RatMatrix& m, const char* what) {
  if (!m.is_symmetric()) throw Error(std::string(what) + ": matrix not symmetric");
}

SignVector sign_vector_from(const RatVec& x) {
  SignVector s{0, static_cast<int>(x.size())};
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 1) continue;
    if (x[i] == -1)
      s.neg_mask |= (1u << i);
    else
      throw Error("expected a point of {-1,1}^n");
  }
  return s;
}

}  // namespace

void PsdLiftSpec::validate() const {
  if (d < 1) throw Error("PsdLiftSpec: d must be positive");
  if (offset.rows() != d || offset.cols() != d) throw Error("PsdLiftSpec: offset size mismatch");
  require_symmetric(offset, "PsdLiftSpec offset");
  RowEchelon ech(d * (d + 1) / 2);
  for (const auto& b : slice_basis) {
    if (b.rows() != d || b.cols() != d) throw Error("PsdLiftSpec: basis size mismatch");
    require_symmetric(b, "PsdLiftSpec basis");
    if (!ech.insert(sym_coords(b))) throw Error("PsdLiftSpec: slice basis linearly dependent");
  }
  for (const auto& p : projection) {
    if (p.rows() != d || p.cols() != d) throw Error("PsdLiftSpec: projection size mismatch");
    require_symmetric(p, "PsdLiftSpec projection");
  }
  if (static_cast<int>(projection.size()) != ambient_dim)
    throw Error("PsdLiftSpec: ambient dimension mismatch");
}

RatVec PsdLiftSpec::project(const RatMatrix& Y) const {
  RatVec out;
  out.reserve(projection.size());
  for (const auto& p : projection) out.push_back(ratdot(p, Y));
  return out;
}

std::map<SignedPermutation, RatMatrix> materialize_exact(const LiftedRep& rep, std::size_t cap) {
  const auto& spec = rep.spec;
  if (rep.generator_images.size() != spec.generators.size())
    throw Error("LiftedRep: one image per generator required");
  for (const auto& m : rep.generator_images)
    if (m.rows() != rep.dimension || m.cols() != rep.dimension)
      throw Error("LiftedRep: image dimension mismatch");
  std::map<SignedPermutation, RatMatrix> images;
  std::vector<SignedPermutation> queue;
  images.emplace(SignedPermutation::identity(spec.ambient_n), RatMatrix::identity(rep.dimension));
  queue.push_back(SignedPermutation::identity(spec.ambient_n));
  while (!queue.empty()) {
    SignedPermutation g = queue.back();
    queue.pop_back();
    RatMatrix mg = images.at(g);
    for (size_t k = 0; k < spec.generators.size(); ++k) {
      SignedPermutation h = spec.generators[k] * g;
      RatMatrix mh = rep.generator_images[k] * mg;
      auto it = images.find(h);
      if (it == images.end()) {
        if (images.size() + 1 > cap) throw Error("materialize_exact: cap exceeded");
        images.emplace(h, std::move(mh));
        queue.push_back(h);
      } else if (!(it->second == mh)) {
        throw Error("LiftedRep: generator images do not extend to a homomorphism");
      }
    }
  }
  return images;
}

MatrixRepresentation to_double(const LiftedRep& rep) {
  MatrixRepresentation out;
  out.spec = rep.spec;
  out.dimension = rep.dimension;
  for (const auto& m : rep.generator_images) out.generator_images.push_back(m.to_double());
  return out;
}

SliceEquations slice_to_equations(const PsdLiftSpec& lift) {
  const int d = lift.d;
  const int D = d * (d + 1) / 2;
  RatMatrix rows(static_cast<int>(lift.slice_basis.size()), D);
  for (size_t j = 0; j < lift.slice_basis.size(); ++j) {
    RatVec r = pairing_row(lift.slice_basis[j]);
    for (int t = 0; t < D; ++t) rows.at(static_cast<int>(j), t) = r[t];
  }
  SliceEquations eq;
  for (const auto& x : nullspace(rows)) {
    RatMatrix N = sym_from_coords(x, d);
    eq.rhs.push_back(ratdot(N, lift.offset));
    eq.lhs.push_back(std::move(N));
  }
  return eq;
}

std::pair<RatMatrix, std::vector<RatMatrix>> equations_to_slice(const SliceEquations& eq, int d) {
  const int D = d * (d + 1) / 2;
  RatMatrix A(static_cast<int>(eq.lhs.size()), D);
  for (size_t l = 0; l < eq.lhs.size(); ++l) {
    RatVec r = pairing_row(eq.lhs[l]);
    for (int t = 0; t < D; ++t) A.at(static_cast<int>(l), t) = r[t];
  }
  auto part = solve_linear(A, eq.rhs);
  if (!part) throw Error("equations_to_slice: inconsistent equations");
  std::vector<RatMatrix> basis;
  for (const auto& v : nullspace(A)) basis.push_back(sym_from_coords(v, d));
  return {sym_from_coords(*part, d), std::move(basis)};
}

EquivarianceVerdict verify_equivariance(const PsdLiftSpec& lift, const LiftedRep& rep,
                                        const GroupSpec& spec, std::size_t cap) {
  lift.validate();
  if (rep.dimension != lift.d) throw Error("verify_equivariance: rep dimension mismatch");
  if (spec.ambient_n != lift.ambient_dim)
    throw Error("verify_equivariance: group dimension mismatch");
  auto images = materialize_exact(rep, cap);

  RowEchelon span(lift.d * (lift.d + 1) / 2);
  for (const auto& b : lift.slice_basis) span.insert(sym_coords(b));

  EquivarianceVerdict out;
  for (const auto& [g, R] : images) {
    RatMatrix Rt = R.transpose();
    // (i) congruence stabilizes the slice
    if (!span.contains(sym_coords(R * lift.offset * Rt - lift.offset))) {
      out.witness = g;
      out.detail = "condition (i): congruence moves the offset off the slice";
      return out;
    }
    bool basis_ok = true;
    for (const auto& b : lift.slice_basis)
      if (!span.contains(sym_coords(R * b * Rt))) {
        basis_ok = false;
        break;
      }
    if (!basis_ok) {
      out.witness = g;
      out.detail = "condition (i): congruence does not stabilize the slice span";
      return out;
    }
    // (ii) the projection intertwines the actions; linear identity on the slice
    auto intertwines_at = [&](const RatMatrix& Y) {
      return lift.project(R * Y * Rt) == g.act(lift.project(Y));
    };
    if (!intertwines_at(lift.offset)) {
      out.witness = g;
      out.detail = "condition (ii): projection fails to intertwine at the offset";
      return out;
    }
    for (const auto& b : lift.slice_basis)
      if (!intertwines_at(lift.offset + b)) {
        out.witness = g;
        out.detail = "condition (ii): projection fails to intertwine on the slice";
        return out;
      }
  }
  out.equivariant = true;
  out.detail = "equivariant for all " + std::to_string(images.size()) + " group elements";
  return out;
}

namespace {

RatMatrix sym_unit_rat(int d, int i, int j) {
  RatMatrix m(d, d);
  if (i == j)
    m.at(i, i) = 1;
  else {
    m.at(i, j) = 1;
    m.at(j, i) = 1;
  }
  return m;
}

}  // namespace

PsdLiftSpec square_lift_fixture() {
  PsdLiftSpec lift;
  lift.d = 3;
  lift.ambient_dim = 2;
  lift.offset = RatMatrix::identity(3);
  lift.slice_basis = {sym_unit_rat(3, 0, 1), sym_unit_rat(3, 0, 2), sym_unit_rat(3, 1, 2)};
  lift.projection = {sym_unit_rat(3, 0, 1).scaled(make_rational(1, 2)),
                     sym_unit_rat(3, 0, 2).scaled(make_rational(1, 2))};
  return lift;
}

LiftedRep square_lift_rep() {
  LiftedRep rep;
  rep.spec = GroupSpec::dihedral8();
  rep.dimension = 3;
  for (const auto& g : rep.spec.generators) {
    RatMatrix m(3, 3);
    m.at(0, 0) = 1;
    RatMatrix gm = g.matrix();
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m.at(i + 1, j + 1) = gm.at(i, j);
    rep.generator_images.push_back(std::move(m));
  }
  return rep;
}

PsdLiftSpec hyperboloid_lift_fixture() {
  // Blocks [[x1,y],[y,x2]], [[x3,z],[z,1]], [[y,1],[1,z]] packed on the
  // diagonal of a 6x6 slice; cross-block entries pinned to zero.
  PsdLiftSpec lift;
  lift.d = 6;
  lift.ambient_dim = 3;
  lift.offset = RatMatrix(6, 6);
  lift.offset.at(3, 3) = 1;
  lift.offset.at(4, 5) = 1;
  lift.offset.at(5, 4) = 1;
  RatMatrix by = sym_unit_rat(6, 0, 1) + sym_unit_rat(6, 4, 4);
  RatMatrix bz = sym_unit_rat(6, 2, 3) + sym_unit_rat(6, 5, 5);
  lift.slice_basis = {sym_unit_rat(6, 0, 0), sym_unit_rat(6, 1, 1), sym_unit_rat(6, 2, 2), by, bz};
  lift.projection = {sym_unit_rat(6, 0, 0), sym_unit_rat(6, 1, 1), sym_unit_rat(6, 2, 2)};
  return lift;
}

LiftedRep hyperboloid_swap12_rep() {
  LiftedRep rep;
  rep.spec = GroupSpec::custom(3, {SignedPermutation::transposition(3, 1, 2)});
  rep.dimension = 6;
  RatMatrix m(6, 6);
  m.at(0, 1) = 1;
  m.at(1, 0) = 1;
  for (int i = 2; i < 6; ++i) m.at(i, i) = 1;
  rep.generator_images.push_back(std::move(m));
  return rep;
}

LiftedRep hyperboloid_s3_block_rep() {
  LiftedRep rep;
  rep.spec = GroupSpec::symmetric(3);
  rep.dimension = 6;
  for (const auto& g : rep.spec.generators) {
    // permute the three 2x2 blocks the way g permutes coordinates
    RatMatrix m(6, 6);
    for (int blk = 0; blk < 3; ++blk) {
      int target = g.perm()[blk];
      for (int r = 0; r < 2; ++r) m.at(2 * target + r, 2 * blk + r) = 1;
    }
    rep.generator_images.push_back(std::move(m));
  }
  return rep;
}

PsdLiftSpec lp_lift_to_psd(const LpLiftSpec& lp) {
  // Diagonal embedding: the slice is the set of diagonal matrices whose
  // diagonal lies in L, so offset and basis are diagonal copies and the
  // off-diagonal entries are pinned to zero by the span itself.
  PsdLiftSpec out;
  out.d = lp.m;
  out.ambient_dim = lp.ambient_dim;
  out.offset = RatMatrix(lp.m, lp.m);
  for (int i = 0; i < lp.m; ++i) out.offset.at(i, i) = lp.offset[i];
  for (const auto& dir : lp.basis) {
    RatMatrix b(lp.m, lp.m);
    for (int i = 0; i < lp.m; ++i) b.at(i, i) = dir[i];
    out.slice_basis.push_back(std::move(b));
  }
  for (const auto& row : lp.projection_rows) {
    RatMatrix p(lp.m, lp.m);
    for (int i = 0; i < lp.m; ++i) p.at(i, i) = row[i];
    out.projection.push_back(std::move(p));
  }
  return out;
}

LiftedRep lp_rep_to_psd(const GroupSpec& spec, const std::vector<SignedPermutation>& theta_perms,
                        int m) {
  if (theta_perms.size() != spec.generators.size())
    throw Error("lp_rep_to_psd: one permutation per generator required");
  LiftedRep rep;
  rep.spec = spec;
  rep.dimension = m;
  for (const auto& t : theta_perms) {
    if (t.ambient_n() != m || t.flipped_count() != 0)
      throw Error("lp_rep_to_psd: theta must be an unsigned permutation of the LP coordinates");
    rep.generator_images.push_back(t.matrix());
  }
  return rep;
}

LpLiftSpec l1_ball_lp_lift(int n) {
  LpLiftSpec lp;
  lp.m = 2 * n;
  lp.ambient_dim = n;
  lp.offset.assign(lp.m, make_rational(1, 2 * n));
  for (int j = 0; j + 1 < lp.m; ++j) {
    RatVec dir(lp.m, Rational(0));
    dir[j] = 1;
    dir[lp.m - 1] = -1;
    lp.basis.push_back(std::move(dir));
  }
  for (int i = 0; i < n; ++i) {
    RatVec row(lp.m, Rational(0));
    row[i] = 1;
    row[n + i] = -1;
    lp.projection_rows.push_back(std::move(row));
  }
  return lp;
}

LpLiftSpec segment_lp_lift() {
  LpLiftSpec lp;
  lp.m = 2;
  lp.ambient_dim = 1;
  lp.offset = {make_rational(1, 2), make_rational(1, 2)};
  lp.basis = {{make_rational(1), make_rational(-1)}};
  lp.projection_rows = {{make_rational(1), Rational(0)}};
  return lp;
}

LpLiftSpec parity_dp_lp_lift(int n) {
  if (n < 3) throw Error("parity_dp_lp_lift: n >= 3 required");
  // Variables: x_1..x_n then the chaining variables z_2..z_{n-2} (for n >= 4).
  const int nz = std::max(0, n - 3);
  const int nv = n + nz;
  std::vector<std::array<int, 3>> blocks;
  if (n == 3) {
    blocks.push_back({0, 1, 2});
  } else {
    blocks.push_back({0, 1, n});
    for (int i = 2; i <= n - 3; ++i) blocks.push_back({n + (i - 2), i, n + (i - 1)});
    blocks.push_back({n + nz - 1, n - 2, n - 1});
  }
  const int facets[4][3] = {{1, 1, -1}, {1, -1, 1}, {-1, 1, 1}, {-1, -1, -1}};
  LpLiftSpec lp;
  lp.m = 4 * static_cast<int>(blocks.size());
  lp.ambient_dim = n;
  lp.offset.assign(lp.m, make_rational(1));  // slack values at v = 0
  std::vector<RatVec> cols(nv, RatVec(lp.m, Rational(0)));
  for (size_t b = 0; b < blocks.size(); ++b)
    for (int f = 0; f < 4; ++f)
      for (int t = 0; t < 3; ++t) cols[blocks[b][t]][4 * b + f] -= facets[f][t];
  lp.basis = cols;
  // Projection rows recover the x variables linearly on the slice; within a
  // block the four facet rows of PAR_3 sum to zero, which makes the affine
  // constant expressible.
  RatMatrix sys(1 + nv, lp.m);
  for (int t = 0; t < lp.m; ++t) sys.at(0, t) = lp.offset[t];
  for (int j = 0; j < nv; ++j)
    for (int t = 0; t < lp.m; ++t) sys.at(1 + j, t) = cols[j][t];
  for (int i = 0; i < n; ++i) {
    RatVec rhs(1 + static_cast<size_t>(nv), Rational(0));
    rhs[1 + i] = 1;
    auto p = solve_linear(sys, rhs);
    if (!p) throw Error("parity_dp_lp_lift: projection row not expressible");
    lp.projection_rows.push_back(*p);
  }
  return lp;
}

namespace {

BlockMat to_block(const Eigen::MatrixXd& m) { return BlockMat{{m}}; }

struct FiberSolver {
  const PsdLiftSpec& lift;
  SliceEquations eqs;
  std::vector<BlockMat> base_constraints;
  Eigen::VectorXd base_rhs;

  explicit FiberSolver(const PsdLiftSpec& l) : lift(l), eqs(slice_to_equations(l)) {
    for (size_t i = 0; i < eqs.lhs.size(); ++i)
      base_constraints.push_back(to_block(eqs.lhs[i].to_double()));
    base_rhs.resize(static_cast<Eigen::Index>(eqs.lhs.size()));
    for (size_t i = 0; i < eqs.lhs.size(); ++i) base_rhs(i) = to_double(eqs.rhs[i]);
  }

  FeasibilityReport fiber(const Eigen::VectorXd& x, const SdpOptions& options) const {
    std::vector<BlockMat> A = base_constraints;
    Eigen::VectorXd b(base_rhs.size() + static_cast<Eigen::Index>(lift.projection.size()));
    b.head(base_rhs.size()) = base_rhs;
    for (size_t i = 0; i < lift.projection.size(); ++i) {
      A.push_back(to_block(lift.projection[i].to_double()));
      b(base_rhs.size() + static_cast<Eigen::Index>(i)) = x(static_cast<Eigen::Index>(i));
    }
    return solve_feasibility({lift.d}, A, b, options);
  }
};

Eigen::VectorXd to_vecd(const RatVec& v) {
  Eigen::VectorXd x(v.size());
  for (size_t i = 0; i < v.size(); ++i) x(static_cast<Eigen::Index>(i)) = to_double(v[i]);
  return x;
}

}  // namespace

FeasibilityReport lift_fiber_feasible(const PsdLiftSpec& lift, const Eigen::VectorXd& z,
                                      const SdpOptions& options) {
  lift.validate();
  if (z.size() != lift.ambient_dim) throw Error("lift_fiber_feasible: dimension mismatch");
  FiberSolver fibers(lift);
  return fibers.fiber(z, options);
}

SdpProblem lift_maximization_problem(const PsdLiftSpec& lift, const RatVec& ell) {
  lift.validate();
  if (static_cast<int>(ell.size()) != lift.ambient_dim)
    throw Error("lift_maximization_problem: dimension mismatch");
  FiberSolver fibers(lift);
  SdpProblem prob;
  prob.block_sizes = {lift.d};
  prob.sense = SdpSense::Maximize;
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(lift.d, lift.d);
  for (size_t i = 0; i < ell.size(); ++i) C += to_double(ell[i]) * lift.projection[i].to_double();
  prob.objective = BlockMat{{C}};
  prob.constraints = fibers.base_constraints;
  prob.rhs = fibers.base_rhs;
  return prob;
}

SdpSolution maximize_over_lift(const PsdLiftSpec& lift, const RatVec& ell,
                               const SdpOptions& options) {
  return solve(lift_maximization_problem(lift, ell), options);
}

Factorization factorize_lift(const PsdLiftSpec& lift, const std::optional<GroupSpec>& spec,
                             const std::optional<LiftedRep>& rep, const RatVec& x0,
                             const RatVec& ell, double tau_slack, double tau_psd,
                             const SdpOptions& options) {
  lift.validate();
  if (static_cast<int>(x0.size()) != lift.ambient_dim)
    throw Error("factorize_lift: x0 dimension mismatch");
  if (static_cast<int>(ell.size()) != lift.ambient_dim)
    throw Error("factorize_lift: linear form dimension mismatch");
  if (rep && !spec) throw Error("factorize_lift: a representation requires its group");

  Factorization out;
  std::vector<OrbitPoint> pts;
  if (spec)
    pts = orbit_with_witnesses(*spec, x0);
  else
    pts.push_back(OrbitPoint{x0, SignedPermutation::identity(lift.ambient_dim)});

  FiberSolver fibers(lift);
  auto base = fibers.fiber(to_vecd(x0), options);
  if (base.kind == FeasibilityReport::Kind::Infeasible)
    throw Error("factorize_lift: fiber over x0 is empty (lift does not project onto x0): " +
                base.message);
  if (base.kind == FeasibilityReport::Kind::NumericalFailure)
    throw Error("factorize_lift: fiber solve failed: " + base.message);
  Eigen::MatrixXd A0 = base.Y.blocks[0];

  std::map<SignedPermutation, Eigen::MatrixXd> rho;
  if (rep) {
    if (rep->dimension != lift.d) throw Error("factorize_lift: rep dimension mismatch");
    auto verdict = verify_equivariance(lift, *rep, *spec);
    if (!verdict.equivariant)
      throw Error("factorize_lift: supplied representation is not equivariant (" + verdict.detail +
                  ")");
    for (const auto& [g, m] : materialize_exact(*rep)) rho[g] = m.to_double();
    // Average over the stabilizer of x0 so the orbit extension is well defined.
    auto stab_elements = enumerate_group(stabilizer(*spec, x0));
    Eigen::MatrixXd avg = Eigen::MatrixXd::Zero(lift.d, lift.d);
    for (const auto& h : stab_elements) {
      const Eigen::MatrixXd& R = rho.at(h);
      avg += R * A0 * R.transpose();
    }
    A0 = avg / static_cast<double>(stab_elements.size());
  }

  for (const auto& p : pts) {
    out.points.push_back(to_vecd(p.point));
    if (rep) {
      const Eigen::MatrixXd& R = rho.at(p.witness);
      out.A.push_back(R * A0 * R.transpose());
    } else if (p.point == x0) {
      out.A.push_back(A0);
    } else {
      auto f = fibers.fiber(to_vecd(p.point), options);
      if (f.kind != FeasibilityReport::Kind::StrictlyFeasible &&
          f.kind != FeasibilityReport::Kind::BoundaryFeasible)
        throw Error("factorize_lift: fiber over an orbit point is empty");
      out.A.push_back(f.Y.blocks[0]);
    }
  }

  // B(ell) from the dual slack of the maximization over the lift.
  SdpProblem prob;
  prob.block_sizes = {lift.d};
  prob.sense = SdpSense::Maximize;
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(lift.d, lift.d);
  for (size_t i = 0; i < ell.size(); ++i) C += to_double(ell[i]) * lift.projection[i].to_double();
  prob.objective = to_block(C);
  prob.constraints = fibers.base_constraints;
  prob.rhs = fibers.base_rhs;
  auto sol = solve(prob, options);
  if (sol.status != SdpStatus::Optimal)
    throw Error("factorize_lift: dual solve failed: " + sol.message);
  out.B = sol.S.blocks[0];

  Rational lmax = dot(ell, pts[0].point);
  for (const auto& p : pts) lmax = std::max(lmax, dot(ell, p.point));
  out.ell_max = to_double(lmax);

  out.min_eig_B = to_block(out.B).min_eigenvalue();
  out.min_eig_A = std::numeric_limits<double>::infinity();
  out.max_slack_violation = 0;
  for (size_t i = 0; i < out.points.size(); ++i) {
    double lx = 0;
    for (size_t t = 0; t < ell.size(); ++t) lx += to_double(ell[t]) * out.points[i](t);
    double slack = out.ell_max - lx;
    double val = (out.A[i].array() * out.B.array()).sum();
    out.max_slack_violation = std::max(out.max_slack_violation, std::abs(slack - val));
    out.min_eig_A = std::min(out.min_eig_A, to_block(out.A[i]).min_eigenvalue());
  }
  out.verified = out.max_slack_violation <= tau_slack && out.min_eig_A >= -tau_psd &&
                 out.min_eig_B >= -tau_psd;
  return out;
}

namespace {

struct OrbitDomain {
  Domain domain = Domain::Cube;
  int n = 0;
  std::vector<std::pair<SignVector, SignedPermutation>> points;
};

OrbitDomain classify_orbit(const GroupSpec& group, const RatVec& x0) {
  OrbitDomain od;
  od.n = static_cast<int>(x0.size());
  auto pts = orbit_with_witnesses(group, x0);
  bool all_even = true;
  for (const auto& p : pts) {
    SignVector s = sign_vector_from(p.point);
    all_even = all_even && s.even_parity();
    od.points.push_back({s, p.witness});
  }
  const size_t cube_size = size_t{1} << od.n;
  if (pts.size() == cube_size)
    od.domain = Domain::Cube;
  else if (all_even && pts.size() == cube_size / 2)
    od.domain = Domain::Even;
  else
    throw Error("extract_invariant_subspace: orbit is neither C_n nor EVEN_n");
  return od;
}

}  // namespace

ExtractionResult extract_invariant_subspace_regular(const LiftedRep& rep,
                                                    const GroupSpec& normal_subgroup,
                                                    const RatVec& x0) {
  // Trivial orbit: the function space of a single point is the constants.
  if (orbit(normal_subgroup, x0).size() == 1) {
    ExtractionResult out;
    out.domain = Domain::Cube;
    out.regular_path = true;
    out.cube.ambient_n = static_cast<int>(x0.size());
    out.cube.basis.push_back(CubeFunction::constant(out.cube.ambient_n, make_rational(1)));
    return out;
  }
  OrbitDomain od = classify_orbit(normal_subgroup, x0);
  auto rho = materialize_exact(rep);
  const int d = rep.dimension;
  const int n = od.n;
  const int alpha = alpha_bound(normal_subgroup, d);

  ExtractionResult out;
  out.domain = od.domain;
  out.regular_path = true;
  const Rational inv_size = make_rational(1, static_cast<long>(od.points.size()));

  auto entry_values = [&](int i, int j) {
    std::vector<Rational> vals;
    vals.reserve(od.points.size());
    for (const auto& [x, w] : od.points) vals.push_back(rho.at(w).at(i, j));
    return vals;
  };
  auto interpolate_key = [&](const std::vector<Rational>& vals, std::uint32_t key) -> Rational {
    Rational c;
    for (size_t t = 0; t < od.points.size(); ++t)
      c += vals[t] * od.points[t].first.monomial_value(key);
    c *= inv_size;
    return c;
  };

  if (od.domain == Domain::Cube) {
    out.cube.ambient_n = n;
    RowEchelon ech(1 << n);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        auto vals = entry_values(i, j);
        CoeffMap coeffs;
        for (std::uint32_t key = 0; key < (1u << n); ++key) {
          Rational c = interpolate_key(vals, key);
          if (c != 0) coeffs[key] = c;
        }
        CubeFunction f(n, std::move(coeffs));
        if (!f.is_zero() && ech.insert(coefficient_vector(f)))
          out.cube.basis.push_back(std::move(f));
      }
  } else {
    out.even.ambient_n = n;
    RowEchelon ech(1 << (n - 1));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        auto vals = entry_values(i, j);
        CoeffMap coeffs;
        for (std::uint32_t key = 0; key < (1u << n); ++key) {
          if (!EvenFunction::is_canonical_key(key, n)) continue;
          Rational c = interpolate_key(vals, key);
          if (c != 0) coeffs[key] = c;
        }
        EvenFunction f(n, std::move(coeffs));
        if (!f.is_zero() && ech.insert(coefficient_vector(f)))
          out.even.basis.push_back(std::move(f));
      }
  }
  if (out.dimension() > alpha * d)
    throw Error("extract_invariant_subspace: regular-path dimension exceeds alpha * d");
  InvarianceVerdict inv = (od.domain == Domain::Cube) ? invariance_check(out.cube, rep.spec)
                                                      : invariance_check(out.even, rep.spec);
  if (!inv.invariant)
    throw Error("extract_invariant_subspace: extracted span is not invariant under the group");
  return out;
}

PsdLiftSpec conjugate_lift(const PsdLiftSpec& lift, const RatMatrix& Q) {
  auto Qinv = inverse(Q);
  if (!Qinv) throw Error("conjugate_lift: Q is singular");
  PsdLiftSpec out;
  out.d = lift.d;
  out.ambient_dim = lift.ambient_dim;
  RatMatrix Qt = Q.transpose();
  RatMatrix Qinvt = Qinv->transpose();
  out.offset = Q * lift.offset * Qt;
  for (const auto& b : lift.slice_basis) out.slice_basis.push_back(Q * b * Qt);
  for (const auto& p : lift.projection) out.projection.push_back(Qinvt * p * (*Qinv));
  return out;
}

ExtractionResult extract_invariant_subspace_general(const PsdLiftSpec& lift, const LiftedRep& rep,
                                                    const GroupSpec& spec, const RatVec& x0,
                                                    double eigen_gap_tol,
                                                    const SdpOptions& options) {
  lift.validate();
  if (rep.dimension != lift.d) throw Error("extract_invariant_subspace: rep dimension mismatch");

  // Orthogonal representation required; otherwise conjugate rep and lift.
  bool exactly_orthogonal = true;
  for (const auto& m : rep.generator_images)
    if (!(m * m.transpose() == RatMatrix::identity(rep.dimension))) exactly_orthogonal = false;
  PsdLiftSpec work_lift = lift;
  LiftedRep work_rep = rep;
  if (!exactly_orthogonal) {
    auto ortho = orthogonalize_representation(to_double(rep));
    RatMatrix Q = RatMatrix::from_double(ortho.Q);
    work_lift = conjugate_lift(lift, Q);
    work_rep.generator_images.clear();
    for (const auto& m : ortho.orthogonal_rep.generator_images)
      work_rep.generator_images.push_back(RatMatrix::from_double(m));
  }

  OrbitDomain od = classify_orbit(spec, x0);
  const int d = work_rep.dimension;
  const int n = od.n;

  RatVec zero_ell(lift.ambient_dim, Rational(0));
  Factorization fz = factorize_lift(work_lift, spec, work_rep, x0, zero_ell, 1e-6, 1e-8, options);
  Eigen::MatrixXd Ax0;
  {
    Eigen::VectorXd x0d = to_vecd(x0);
    bool found = false;
    for (size_t i = 0; i < fz.points.size(); ++i)
      if ((fz.points[i] - x0d).norm() < 1e-12) {
        Ax0 = fz.A[i];
        found = true;
        break;
      }
    if (!found) throw Error("extract_invariant_subspace: x0 not found on its own orbit");
  }

  // Eigenspace grouping: gaps at or below the tolerance merge, gaps within
  // 10x of it are ambiguous and reported, larger gaps split.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Ax0);
  Eigen::VectorXd ev = es.eigenvalues();
  double scale = std::max(1.0, std::abs(ev.maxCoeff()));
  std::vector<Eigen::MatrixXd> projectors;
  {
    int start = 0;
    for (int i = 1; i <= d; ++i) {
      double gap = (i == d) ? std::numeric_limits<double>::infinity() : ev(i) - ev(i - 1);
      if (gap > 10 * eigen_gap_tol * scale) {
        Eigen::MatrixXd U = es.eigenvectors().middleCols(start, i - start);
        projectors.push_back(U * U.transpose());
        start = i;
      } else if (gap > eigen_gap_tol * scale) {
        throw Error(
            "extract_invariant_subspace: eigenvalue gap falls inside the grouping tolerance "
            "band; adjust eigen_gap_tol");
      }
    }
  }

  std::map<SignedPermutation, Eigen::MatrixXd> rho_d;
  for (const auto& [g, m] : materialize_exact(work_rep)) rho_d[g] = m.to_double();

  // The span of the entry functions is invariant, and on these domains the
  // grades are irreducible and pairwise non-isomorphic, so the span is the
  // direct sum of the grade components it touches.
  const double inv_size = 1.0 / static_cast<double>(od.points.size());
  std::vector<double> grade_mass((od.domain == Domain::Cube ? n : n / 2) + 1, 0.0);
  double total_mass = 0.0;
  for (const auto& P : projectors) {
    std::vector<Eigen::MatrixXd> conj;
    conj.reserve(od.points.size());
    for (const auto& [x, w] : od.points) {
      const Eigen::MatrixXd& R = rho_d.at(w);
      conj.push_back(R * P * R.transpose());
    }
    for (int k = 0; k < d; ++k)
      for (int l = 0; l < d; ++l)
        for (std::uint32_t key = 0; key < (1u << n); ++key) {
          if (od.domain == Domain::Even && !EvenFunction::is_canonical_key(key, n)) continue;
          double c = 0;
          for (size_t t = 0; t < od.points.size(); ++t)
            c += conj[t](k, l) * od.points[t].first.monomial_value(key);
          c *= inv_size;
          grade_mass[__builtin_popcount(key)] += c * c;
          total_mass += c * c;
        }
  }

  ExtractionResult out;
  out.domain = od.domain;
  out.regular_path = false;
  const double mass_tol = 1e-10 * std::max(total_mass, 1.0);
  for (size_t k = 0; k < grade_mass.size(); ++k)
    if (grade_mass[k] > mass_tol) out.grades_present.push_back(static_cast<int>(k));

  auto keep = [&](int deg) {
    return std::find(out.grades_present.begin(), out.grades_present.end(), deg) !=
           out.grades_present.end();
  };
  if (od.domain == Domain::Cube) {
    out.cube.ambient_n = n;
    for (const auto& f : canonical_basis_cube(n))
      if (keep(f.degree())) out.cube.basis.push_back(f);
  } else {
    out.even.ambient_n = n;
    for (const auto& f : canonical_basis_even(n))
      if (keep(f.degree())) out.even.basis.push_back(f);
  }
  if (out.dimension() > static_cast<long long>(d) * d * d)
    throw Error("extract_invariant_subspace: dimension exceeds d^3");
  InvarianceVerdict inv = (od.domain == Domain::Cube) ? invariance_check(out.cube, spec)
                                                      : invariance_check(out.even, spec);
  if (!inv.invariant)
    throw Error("extract_invariant_subspace: extracted span is not invariant under the group");
  return out;
}

}  // namespace orbitope
