#include "orbitope/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

namespace orbitope {

BlockMat BlockMat::zeros(const std::vector<int>& sizes) {
  BlockMat m;
  for (int s : sizes) m.blocks.push_back(Eigen::MatrixXd::Zero(s, s));
  return m;
}

BlockMat BlockMat::identity_like(const std::vector<int>& sizes, double scale) {
  BlockMat m;
  for (int s : sizes) m.blocks.push_back(scale * Eigen::MatrixXd::Identity(s, s));
  return m;
}

int BlockMat::total_dim() const {
  int n = 0;
  for (const auto& b : blocks) n += static_cast<int>(b.rows());
  return n;
}

double BlockMat::dot(const BlockMat& o) const {
  double s = 0;
  for (size_t i = 0; i < blocks.size(); ++i) s += (blocks[i].array() * o.blocks[i].array()).sum();
  return s;
}

double BlockMat::norm() const { return std::sqrt(this->dot(*this)); }

double BlockMat::min_eigenvalue() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& b : blocks) {
    if (b.rows() == 0) continue;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b);
    m = std::min(m, es.eigenvalues().minCoeff());
  }
  return blocks.empty() ? 0.0 : m;
}

BlockMat& BlockMat::operator+=(const BlockMat& o) {
  for (size_t i = 0; i < blocks.size(); ++i) blocks[i] += o.blocks[i];
  return *this;
}
BlockMat& BlockMat::operator-=(const BlockMat& o) {
  for (size_t i = 0; i < blocks.size(); ++i) blocks[i] -= o.blocks[i];
  return *this;
}
BlockMat& BlockMat::operator*=(double c) {
  for (auto& b : blocks) b *= c;
  return *this;
}
BlockMat BlockMat::operator+(const BlockMat& o) const {
  BlockMat r = *this;
  r += o;
  return r;
}
BlockMat BlockMat::operator-(const BlockMat& o) const {
  BlockMat r = *this;
  r -= o;
  return r;
}
BlockMat BlockMat::scaled(double c) const {
  BlockMat r = *this;
  r *= c;
  return r;
}
BlockMat BlockMat::transpose_sym() const {
  BlockMat r = *this;
  for (auto& b : r.blocks) b = 0.5 * (b + b.transpose()).eval();
  return r;
}
std::vector<int> BlockMat::sizes() const {
  std::vector<int> s;
  for (const auto& b : blocks) s.push_back(static_cast<int>(b.rows()));
  return s;
}

namespace {

struct Presolved {
  std::vector<int> kept;              // indices of kept constraints
  std::vector<BlockMat> A;
  Eigen::VectorXd b;
  bool inconsistent = false;
  std::string message;
};

Eigen::VectorXd svec(const BlockMat& m) {
  int total = 0;
  for (const auto& b : m.blocks) total += static_cast<int>(b.rows() * (b.rows() + 1) / 2);
  Eigen::VectorXd v(total);
  int t = 0;
  const double r2 = std::sqrt(2.0);
  for (const auto& b : m.blocks)
    for (int i = 0; i < b.rows(); ++i)
      for (int j = i; j < b.cols(); ++j) v(t++) = (i == j) ? b(i, j) : r2 * b(i, j);
  return v;
}

/// Drop linearly dependent constraints; flag inconsistency of dropped rows.
Presolved presolve(const std::vector<BlockMat>& A, const Eigen::VectorXd& b) {
  Presolved out;
  const int m = static_cast<int>(A.size());
  if (m == 0) return out;
  std::vector<Eigen::VectorXd> rows(m);
  for (int i = 0; i < m; ++i) rows[i] = svec(A[i]);
  const int dim = static_cast<int>(rows[0].size());
  Eigen::MatrixXd basis(dim, 0);
  Eigen::VectorXd kept_b(0);
  for (int i = 0; i < m; ++i) {
    Eigen::VectorXd r = rows[i];
    double scale = std::max(1.0, r.norm());
    Eigen::VectorXd coeffs;
    Eigen::VectorXd resid = r;
    if (basis.cols() > 0) {
      coeffs = basis.colPivHouseholderQr().solve(r);
      resid = r - basis * coeffs;
    }
    if (resid.norm() > 1e-10 * scale) {
      basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
      basis.col(basis.cols() - 1) = r;
      kept_b.conservativeResize(kept_b.size() + 1);
      kept_b(kept_b.size() - 1) = b(i);
      out.kept.push_back(i);
      out.A.push_back(A[i]);
    } else {
      // dependent: check right-hand side consistency
      double predicted = basis.cols() > 0 ? kept_b.dot(coeffs) : 0.0;
      if (std::abs(predicted - b(i)) > 1e-7 * std::max(1.0, std::abs(b(i)))) {
        out.inconsistent = true;
        out.message = "constraint " + std::to_string(i) + " inconsistent with prior constraints";
        return out;
      }
    }
  }
  out.b = kept_b;
  return out;
}

struct Cholesky {
  std::vector<Eigen::LLT<Eigen::MatrixXd>> llt;
  bool ok = true;
};

Cholesky factor(const BlockMat& m) {
  Cholesky c;
  for (const auto& b : m.blocks) {
    c.llt.emplace_back(b);
    if (c.llt.back().info() != Eigen::Success) c.ok = false;
  }
  return c;
}

/// Largest step alpha with X + alpha D psd (capped).
double max_step(const BlockMat& X, const BlockMat& D, const Cholesky& chol) {
  double alpha = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < X.blocks.size(); ++k) {
    if (X.blocks[k].rows() == 0) continue;
    Eigen::MatrixXd B = chol.llt[k].matrixL().solve(D.blocks[k]);
    B = chol.llt[k].matrixL().solve(B.transpose()).transpose();
    B = 0.5 * (B + B.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B);
    double lmin = es.eigenvalues().minCoeff();
    if (lmin < -1e-14) alpha = std::min(alpha, -1.0 / lmin);
  }
  return alpha;
}

Eigen::MatrixXd sym_sqrt(const Eigen::MatrixXd& m, bool inverse) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(1e-300);
  Eigen::VectorXd d = ev.array().sqrt();
  if (inverse) d = d.cwiseInverse();
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

/// NT scaling point: W S W = X.
BlockMat nt_scaling(const BlockMat& X, const BlockMat& S) {
  BlockMat W;
  for (size_t k = 0; k < X.blocks.size(); ++k) {
    Eigen::MatrixXd xh = sym_sqrt(X.blocks[k], false);
    Eigen::MatrixXd mid = xh * S.blocks[k] * xh;
    Eigen::MatrixXd mih = sym_sqrt(0.5 * (mid + mid.transpose()), true);
    Eigen::MatrixXd w = xh * mih * xh;
    W.blocks.push_back(0.5 * (w + w.transpose()));
  }
  return W;
}

BlockMat block_inverse(const BlockMat& m) {
  BlockMat r;
  for (const auto& b : m.blocks) {
    Eigen::MatrixXd inv = b.llt().solve(Eigen::MatrixXd::Identity(b.rows(), b.cols()));
    r.blocks.push_back(0.5 * (inv + inv.transpose()));
  }
  return r;
}

BlockMat congruence(const BlockMat& W, const BlockMat& A) {
  BlockMat r;
  for (size_t k = 0; k < W.blocks.size(); ++k) {
    Eigen::MatrixXd m = W.blocks[k] * A.blocks[k] * W.blocks[k];
    r.blocks.push_back(0.5 * (m + m.transpose()));
  }
  return r;
}

}  // namespace

SdpSolution solve(const SdpProblem& problem, const SdpOptions& options) {
  for (int s : problem.block_sizes)
    if (s < 1 || s > kMaxBlockSize) throw Error("sdp: block size outside [1," + std::to_string(kMaxBlockSize) + "]");
  if (static_cast<int>(problem.constraints.size()) > kMaxConstraints)
    throw Error("sdp: constraint count exceeds " + std::to_string(kMaxConstraints));
  if (problem.rhs.size() != static_cast<Eigen::Index>(problem.constraints.size()))
    throw Error("sdp: rhs size mismatch");

  SdpSolution sol;
  // Internal convention: minimize <C,X>. Flip sign for Maximize.
  const double obj_sign = (problem.sense == SdpSense::Maximize) ? -1.0 : 1.0;
  BlockMat C = (problem.sense == SdpSense::FeasibilityOnly)
                   ? BlockMat::zeros(problem.block_sizes)
                   : problem.objective.scaled(obj_sign);

  Presolved pre = presolve(problem.constraints, problem.rhs);
  if (pre.inconsistent) {
    sol.status = SdpStatus::Infeasible;
    sol.message = "presolve: " + pre.message;
    return sol;
  }
  const auto& A = pre.A;
  const Eigen::VectorXd& b = pre.b;
  const int m = static_cast<int>(A.size());
  const int ntot = [&] {
    int t = 0;
    for (int s : problem.block_sizes) t += s;
    return t;
  }();

  // Initial iterates: scaled identities.
  double bscale = (b.size() > 0) ? b.cwiseAbs().maxCoeff() : 0.0;
  double ascale = 1.0;
  for (const auto& Ai : A) ascale = std::max(ascale, Ai.norm());
  double cscale = std::max(1.0, C.norm());
  double xi = std::max({10.0, std::sqrt(static_cast<double>(ntot)), 10 * bscale / ascale});
  double si = std::max({10.0, std::sqrt(static_cast<double>(ntot)), cscale});
  BlockMat X = BlockMat::identity_like(problem.block_sizes, xi);
  BlockMat S = BlockMat::identity_like(problem.block_sizes, si);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);

  auto A_apply = [&](const BlockMat& M) {
    Eigen::VectorXd v(m);
    for (int i = 0; i < m; ++i) v(i) = A[i].dot(M);
    return v;
  };
  auto A_adjoint = [&](const Eigen::VectorXd& w) {
    BlockMat M = BlockMat::zeros(problem.block_sizes);
    for (int i = 0; i < m; ++i) M += A[i].scaled(w(i));
    return M;
  };

  const double bnorm = 1.0 + (b.size() ? b.norm() : 0.0);
  const double cnorm = 1.0 + C.norm();
  bool converged = false;
  std::string failure;

  for (int iter = 0; iter < options.max_iter; ++iter) {
    Eigen::VectorXd rp = b - A_apply(X);
    BlockMat Rd = C - S - A_adjoint(y);
    double mu = X.dot(S) / ntot;
    double pobj = C.dot(X);
    double dobj = b.size() ? b.dot(y) : 0.0;
    double rel_p = rp.size() ? rp.norm() / bnorm : 0.0;
    double rel_d = Rd.norm() / cnorm;
    double rel_gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));

    IterationRecord rec;
    rec.iter = iter;
    rec.mu = mu;
    rec.primal_res = rel_p;
    rec.dual_res = rel_d;
    rec.pobj = pobj;
    rec.dobj = dobj;
    sol.trace.push_back(rec);
    if (options.verbosity > 0)
      std::cerr << "iter " << iter << " mu=" << mu << " rp=" << rel_p << " rd=" << rel_d
                << " pobj=" << pobj << " dobj=" << dobj << "\n";

    if (rel_p <= options.tau_feas && rel_d <= options.tau_feas && rel_gap <= options.tau_gap) {
      converged = true;
      sol.iterations = iter;
      break;
    }
    // Divergence heuristics.
    if (std::abs(pobj) > 1e14 || std::abs(dobj) > 1e14 || !std::isfinite(mu)) {
      failure = (dobj * (b.size() ? 1.0 : 0.0) < -1e13) ? "dual objective diverging"
                                                        : "iterates diverging";
      sol.iterations = iter;
      if (rel_d <= 1e-7 && dobj > 1e13) {
        sol.status = SdpStatus::Infeasible;  // dual unbounded above (min sense)
        sol.message = "dual objective unbounded: primal infeasible";
        sol.y = y;
        sol.S = S;
        sol.Y = X;
        sol.infeasibility_certificate = y;  // improving ray direction
        return sol;
      }
      if (rel_p <= 1e-7 && pobj < -1e13) {
        sol.status = SdpStatus::Unbounded;
        sol.message = "primal objective unbounded below";
        sol.Y = X;
        sol.y = y;
        sol.S = S;
        return sol;
      }
      break;
    }

    Cholesky cholX = factor(X);
    Cholesky cholS = factor(S);
    if (!cholX.ok || !cholS.ok) {
      failure = "iterate lost positive definiteness";
      sol.iterations = iter;
      break;
    }

    BlockMat W = nt_scaling(X, S);
    BlockMat Sinv = block_inverse(S);

    // Schur complement M_ij = <A_i, W A_j W>.
    std::vector<BlockMat> G;
    G.reserve(m);
    for (int j = 0; j < m; ++j) G.push_back(congruence(W, A[j]));
    Eigen::MatrixXd Mschur(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) Mschur(i, j) = A[i].dot(G[j]);
    Mschur = 0.5 * (Mschur + Mschur.transpose()).eval();
    Eigen::MatrixXd Mfact = Mschur;
    Eigen::LLT<Eigen::MatrixXd> lltM(Mfact);
    if (lltM.info() != Eigen::Success) {
      Mfact += 1e-13 * std::max(1.0, Mschur.trace() / std::max(1, m)) *
               Eigen::MatrixXd::Identity(m, m);
      lltM.compute(Mfact);
      if (lltM.info() != Eigen::Success) {
        failure = "Schur complement factorization failed";
        sol.iterations = iter;
        break;
      }
    }
    // The Schur system turns ill-conditioned near degenerate optima; a couple
    // of refinement sweeps against the unperturbed matrix keep the directions
    // accurate enough to make progress.
    auto schur_solve = [&](const Eigen::VectorXd& rhs) {
      Eigen::VectorXd dy = lltM.solve(rhs);
      for (int r = 0; r < 2; ++r) dy += lltM.solve(rhs - Mschur * dy);
      return dy;
    };

    BlockMat WRdW = congruence(W, Rd);
    auto solve_direction = [&](const BlockMat& Rc, Eigen::VectorXd& dy, BlockMat& dX, BlockMat& dS) {
      Eigen::VectorXd rhs = rp - A_apply(Rc) + A_apply(WRdW);
      dy = (m > 0) ? schur_solve(rhs) : Eigen::VectorXd(0);
      dS = Rd - A_adjoint(dy);
      dX = Rc - WRdW + congruence(W, A_adjoint(dy));
      dX = dX.transpose_sym();
    };

    // Predictor (affine scaling direction).
    BlockMat Rc_aff = X.scaled(-1.0);
    Eigen::VectorXd dy_aff;
    BlockMat dX_aff, dS_aff;
    solve_direction(Rc_aff, dy_aff, dX_aff, dS_aff);
    double ap = std::min(1.0, options.step_fraction * max_step(X, dX_aff, cholX));
    double ad = std::min(1.0, options.step_fraction * max_step(S, dS_aff, cholS));

    double sigma;
    BlockMat Rc = Rc_aff;
    if (options.mehrotra) {
      BlockMat Xa = X + dX_aff.scaled(ap);
      BlockMat Sa = S + dS_aff.scaled(ad);
      double mu_aff = Xa.dot(Sa) / ntot;
      sigma = std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3.0);
      sigma = std::clamp(sigma, 1e-8, 1.0);
      // Corrector: centering plus second-order term.
      BlockMat corr = BlockMat::zeros(problem.block_sizes);
      for (size_t k = 0; k < corr.blocks.size(); ++k) {
        Eigen::MatrixXd t = dX_aff.blocks[k] * dS_aff.blocks[k] * Sinv.blocks[k];
        corr.blocks[k] = 0.5 * (t + t.transpose());
      }
      Rc = Sinv.scaled(sigma * mu) - X - corr;
    } else {
      sigma = 0.5;
      Rc = Sinv.scaled(sigma * mu) - X;
    }

    Eigen::VectorXd dy;
    BlockMat dX, dS;
    solve_direction(Rc, dy, dX, dS);
    ap = std::min(1.0, options.step_fraction * max_step(X, dX, cholX));
    ad = std::min(1.0, options.step_fraction * max_step(S, dS, cholS));
    if (options.mehrotra && std::min(ap, ad) < 0.05) {
      // Second-order term hurts near degenerate faces; retry with plain
      // centering at a conservative sigma.
      sigma = std::max(sigma, 0.5);
      Rc = Sinv.scaled(sigma * mu) - X;
      solve_direction(Rc, dy, dX, dS);
      ap = std::min(1.0, options.step_fraction * max_step(X, dX, cholX));
      ad = std::min(1.0, options.step_fraction * max_step(S, dS, cholS));
    }
    if (!std::isfinite(ap) || !std::isfinite(ad)) {
      ap = std::min(ap, 1.0);
      ad = std::min(ad, 1.0);
    }
    sol.trace.back().step_primal = ap;
    sol.trace.back().step_dual = ad;

    X += dX.scaled(ap);
    y += ad * dy;
    S += dS.scaled(ad);
    sol.iterations = iter + 1;
  }

  // Residuals recomputed from the final iterates.
  Eigen::VectorXd rp = b - A_apply(X);
  BlockMat Rd = C - S - A_adjoint(y);
  sol.Y = X;
  sol.S = S;
  // Map multipliers back to the original constraint list (zeros for dropped).
  Eigen::VectorXd y_full = Eigen::VectorXd::Zero(problem.constraints.size());
  for (int i = 0; i < m; ++i) y_full(pre.kept[i]) = y(i);
  sol.y = y_full;
  sol.primal_residual = rp.size() ? rp.norm() / bnorm : 0.0;
  sol.dual_residual = Rd.norm() / cnorm;
  double pobj_int = C.dot(X);
  double dobj_int = b.size() ? b.dot(y) : 0.0;
  sol.gap = std::abs(pobj_int - dobj_int) / (1.0 + std::abs(pobj_int) + std::abs(dobj_int));
  sol.primal_obj = obj_sign < 0 ? -pobj_int : pobj_int;
  sol.dual_obj = obj_sign < 0 ? -dobj_int : dobj_int;
  if (converged ||
      (sol.primal_residual <= 10 * options.tau_feas && sol.dual_residual <= 10 * options.tau_feas &&
       sol.gap <= 10 * options.tau_gap)) {
    sol.status = SdpStatus::Optimal;
    sol.message = converged ? "converged" : "converged within relaxed tolerance";
  } else {
    sol.status = SdpStatus::NumericalFailure;
    sol.message = failure.empty() ? "iteration limit reached" : failure;
  }
  return sol;
}

FeasibilityReport solve_feasibility(const std::vector<int>& block_sizes,
                                    const std::vector<BlockMat>& constraints,
                                    const Eigen::VectorXd& rhs, const SdpOptions& options) {
  FeasibilityReport rep;
  // Phase-1 in variables (Z, s):  Z = Y + (s-1) I psd,  s >= 0 (1x1 block),
  // constraints <A_i, Z> - (s-1) tr(A_i) = b_i. min s; s* <=> how far the
  // affine slice sits from the psd cone.
  SdpProblem p1;
  p1.block_sizes = block_sizes;
  p1.block_sizes.push_back(1);
  p1.sense = SdpSense::Minimize;
  p1.objective = BlockMat::zeros(p1.block_sizes);
  p1.objective.blocks.back()(0, 0) = 1.0;
  p1.rhs.resize(rhs.size());
  for (int i = 0; i < rhs.size(); ++i) {
    BlockMat Ai = constraints[i];
    double tr = 0;
    for (const auto& blk : Ai.blocks) tr += blk.trace();
    Ai.blocks.push_back(Eigen::MatrixXd::Constant(1, 1, -tr));
    p1.constraints.push_back(std::move(Ai));
    p1.rhs(i) = rhs(i) - tr;
  }
  SdpSolution s1 = solve(p1, options);
  if (s1.status == SdpStatus::Infeasible) {
    // The affine constraints themselves are inconsistent.
    rep.kind = FeasibilityReport::Kind::Infeasible;
    rep.message = "affine constraints inconsistent: " + s1.message;
    return rep;
  }
  if (s1.status != SdpStatus::Optimal) {
    rep.kind = FeasibilityReport::Kind::NumericalFailure;
    rep.message = s1.message;
    return rep;
  }
  const double sstar = s1.primal_obj;
  const double boundary_tol = 1e-6;
  auto recover_Y = [&]() {
    BlockMat Y;
    double shift = 1.0 - s1.Y.blocks.back()(0, 0);
    for (size_t k = 0; k + 1 < s1.Y.blocks.size(); ++k) {
      Eigen::MatrixXd b = s1.Y.blocks[k];
      Y.blocks.push_back(b + shift * Eigen::MatrixXd::Identity(b.rows(), b.cols()));
    }
    return Y;
  };
  if (sstar < 1.0 - boundary_tol) {
    rep.kind = FeasibilityReport::Kind::StrictlyFeasible;
    rep.Y = recover_Y();
    rep.margin = 1.0 - sstar;
    return rep;
  }
  if (sstar <= 1.0 + boundary_tol) {
    rep.kind = FeasibilityReport::Kind::BoundaryFeasible;
    rep.Y = recover_Y();
    rep.margin = 0.0;
    return rep;
  }
  // Claimed infeasible: verify the Farkas certificate  F = -sum y_i A_i psd,
  // b^T y > 0 from the phase-1 dual.
  Eigen::VectorXd y = s1.y;
  BlockMat F = BlockMat::zeros(block_sizes);
  for (int i = 0; i < rhs.size(); ++i) F -= constraints[i].scaled(y(i));
  double by = rhs.size() ? rhs.dot(y) : 0.0;
  double fmin = F.min_eigenvalue();
  if (by > 1e-9 && fmin >= -1e-7 * std::max(1.0, F.norm())) {
    rep.kind = FeasibilityReport::Kind::Infeasible;
    rep.farkas = y;
    rep.message = "verified improving ray: b^T y = " + std::to_string(by) +
                  ", min eig of -A*(y) = " + std::to_string(fmin);
  } else {
    rep.kind = FeasibilityReport::Kind::NumericalFailure;
    rep.message = "phase-1 reports infeasible but certificate failed verification";
  }
  return rep;
}

ExactPsdVerdict psd_check_exact(const RatMatrix& M) { return psd_check_exact_impl(M); }

}  // namespace orbitope
