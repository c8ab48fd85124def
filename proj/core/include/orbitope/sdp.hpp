#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "orbitope/rational_matrix.hpp"

namespace orbitope {

/// Block-diagonal symmetric matrix.
struct BlockMat {
  std::vector<Eigen::MatrixXd> blocks;

  static BlockMat zeros(const std::vector<int>& sizes);
  static BlockMat identity_like(const std::vector<int>& sizes, double scale = 1.0);
  static BlockMat single(const Eigen::MatrixXd& m) { return BlockMat{{m}}; }

  int block_count() const { return static_cast<int>(blocks.size()); }
  int total_dim() const;
  double dot(const BlockMat& o) const;
  double norm() const;
  double min_eigenvalue() const;
  BlockMat& operator+=(const BlockMat& o);
  BlockMat& operator-=(const BlockMat& o);
  BlockMat& operator*=(double c);
  BlockMat operator+(const BlockMat& o) const;
  BlockMat operator-(const BlockMat& o) const;
  BlockMat scaled(double c) const;
  BlockMat transpose_sym() const;  // 0.5 (M + M^T) per block
  std::vector<int> sizes() const;
};

enum class SdpSense { Minimize, Maximize, FeasibilityOnly };
enum class SdpStatus { Optimal, Infeasible, Unbounded, NumericalFailure };

/// max/min <C,Y> s.t. <A_i,Y> = b_i, Y psd (block-diagonal).
struct SdpProblem {
  std::vector<int> block_sizes;
  BlockMat objective;
  std::vector<BlockMat> constraints;
  Eigen::VectorXd rhs;
  SdpSense sense = SdpSense::Maximize;
};

struct IterationRecord {
  int iter = 0;
  double mu = 0, primal_res = 0, dual_res = 0, pobj = 0, dobj = 0;
  double step_primal = 0, step_dual = 0;
};

struct SdpSolution {
  SdpStatus status = SdpStatus::NumericalFailure;
  BlockMat Y;
  Eigen::VectorXd y;
  BlockMat S;
  double primal_obj = 0, dual_obj = 0;
  /// Recomputed from the returned iterates, never copied from the iteration.
  double primal_residual = 0, dual_residual = 0, gap = 0;
  int iterations = 0;
  std::vector<IterationRecord> trace;
  std::string message;
  std::optional<Eigen::VectorXd> infeasibility_certificate;
};

struct SdpOptions {
  int max_iter = 100;
  double tau_gap = 1e-8;
  double tau_feas = 1e-8;
  double step_fraction = 0.98;
  bool mehrotra = true;
  int verbosity = 0;
};

inline constexpr int kMaxBlockSize = 200;
inline constexpr int kMaxConstraints = 2000;

/// Dense primal-dual path following (NT scaling, predictor-corrector).
SdpSolution solve(const SdpProblem& problem, const SdpOptions& options = {});

struct FeasibilityReport {
  enum class Kind { StrictlyFeasible, BoundaryFeasible, Infeasible, NumericalFailure };
  Kind kind = Kind::NumericalFailure;
  BlockMat Y;           // feasible point when kind is *Feasible
  double margin = 0.0;  // interiority margin (>= 0; 0 on the boundary)
  std::optional<Eigen::VectorXd> farkas;  // verified ray when Infeasible
  std::string message;
};

/// Emptiness test for {Y psd : <A_i,Y> = b_i} via the eigenvalue-shift
/// phase-1 program min s, Y + (s-1) I psd. Distinguishes infeasible (with a
/// verified improving-ray certificate) from numerical failure, and returns a
/// margin-maximizing centered point when feasible.
FeasibilityReport solve_feasibility(const std::vector<int>& block_sizes,
                                    const std::vector<BlockMat>& constraints,
                                    const Eigen::VectorXd& rhs,
                                    const SdpOptions& options = {});

/// Pivoted rational LDL^T; PSD verdict with factor witness, or a rational
/// vector v with v^T M v < 0.
ExactPsdVerdict psd_check_exact(const RatMatrix& M);

}  // namespace orbitope
