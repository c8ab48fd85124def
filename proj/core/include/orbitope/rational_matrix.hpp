#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "orbitope/rational.hpp"

namespace orbitope {

using RatVec = std::vector<Rational>;

/// Dense matrix over exact rationals. Row-major storage; desk-scale sizes.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

  static RatMatrix identity(int n);
  static RatMatrix zero(int rows, int cols) { return RatMatrix(rows, cols); }
  static RatMatrix from_double(const Eigen::MatrixXd& m);  // exact dyadic entries

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Rational& at(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  const Rational& at(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

  RatMatrix transpose() const;
  RatMatrix operator*(const RatMatrix& o) const;
  RatMatrix operator+(const RatMatrix& o) const;
  RatMatrix operator-(const RatMatrix& o) const;
  RatMatrix scaled(const Rational& c) const;
  RatVec operator*(const RatVec& v) const;
  bool operator==(const RatMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }

  bool is_symmetric() const;
  bool is_zero() const;
  Rational trace() const;

  Eigen::MatrixXd to_double() const;

  RatVec row(int i) const;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<Rational> a_;
};

Rational dot(const RatVec& a, const RatVec& b);

/// Incremental reduced row echelon over the rationals: exact span membership
/// and rank growth, with optional tracking of how each stored row was formed
/// from the inserted vectors (used for Farkas-style combinations).
class RowEchelon {
 public:
  explicit RowEchelon(int dim, bool track_combinations = false);

  /// Residual of v after elimination against the current span.
  RatVec reduce(const RatVec& v) const;
  bool contains(const RatVec& v) const;

  /// Inserts v; returns true when the rank grew.
  bool insert(const RatVec& v);

  /// Coordinates expressing v in terms of the inserted vectors that were kept
  /// (only when tracking); nullopt if v is outside the span.
  std::optional<RatVec> combination_for(const RatVec& v) const;

  int rank() const { return static_cast<int>(rows_.size()); }
  int dim() const { return dim_; }
  int inserted_count() const { return inserted_; }

 private:
  int dim_;
  bool track_;
  int inserted_ = 0;
  std::vector<RatVec> rows_;       // reduced rows, unit pivots
  std::vector<int> pivot_col_;     // pivot column of each row
  std::vector<RatVec> history_;    // rows_[i] = history_[i] . inserted vectors
};

int rank(const RatMatrix& m);

/// Any solution of A x = b, free variables set to zero; nullopt if inconsistent.
std::optional<RatVec> solve_linear(const RatMatrix& A, const RatVec& b);

/// Basis of {x : A x = 0}.
std::vector<RatVec> nullspace(const RatMatrix& A);

std::optional<RatMatrix> inverse(const RatMatrix& m);

struct ExactPsdVerdict {
  bool psd = false;
  /// When not psd: rational v with v^T M v < 0.
  std::optional<RatVec> witness;
  /// When psd: pivot order and the (nonnegative) pivot values of the
  /// rational LDL^T elimination, as the factor witness.
  std::vector<int> pivot_order;
  std::vector<Rational> diag;
};

/// v^T M v, exact.
Rational quadratic_form(const RatMatrix& M, const RatVec& v);

/// Pivoted LDL^T over the rationals (largest remaining diagonal pivot).
ExactPsdVerdict psd_check_exact_impl(const RatMatrix& M);

}  // namespace orbitope
