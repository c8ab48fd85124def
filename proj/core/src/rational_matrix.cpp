#include "orbitope/rational_matrix.hpp"

#include <algorithm>

namespace orbitope {

RatMatrix RatMatrix::identity(int n) {
  RatMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

RatMatrix RatMatrix::from_double(const Eigen::MatrixXd& d) {
  RatMatrix m(static_cast<int>(d.rows()), static_cast<int>(d.cols()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) m.at(i, j) = rational_from_double(d(i, j));
  return m;
}

RatMatrix RatMatrix::transpose() const {
  RatMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
  return t;
}

RatMatrix RatMatrix::operator*(const RatMatrix& o) const {
  if (cols_ != o.rows_) throw Error("RatMatrix: dimension mismatch in product");
  RatMatrix r(rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const Rational& v = at(i, k);
      if (v == 0) continue;
      for (int j = 0; j < o.cols_; ++j) {
        if (o.at(k, j) == 0) continue;
        r.at(i, j) += v * o.at(k, j);
      }
    }
  return r;
}

RatMatrix RatMatrix::operator+(const RatMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("RatMatrix: dimension mismatch in sum");
  RatMatrix r(rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
  return r;
}

RatMatrix RatMatrix::operator-(const RatMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("RatMatrix: dimension mismatch in difference");
  RatMatrix r(rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
  return r;
}

RatMatrix RatMatrix::scaled(const Rational& c) const {
  RatMatrix r(rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * c;
  return r;
}

RatVec RatMatrix::operator*(const RatVec& v) const {
  if (static_cast<int>(v.size()) != cols_) throw Error("RatMatrix: dimension mismatch in mat-vec");
  RatVec r(rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j)
      if (at(i, j) != 0) r[i] += at(i, j) * v[j];
  return r;
}

bool RatMatrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (int i = 0; i < rows_; ++i)
    for (int j = i + 1; j < cols_; ++j)
      if (at(i, j) != at(j, i)) return false;
  return true;
}

bool RatMatrix::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](const Rational& q) { return q == 0; });
}

Rational RatMatrix::trace() const {
  Rational t;
  for (int i = 0; i < std::min(rows_, cols_); ++i) t += at(i, i);
  return t;
}

Eigen::MatrixXd RatMatrix::to_double() const {
  Eigen::MatrixXd m(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(i, j) = orbitope::to_double(at(i, j));
  return m;
}

RatVec RatMatrix::row(int i) const {
  RatVec r(cols_);
  for (int j = 0; j < cols_; ++j) r[j] = at(i, j);
  return r;
}

Rational dot(const RatVec& a, const RatVec& b) {
  if (a.size() != b.size()) throw Error("dot: dimension mismatch");
  Rational s;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
  return s;
}

RowEchelon::RowEchelon(int dim, bool track_combinations) : dim_(dim), track_(track_combinations) {}

RatVec RowEchelon::reduce(const RatVec& v) const {
  RatVec w = v;
  for (size_t r = 0; r < rows_.size(); ++r) {
    const Rational& c = w[pivot_col_[r]];
    if (c == 0) continue;
    Rational f = c;  // rows have unit pivots
    for (int j = 0; j < dim_; ++j)
      if (rows_[r][j] != 0) w[j] -= f * rows_[r][j];
  }
  return w;
}

bool RowEchelon::contains(const RatVec& v) const {
  RatVec w = reduce(v);
  return std::all_of(w.begin(), w.end(), [](const Rational& q) { return q == 0; });
}

bool RowEchelon::insert(const RatVec& v) {
  if (static_cast<int>(v.size()) != dim_) throw Error("RowEchelon: dimension mismatch");
  int my_index = inserted_++;
  RatVec w = v;
  RatVec hist;
  if (track_) {
    hist.assign(static_cast<size_t>(inserted_), Rational(0));
    hist[my_index] = 1;
  }
  for (size_t r = 0; r < rows_.size(); ++r) {
    const Rational c = w[pivot_col_[r]];
    if (c == 0) continue;
    for (int j = 0; j < dim_; ++j)
      if (rows_[r][j] != 0) w[j] -= c * rows_[r][j];
    if (track_)
      for (size_t t = 0; t < history_[r].size(); ++t) hist[t] -= c * history_[r][t];
  }
  int p = -1;
  for (int j = 0; j < dim_; ++j)
    if (w[j] != 0) {
      p = j;
      break;
    }
  if (p < 0) return false;
  Rational inv = 1 / w[p];
  for (int j = 0; j < dim_; ++j) w[j] *= inv;
  if (track_)
    for (auto& h : hist) h *= inv;
  // Back-eliminate to keep rows fully reduced.
  for (size_t r = 0; r < rows_.size(); ++r) {
    const Rational c = rows_[r][p];
    if (c == 0) continue;
    for (int j = 0; j < dim_; ++j)
      if (w[j] != 0) rows_[r][j] -= c * w[j];
    if (track_) {
      if (history_[r].size() < hist.size()) history_[r].resize(hist.size(), Rational(0));
      for (size_t t = 0; t < hist.size(); ++t) history_[r][t] -= c * hist[t];
    }
  }
  rows_.push_back(std::move(w));
  pivot_col_.push_back(p);
  if (track_) history_.push_back(std::move(hist));
  return true;
}

std::optional<RatVec> RowEchelon::combination_for(const RatVec& v) const {
  if (!track_) throw Error("RowEchelon: combination tracking disabled");
  RatVec w = v;
  RatVec comb(static_cast<size_t>(inserted_), Rational(0));
  for (size_t r = 0; r < rows_.size(); ++r) {
    const Rational c = w[pivot_col_[r]];
    if (c == 0) continue;
    for (int j = 0; j < dim_; ++j)
      if (rows_[r][j] != 0) w[j] -= c * rows_[r][j];
    for (size_t t = 0; t < history_[r].size(); ++t) comb[t] += c * history_[r][t];
  }
  for (const auto& q : w)
    if (q != 0) return std::nullopt;
  return comb;
}

int rank(const RatMatrix& m) {
  RowEchelon e(m.cols());
  for (int i = 0; i < m.rows(); ++i) e.insert(m.row(i));
  return e.rank();
}

std::optional<RatVec> solve_linear(const RatMatrix& A, const RatVec& b) {
  if (static_cast<int>(b.size()) != A.rows()) throw Error("solve_linear: dimension mismatch");
  const int n = A.cols();
  // Eliminate on the augmented system [A | b] working column-wise.
  std::vector<RatVec> rows;
  for (int i = 0; i < A.rows(); ++i) {
    RatVec r = A.row(i);
    r.push_back(b[i]);
    rows.push_back(std::move(r));
  }
  std::vector<int> pivot_of_col(n, -1);
  int rrank = 0;
  for (int col = 0; col < n && rrank < static_cast<int>(rows.size()); ++col) {
    int piv = -1;
    for (int i = rrank; i < static_cast<int>(rows.size()); ++i)
      if (rows[i][col] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(rows[piv], rows[rrank]);
    Rational inv = 1 / rows[rrank][col];
    for (int j = col; j <= n; ++j) rows[rrank][j] *= inv;
    for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
      if (i == rrank) continue;
      const Rational c = rows[i][col];
      if (c == 0) continue;
      for (int j = col; j <= n; ++j) rows[i][j] -= c * rows[rrank][j];
    }
    pivot_of_col[col] = rrank;
    ++rrank;
  }
  for (int i = rrank; i < static_cast<int>(rows.size()); ++i)
    if (rows[i][n] != 0) return std::nullopt;  // 0 = nonzero: inconsistent
  RatVec x(n, Rational(0));
  for (int col = 0; col < n; ++col)
    if (pivot_of_col[col] >= 0) x[col] = rows[pivot_of_col[col]][n];
  return x;
}

std::vector<RatVec> nullspace(const RatMatrix& A) {
  const int n = A.cols();
  std::vector<RatVec> rows;
  for (int i = 0; i < A.rows(); ++i) rows.push_back(A.row(i));
  std::vector<int> pivot_col;
  int rrank = 0;
  for (int col = 0; col < n && rrank < static_cast<int>(rows.size()); ++col) {
    int piv = -1;
    for (int i = rrank; i < static_cast<int>(rows.size()); ++i)
      if (rows[i][col] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(rows[piv], rows[rrank]);
    Rational inv = 1 / rows[rrank][col];
    for (int j = col; j < n; ++j) rows[rrank][j] *= inv;
    for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
      if (i == rrank) continue;
      const Rational c = rows[i][col];
      if (c == 0) continue;
      for (int j = col; j < n; ++j) rows[i][j] -= c * rows[rrank][j];
    }
    pivot_col.push_back(col);
    ++rrank;
  }
  std::vector<bool> is_pivot(n, false);
  for (int c : pivot_col) is_pivot[c] = true;
  std::vector<RatVec> basis;
  for (int free_col = 0; free_col < n; ++free_col) {
    if (is_pivot[free_col]) continue;
    RatVec v(n, Rational(0));
    v[free_col] = 1;
    for (int r = 0; r < rrank; ++r) v[pivot_col[r]] = -rows[r][free_col];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<RatMatrix> inverse(const RatMatrix& m) {
  if (m.rows() != m.cols()) throw Error("inverse: matrix not square");
  const int n = m.rows();
  RatMatrix aug(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, n + i) = 1;
  }
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int i = col; i < n; ++i)
      if (aug.at(i, col) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) return std::nullopt;
    if (piv != col)
      for (int j = 0; j < 2 * n; ++j) std::swap(aug.at(piv, j), aug.at(col, j));
    Rational inv = 1 / aug.at(col, col);
    for (int j = 0; j < 2 * n; ++j) aug.at(col, j) *= inv;
    for (int i = 0; i < n; ++i) {
      if (i == col) continue;
      const Rational c = aug.at(i, col);
      if (c == 0) continue;
      for (int j = 0; j < 2 * n; ++j) aug.at(i, j) -= c * aug.at(col, j);
    }
  }
  RatMatrix out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.at(i, j) = aug.at(i, n + j);
  return out;
}

Rational quadratic_form(const RatMatrix& M, const RatVec& v) {
  RatVec mv = M * v;
  return dot(v, mv);
}

ExactPsdVerdict psd_check_exact_impl(const RatMatrix& M) {
  if (!M.is_symmetric()) throw Error("psd_check_exact: matrix not symmetric");
  const int n = M.rows();
  ExactPsdVerdict out;
  RatMatrix S = M;  // shrinking Schur complement over the active index set
  std::vector<int> active(n);
  for (int i = 0; i < n; ++i) active[i] = i;
  RatMatrix L = RatMatrix::identity(n);
  std::vector<std::pair<int, RatVec>> elim;  // (original pivot index, column over active set at elim time)
  std::vector<std::vector<int>> elim_active;

  auto lift_witness = [&](RatVec w, size_t level) {
    // w is a witness for the Schur complement produced after `level` pivots;
    // undo the pivots from innermost to outermost.
    for (size_t k = level; k-- > 0;) {
      const auto& [pidx, col] = elim[k];
      const Rational d = col[0];  // pivot value, > 0
      Rational ctw;
      for (size_t t = 0; t < w.size(); ++t) ctw += col[t + 1] * w[t];
      RatVec lifted(w.size() + 1);
      lifted[0] = -ctw / d;
      for (size_t t = 0; t < w.size(); ++t) lifted[t + 1] = w[t];
      w = std::move(lifted);
    }
    // Map from pivot-ordered coordinates back to original indices.
    RatVec v(n, Rational(0));
    std::vector<int> order;
    for (const auto& e : elim) order.push_back(e.first);
    // Remaining active indices follow the eliminated ones.
    std::vector<int> rest = active;
    for (int idx : order) rest.erase(std::remove(rest.begin(), rest.end(), idx), rest.end());
    std::vector<int> full = order;
    full.insert(full.end(), rest.begin(), rest.end());
    for (size_t t = 0; t < w.size() && t < full.size(); ++t) v[full[t]] = w[t];
    return v;
  };

  size_t steps = 0;
  while (true) {
    const int m = static_cast<int>(active.size());
    if (m == 0) break;
    // Largest remaining diagonal entry.
    int best = 0;
    for (int i = 1; i < m; ++i)
      if (S.at(i, i) > S.at(best, best)) best = i;
    if (S.at(best, best) < 0) {
      RatVec w(m, Rational(0));
      w[best] = 1;
      out.psd = false;
      out.witness = lift_witness(w, steps);
      return out;
    }
    if (S.at(best, best) == 0) {
      // Max remaining diagonal is zero. A negative diagonal elsewhere, or a
      // nonzero off-diagonal entry, both give strictly negative values.
      for (int i = 0; i < m; ++i)
        if (S.at(i, i) < 0) {
          RatVec w(m, Rational(0));
          w[i] = 1;
          out.psd = false;
          out.witness = lift_witness(w, steps);
          return out;
        }
      for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
          if (S.at(i, j) != 0) {
            RatVec w(m, Rational(0));
            w[i] = 1;
            w[j] = (S.at(i, j) > 0) ? Rational(-1) : Rational(1);
            out.psd = false;
            out.witness = lift_witness(w, steps);
            return out;
          }
      break;  // remaining block is identically zero: PSD
    }
    // Pivot: move `best` to the front of the active set.
    const Rational d = S.at(best, best);
    out.pivot_order.push_back(active[best]);
    out.diag.push_back(d);
    // Record column (pivot value followed by off-pivot entries) for witness lifting.
    RatVec col(m);
    {
      int t = 1;
      col[0] = d;
      for (int i = 0; i < m; ++i) {
        if (i == best) continue;
        col[t++] = S.at(i, best);
      }
    }
    elim.push_back({active[best], col});
    // Build the Schur complement on the remaining indices.
    RatMatrix S2(m - 1, m - 1);
    std::vector<int> remaining;
    {
      std::vector<int> map;
      for (int i = 0; i < m; ++i)
        if (i != best) map.push_back(i);
      for (int i = 0; i < m - 1; ++i)
        for (int j = 0; j < m - 1; ++j)
          S2.at(i, j) = S.at(map[i], map[j]) - S.at(map[i], best) * S.at(map[j], best) / d;
      for (int i : map) remaining.push_back(active[i]);
    }
    S = std::move(S2);
    active = std::move(remaining);
    ++steps;
  }
  out.psd = true;
  return out;
}

}  // namespace orbitope
