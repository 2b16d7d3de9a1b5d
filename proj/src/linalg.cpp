#include "pareto/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pareto {

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("Matrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_columns(std::span<const Vector> columns, std::size_t rows) {
  Matrix m(rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != rows) throw std::invalid_argument("from_columns: length mismatch");
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = columns[c][r];
  }
  return m;
}

Matrix Matrix::from_rows(std::span<const Vector> rows, std::size_t cols) {
  Matrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw std::invalid_argument("from_rows: length mismatch");
    std::copy(rows[r].begin(), rows[r].end(), m.data_.begin() + static_cast<long>(r * cols));
  }
  return m;
}

Vector Matrix::column(std::size_t c) const {
  Vector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: dimension mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Vector operator*(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw std::invalid_argument("matrix-vector: dimension mismatch");
  Vector y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
  return y;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("matrix difference: dimension mismatch");
  Matrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) -= b(i, j);
  return c;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> v) {
  // scaled to avoid overflow for large entries
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (double x : v) s += (x / scale) * (x / scale);
  return scale * std::sqrt(s);
}

std::size_t PivotedQR::rank(double rtol) const {
  const std::size_t d = std::min(r.rows(), r.cols());
  if (d == 0) return 0;
  const double r00 = std::abs(r(0, 0));
  if (r00 == 0.0) return 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < d; ++i)
    if (std::abs(r(i, i)) > rtol * r00) ++count;
  return count;
}

PivotedQR qr_pivoted(const Matrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  PivotedQR f{Matrix::identity(m), a, std::vector<std::size_t>(n)};
  std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});
  Matrix& r = f.r;
  Matrix& q = f.q;
  Vector v(m);

  for (std::size_t j = 0; j < std::min(m, n); ++j) {
    // Exact trailing column norms; recomputing avoids downdating drift.
    std::size_t pivot = j;
    double best = -1.0;
    for (std::size_t c = j; c < n; ++c) {
      double s = 0.0;
      for (std::size_t i = j; i < m; ++i) s += r(i, c) * r(i, c);
      if (s > best) {
        best = s;
        pivot = c;
      }
    }
    if (best <= 0.0) break;
    if (pivot != j) {
      for (std::size_t i = 0; i < m; ++i) std::swap(r(i, j), r(i, pivot));
      std::swap(f.perm[j], f.perm[pivot]);
    }

    double xnorm = 0.0;
    {
      Vector x(m - j);
      for (std::size_t i = j; i < m; ++i) x[i - j] = r(i, j);
      xnorm = norm2(x);
    }
    const double alpha = r(j, j) > 0.0 ? -xnorm : xnorm;
    for (std::size_t i = j; i < m; ++i) v[i] = r(i, j);
    v[j] -= alpha;
    double vtv = 0.0;
    for (std::size_t i = j; i < m; ++i) vtv += v[i] * v[i];
    if (vtv == 0.0) continue;

    for (std::size_t c = j; c < n; ++c) {
      double s = 0.0;
      for (std::size_t i = j; i < m; ++i) s += v[i] * r(i, c);
      s = 2.0 * s / vtv;
      for (std::size_t i = j; i < m; ++i) r(i, c) -= s * v[i];
    }
    for (std::size_t row = 0; row < m; ++row) {
      double s = 0.0;
      for (std::size_t i = j; i < m; ++i) s += q(row, i) * v[i];
      s = 2.0 * s / vtv;
      for (std::size_t i = j; i < m; ++i) q(row, i) -= s * v[i];
    }
    r(j, j) = alpha;
    for (std::size_t i = j + 1; i < m; ++i) r(i, j) = 0.0;
  }
  return f;
}

std::size_t rank(const Matrix& a, double rtol) {
  if (a.empty()) return 0;
  return qr_pivoted(a).rank(rtol);
}

std::vector<Vector> nullspace(const Matrix& a, double rtol) {
  const std::size_t n = a.cols();
  if (a.rows() == 0) {
    std::vector<Vector> basis;
    for (std::size_t j = 0; j < n; ++j) {
      Vector e(n, 0.0);
      e[j] = 1.0;
      basis.push_back(std::move(e));
    }
    return basis;
  }
  // Columns rank..n-1 of the full Q of A^T span the orthogonal complement of
  // the row space of A.
  const PivotedQR f = qr_pivoted(a.transpose());
  const std::size_t r = f.rank(rtol);
  std::vector<Vector> basis;
  for (std::size_t c = r; c < n; ++c) basis.push_back(f.q.column(c));
  return basis;
}

std::vector<Vector> range_basis(const Matrix& a, double rtol) {
  if (a.empty()) return {};
  const PivotedQR f = qr_pivoted(a);
  const std::size_t r = f.rank(rtol);
  std::vector<Vector> basis;
  for (std::size_t c = 0; c < r; ++c) basis.push_back(f.q.column(c));
  return basis;
}

Vector solve(const Matrix& a, std::span<const double> b, double rtol) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("solve: matrix not square");
  if (b.size() != n) throw std::invalid_argument("solve: rhs length mismatch");
  const PivotedQR f = qr_pivoted(a);
  if (f.rank(rtol) < n) throw SingularMatrixError("solve: matrix is numerically singular");
  Vector y = f.q.transpose() * b;
  Vector z(n, 0.0);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= f.r(ii, j) * z[j];
    z[ii] = s / f.r(ii, ii);
  }
  Vector x(n);
  for (std::size_t j = 0; j < n; ++j) x[f.perm[j]] = z[j];
  return x;
}

Vector least_squares_min_norm(const Matrix& a, std::span<const double> b, double rtol) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (b.size() != m) throw std::invalid_argument("least_squares: rhs length mismatch");
  Vector x(n, 0.0);
  if (m == 0 || n == 0) return x;
  const PivotedQR f = qr_pivoted(a);
  const std::size_t r = f.rank(rtol);
  if (r == 0) return x;

  const Vector qtb = f.q.transpose() * b;
  // R1: leading r rows of R (columns in pivoted order); full row rank.
  Matrix r1t(n, r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < n; ++j) r1t(j, i) = f.r(i, j);
  const PivotedQR g = qr_pivoted(r1t);

  // R1 y = c  <=>  T^T w = P2^T c with w = Q2^T y, T the leading r x r block of R2.
  Vector w(r, 0.0);
  for (std::size_t i = 0; i < r; ++i) {
    double s = qtb[g.perm[i]];
    for (std::size_t j = 0; j < i; ++j) s -= g.r(j, i) * w[j];
    w[i] = s / g.r(i, i);
  }
  Vector y(n, 0.0);
  for (std::size_t row = 0; row < n; ++row)
    for (std::size_t i = 0; i < r; ++i) y[row] += g.q(row, i) * w[i];
  for (std::size_t j = 0; j < n; ++j) x[f.perm[j]] = y[j];
  return x;
}

}  // namespace pareto
