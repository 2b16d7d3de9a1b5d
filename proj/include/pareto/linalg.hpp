#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace pareto {

using Vector = std::vector<double>;

/// Shared default for every rank decision in the library.
inline constexpr double kDefaultRankRtol = 1e-8;

/// Raised by solve() when the matrix is numerically singular.
class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense row-major matrix sized for small problems (n, k up to ~12).
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  /// Matrix whose columns are the given vectors (all of equal length).
  static Matrix from_columns(std::span<const Vector> columns, std::size_t rows);
  static Matrix from_rows(std::span<const Vector> rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  Vector column(std::size_t c) const;

  Matrix transpose() const;
  double max_abs() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, std::span<const double> x);
Matrix operator-(const Matrix& a, const Matrix& b);

double norm2(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);

/// A * P = Q * R with Q square orthogonal (rows x rows), R upper triangular
/// (rows x cols) with nonincreasing |diagonal|. `perm[j]` is the original
/// column placed at position j.
struct PivotedQR {
  Matrix q;
  Matrix r;
  std::vector<std::size_t> perm;

  /// Number of diagonal entries with |r_ii| > rtol * |r_00|.
  std::size_t rank(double rtol) const;
};

/// Householder QR with column pivoting.
PivotedQR qr_pivoted(const Matrix& a);

std::size_t rank(const Matrix& a, double rtol = kDefaultRankRtol);

/// Orthonormal basis of the numerical kernel of a; size = cols - rank.
std::vector<Vector> nullspace(const Matrix& a, double rtol = kDefaultRankRtol);

/// Orthonormal basis of the numerical column space of a; size = rank.
std::vector<Vector> range_basis(const Matrix& a, double rtol = kDefaultRankRtol);

/// Solves a square system; throws SingularMatrixError when rank < n at rtol.
Vector solve(const Matrix& a, std::span<const double> b, double rtol = kDefaultRankRtol);

/// Minimum-norm least-squares solution of a x ~= b via a complete orthogonal
/// decomposition built from two pivoted QR factorizations.
Vector least_squares_min_norm(const Matrix& a, std::span<const double> b,
                              double rtol = kDefaultRankRtol);

}  // namespace pareto
