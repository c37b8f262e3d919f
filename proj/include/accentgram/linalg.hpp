#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace accentgram {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::vector<double> column(std::size_t c) const;

  std::span<const double> data() const { return data_; }

  Matrix transposed() const;
  double trace() const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  Matrix& operator*=(double s);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Largest absolute entry.
double max_abs(const Matrix& m);

/// LU factorization with partial pivoting. Throws NumericalError naming the
/// column when a pivot falls below 1e-12 times the largest entry of A.
class LuDecomposition {
 public:
  explicit LuDecomposition(const Matrix& a);

  Matrix solve(const Matrix& b) const;
  std::vector<double> solve(std::span<const double> b) const;

  /// (sign, log|det|).
  std::pair<int, double> log_det() const;

 private:
  Matrix lu_;
  std::vector<std::size_t> perm_;
  int perm_sign_ = 1;
};

Matrix lu_solve(const Matrix& a, const Matrix& b);
std::pair<int, double> det_log(const Matrix& a);

/// Lower-triangular L with A = L·Lᵀ. Throws NumericalError if A is not
/// positive definite.
Matrix cholesky(const Matrix& a);

/// Solves L·X = B for lower-triangular L.
Matrix forward_substitute(const Matrix& lower, const Matrix& b);
/// Solves Lᵀ·X = B for lower-triangular L.
Matrix back_substitute_transposed(const Matrix& lower, const Matrix& b);

struct SymmetricEigen {
  std::vector<double> values;  // descending
  Matrix vectors;              // column i pairs with values[i]
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops
/// below 1e-12 (relative to the matrix norm for large inputs).
SymmetricEigen sym_eigen(const Matrix& a);

}  // namespace accentgram
