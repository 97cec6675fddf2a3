#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace portopt {

/// Dense row-major matrix of doubles. Sized for this problem domain
/// (covariance matrices and stacked constraint systems, n <= a few dozen),
/// so the factorizations below are plain textbook algorithms without
/// blocking or vectorized fast paths.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return a_[i * cols_ + j];
  }

  std::span<const double> row(std::size_t i) const {
    return {a_.data() + i * cols_, cols_};
  }

  std::span<const double> data() const noexcept { return a_; }
  std::span<double> data() noexcept { return a_; }

  /// Largest absolute entry; 0 for an empty matrix.
  double max_abs() const;

  /// y = A x
  std::vector<double> multiply(std::span<const double> x) const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> a_;
};

/// LU factorization with partial (row) pivoting, PA = LU packed in place.
struct LuFactors {
  Matrix lu;                  // L below the diagonal (unit), U on and above
  std::vector<int> perm;      // row permutation applied to the input
  int sign = 1;               // determinant sign of the permutation
  bool singular = false;      // a pivot fell below the rejection threshold
  double min_abs_pivot = 0.0;
  double matrix_scale = 0.0;  // max-abs entry of the input, for thresholds
};

/// Factor a square matrix. Pivots smaller than pivot_rel_tol * max|a_ij|
/// mark the factorization singular; callers decide whether to throw.
LuFactors lu_factor(const Matrix& a, double pivot_rel_tol = 1e-12);

/// Solve A x = b using a previously computed factorization.
std::vector<double> lu_solve(const LuFactors& f, std::span<const double> b);

/// Determinant from the factorization (0 when marked singular).
double lu_determinant(const LuFactors& f);

/// Exact infinity-norm condition number ||A||_inf * ||A^-1||_inf, computed
/// by solving for every column of the inverse. Infinity when singular.
double condition_inf(const Matrix& a, const LuFactors& f);

/// Cholesky factorization A = L L' for a symmetric positive-definite matrix.
/// Returns false (leaving l unspecified) when a non-positive pivot shows the
/// matrix is not numerically positive-definite.
bool cholesky_factor(const Matrix& a, Matrix& l);

/// Solve A x = b given the Cholesky factor L of A.
std::vector<double> cholesky_solve(const Matrix& l, std::span<const double> b);

}  // namespace portopt
