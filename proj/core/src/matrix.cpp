#include "portopt/matrix.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <utility>

namespace portopt {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::abs(v));
  return m;
}

std::vector<double> Matrix::multiply(std::span<const double> x) const {
  std::vector<double> y(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) acc += (*this)(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

LuFactors lu_factor(const Matrix& a, double pivot_rel_tol) {
  const std::size_t n = a.rows();
  LuFactors f;
  f.lu = a;
  f.perm.resize(n);
  std::iota(f.perm.begin(), f.perm.end(), 0);
  f.matrix_scale = a.max_abs();
  f.min_abs_pivot = std::numeric_limits<double>::infinity();
  const double threshold = pivot_rel_tol * f.matrix_scale;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot_row = k;
    double best = std::abs(f.lu(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double cand = std::abs(f.lu(i, k));
      if (cand > best) {
        best = cand;
        pivot_row = i;
      }
    }
    if (pivot_row != k) {
      for (std::size_t j = 0; j < n; ++j)
        std::swap(f.lu(k, j), f.lu(pivot_row, j));
      std::swap(f.perm[k], f.perm[pivot_row]);
      f.sign = -f.sign;
    }
    const double pivot = f.lu(k, k);
    f.min_abs_pivot = std::min(f.min_abs_pivot, std::abs(pivot));
    if (std::abs(pivot) <= threshold) {
      f.singular = true;
      return f;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double m = f.lu(i, k) / pivot;
      f.lu(i, k) = m;
      for (std::size_t j = k + 1; j < n; ++j) f.lu(i, j) -= m * f.lu(k, j);
    }
  }
  return f;
}

std::vector<double> lu_solve(const LuFactors& f, std::span<const double> b) {
  const std::size_t n = f.lu.rows();
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[f.perm[i]];
  // forward substitution with unit lower triangle
  for (std::size_t i = 1; i < n; ++i) {
    double acc = x[i];
    for (std::size_t j = 0; j < i; ++j) acc -= f.lu(i, j) * x[j];
    x[i] = acc;
  }
  // back substitution
  for (std::size_t ii = n; ii-- > 0;) {
    double acc = x[ii];
    for (std::size_t j = ii + 1; j < n; ++j) acc -= f.lu(ii, j) * x[j];
    x[ii] = acc / f.lu(ii, ii);
  }
  return x;
}

double lu_determinant(const LuFactors& f) {
  if (f.singular) return 0.0;
  double det = f.sign;
  for (std::size_t i = 0; i < f.lu.rows(); ++i) det *= f.lu(i, i);
  return det;
}

double condition_inf(const Matrix& a, const LuFactors& f) {
  if (f.singular) return std::numeric_limits<double>::infinity();
  const std::size_t n = a.rows();
  double norm_a = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += std::abs(a(i, j));
    norm_a = std::max(norm_a, s);
  }
  // ||A^-1||_inf as the max row sum over explicitly solved inverse columns
  std::vector<double> row_sums(n, 0.0);
  std::vector<double> e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    const std::vector<double> col = lu_solve(f, e);
    e[j] = 0.0;
    for (std::size_t i = 0; i < n; ++i) row_sums[i] += std::abs(col[i]);
  }
  double norm_inv = 0.0;
  for (double s : row_sums) norm_inv = std::max(norm_inv, s);
  return norm_a * norm_inv;
}

bool cholesky_factor(const Matrix& a, Matrix& l) {
  const std::size_t n = a.rows();
  l = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double acc = a(i, j);
      for (std::size_t k = 0; k < j; ++k) acc -= l(i, k) * l(j, k);
      if (i == j) {
        if (!(acc > 0.0)) return false;
        l(i, i) = std::sqrt(acc);
      } else {
        l(i, j) = acc / l(j, j);
      }
    }
  }
  return true;
}

std::vector<double> cholesky_solve(const Matrix& l, std::span<const double> b) {
  const std::size_t n = l.rows();
  std::vector<double> x(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    double acc = x[i];
    for (std::size_t j = 0; j < i; ++j) acc -= l(i, j) * x[j];
    x[i] = acc / l(i, i);
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double acc = x[ii];
    for (std::size_t j = ii + 1; j < n; ++j) acc -= l(j, ii) * x[j];
    x[ii] = acc / l(ii, ii);
  }
  return x;
}

}  // namespace portopt
