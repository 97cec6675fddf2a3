#pragma once

#include <optional>
#include <string>
#include <vector>

#include "portopt/matrix.hpp"
#include "portopt/moments.hpp"
#include "portopt/trace.hpp"

namespace portopt {

enum class Method { mv, mrar };

const char* method_label(Method method);  // "MV" / "MRAR"

/// The stacked constraint system whose solution is the optimal weight
/// vector: rows 1..n-1 hold the coefficient block (B for minimum variance,
/// G for maximum risk-adjusted return), the last row is all ones, and the
/// right-hand side is (0, ..., 0, 1).
struct ConstraintSystem {
  Method method = Method::mv;
  Matrix matrix;            // n x n
  std::vector<double> rhs;  // (0, ..., 0, 1)

  std::size_t size() const { return matrix.rows(); }
};

/// Budget shares. Solver outputs satisfy |sum - 1| <= 1e-10; the type also
/// carries externally supplied weights (fixtures, perturbations) that are
/// only approximately on the budget plane.
struct WeightVector {
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  double sum() const;
};

enum class SolutionWarning {
  none,
  /// MRAR stationary point with negative portfolio mean: it minimizes
  /// rather than maximizes the risk-adjusted return.
  minimizing_regime,
  /// Zero portfolio variance; the risk-adjusted return is undefined.
  undefined_rar,
  /// Quadratic form came out negative beyond rounding (indefinite input).
  negative_variance,
};

const char* warning_label(SolutionWarning warning);  // nullptr for none

/// One method's solved portfolio on one asset set.
struct PortfolioSolution {
  Method method = Method::mv;
  WeightVector weights;
  double mean = 0.0;
  double variance = 0.0;
  double std_dev = 0.0;
  std::optional<double> rar;  // empty when variance is 0
  SolutionWarning warning = SolutionWarning::none;
  double condition_estimate = 0.0;  // of the system that produced weights
};

struct SolveResult {
  WeightVector weights;
  double condition_estimate = 0.0;
};

/// Rows 1..n-1: B(i,j) = (cov(i+1,j) + cov(j,i+1)) - (cov(i,j) + cov(j,i)),
/// which forces equal marginal risk across assets; ones row appended.
ConstraintSystem build_mv_system(const MomentEstimate& moments);

/// Rows 1..n-1: G(i,j) = mean(i)*(cov(i+1,j) + cov(j,i+1))
///                       - mean(i+1)*(cov(i,j) + cov(j,i)); ones row appended.
ConstraintSystem build_mrar_system(const MomentEstimate& moments);

/// Solve the stacked system by Gaussian elimination with partial pivoting.
/// Each equation is first scaled to unit maximum (the coefficient rows sit
/// many orders of magnitude below the budget row). Throws
/// SingularSystemError when a row is identically zero, a pivot of the
/// equilibrated system falls below 1e-12, or its condition estimate exceeds
/// 1e12.
SolveResult solve_system(const ConstraintSystem& system);

/// Determinant-ratio solution for exactly four assets: each weight is a
/// signed 3x3 minor of the coefficient block over the full 4x4 determinant,
/// signs following the cofactor expansion along the ones row. The
/// determinant counts as zero below 1e-12 of the product of row maxima.
/// Verification oracle for solve_system.
SolveResult cramer_solve_4(const ConstraintSystem& system);

/// Textbook global-minimum-variance solution w = inv(C) 1 / (1' inv(C) 1),
/// computed via Cholesky when the covariance is positive-definite (LU
/// otherwise). Independent oracle for the MV stacked system.
WeightVector closed_form_mv(const MomentEstimate& moments);

/// Tangency solution w = inv(C) r / (1' inv(C) r). Independent oracle for
/// the MRAR stacked system. Throws Error (degenerate_normalization) when
/// the normalizer 1' inv(C) r vanishes.
WeightVector closed_form_mrar(const MomentEstimate& moments);

/// Portfolio mean, variance (clamped to 0 within -1e-12 of zero), standard
/// deviation and risk-adjusted return for the given weights.
PortfolioSolution evaluate_portfolio(const WeightVector& weights,
                                     const MomentEstimate& moments,
                                     Method method);

/// Build, solve and evaluate in one step; flags the MRAR minimizing regime.
/// When trace is non-null, fills it with the intermediate matrices and
/// determinants of this solve.
PortfolioSolution solve_portfolio(const MomentEstimate& moments, Method method,
                                  TraceRecord* trace = nullptr);

}  // namespace portopt
