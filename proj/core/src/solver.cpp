#include "portopt/solver.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "portopt/errors.hpp"

namespace portopt {

namespace {

constexpr double kPivotRelTol = 1e-12;
constexpr double kConditionLimit = 1e12;
constexpr double kVarianceClamp = 1e-12;

void require_at_least_two(const MomentEstimate& moments) {
  if (moments.size() < 2) {
    std::ostringstream msg;
    msg << "a portfolio needs at least 2 assets, got " << moments.size();
    throw Error(Errc::too_few_assets, msg.str());
  }
}

double det3(double a, double b, double c, double d, double e, double f,
            double g, double h, double i) {
  return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
}

double det4(const Matrix& m) {
  double det = 0.0;
  double sign = 1.0;
  for (std::size_t j = 0; j < 4; ++j) {
    std::size_t c[3];
    std::size_t idx = 0;
    for (std::size_t k = 0; k < 4; ++k)
      if (k != j) c[idx++] = k;
    det += sign * m(0, j) *
           det3(m(1, c[0]), m(1, c[1]), m(1, c[2]), m(2, c[0]), m(2, c[1]),
                m(2, c[2]), m(3, c[0]), m(3, c[1]), m(3, c[2]));
    sign = -sign;
  }
  return det;
}

}  // namespace

const char* method_label(Method method) {
  return method == Method::mv ? "MV" : "MRAR";
}

const char* warning_label(SolutionWarning warning) {
  switch (warning) {
    case SolutionWarning::none: return nullptr;
    case SolutionWarning::minimizing_regime: return "minimizing_regime";
    case SolutionWarning::undefined_rar: return "undefined_rar";
    case SolutionWarning::negative_variance: return "negative_variance";
  }
  return nullptr;
}

double WeightVector::sum() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

ConstraintSystem build_mv_system(const MomentEstimate& moments) {
  require_at_least_two(moments);
  const std::size_t n = moments.size();
  const Matrix& cov = moments.covariance;
  ConstraintSystem system;
  system.method = Method::mv;
  system.matrix = Matrix(n, n);
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      system.matrix(i, j) = (cov(i + 1, j) + cov(j, i + 1)) -
                            (cov(i, j) + cov(j, i));
  for (std::size_t j = 0; j < n; ++j) system.matrix(n - 1, j) = 1.0;
  system.rhs.assign(n, 0.0);
  system.rhs[n - 1] = 1.0;
  return system;
}

ConstraintSystem build_mrar_system(const MomentEstimate& moments) {
  require_at_least_two(moments);
  const std::size_t n = moments.size();
  const Matrix& cov = moments.covariance;
  const std::vector<double>& r = moments.means;
  ConstraintSystem system;
  system.method = Method::mrar;
  system.matrix = Matrix(n, n);
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      system.matrix(i, j) = r[i] * (cov(i + 1, j) + cov(j, i + 1)) -
                            r[i + 1] * (cov(i, j) + cov(j, i));
  for (std::size_t j = 0; j < n; ++j) system.matrix(n - 1, j) = 1.0;
  system.rhs.assign(n, 0.0);
  system.rhs[n - 1] = 1.0;
  return system;
}

namespace {

/// The stacked systems are badly row-scaled by construction: coefficient
/// rows live at the scale of (means times) covariances while the budget row
/// is all ones. Scaling each equation to unit maximum changes nothing
/// mathematically but makes pivot and condition thresholds meaningful.
struct EquilibratedSystem {
  Matrix matrix;
  std::vector<double> rhs;
  std::vector<double> row_scales;
  bool zero_row = false;
  std::size_t zero_row_index = 0;
};

EquilibratedSystem equilibrate(const ConstraintSystem& system) {
  EquilibratedSystem eq;
  eq.matrix = system.matrix;
  eq.rhs = system.rhs;
  const std::size_t n = system.size();
  eq.row_scales.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double row_max = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      row_max = std::max(row_max, std::abs(eq.matrix(i, j)));
    if (row_max == 0.0) {
      eq.zero_row = true;
      eq.zero_row_index = i;
      return eq;
    }
    for (std::size_t j = 0; j < n; ++j) eq.matrix(i, j) /= row_max;
    eq.rhs[i] /= row_max;
    eq.row_scales.push_back(row_max);
  }
  return eq;
}

[[noreturn]] void throw_zero_row(const ConstraintSystem& system,
                                 std::size_t row) {
  std::ostringstream msg;
  msg << "singular " << method_label(system.method) << " system: equation "
      << row + 1 << " is identically zero (duplicated or perfectly "
      << "correlated assets)";
  throw SingularSystemError(msg.str(),
                            std::numeric_limits<double>::infinity());
}

}  // namespace

SolveResult solve_system(const ConstraintSystem& system) {
  const EquilibratedSystem eq = equilibrate(system);
  if (eq.zero_row) throw_zero_row(system, eq.zero_row_index);
  const LuFactors f = lu_factor(eq.matrix, kPivotRelTol);
  if (f.singular) {
    std::ostringstream msg;
    msg << "singular " << method_label(system.method)
        << " system: pivot " << f.min_abs_pivot << " below " << kPivotRelTol
        << " after row equilibration (zero determinant, e.g. duplicated "
        << "assets)";
    throw SingularSystemError(msg.str(),
                              std::numeric_limits<double>::infinity());
  }
  const double cond = condition_inf(eq.matrix, f);
  if (cond > kConditionLimit) {
    std::ostringstream msg;
    msg << "near-singular " << method_label(system.method)
        << " system: equilibrated condition estimate " << cond << " exceeds "
        << kConditionLimit;
    throw SingularSystemError(msg.str(), cond);
  }
  SolveResult result;
  result.weights.weights = lu_solve(f, eq.rhs);
  result.condition_estimate = cond;
  return result;
}

SolveResult cramer_solve_4(const ConstraintSystem& system) {
  const std::size_t n = system.size();
  if (n != 4) {
    std::ostringstream msg;
    msg << "determinant-ratio solver handles exactly 4 assets, got " << n;
    throw Error(Errc::wrong_dimension, msg.str());
  }
  const Matrix& m = system.matrix;
  const double det = det4(m);
  // The determinant is multilinear in the rows, so the natural "numerically
  // zero" scale is the product of row maxima, not max-entry^4: coefficient
  // rows sit many orders of magnitude below the budget row.
  const EquilibratedSystem eq = equilibrate(system);
  if (eq.zero_row) throw_zero_row(system, eq.zero_row_index);
  double det_scale = 1.0;
  for (double s : eq.row_scales) det_scale *= s;
  if (std::abs(det) <= kPivotRelTol * det_scale) {
    std::ostringstream msg;
    msg << "singular " << method_label(system.method)
        << " system: determinant " << det << " is numerically zero "
        << "(below " << kPivotRelTol << " of the row-scale product "
        << det_scale << ")";
    throw SingularSystemError(msg.str(),
                              std::numeric_limits<double>::infinity());
  }

  SolveResult result;
  result.weights.weights.resize(4);
  for (std::size_t i = 0; i < 4; ++i) {
    std::size_t c[3];
    std::size_t idx = 0;
    for (std::size_t k = 0; k < 4; ++k)
      if (k != i) c[idx++] = k;
    const double minor =
        det3(m(0, c[0]), m(0, c[1]), m(0, c[2]), m(1, c[0]), m(1, c[1]),
             m(1, c[2]), m(2, c[0]), m(2, c[1]), m(2, c[2]));
    // cofactor of the ones-row entry (4, i+1): sign (-1)^(4 + i+1)
    const double sign = (i % 2 == 0) ? -1.0 : 1.0;
    result.weights.weights[i] = sign * minor / det;
  }
  const LuFactors f = lu_factor(eq.matrix, kPivotRelTol);
  result.condition_estimate = condition_inf(eq.matrix, f);
  return result;
}

namespace {

/// Solve cov * x = rhs, preferring the Cholesky route (covariance matrices
/// are positive-definite in the regular case) and falling back to pivoted
/// LU for merely-invertible symmetric input.
std::vector<double> solve_covariance(const Matrix& cov,
                                     std::span<const double> rhs) {
  Matrix chol;
  if (cholesky_factor(cov, chol)) return cholesky_solve(chol, rhs);
  const LuFactors f = lu_factor(cov, kPivotRelTol);
  if (f.singular)
    throw SingularSystemError(
        "covariance matrix is singular",
        std::numeric_limits<double>::infinity());
  const double cond = condition_inf(cov, f);
  if (cond > kConditionLimit) {
    std::ostringstream msg;
    msg << "covariance matrix is near-singular: condition estimate " << cond;
    throw SingularSystemError(msg.str(), cond);
  }
  return lu_solve(f, rhs);
}

WeightVector normalized_solution(std::vector<double> x, const char* what) {
  double total = 0.0;
  double mass = 0.0;
  for (double v : x) {
    total += v;
    mass += std::abs(v);
  }
  if (std::abs(total) <= 1e-12 * std::max(mass, 1e-300)) {
    std::ostringstream msg;
    msg << "degenerate normalization: " << what << " sums to " << total
        << ", cannot scale onto the budget plane";
    throw Error(Errc::degenerate_normalization, msg.str());
  }
  for (double& v : x) v /= total;
  return WeightVector{std::move(x)};
}

}  // namespace

WeightVector closed_form_mv(const MomentEstimate& moments) {
  require_at_least_two(moments);
  const std::vector<double> ones(moments.size(), 1.0);
  return normalized_solution(solve_covariance(moments.covariance, ones),
                             "inv(covariance) * 1");
}

WeightVector closed_form_mrar(const MomentEstimate& moments) {
  require_at_least_two(moments);
  return normalized_solution(
      solve_covariance(moments.covariance, moments.means),
      "inv(covariance) * means");
}

PortfolioSolution evaluate_portfolio(const WeightVector& weights,
                                     const MomentEstimate& moments,
                                     Method method) {
  const std::size_t n = moments.size();
  if (weights.size() != n) {
    std::ostringstream msg;
    msg << "weight vector has " << weights.size() << " entries for " << n
        << " assets";
    throw Error(Errc::dimension_mismatch, msg.str());
  }

  PortfolioSolution sol;
  sol.method = method;
  sol.weights = weights;
  for (std::size_t i = 0; i < n; ++i)
    sol.mean += moments.means[i] * weights.weights[i];

  double variance = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      row += moments.covariance(i, j) * weights.weights[j];
    variance += weights.weights[i] * row;
  }
  if (variance < 0.0 && variance >= -kVarianceClamp) variance = 0.0;
  sol.variance = variance;

  if (variance < 0.0) {
    sol.std_dev = 0.0;
    sol.warning = SolutionWarning::negative_variance;
  } else {
    sol.std_dev = std::sqrt(variance);
    if (sol.std_dev > 0.0)
      sol.rar = sol.mean / sol.std_dev;
    else
      sol.warning = SolutionWarning::undefined_rar;
  }
  return sol;
}

PortfolioSolution solve_portfolio(const MomentEstimate& moments, Method method,
                                  TraceRecord* trace) {
  const ConstraintSystem system = method == Method::mv
                                      ? build_mv_system(moments)
                                      : build_mrar_system(moments);
  const SolveResult solved = solve_system(system);
  PortfolioSolution sol = evaluate_portfolio(solved.weights, moments, method);
  sol.condition_estimate = solved.condition_estimate;

  // A stationary point of the risk-adjusted return with negative mean is a
  // minimum on the budget plane, not the sought maximum.
  if (method == Method::mrar && sol.warning == SolutionWarning::none &&
      sol.mean < 0.0)
    sol.warning = SolutionWarning::minimizing_regime;

  if (trace != nullptr) {
    const std::size_t n = system.size();
    trace->method_label = method_label(method);
    trace->asset_names = moments.asset_names;
    trace->omega = moments.covariance;
    trace->coefficient_block = Matrix(n - 1, n);
    for (std::size_t i = 0; i + 1 < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        trace->coefficient_block(i, j) = system.matrix(i, j);
    trace->stacked = system.matrix;
    // Tolerance-free factorization: the solve above already vetted the
    // system, this one only reports the raw determinant and pivots.
    const LuFactors f = lu_factor(system.matrix, 0.0);
    trace->determinant = lu_determinant(f);
    if (n == 4) {
      // Cramer identity: the signed minor for weight i equals w_i * det.
      trace->cramer_numerators.resize(4);
      for (std::size_t i = 0; i < 4; ++i)
        trace->cramer_numerators[i] =
            sol.weights.weights[i] * trace->determinant;
    } else {
      trace->pivot_rows.assign(f.perm.begin(), f.perm.end());
      trace->pivot_values.resize(n);
      for (std::size_t i = 0; i < n; ++i)
        trace->pivot_values[i] = f.lu(i, i);
    }
    trace->weights = sol.weights.weights;
    trace->mean = sol.mean;
    trace->variance = sol.variance;
    trace->rar = sol.rar;
  }
  return sol;
}

}  // namespace portopt
