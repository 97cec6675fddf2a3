#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "portopt/matrix.hpp"
#include "portopt/moments.hpp"

namespace portopt_test {

using portopt::Matrix;
using portopt::MomentEstimate;
using Rng = std::mt19937_64;

/// Well-conditioned random covariance: s^2 (A A' + 0.3 n I) with standard
/// normal A. The ridge keeps every eigenvalue of order n, so stacked
/// constraint systems built from these stay far from the solver's
/// singularity thresholds.
inline Matrix random_spd(Rng& rng, int n, double scale = 1e-2) {
  std::normal_distribution<double> normal;
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
  Matrix cov(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += a(i, k) * a(j, k);
      if (i == j) acc += 0.3 * n;
      cov(i, j) = scale * scale * acc;
      cov(j, i) = cov(i, j);
    }
  }
  return cov;
}

inline std::vector<double> random_means(Rng& rng, int n, double scale = 1e-3) {
  std::normal_distribution<double> normal;
  std::vector<double> means(n);
  for (double& v : means) v = scale * normal(rng);
  return means;
}

/// 1' inv(cov) * means, the scale factor that maps the unnormalized
/// tangency direction onto the budget plane. l1_mass receives the l1 norm
/// of inv(cov) * means when non-null.
inline double normalizer(const MomentEstimate& m, double* l1_mass = nullptr) {
  Matrix chol;
  if (!portopt::cholesky_factor(m.covariance, chol))
    return std::numeric_limits<double>::quiet_NaN();
  const std::vector<double> x = portopt::cholesky_solve(chol, m.means);
  double total = 0.0;
  double mass = 0.0;
  for (double v : x) {
    total += v;
    mass += std::abs(v);
  }
  if (l1_mass) *l1_mass = mass;
  return total;
}

/// Random instance whose normalizer is bounded away from zero (relative to
/// the l1 mass of the tangency direction). Near-zero normalizers blow up
/// the budget rescaling and make cross-route comparisons meaningless at
/// tight tolerances; they get their own dedicated tests instead.
inline MomentEstimate random_instance(Rng& rng, int n,
                                      bool positive_normalizer = false) {
  MomentEstimate m;
  m.asset_names.reserve(n);
  for (int i = 0; i < n; ++i)
    m.asset_names.push_back("A" + std::to_string(i + 1));
  m.covariance = random_spd(rng, n);
  for (;;) {
    m.means = random_means(rng, n);
    double mass = 0.0;
    const double total = normalizer(m, &mass);
    if (!(std::abs(total) > 0.1 * mass)) continue;
    if (positive_normalizer && total < 0.0)
      for (double& v : m.means) v = -v;
    return m;
  }
}

inline double max_abs_diff(const std::vector<double>& a,
                           const std::vector<double>& b) {
  double worst = std::abs(static_cast<double>(a.size()) -
                          static_cast<double>(b.size()));
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i)
    worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace portopt_test
