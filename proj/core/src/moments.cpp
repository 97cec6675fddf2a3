#include "portopt/moments.hpp"

#include <cmath>
#include <sstream>

#include "portopt/errors.hpp"

namespace portopt {

MomentEstimate estimate_moments(const ReturnMatrix& returns,
                                CovDivisor divisor) {
  const std::size_t m = returns.num_observations();
  const std::size_t n = returns.num_assets();
  if (m < 2) {
    std::ostringstream msg;
    msg << m << " return observations; at least 2 are required";
    throw Error(Errc::too_few_observations, msg.str());
  }

  MomentEstimate est;
  est.asset_names = returns.asset_names;
  est.sample_size = m;
  est.means.assign(n, 0.0);
  for (std::size_t t = 0; t < m; ++t)
    for (std::size_t j = 0; j < n; ++j) est.means[j] += returns.returns(t, j);
  for (double& mean : est.means) mean /= static_cast<double>(m);

  // second pass over deviations from the mean
  const double denom =
      divisor == CovDivisor::sample ? static_cast<double>(m - 1)
                                    : static_cast<double>(m);
  est.covariance = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t t = 0; t < m; ++t)
        acc += (returns.returns(t, i) - est.means[i]) *
               (returns.returns(t, j) - est.means[j]);
      const double cov = acc / denom;
      est.covariance(i, j) = cov;
      est.covariance(j, i) = cov;
    }
  }
  return est;
}

MomentEstimate moments_from_parameters(const ParameterSet& params) {
  MomentEstimate est;
  est.asset_names = params.asset_names;
  est.means = params.means;
  est.covariance = params.covariance;
  est.sample_size = 0;
  return est;
}

std::vector<AssetStats> asset_stats(const MomentEstimate& moments) {
  std::vector<AssetStats> stats;
  stats.reserve(moments.size());
  for (std::size_t i = 0; i < moments.size(); ++i) {
    AssetStats s;
    s.name = moments.asset_names[i];
    s.mean = moments.means[i];
    s.std_dev = std::sqrt(std::max(moments.covariance(i, i), 0.0));
    if (s.std_dev > 0.0) s.rar = s.mean / s.std_dev;
    stats.push_back(std::move(s));
  }
  return stats;
}

MomentEstimate subset_moments(const MomentEstimate& moments,
                              std::span<const int> positions) {
  const std::size_t s = positions.size();
  MomentEstimate sub;
  sub.sample_size = moments.sample_size;
  sub.asset_names.reserve(s);
  sub.means.reserve(s);
  sub.covariance = Matrix(s, s);
  for (std::size_t a = 0; a < s; ++a) {
    const std::size_t i = static_cast<std::size_t>(positions[a]) - 1;
    sub.asset_names.push_back(moments.asset_names[i]);
    sub.means.push_back(moments.means[i]);
    for (std::size_t b = 0; b < s; ++b) {
      const std::size_t j = static_cast<std::size_t>(positions[b]) - 1;
      sub.covariance(a, b) = moments.covariance(i, j);
    }
  }
  return sub;
}

}  // namespace portopt
