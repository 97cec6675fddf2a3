#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "portopt/market_data.hpp"
#include "portopt/matrix.hpp"

namespace portopt {

/// Mean-return vector and variance-covariance matrix for a set of assets.
/// sample_size is the number of return observations behind the estimate,
/// 0 when the moments were supplied directly as parameters.
struct MomentEstimate {
  std::vector<std::string> asset_names;
  std::vector<double> means;
  Matrix covariance;  // n x n, symmetric by construction
  std::size_t sample_size = 0;

  std::size_t size() const { return asset_names.size(); }
};

/// Per-asset summary: mean, standard deviation and risk-adjusted return.
/// rar is empty for a zero-variance asset.
struct AssetStats {
  std::string name;
  double mean = 0.0;
  double std_dev = 0.0;
  std::optional<double> rar;
};

enum class CovDivisor { sample, population };

/// Two-pass mean/covariance estimation. The sample divisor (m - 1) is the
/// default; population divides by m instead.
MomentEstimate estimate_moments(const ReturnMatrix& returns,
                                CovDivisor divisor = CovDivisor::sample);

/// Adopt directly supplied parameters as moments (sample_size = 0).
MomentEstimate moments_from_parameters(const ParameterSet& params);

std::vector<AssetStats> asset_stats(const MomentEstimate& moments);

/// Restriction of the moments to the given assets. Positions are 1-based
/// and must be strictly increasing, matching the subset-enumeration
/// convention used throughout.
MomentEstimate subset_moments(const MomentEstimate& moments,
                              std::span<const int> positions);

}  // namespace portopt
