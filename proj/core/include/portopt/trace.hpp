#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "portopt/matrix.hpp"

namespace portopt {

/// Step-by-step record of one portfolio solve, for the educational trace
/// output: the moments that went in, the constraint system that was built,
/// its determinant, and how the weights came out. Values are copies of the
/// exact numbers the untraced computation produces.
struct TraceRecord {
  std::uint64_t ordinal = 0;
  std::string method_label;  // "MV" or "MRAR"
  std::vector<std::string> asset_names;

  Matrix omega;              // covariance submatrix actually solved
  Matrix coefficient_block;  // B (MV) or G (MRAR), (n-1) x n
  Matrix stacked;            // E or K: the block with the ones row appended
  double determinant = 0.0;  // |E| or |K|

  // n = 4 only: the signed numerator determinant for each weight
  std::vector<double> cramer_numerators;

  // n != 4: elimination summary of the pivoted solve
  std::vector<int> pivot_rows;      // row chosen at each elimination step
  std::vector<double> pivot_values;

  std::vector<double> weights;
  double mean = 0.0;
  double variance = 0.0;
  std::optional<double> rar;
};

}  // namespace portopt
