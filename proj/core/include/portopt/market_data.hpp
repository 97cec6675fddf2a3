#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "portopt/matrix.hpp"

namespace portopt {

/// Named asset price series on a common time grid. Rectangular, strictly
/// positive, at least 3 rows so two returns (and a sample covariance) exist.
struct PriceTable {
  std::vector<std::string> asset_names;
  Matrix prices;                           // T x n
  std::vector<std::string> period_labels;  // empty or length T

  std::size_t num_assets() const { return asset_names.size(); }
  std::size_t num_periods() const { return prices.rows(); }
};

/// Per-period rates of return derived from a PriceTable; one row fewer.
struct ReturnMatrix {
  std::vector<std::string> asset_names;
  Matrix returns;  // (T-1) x n

  std::size_t num_assets() const { return asset_names.size(); }
  std::size_t num_observations() const { return returns.rows(); }
};

/// Directly supplied moments: mean returns plus a variance-covariance
/// matrix, as an alternative to ingesting raw prices.
struct ParameterSet {
  std::vector<std::string> asset_names;
  std::vector<double> means;
  Matrix covariance;  // n x n, symmetrized on parse
};

enum class ReturnKind { simple, logarithmic };

/// Parse a comma-delimited price table: header row of asset names, then one
/// row of prices per period. With has_label_column the first column holds
/// period labels and does not count as an asset.
///
/// Throws Error with code empty_input, non_numeric_cell, non_positive_price,
/// ragged_rows, duplicate_asset_name or too_few_rows; messages identify the
/// offending row and column.
PriceTable parse_price_table(std::istream& text, bool has_label_column = false);
PriceTable parse_price_table(const std::string& text,
                             bool has_label_column = false);

/// Render a PriceTable back to CSV text. Numbers are written in shortest
/// round-trip form, so parsing the output reproduces the table exactly.
std::string render_price_table(const PriceTable& table);

/// Per-period returns: prices[t+1]/prices[t] - 1, or log(prices[t+1]/prices[t])
/// in logarithmic mode. Positivity of prices keeps every entry finite.
ReturnMatrix compute_returns(const PriceTable& table,
                             ReturnKind kind = ReturnKind::simple);

/// Parse a parameter document: a JSON object with exactly the fields
/// `assets` (array of strings), `means` (array of numbers) and `covariance`
/// (array of rows). A covariance that is asymmetric within 1e-9 of its
/// largest entry is replaced by (M + M')/2; worse asymmetry is an error.
///
/// Throws Error with code malformed_document, dimension_mismatch,
/// asymmetric_covariance or negative_variance.
ParameterSet parse_parameter_file(std::istream& text);
ParameterSet parse_parameter_file(const std::string& text);

}  // namespace portopt
