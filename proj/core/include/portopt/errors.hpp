#pragma once

#include <stdexcept>
#include <string>

namespace portopt {

/// Error codes for every failure the toolkit can report. The CLI maps these
/// onto its exit classes: input/parse problems exit 1, numerical failures
/// exit 2 (flag-combination errors are raised separately by the CLI itself).
enum class Errc {
  // ingestion
  empty_input,
  non_numeric_cell,
  non_positive_price,
  ragged_rows,
  duplicate_asset_name,
  too_few_rows,
  dimension_mismatch,
  asymmetric_covariance,
  negative_variance,
  malformed_document,
  io_error,
  // estimation
  too_few_observations,
  // solving
  too_few_assets,
  singular_system,
  wrong_dimension,
  degenerate_normalization,
  // enumeration
  enumeration_cap_exceeded,
  all_subsets_singular,
  overflow,
};

const char* errc_name(Errc code);

/// True for the error classes that indicate a numerical failure (exit 2)
/// rather than a bad input (exit 1).
bool is_numerical_error(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Singular or near-singular system, reported together with the condition
/// estimate that triggered the rejection (infinity when a pivot vanished).
class SingularSystemError : public Error {
 public:
  SingularSystemError(const std::string& message, double condition_estimate)
      : Error(Errc::singular_system, message),
        condition_estimate_(condition_estimate) {}

  double condition_estimate() const noexcept { return condition_estimate_; }

 private:
  double condition_estimate_;
};

}  // namespace portopt
