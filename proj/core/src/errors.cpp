#include "portopt/errors.hpp"

namespace portopt {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::empty_input: return "empty_input";
    case Errc::non_numeric_cell: return "non_numeric_cell";
    case Errc::non_positive_price: return "non_positive_price";
    case Errc::ragged_rows: return "ragged_rows";
    case Errc::duplicate_asset_name: return "duplicate_asset_name";
    case Errc::too_few_rows: return "too_few_rows";
    case Errc::dimension_mismatch: return "dimension_mismatch";
    case Errc::asymmetric_covariance: return "asymmetric_covariance";
    case Errc::negative_variance: return "negative_variance";
    case Errc::malformed_document: return "malformed_document";
    case Errc::io_error: return "io_error";
    case Errc::too_few_observations: return "too_few_observations";
    case Errc::too_few_assets: return "too_few_assets";
    case Errc::singular_system: return "singular_system";
    case Errc::wrong_dimension: return "wrong_dimension";
    case Errc::degenerate_normalization: return "degenerate_normalization";
    case Errc::enumeration_cap_exceeded: return "enumeration_cap_exceeded";
    case Errc::all_subsets_singular: return "all_subsets_singular";
    case Errc::overflow: return "overflow";
  }
  return "unknown";
}

bool is_numerical_error(Errc code) {
  switch (code) {
    case Errc::singular_system:
    case Errc::wrong_dimension:
    case Errc::degenerate_normalization:
    case Errc::all_subsets_singular:
      return true;
    default:
      return false;
  }
}

}  // namespace portopt
