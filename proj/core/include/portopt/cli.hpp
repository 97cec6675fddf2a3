#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "portopt/market_data.hpp"
#include "portopt/moments.hpp"
#include "portopt/report.hpp"

namespace portopt {

enum class MethodChoice { mv, mrar, both };

/// One complete invocation, as assembled from the command line. Exactly one
/// of input_path, params_path and use_sample must be active.
struct RunConfig {
  std::optional<std::string> input_path;
  std::optional<std::string> params_path;
  bool use_sample = false;
  bool label_column = false;
  MethodChoice method = MethodChoice::both;
  bool enumerate_all = false;
  std::optional<std::uint64_t> top_k;  // >= 1 when set
  OutputFormat format = OutputFormat::table;
  bool trace = false;
  ReturnKind returns_kind = ReturnKind::simple;
  CovDivisor cov_divisor = CovDivisor::sample;
  std::optional<int> max_assets;  // enumeration cap override
};

/// A flag combination the contract rejects; mapped to exit status 3.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The bundled dataset behind --sample: 65 daily closes of USDJPY, BRENT,
/// DAX and DJI, as a CSV price table.
const char* sample_csv();

/// Parse command-line arguments into a RunConfig. Throws UsageError on an
/// unknown flag, a malformed value, or a source conflict. Returns nullopt
/// when the invocation only asked for --help (help text written to out).
std::optional<RunConfig> parse_args(int argc, const char* const* argv,
                                    std::ostream& out);

/// Execute one run: ingest, estimate moments, solve or enumerate, render.
/// The report goes to out; diagnostics and the optional trace go to err.
/// Returns the exit status: 0 ok, 1 input or parse failure, 2 numerical
/// failure.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + run with the full exit-status mapping (UsageError -> 3).
int main_entry(int argc, const char* const* argv, std::ostream& out,
               std::ostream& err);

}  // namespace portopt
