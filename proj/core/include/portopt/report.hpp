#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "portopt/enumeration.hpp"
#include "portopt/moments.hpp"
#include "portopt/trace.hpp"

namespace portopt {

enum class OutputFormat { table, csv, json };

struct RenderOptions {
  OutputFormat format = OutputFormat::table;
  bool show_mv = true;
  bool show_mrar = true;
  /// When set, only the top_k portfolios by risk-adjusted return (MRAR when
  /// shown, else MV) are listed; the best-portfolio summary stays global.
  std::optional<std::uint64_t> top_k;
};

/// Render a ranking report to the chosen format.
///   table: aligned per-portfolio blocks (asset rows, then the two
///          portfolio summary rows) and a best-portfolio summary,
///          8 significant digits.
///   csv:   constant-width rows, one per (portfolio, asset) plus summary
///          rows, shortest round-trip numbers.
///   json:  one document with assets, portfolios (ordinal, indices, mv,
///          mrar), best_mv, best_mrar and P.
void render_report(const RankingReport& report,
                   const std::vector<AssetStats>& stats,
                   const RenderOptions& options, std::ostream& out);

/// Labeled per-portfolio sections showing the coefficient block, the
/// stacked system, its determinant, the per-weight numerators (4 assets)
/// or the elimination summary, and the final solution.
void emit_trace(const std::vector<TraceRecord>& trace, std::ostream& out);

}  // namespace portopt
