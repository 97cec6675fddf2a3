#include "portopt/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "portopt/solver.hpp"

namespace portopt {

namespace {

using nlohmann::json;

std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fixed8(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.8g", v);
  return buf;
}

/// Records to list, honoring top_k: all in ordinal order by default, else
/// the k best by the ranking method's RAR (descending, ordinal tie-break).
std::vector<const SubsetRecord*> select_records(const RankingReport& report,
                                                const RenderOptions& options) {
  std::vector<const SubsetRecord*> selected;
  selected.reserve(report.records.size());
  for (const SubsetRecord& record : report.records)
    selected.push_back(&record);
  if (!options.top_k) return selected;

  const bool rank_by_mrar = options.show_mrar;
  auto rar_of = [rank_by_mrar](const SubsetRecord* r) {
    const std::optional<PortfolioSolution>& sol =
        rank_by_mrar ? r->mrar : r->mv;
    return sol && sol->rar ? *sol->rar
                           : -std::numeric_limits<double>::infinity();
  };
  std::stable_sort(selected.begin(), selected.end(),
                   [&](const SubsetRecord* a, const SubsetRecord* b) {
                     return rar_of(a) > rar_of(b);
                   });
  if (selected.size() > *options.top_k) selected.resize(*options.top_k);
  return selected;
}

// --- json ---------------------------------------------------------------

json solution_to_json(const std::optional<PortfolioSolution>& sol,
                      const std::optional<FailureNote>& failure) {
  if (sol) {
    json j;
    j["weights"] = sol->weights.weights;
    j["mean"] = sol->mean;
    j["variance"] = sol->variance;
    j["std_dev"] = sol->std_dev;
    j["rar"] = sol->rar ? json(*sol->rar) : json(nullptr);
    const char* warning = warning_label(sol->warning);
    j["warning"] = warning ? json(warning) : json(nullptr);
    return j;
  }
  json j;
  j["error"] = failure ? failure->message : "not solved";
  if (failure && std::isfinite(failure->condition_estimate) &&
      failure->condition_estimate > 0.0)
    j["condition_estimate"] = failure->condition_estimate;
  return j;
}

void render_json(const RankingReport& report,
                 const std::vector<AssetStats>& stats,
                 const RenderOptions& options, std::ostream& out) {
  json doc;
  doc["P"] = report.portfolio_count;
  json assets = json::array();
  for (const AssetStats& s : stats) {
    json a;
    a["name"] = s.name;
    a["mean"] = s.mean;
    a["std_dev"] = s.std_dev;
    a["rar"] = s.rar ? json(*s.rar) : json(nullptr);
    assets.push_back(std::move(a));
  }
  doc["assets"] = std::move(assets);

  json portfolios = json::array();
  for (const SubsetRecord* record : select_records(report, options)) {
    json p;
    p["ordinal"] = record->subset.ordinal;
    p["indices"] = record->subset.indices;
    p["mv"] = options.show_mv
                  ? solution_to_json(record->mv, record->mv_failure)
                  : json(nullptr);
    p["mrar"] = options.show_mrar
                    ? solution_to_json(record->mrar, record->mrar_failure)
                    : json(nullptr);
    portfolios.push_back(std::move(p));
  }
  doc["portfolios"] = std::move(portfolios);
  doc["best_mv"] = options.show_mv && report.best_mv ? json(*report.best_mv)
                                                     : json(nullptr);
  doc["best_mrar"] = options.show_mrar && report.best_mrar
                         ? json(*report.best_mrar)
                         : json(nullptr);
  out << doc.dump(2) << '\n';
}

// --- csv ----------------------------------------------------------------

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

void csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << csv_quote(fields[i]);
  }
  out << '\n';
}

void csv_solution_rows(std::ostream& out, const SubsetRecord& record,
                       const char* label,
                       const std::optional<PortfolioSolution>& sol,
                       const std::optional<FailureNote>& failure) {
  const std::string ordinal = std::to_string(record.subset.ordinal);
  if (sol) {
    const char* warning = warning_label(sol->warning);
    csv_row(out, {ordinal, label, "", shortest(sol->mean),
                  shortest(sol->variance), shortest(sol->std_dev),
                  sol->rar ? shortest(*sol->rar) : "", "", "",
                  warning ? warning : ""});
  } else {
    csv_row(out, {ordinal, label, "", "", "", "", "", "", "",
                  "error: " + (failure ? failure->message : "not solved")});
  }
}

void render_csv(const RankingReport& report,
                const std::vector<AssetStats>& stats,
                const RenderOptions& options, std::ostream& out) {
  csv_row(out, {"portfolio", "row_type", "name", "mean", "variance",
                "std_dev", "rar", "weight_mv", "weight_mrar", "warning"});
  for (const SubsetRecord* record : select_records(report, options)) {
    const std::string ordinal = std::to_string(record->subset.ordinal);
    for (std::size_t a = 0; a < record->subset.size(); ++a) {
      const int position = record->subset.indices[a];
      const AssetStats& s = stats[static_cast<std::size_t>(position) - 1];
      auto weight_of =
          [&](const std::optional<PortfolioSolution>& sol) -> std::string {
        return sol ? shortest(sol->weights.weights[a]) : "";
      };
      csv_row(out,
              {ordinal, "asset", s.name, shortest(s.mean),
               shortest(s.std_dev * s.std_dev), shortest(s.std_dev),
               s.rar ? shortest(*s.rar) : "",
               options.show_mv ? weight_of(record->mv) : "",
               options.show_mrar ? weight_of(record->mrar) : "", ""});
    }
    if (options.show_mv)
      csv_solution_rows(out, *record, "mv", record->mv, record->mv_failure);
    if (options.show_mrar)
      csv_solution_rows(out, *record, "mrar", record->mrar,
                        record->mrar_failure);
  }

  auto best_row = [&](const char* label,
                      const std::optional<std::uint64_t>& best, bool shown,
                      auto get_solution) {
    if (!shown) return;
    std::string ordinal;
    std::string rar;
    if (best) {
      ordinal = std::to_string(*best);
      for (const SubsetRecord& record : report.records)
        if (record.subset.ordinal == *best) {
          const std::optional<PortfolioSolution>& sol = get_solution(record);
          if (sol && sol->rar) rar = shortest(*sol->rar);
        }
    }
    csv_row(out, {ordinal, label, "", "", "", "", rar, "", "", ""});
  };
  best_row("best_mv", report.best_mv, options.show_mv,
           [](const SubsetRecord& r) -> const auto& { return r.mv; });
  best_row("best_mrar", report.best_mrar, options.show_mrar,
           [](const SubsetRecord& r) -> const auto& { return r.mrar; });
}

// --- table --------------------------------------------------------------

constexpr const char* kMvRowLabel = "Portfolio - Minimum Variance (MV)";
constexpr const char* kMrarRowLabel =
    "Portfolio - Maximum Risk Adjusted Return (MRAR)";

void pad_to(std::string& line, std::size_t width) {
  if (line.size() < width) line.append(width - line.size(), ' ');
}

void table_cell(std::string& line, std::size_t start, const std::string& text) {
  pad_to(line, start);
  line += text;
}

void render_table(const RankingReport& report,
                  const std::vector<AssetStats>& stats,
                  const RenderOptions& options, std::ostream& out) {
  std::size_t name_width = std::string(kMrarRowLabel).size();
  for (const AssetStats& s : stats) name_width = std::max(name_width, s.name.size());
  const std::size_t col = name_width + 2;
  const std::size_t num_w = 16;

  const std::vector<const SubsetRecord*> selected =
      select_records(report, options);
  for (const SubsetRecord* record : selected) {
    out << "Portfolio " << record->subset.ordinal << " of "
        << report.portfolio_count << ":";
    for (std::size_t a = 0; a < record->subset.size(); ++a) {
      out << (a ? ", " : " ")
          << stats[static_cast<std::size_t>(record->subset.indices[a]) - 1]
                 .name;
    }
    out << '\n';

    std::string header = "Assets";
    table_cell(header, col, "Average Return");
    table_cell(header, col + num_w, "SD");
    table_cell(header, col + 2 * num_w, "Risk Adjusted Return");
    std::size_t wcol = col + 3 * num_w + 6;
    if (options.show_mv) {
      table_cell(header, wcol, "w for MV");
      wcol += num_w;
    }
    if (options.show_mrar) table_cell(header, wcol, "w for MRAR");
    out << header << '\n';

    for (std::size_t a = 0; a < record->subset.size(); ++a) {
      const AssetStats& s =
          stats[static_cast<std::size_t>(record->subset.indices[a]) - 1];
      std::string line = s.name;
      table_cell(line, col, fixed8(s.mean));
      table_cell(line, col + num_w, fixed8(s.std_dev));
      table_cell(line, col + 2 * num_w, s.rar ? fixed8(*s.rar) : "undefined");
      std::size_t w = col + 3 * num_w + 6;
      if (options.show_mv) {
        if (record->mv)
          table_cell(line, w, fixed8(record->mv->weights.weights[a]));
        w += num_w;
      }
      if (options.show_mrar && record->mrar)
        table_cell(line, w, fixed8(record->mrar->weights.weights[a]));
      out << line << '\n';
    }

    auto summary_row = [&](const char* label,
                           const std::optional<PortfolioSolution>& sol,
                           const std::optional<FailureNote>& failure) {
      std::string line = label;
      if (sol) {
        table_cell(line, col, fixed8(sol->mean));
        table_cell(line, col + num_w, fixed8(sol->std_dev));
        table_cell(line, col + 2 * num_w,
                   sol->rar ? fixed8(*sol->rar) : "undefined");
        if (const char* warning = warning_label(sol->warning)) {
          table_cell(line, col + 3 * num_w + 6,
                     std::string("[warning: ") + warning + "]");
        }
      } else {
        table_cell(line, col, "solve failed: " +
                                  (failure ? failure->message : "not solved"));
      }
      out << line << '\n';
    };
    if (options.show_mv) summary_row(kMvRowLabel, record->mv, record->mv_failure);
    if (options.show_mrar)
      summary_row(kMrarRowLabel, record->mrar, record->mrar_failure);
    out << '\n';
  }

  out << "Portfolios considered: P = " << report.portfolio_count << '\n';
  auto best_line = [&](const char* label,
                       const std::optional<std::uint64_t>& best,
                       auto get_solution) {
    out << "Best portfolio by " << label << " risk adjusted return: ";
    if (!best) {
      out << "none (no solvable portfolio)\n";
      return;
    }
    out << "portfolio " << *best;
    for (const SubsetRecord& record : report.records)
      if (record.subset.ordinal == *best) {
        const std::optional<PortfolioSolution>& sol = get_solution(record);
        if (sol && sol->rar) out << " (RAR " << fixed8(*sol->rar) << ")";
      }
    out << '\n';
  };
  if (options.show_mv)
    best_line("MV", report.best_mv,
              [](const SubsetRecord& r) -> const auto& { return r.mv; });
  if (options.show_mrar)
    best_line("MRAR", report.best_mrar,
              [](const SubsetRecord& r) -> const auto& { return r.mrar; });
}

}  // namespace

void render_report(const RankingReport& report,
                   const std::vector<AssetStats>& stats,
                   const RenderOptions& options, std::ostream& out) {
  switch (options.format) {
    case OutputFormat::table:
      render_table(report, stats, options, out);
      break;
    case OutputFormat::csv:
      render_csv(report, stats, options, out);
      break;
    case OutputFormat::json:
      render_json(report, stats, options, out);
      break;
  }
}

namespace {

void print_matrix(std::ostream& out, const Matrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out << "   ";
    for (std::size_t j = 0; j < m.cols(); ++j)
      out << ' ' << fixed8(m(i, j));
    out << '\n';
  }
}

}  // namespace

void emit_trace(const std::vector<TraceRecord>& trace, std::ostream& out) {
  for (const TraceRecord& t : trace) {
    const bool mv = t.method_label == "MV";
    out << "=== portfolio " << t.ordinal << ", " << t.method_label << ":";
    for (std::size_t a = 0; a < t.asset_names.size(); ++a)
      out << (a ? ", " : " ") << t.asset_names[a];
    out << " ===\n";
    out << "covariance submatrix:\n";
    print_matrix(out, t.omega);
    out << (mv ? "B" : "G") << " (coefficient block):\n";
    print_matrix(out, t.coefficient_block);
    out << (mv ? "E" : "K") << " (stacked with budget row):\n";
    print_matrix(out, t.stacked);
    out << "|" << (mv ? "E" : "K") << "| = " << fixed8(t.determinant) << '\n';
    if (!t.cramer_numerators.empty()) {
      out << "weight numerators (signed minors):";
      for (double numerator : t.cramer_numerators)
        out << ' ' << fixed8(numerator);
      out << '\n';
    } else {
      out << "elimination pivot rows:";
      for (int row : t.pivot_rows) out << ' ' << row + 1;
      out << "\npivot values:";
      for (double pivot : t.pivot_values) out << ' ' << fixed8(pivot);
      out << '\n';
    }
    out << "w =";
    for (double w : t.weights) out << ' ' << fixed8(w);
    out << "\nF(w) = " << fixed8(t.mean) << "  V(w) = " << fixed8(t.variance)
        << "  SD = " << fixed8(std::sqrt(std::max(t.variance, 0.0)))
        << "  RAR = " << (t.rar ? fixed8(*t.rar) : "undefined") << '\n'
        << '\n';
  }
}

}  // namespace portopt
