#include "portopt/market_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <set>
#include <sstream>
#include <system_error>

#include <nlohmann/json.hpp>

#include "portopt/errors.hpp"

namespace portopt {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.emplace_back(trim({line.data() + start, line.size() - start}));
      break;
    }
    fields.emplace_back(trim({line.data() + start, comma - start}));
    start = comma + 1;
  }
  return fields;
}

/// Strict numeric parse: integer, decimal or scientific notation, decimal
/// point only, the whole field consumed. Rejects inf/nan and locale digits.
bool parse_number(std::string_view field, double& out) {
  if (field.empty()) return false;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (*first == '+') {
    ++first;  // from_chars takes '-' but not '+'
    if (first == last || *first == '+' || *first == '-') return false;
  }
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) return false;
  return std::isfinite(out);
}

[[noreturn]] void cell_error(Errc code, std::size_t row, std::size_t col,
                             const std::string& field) {
  std::ostringstream msg;
  if (code == Errc::non_numeric_cell)
    msg << "non-numeric cell \"" << field << "\"";
  else
    msg << "non-positive price " << field;
  msg << " at data row " << row << ", column " << col;
  throw Error(code, msg.str());
}

void check_unique_names(const std::vector<std::string>& names) {
  std::set<std::string_view> seen;
  for (const auto& name : names) {
    if (name.empty())
      throw Error(Errc::malformed_document, "empty asset name in header");
    if (!seen.insert(name).second)
      throw Error(Errc::duplicate_asset_name,
                  "duplicate asset name \"" + name + "\"");
  }
}

std::string format_shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

PriceTable parse_price_table(std::istream& text, bool has_label_column) {
  std::string line;
  std::vector<std::string> header;
  while (std::getline(text, line)) {
    if (trim(line).empty()) continue;
    header = split_csv_line(line);
    break;
  }
  if (header.empty()) throw Error(Errc::empty_input, "no header row");

  const std::size_t first_asset = has_label_column ? 1 : 0;
  if (header.size() <= first_asset)
    throw Error(Errc::empty_input, "header has no asset columns");

  PriceTable table;
  table.asset_names.assign(header.begin() + first_asset, header.end());
  check_unique_names(table.asset_names);
  const std::size_t n = table.asset_names.size();

  std::vector<double> values;
  std::size_t data_row = 0;
  while (std::getline(text, line)) {
    if (trim(line).empty()) continue;
    ++data_row;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      std::ostringstream msg;
      msg << "data row " << data_row << " has " << fields.size()
          << " fields, expected " << header.size();
      throw Error(Errc::ragged_rows, msg.str());
    }
    if (has_label_column) table.period_labels.push_back(fields[0]);
    for (std::size_t j = 0; j < n; ++j) {
      const std::string& field = fields[first_asset + j];
      double v = 0.0;
      if (!parse_number(field, v))
        cell_error(Errc::non_numeric_cell, data_row, first_asset + j + 1,
                   field);
      if (v <= 0.0)
        cell_error(Errc::non_positive_price, data_row, first_asset + j + 1,
                   field);
      values.push_back(v);
    }
  }

  if (data_row == 0) throw Error(Errc::empty_input, "no data rows");
  if (data_row < 3) {
    std::ostringstream msg;
    msg << "only " << data_row
        << " price rows; at least 3 are needed to estimate moments";
    throw Error(Errc::too_few_rows, msg.str());
  }

  table.prices = Matrix(data_row, n);
  std::copy(values.begin(), values.end(), table.prices.data().begin());
  return table;
}

PriceTable parse_price_table(const std::string& text, bool has_label_column) {
  std::istringstream stream(text);
  return parse_price_table(stream, has_label_column);
}

std::string render_price_table(const PriceTable& table) {
  std::ostringstream out;
  const bool labels = !table.period_labels.empty();
  if (labels) out << "period,";
  for (std::size_t j = 0; j < table.num_assets(); ++j) {
    if (j) out << ',';
    out << table.asset_names[j];
  }
  out << '\n';
  for (std::size_t t = 0; t < table.num_periods(); ++t) {
    if (labels) out << table.period_labels[t] << ',';
    for (std::size_t j = 0; j < table.num_assets(); ++j) {
      if (j) out << ',';
      out << format_shortest(table.prices(t, j));
    }
    out << '\n';
  }
  return out.str();
}

ReturnMatrix compute_returns(const PriceTable& table, ReturnKind kind) {
  const std::size_t periods = table.num_periods();
  const std::size_t n = table.num_assets();
  ReturnMatrix result;
  result.asset_names = table.asset_names;
  result.returns = Matrix(periods - 1, n);
  for (std::size_t t = 0; t + 1 < periods; ++t) {
    for (std::size_t j = 0; j < n; ++j) {
      const double ratio = table.prices(t + 1, j) / table.prices(t, j);
      result.returns(t, j) =
          kind == ReturnKind::simple ? ratio - 1.0 : std::log(ratio);
    }
  }
  return result;
}

namespace {

const nlohmann::json& require_field(const nlohmann::json& doc,
                                    const char* name) {
  const auto it = doc.find(name);
  if (it == doc.end())
    throw Error(Errc::malformed_document,
                std::string("missing required field `") + name + "`");
  return *it;
}

}  // namespace

ParameterSet parse_parameter_file(std::istream& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::malformed_document,
                std::string("parameter file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object())
    throw Error(Errc::malformed_document,
                "parameter file must be a JSON object");

  const nlohmann::json& assets = require_field(doc, "assets");
  const nlohmann::json& means = require_field(doc, "means");
  const nlohmann::json& covariance = require_field(doc, "covariance");

  ParameterSet params;
  if (!assets.is_array() || assets.empty())
    throw Error(Errc::malformed_document,
                "`assets` must be a non-empty array of strings");
  for (const auto& name : assets) {
    if (!name.is_string())
      throw Error(Errc::malformed_document,
                  "`assets` must be a non-empty array of strings");
    params.asset_names.push_back(name.get<std::string>());
  }
  check_unique_names(params.asset_names);
  const std::size_t n = params.asset_names.size();

  if (!means.is_array())
    throw Error(Errc::malformed_document, "`means` must be an array");
  if (means.size() != n) {
    std::ostringstream msg;
    msg << "`means` has " << means.size() << " entries for " << n << " assets";
    throw Error(Errc::dimension_mismatch, msg.str());
  }
  for (const auto& v : means) {
    if (!v.is_number())
      throw Error(Errc::malformed_document, "`means` entries must be numbers");
    params.means.push_back(v.get<double>());
  }

  if (!covariance.is_array() || covariance.size() != n) {
    std::ostringstream msg;
    msg << "`covariance` must be a " << n << "x" << n << " matrix";
    throw Error(covariance.is_array() ? Errc::dimension_mismatch
                                      : Errc::malformed_document,
                msg.str());
  }
  Matrix cov(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = covariance[i];
    if (!row.is_array())
      throw Error(Errc::malformed_document,
                  "`covariance` rows must be arrays of numbers");
    if (row.size() != n) {
      std::ostringstream msg;
      msg << "`covariance` row " << i + 1 << " has " << row.size()
          << " entries, expected " << n;
      throw Error(Errc::dimension_mismatch, msg.str());
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (!row[j].is_number())
        throw Error(Errc::malformed_document,
                    "`covariance` entries must be numbers");
      cov(i, j) = row[j].get<double>();
    }
  }

  const double scale = cov.max_abs();
  double worst_gap = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      worst_gap = std::max(worst_gap, std::abs(cov(i, j) - cov(j, i)));
  if (worst_gap > 1e-9 * scale) {
    std::ostringstream msg;
    msg << "covariance asymmetry " << worst_gap
        << " exceeds tolerance 1e-9 relative to largest entry " << scale;
    throw Error(Errc::asymmetric_covariance, msg.str());
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (cov(i, j) + cov(j, i));
      cov(i, j) = avg;
      cov(j, i) = avg;
    }

  for (std::size_t i = 0; i < n; ++i) {
    if (cov(i, i) < 0.0) {
      std::ostringstream msg;
      msg << "negative variance " << cov(i, i) << " for asset `"
          << params.asset_names[i] << "`";
      throw Error(Errc::negative_variance, msg.str());
    }
  }

  params.covariance = std::move(cov);
  return params;
}

ParameterSet parse_parameter_file(const std::string& text) {
  std::istringstream stream(text);
  return parse_parameter_file(stream);
}

}  // namespace portopt
