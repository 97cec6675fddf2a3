#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>

#include "portopt/errors.hpp"
#include "portopt/market_data.hpp"

using namespace portopt;

namespace {

Errc code_of(const std::string& text, bool label_column = false) {
  try {
    parse_price_table(text, label_column);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a parse error");
  return Errc::empty_input;
}

}  // namespace

TEST_CASE("a plain price table parses") {
  const PriceTable table = parse_price_table(
      "A,B\n"
      "100,200\n"
      "110,190\n"
      "121,210\n");
  CHECK(table.asset_names == std::vector<std::string>{"A", "B"});
  CHECK(table.num_periods() == 3);
  CHECK(table.prices(0, 1) == 200.0);
  CHECK(table.prices(2, 0) == 121.0);
  CHECK(table.period_labels.empty());
}

TEST_CASE("whitespace, CRLF line ends and blank lines are tolerated") {
  const PriceTable table = parse_price_table(
      " A , B \r\n"
      "\r\n"
      "1.5, 2.5\r\n"
      "1.6,2.4\n"
      "\n"
      "1.7 ,2.6\n");
  CHECK(table.asset_names == std::vector<std::string>{"A", "B"});
  CHECK(table.num_periods() == 3);
  CHECK(table.prices(0, 0) == 1.5);
  CHECK(table.prices(2, 1) == 2.6);
}

TEST_CASE("a label column is carried separately from the prices") {
  const PriceTable table = parse_price_table(
      "date,X,Y\n"
      "2021-01-04,10,20\n"
      "2021-01-05,11,21\n"
      "2021-01-06,12,22\n",
      /*has_label_column=*/true);
  CHECK(table.asset_names == std::vector<std::string>{"X", "Y"});
  CHECK(table.period_labels ==
        std::vector<std::string>{"2021-01-04", "2021-01-05", "2021-01-06"});
  CHECK(table.prices(1, 0) == 11.0);
}

TEST_CASE("each malformation maps to its own error code") {
  CHECK(code_of("") == Errc::empty_input);
  CHECK(code_of("A,B\n") == Errc::empty_input);
  CHECK(code_of("A,B\n1,2\n3,4\n") == Errc::too_few_rows);
  CHECK(code_of("A,B\n1,2\n3\n4,5\n") == Errc::ragged_rows);
  CHECK(code_of("A,B\n1,x\n3,4\n5,6\n") == Errc::non_numeric_cell);
  CHECK(code_of("A,B\n1,2\n3,nan\n5,6\n") == Errc::non_numeric_cell);
  CHECK(code_of("A,B\n1,2\n3,1e\n5,6\n") == Errc::non_numeric_cell);
  CHECK(code_of("A,B\n1,2\n3,+-4\n5,6\n") == Errc::non_numeric_cell);
  CHECK(code_of("A,B\n1,0\n3,4\n5,6\n") == Errc::non_positive_price);
  CHECK(code_of("A,B\n1,-2\n3,4\n5,6\n") == Errc::non_positive_price);
  CHECK(code_of("A,A\n1,2\n3,4\n5,6\n") == Errc::duplicate_asset_name);
  CHECK(code_of("A,\n1,2\n3,4\n5,6\n") == Errc::malformed_document);
}

TEST_CASE("parse errors name the offending row and column") {
  try {
    parse_price_table("A,B\n1,2\n3,bad\n5,6\n");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    const std::string what = e.what();
    CHECK(what.find("row 2") != std::string::npos);
    CHECK(what.find("column 2") != std::string::npos);
    CHECK(what.find("bad") != std::string::npos);
  }
}

TEST_CASE("rendered tables re-parse to the same values") {
  PriceTable table = parse_price_table(
      "P,Q\n"
      "100.125,3.0000001\n"
      "99.875,2.9999999\n"
      "101.0625,3.25\n");
  const std::string text = render_price_table(table);
  const PriceTable again = parse_price_table(text);
  CHECK(again.asset_names == table.asset_names);
  CHECK(again.prices == table.prices);
}

TEST_CASE("simple and log returns agree on their definitions") {
  const PriceTable table = parse_price_table(
      "A\n"
      "100\n"
      "110\n"
      "99\n");
  const ReturnMatrix simple = compute_returns(table, ReturnKind::simple);
  CHECK(simple.num_observations() == 2);
  CHECK(simple.returns(0, 0) == doctest::Approx(0.10).epsilon(1e-12));
  CHECK(simple.returns(1, 0) == doctest::Approx(-0.10).epsilon(1e-9));
  const ReturnMatrix log_returns =
      compute_returns(table, ReturnKind::logarithmic);
  CHECK(log_returns.returns(0, 0) ==
        doctest::Approx(std::log(1.1)).epsilon(1e-12));
  CHECK(log_returns.returns(1, 0) ==
        doctest::Approx(std::log(0.9)).epsilon(1e-12));
}

TEST_CASE("parameter files supply moments directly") {
  const ParameterSet params = parse_parameter_file(std::string(R"({
    "assets": ["A", "B"],
    "means": [0.001, 0.002],
    "covariance": [[0.0001, 0.00002], [0.00002, 0.0004]]
  })"));
  CHECK(params.asset_names == std::vector<std::string>{"A", "B"});
  CHECK(params.means[1] == 0.002);
  CHECK(params.covariance(0, 1) == 0.00002);
  CHECK(params.covariance(1, 0) == 0.00002);
}

TEST_CASE("slight covariance asymmetry is symmetrized, gross asymmetry rejected") {
  const ParameterSet params = parse_parameter_file(std::string(R"({
    "assets": ["A", "B"],
    "means": [0.0, 0.0],
    "covariance": [[1.0, 0.5000000001], [0.4999999999, 1.0]]
  })"));
  CHECK(params.covariance(0, 1) == params.covariance(1, 0));
  CHECK(params.covariance(0, 1) == doctest::Approx(0.5).epsilon(1e-12));

  try {
    parse_parameter_file(std::string(R"({
      "assets": ["A", "B"],
      "means": [0.0, 0.0],
      "covariance": [[1.0, 0.6], [0.4, 1.0]]
    })"));
    FAIL("expected asymmetric_covariance");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::asymmetric_covariance);
  }
}

TEST_CASE("parameter document errors carry specific codes") {
  auto param_code = [](const std::string& text) {
    try {
      parse_parameter_file(text);
    } catch (const Error& e) {
      return e.code();
    }
    FAIL("expected a parameter error");
    return Errc::empty_input;
  };
  CHECK(param_code("not json") == Errc::malformed_document);
  CHECK(param_code("[1,2]") == Errc::malformed_document);
  CHECK(param_code(R"({"assets": ["A"], "means": [0.0]})") ==
        Errc::malformed_document);
  CHECK(param_code(
            R"({"assets": ["A","B"], "means": [0.0], "covariance": [[1,0],[0,1]]})") ==
        Errc::dimension_mismatch);
  CHECK(param_code(
            R"({"assets": ["A","B"], "means": [0,0], "covariance": [[1,0]]})") ==
        Errc::dimension_mismatch);
  CHECK(param_code(
            R"({"assets": ["A","B"], "means": [0,0], "covariance": [[1,0],[0]]})") ==
        Errc::dimension_mismatch);
  CHECK(param_code(
            R"({"assets": ["A","A"], "means": [0,0], "covariance": [[1,0],[0,1]]})") ==
        Errc::duplicate_asset_name);
  CHECK(param_code(
            R"({"assets": ["A","B"], "means": [0,0], "covariance": [[-1,0],[0,1]]})") ==
        Errc::negative_variance);
}
