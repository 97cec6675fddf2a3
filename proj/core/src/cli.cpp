#include "portopt/cli.hpp"

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "portopt/enumeration.hpp"
#include "portopt/errors.hpp"
#include "portopt/trace.hpp"

namespace portopt {

namespace {

constexpr const char* kSampleCsv =
    "USDJPY,BRENT,DAX,DJI\n"
    "110.4200,71.3500,12410.00,26180.00\n"
    "110.5253,71.1852,12334.87,26304.69\n"
    "110.0092,72.4918,12458.35,26367.41\n"
    "109.0126,76.2292,12481.35,26375.93\n"
    "109.6967,77.2256,12296.40,26442.10\n"
    "110.0971,77.3315,12052.07,25891.78\n"
    "110.4085,77.4686,11962.23,26151.60\n"
    "110.7313,77.7656,11955.32,26447.46\n"
    "110.9321,79.0238,11951.92,26347.58\n"
    "111.6515,79.4268,11772.00,26041.47\n"
    "111.3630,78.4980,11705.96,25847.77\n"
    "112.1235,79.6791,11871.56,26478.64\n"
    "112.5250,78.4440,11801.16,26835.59\n"
    "112.6969,79.4306,11804.90,26928.52\n"
    "112.7896,81.1053,11695.35,26925.10\n"
    "112.9938,79.5297,11716.15,26894.70\n"
    "111.9380,79.2772,11665.46,26715.99\n"
    "111.9263,80.2307,11718.88,26834.23\n"
    "112.1183,81.4315,11784.56,26827.44\n"
    "111.9784,82.5469,11815.93,26761.66\n"
    "111.7759,81.5489,11740.99,26728.79\n"
    "111.8526,80.4466,11797.53,26776.42\n"
    "112.2379,80.2300,11623.23,26498.54\n"
    "112.0503,82.1864,11570.18,26591.72\n"
    "111.7927,83.1465,11589.50,26431.97\n"
    "112.5631,83.8773,11644.80,26608.23\n"
    "112.4960,84.0409,11722.69,26414.05\n"
    "112.4976,83.2286,11686.36,26457.06\n"
    "112.5676,83.7278,11761.28,26366.69\n"
    "112.2175,85.0042,11711.59,26311.66\n"
    "111.7567,84.2122,11795.16,26501.94\n"
    "112.7548,80.1557,11736.12,26500.54\n"
    "112.1364,80.1480,11752.80,26666.33\n"
    "113.0638,80.1770,11850.10,26783.66\n"
    "112.4738,80.6502,11815.60,26751.86\n"
    "112.7512,80.3237,11817.78,27048.23\n"
    "112.4857,82.1281,11997.75,27058.16\n"
    "111.8627,83.5536,11962.73,26964.49\n"
    "111.7320,83.8366,12042.08,27198.76\n"
    "111.9500,83.9443,12161.67,27317.76\n"
    "112.0828,82.9452,12255.76,27219.68\n"
    "112.2738,84.9876,12340.77,27409.38\n"
    "113.3233,83.2181,12241.86,27033.93\n"
    "113.4343,83.4586,12225.01,27054.97\n"
    "112.8761,85.9688,12109.50,27018.00\n"
    "112.5829,86.1763,12169.70,27198.32\n"
    "113.4832,86.9549,12128.22,27181.84\n"
    "113.6950,88.9702,12298.28,27544.05\n"
    "113.5151,88.7379,12115.64,27288.56\n"
    "113.1788,88.8536,12189.56,27401.74\n"
    "113.2578,87.8596,12130.80,27493.11\n"
    "113.8751,87.4145,12214.22,27704.48\n"
    "114.5975,88.0570,12333.77,28014.92\n"
    "114.5850,87.8641,12366.49,27779.14\n"
    "114.7450,88.6185,12314.14,27779.83\n"
    "115.1852,88.0907,12281.62,28030.82\n"
    "114.4169,88.7465,12303.05,27934.93\n"
    "114.2226,88.2081,12313.97,27795.54\n"
    "114.1922,87.2982,12110.07,27682.91\n"
    "114.4908,87.6957,12188.70,27787.66\n"
    "114.9434,89.5146,12322.99,28388.90\n"
    "115.2049,89.0724,12332.35,28429.94\n"
    "115.3616,89.2194,12318.51,28363.69\n"
    "115.2643,91.4607,12204.29,28363.69\n"
    "114.8609,90.9286,12272.97,28417.10\n";

std::string read_file(const std::string& path) {
  std::ifstream stream(path, std::ios::binary);
  if (!stream)
    throw Error(Errc::io_error, "cannot open file: " + path);
  std::ostringstream content;
  content << stream.rdbuf();
  if (stream.bad())
    throw Error(Errc::io_error, "cannot read file: " + path);
  return content.str();
}

/// Load moments and per-asset stats from whichever source the config names.
/// Parse errors are re-thrown with the source prepended so the diagnostic
/// names file, row and column.
MomentEstimate load_moments(const RunConfig& config) {
  std::string source;
  try {
    if (config.params_path) {
      source = *config.params_path;
      return moments_from_parameters(parse_parameter_file(read_file(source)));
    }
    std::string text;
    if (config.input_path) {
      source = *config.input_path;
      text = read_file(source);
    } else {
      source = "<sample>";
      text = kSampleCsv;
    }
    const PriceTable table = parse_price_table(text, config.label_column);
    const ReturnMatrix returns = compute_returns(table, config.returns_kind);
    return estimate_moments(returns, config.cov_divisor);
  } catch (const Error& e) {
    throw Error(e.code(), source + ": " + e.what());
  }
}

}  // namespace

const char* sample_csv() { return kSampleCsv; }

std::optional<RunConfig> parse_args(int argc, const char* const* argv,
                                    std::ostream& out) {
  CLI::App app{
      "Portfolio construction: minimum-variance and maximum "
      "risk-adjusted-return weights, with optional subset enumeration."};
  app.name("portopt");

  std::string input;
  std::string params;
  bool sample = false;
  bool label_column = false;
  std::string method = "both";
  bool enumerate_all = false;
  std::uint64_t top = 0;
  std::string format = "table";
  bool trace = false;
  std::string returns = "simple";
  std::string cov = "sample";
  int max_assets = 0;

  app.add_option("--input", input, "CSV price table to analyze");
  app.add_option("--params", params,
                 "JSON parameter file carrying means and covariance");
  app.add_flag("--sample", sample, "use the bundled sample dataset");
  app.add_flag("--label-column", label_column,
               "first CSV column holds period labels, not prices");
  app.add_option("--method", method, "criterion to solve (default both)")
      ->check(CLI::IsMember({"mv", "mrar", "both"}));
  app.add_flag("--enumerate", enumerate_all,
               "rank every asset subset of size >= 2");
  app.add_option("--top", top, "list only the K best portfolios")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", format, "output format (default table)")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  app.add_flag("--trace", trace,
               "write step-by-step calculations to the diagnostic stream");
  app.add_option("--returns", returns, "return kind (default simple)")
      ->check(CLI::IsMember({"simple", "log"}));
  app.add_option("--cov", cov, "covariance divisor (default sample)")
      ->check(CLI::IsMember({"sample", "population"}));
  app.add_option("--max-assets", max_assets,
                 "raise or lower the enumeration size cap")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  const int sources =
      (input.empty() ? 0 : 1) + (params.empty() ? 0 : 1) + (sample ? 1 : 0);
  if (sources != 1)
    throw UsageError(
        "exactly one of --input, --params or --sample is required");

  RunConfig config;
  if (!input.empty()) config.input_path = input;
  if (!params.empty()) config.params_path = params;
  config.use_sample = sample;
  config.label_column = label_column;
  config.method = method == "mv"     ? MethodChoice::mv
                  : method == "mrar" ? MethodChoice::mrar
                                     : MethodChoice::both;
  config.enumerate_all = enumerate_all;
  if (top > 0) config.top_k = top;
  config.format = format == "csv"    ? OutputFormat::csv
                  : format == "json" ? OutputFormat::json
                                     : OutputFormat::table;
  config.trace = trace;
  config.returns_kind =
      returns == "log" ? ReturnKind::logarithmic : ReturnKind::simple;
  config.cov_divisor =
      cov == "population" ? CovDivisor::population : CovDivisor::sample;
  if (max_assets > 0) config.max_assets = max_assets;
  return config;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const MomentEstimate moments = load_moments(config);
    const std::vector<AssetStats> stats = asset_stats(moments);

    std::vector<TraceRecord> trace;
    RankOptions rank;
    rank.solve_mv = config.method != MethodChoice::mrar;
    rank.solve_mrar = config.method != MethodChoice::mv;
    if (config.max_assets) rank.enumeration_cap = *config.max_assets;
    if (config.trace) rank.trace = &trace;

    const RankingReport report = config.enumerate_all
                                     ? rank_portfolios(moments, rank)
                                     : single_portfolio_report(moments, rank);

    RenderOptions render;
    render.format = config.format;
    render.show_mv = rank.solve_mv;
    render.show_mrar = rank.solve_mrar;
    render.top_k = config.top_k;
    render_report(report, stats, render, out);
    if (config.trace) emit_trace(trace, err);
    return 0;
  } catch (const SingularSystemError& e) {
    err << "error: " << e.what() << '\n';
    err << "condition estimate: " << e.condition_estimate() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_numerical_error(e.code()) ? 2 : 1;
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out,
               std::ostream& err) {
  try {
    const std::optional<RunConfig> config = parse_args(argc, argv, out);
    if (!config) return 0;
    return run(*config, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace portopt
