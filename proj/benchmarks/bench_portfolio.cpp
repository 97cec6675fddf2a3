#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "portopt/enumeration.hpp"
#include "portopt/market_data.hpp"
#include "portopt/matrix.hpp"
#include "portopt/moments.hpp"
#include "portopt/solver.hpp"

namespace {

using portopt::Matrix;
using portopt::MomentEstimate;

/// Correlated geometric random walks shaped like the bundled sample:
/// `periods` daily closes for n instruments.
portopt::PriceTable synthetic_prices(int n, int periods) {
  std::mt19937_64 rng(987654321);
  std::normal_distribution<double> normal;
  portopt::PriceTable table;
  for (int j = 0; j < n; ++j)
    table.asset_names.push_back("S" + std::to_string(j + 1));
  table.prices = Matrix(periods, n);
  std::vector<double> level(n, 100.0);
  for (int t = 0; t < periods; ++t) {
    const double market = 0.004 * normal(rng);
    for (int j = 0; j < n; ++j) {
      if (t > 0) level[j] *= std::exp(market + 0.01 * normal(rng));
      table.prices(t, j) = level[j];
    }
  }
  return table;
}

MomentEstimate synthetic_moments(int n, int periods = 65) {
  return portopt::estimate_moments(
      portopt::compute_returns(synthetic_prices(n, periods)));
}

void BM_EstimateMoments(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const portopt::PriceTable table = synthetic_prices(n, 65);
  const portopt::ReturnMatrix returns = portopt::compute_returns(table);
  for (auto _ : state)
    benchmark::DoNotOptimize(portopt::estimate_moments(returns));
}
BENCHMARK(BM_EstimateMoments)->Arg(4)->Arg(10);

void BM_SolveBothMethods(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const MomentEstimate moments = synthetic_moments(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(portopt::solve_portfolio(moments, portopt::Method::mv));
    benchmark::DoNotOptimize(
        portopt::solve_portfolio(moments, portopt::Method::mrar));
  }
}
BENCHMARK(BM_SolveBothMethods)->Arg(2)->Arg(4)->Arg(8)->Arg(10);

void BM_DeterminantRatioSolve(benchmark::State& state) {
  const MomentEstimate moments = synthetic_moments(4);
  const portopt::ConstraintSystem system = portopt::build_mv_system(moments);
  for (auto _ : state)
    benchmark::DoNotOptimize(portopt::cramer_solve_4(system));
}
BENCHMARK(BM_DeterminantRatioSolve);

/// The headline workload: every subset of 10 assets (1013 portfolios),
/// both criteria per subset.
void BM_EnumerateAndRank(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const MomentEstimate moments = synthetic_moments(n);
  for (auto _ : state)
    benchmark::DoNotOptimize(portopt::rank_portfolios(moments));
}
BENCHMARK(BM_EnumerateAndRank)->Arg(4)->Arg(8)->Arg(10)
    ->Unit(benchmark::kMillisecond);

void BM_SubsetEnumerationOnly(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(portopt::enumerate_subsets(n));
}
BENCHMARK(BM_SubsetEnumerationOnly)->Arg(10)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
