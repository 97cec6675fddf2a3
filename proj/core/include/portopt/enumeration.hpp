#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "portopt/errors.hpp"
#include "portopt/moments.hpp"
#include "portopt/solver.hpp"
#include "portopt/trace.hpp"

namespace portopt {

inline constexpr int kDefaultEnumerationCap = 20;

/// One asset subset in the canonical enumeration order: subsets of size >= 2,
/// larger subsets first, lexicographic within a size. Positions are 1-based.
struct AssetSubset {
  std::vector<int> indices;
  std::uint64_t ordinal = 0;

  std::size_t size() const { return indices.size(); }
};

/// Why one method's solve failed on one subset.
struct FailureNote {
  Errc code = Errc::singular_system;
  std::string message;
  double condition_estimate = 0.0;
};

struct SubsetRecord {
  AssetSubset subset;
  std::optional<PortfolioSolution> mv;
  std::optional<PortfolioSolution> mrar;
  std::optional<FailureNote> mv_failure;
  std::optional<FailureNote> mrar_failure;
};

/// Every subset portfolio with both solutions, plus the best-by-MV and
/// best-by-MRAR selections (each judged by its own risk-adjusted return).
struct RankingReport {
  std::vector<SubsetRecord> records;
  std::optional<std::uint64_t> best_mv;    // ordinal, empty if none solved
  std::optional<std::uint64_t> best_mrar;  // ordinal, empty if none solved
  std::uint64_t portfolio_count = 0;
};

/// Number of subsets of size >= 2 of n assets: sum of C(n, n-l) for
/// l = 0..n-2, which telescopes to 2^n - n - 1.
std::uint64_t count_portfolios(int n);

std::vector<AssetSubset> enumerate_subsets(int n,
                                           int cap = kDefaultEnumerationCap);

struct RankOptions {
  bool solve_mv = true;
  bool solve_mrar = true;
  int enumeration_cap = kDefaultEnumerationCap;
  std::vector<TraceRecord>* trace = nullptr;
};

/// Solve every subset portfolio under both criteria and pick the best by
/// risk-adjusted return per method. Singular subsets carry failure notes and
/// are excluded from the maxima; ties break toward the lowest ordinal.
RankingReport rank_portfolios(const MomentEstimate& moments,
                              const RankOptions& options = {});

/// The non-enumerating counterpart: a single-record report for the full
/// asset set (so renderers treat both modes uniformly).
RankingReport single_portfolio_report(const MomentEstimate& moments,
                                      const RankOptions& options = {});

}  // namespace portopt
