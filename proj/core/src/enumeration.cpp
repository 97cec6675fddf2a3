#include "portopt/enumeration.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace portopt {

namespace {

void require_enough_assets(int n) {
  if (n < 2) {
    std::ostringstream msg;
    msg << "subset enumeration needs at least 2 assets, got " << n;
    throw Error(Errc::too_few_assets, msg.str());
  }
}

FailureNote note_from(const Error& e) {
  FailureNote note;
  note.code = e.code();
  note.message = e.what();
  if (const auto* singular = dynamic_cast<const SingularSystemError*>(&e))
    note.condition_estimate = singular->condition_estimate();
  return note;
}

}  // namespace

std::uint64_t count_portfolios(int n) {
  require_enough_assets(n);
  if (n > 62) {
    std::ostringstream msg;
    msg << "portfolio count for " << n << " assets overflows a 64-bit counter";
    throw Error(Errc::overflow, msg.str());
  }
  // sum of C(n, n-l) over l = 0..n-2, i.e. every subset size from n down to 2
  std::uint64_t total = 0;
  std::uint64_t binom = 1;  // C(n, 0)
  for (int k = 0; k <= n; ++k) {
    if (k >= 2) total += binom;
    if (k < n)
      binom = binom * static_cast<std::uint64_t>(n - k) /
              static_cast<std::uint64_t>(k + 1);
  }
  return total;
}

std::vector<AssetSubset> enumerate_subsets(int n, int cap) {
  require_enough_assets(n);
  if (n > cap) {
    std::ostringstream msg;
    msg << n << " assets exceed the enumeration cap of " << cap
        << "; raise the cap explicitly to enumerate "
        << (n > 62 ? std::string("2^n - n - 1")
                   : std::to_string(count_portfolios(n)))
        << " portfolios";
    throw Error(Errc::enumeration_cap_exceeded, msg.str());
  }

  std::vector<AssetSubset> subsets;
  subsets.reserve(count_portfolios(n));
  std::uint64_t ordinal = 0;
  for (int size = n; size >= 2; --size) {
    // lexicographic combinations of the given size
    std::vector<int> current(size);
    std::iota(current.begin(), current.end(), 1);
    while (true) {
      subsets.push_back(AssetSubset{current, ++ordinal});
      int pos = size - 1;
      while (pos >= 0 && current[pos] == n - (size - 1 - pos)) --pos;
      if (pos < 0) break;
      ++current[pos];
      for (int k = pos + 1; k < size; ++k) current[k] = current[k - 1] + 1;
    }
  }
  return subsets;
}

namespace {

void solve_method(const MomentEstimate& sub, Method method,
                  const AssetSubset& subset, SubsetRecord& record,
                  std::vector<TraceRecord>* trace) {
  TraceRecord* slot = nullptr;
  if (trace != nullptr) {
    trace->emplace_back();
    slot = &trace->back();
    slot->ordinal = subset.ordinal;
  }
  try {
    PortfolioSolution sol = solve_portfolio(sub, method, slot);
    if (method == Method::mv)
      record.mv = std::move(sol);
    else
      record.mrar = std::move(sol);
  } catch (const Error& e) {
    if (trace != nullptr) trace->pop_back();  // no solve to show
    if (method == Method::mv)
      record.mv_failure = note_from(e);
    else
      record.mrar_failure = note_from(e);
  }
}

/// Best ordinal by defined RAR; ties break toward the lowest ordinal
/// (records are scanned in ordinal order, strict improvement required).
template <typename GetSolution>
std::optional<std::uint64_t> best_by_rar(
    const std::vector<SubsetRecord>& records, GetSolution get) {
  std::optional<std::uint64_t> best;
  double best_rar = 0.0;
  for (const SubsetRecord& record : records) {
    const std::optional<PortfolioSolution>& sol = get(record);
    if (!sol || !sol->rar) continue;
    if (!best || *sol->rar > best_rar) {
      best = record.subset.ordinal;
      best_rar = *sol->rar;
    }
  }
  return best;
}

RankingReport build_report(const MomentEstimate& moments,
                           std::vector<AssetSubset> subsets,
                           const RankOptions& options) {
  RankingReport report;
  report.portfolio_count = subsets.size();
  report.records.reserve(subsets.size());

  bool any_solved = false;
  for (AssetSubset& subset : subsets) {
    SubsetRecord record;
    const MomentEstimate sub = subset_moments(moments, subset.indices);
    record.subset = std::move(subset);
    if (options.solve_mv)
      solve_method(sub, Method::mv, record.subset, record, options.trace);
    if (options.solve_mrar)
      solve_method(sub, Method::mrar, record.subset, record, options.trace);
    any_solved = any_solved || record.mv.has_value() || record.mrar.has_value();
    report.records.push_back(std::move(record));
  }

  if (!any_solved) {
    std::ostringstream msg;
    msg << "no subset portfolio could be solved; the input moments are "
           "degenerate (every constraint system is singular)";
    const SubsetRecord& first = report.records.front();
    const std::optional<FailureNote>& note =
        first.mv_failure ? first.mv_failure : first.mrar_failure;
    if (note) msg << ": " << note->message;
    throw Error(Errc::all_subsets_singular, msg.str());
  }

  report.best_mv = best_by_rar(
      report.records, [](const SubsetRecord& r) -> const auto& { return r.mv; });
  report.best_mrar = best_by_rar(
      report.records,
      [](const SubsetRecord& r) -> const auto& { return r.mrar; });
  return report;
}

}  // namespace

RankingReport rank_portfolios(const MomentEstimate& moments,
                              const RankOptions& options) {
  const int n = static_cast<int>(moments.size());
  require_enough_assets(n);
  return build_report(moments, enumerate_subsets(n, options.enumeration_cap),
                      options);
}

RankingReport single_portfolio_report(const MomentEstimate& moments,
                                      const RankOptions& options) {
  const int n = static_cast<int>(moments.size());
  require_enough_assets(n);
  AssetSubset full;
  full.indices.resize(n);
  std::iota(full.indices.begin(), full.indices.end(), 1);
  full.ordinal = 1;
  std::vector<AssetSubset> subsets;
  subsets.push_back(std::move(full));
  return build_report(moments, std::move(subsets), options);
}

}  // namespace portopt
