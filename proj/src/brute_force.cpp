// Exhaustive oracles. Deliberately share nothing with the DP code paths.

#include <algorithm>
#include <string>

#include "rlvrseq/generators.hpp"

namespace rlvrseq {

namespace {

void record_candidate(BruteForceResult& result, int size, IdSequence ids) {
  if (size > result.opt) {
    result.opt = size;
    result.count = 0;
    result.optima.clear();
  }
  if (size == result.opt) {
    ++result.count;
    result.optima.push_back(std::move(ids));
  }
}

}  // namespace

BruteForceResult brute_force_activity(const ActivityInstance& instance) {
  const std::size_t m = instance.size();
  if (m > kBruteForceCap) {
    throw DomainError("brute force refuses " + std::to_string(m) + " activities (cap " +
                      std::to_string(kBruteForceCap) + ")");
  }
  // Order by start so pairwise compatibility reduces to checking neighbours.
  std::vector<Activity> by_start = instance.activities;
  std::sort(by_start.begin(), by_start.end(),
            [](const Activity& a, const Activity& b) { return a.start < b.start; });

  BruteForceResult result;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    bool ok = true;
    int last_finish = 0;
    bool any = false;
    IdSequence chosen;
    for (std::size_t i = 0; i < m && ok; ++i) {
      if (!(mask & (1u << i))) continue;
      if (any && by_start[i].start < last_finish) ok = false;
      last_finish = by_start[i].finish;
      any = true;
      chosen.push_back(by_start[i].id);
    }
    if (!ok) continue;
    const int size = static_cast<int>(chosen.size());
    if (size < result.opt) continue;
    record_candidate(result, size, canonical_order_activity(chosen, instance));
  }
  std::sort(result.optima.begin(), result.optima.end());
  return result;
}

BruteForceResult brute_force_lis(std::span<const int> values) {
  const std::size_t n = values.size();
  if (n > kBruteForceCap) {
    throw DomainError("brute force refuses " + std::to_string(n) + " values (cap " +
                      std::to_string(kBruteForceCap) + ")");
  }
  BruteForceResult result;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    IdSequence chosen;
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      if (!(mask & (1u << i))) continue;
      if (!chosen.empty() && values[static_cast<std::size_t>(chosen.back() - 1)] >= values[i]) ok = false;
      chosen.push_back(static_cast<RowId>(i + 1));
    }
    if (!ok) continue;
    const int size = static_cast<int>(chosen.size());
    if (size < result.opt) continue;
    record_candidate(result, size, std::move(chosen));
  }
  std::sort(result.optima.begin(), result.optima.end());
  return result;
}

}  // namespace rlvrseq
