#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rlvrseq/domain.hpp"
#include "rlvrseq/rng.hpp"

namespace rlvrseq {

/// Counts of optimal solutions grow exponentially with instance size.
using BigCount = boost::multiprecision::cpp_int;

struct GeneratorConfig {
  int length_min = 5;   // m_min / n_min
  int length_max = 16;  // m_max / n_max
  int start_max = 540;  // S_max, minutes
  int duration_min = 10;
  int duration_max = 120;
  int value_min = 1;
  int value_max = 1000;
  int max_tries = 10000;

  /// Throws ConfigError when the bounds are inconsistent.
  void validate() const;
};

struct OptCount {
  int opt = 0;
  BigCount count = 0;
  /// Present iff count == 1. Activity: canonical (finish, id) order; LIS: row order.
  std::optional<IdSequence> unique_solution;
};

// Activity scheduling --------------------------------------------------------

/// Maximum number of pairwise compatible half-open intervals, the number of
/// distinct optimal subsets, and the optimum itself when it is unique.
OptCount count_optima_and_backtrack(const ActivityInstance& instance);

/// Earliest-finish greedy over the (finish, start, id) order.
IdSequence greedy_earliest_finish(const ActivityInstance& instance);

/// One candidate draw of the rejection sampler (no uniqueness check).
ActivityInstance sample_activity_candidate(const GeneratorConfig& config, Rng& rng);

/// Rejection-samples until the optimum is unique and the greedy agrees with it.
/// Throws GenerationError after config.max_tries failed candidates.
std::pair<ActivityInstance, GroundTruth> generate_activity(const GeneratorConfig& config,
                                                           std::uint64_t seed);

// Longest increasing subsequence ---------------------------------------------

/// Strict LIS length and number of LIS via the quadratic recurrence. When the
/// LIS is unique, unique_solution carries its 1-based indices.
/// Throws DomainError on empty input.
OptCount count_lis_length_and_number(std::span<const int> values);

/// Patience sorting with predecessor links (lower_bound placement). Returns
/// 1-based indices in increasing row order. Only meaningful when the LIS is unique.
IdSequence patience_reconstruct(std::span<const int> values);

/// Final tails vector of patience sorting: tails[l] is the smallest value
/// ending a strictly increasing subsequence of length l+1.
std::vector<int> patience_tails(std::span<const int> values);

LisInstance sample_lis_candidate(const GeneratorConfig& config, Rng& rng);

/// Rejection-samples until the LIS is unique and has length >= 2.
std::pair<LisInstance, GroundTruth> generate_lis(const GeneratorConfig& config,
                                                 std::uint64_t seed);

// Exhaustive oracles ---------------------------------------------------------

inline constexpr std::size_t kBruteForceCap = 20;

struct BruteForceResult {
  int opt = 0;
  std::uint64_t count = 0;
  std::vector<IdSequence> optima;  // each in canonical order, list sorted lexicographically
};

/// Enumerates all 2^m subsets. Refuses (DomainError) above kBruteForceCap.
BruteForceResult brute_force_activity(const ActivityInstance& instance);

/// Enumerates all 2^n index subsets. Refuses (DomainError) above kBruteForceCap.
BruteForceResult brute_force_lis(std::span<const int> values);

}  // namespace rlvrseq
