#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string_view>
#include <vector>

namespace rlvrseq {

/// Input-only descriptors of an LIS instance, used to model which heuristics
/// a policy's numeric answers track. Undefined values (e.g. the mean of an
/// empty set of positive steps) are NaN.
struct LisFeatureVector {
  // global scale
  double n, min, max, range, mean, std, q25, q50, q75, uniq_ratio, dup_ratio;
  // adjacent order
  double adj_inc_ratio, adj_dec_ratio, adj_eq_ratio;
  double pos_delta_mean, pos_delta_std, neg_delta_mean, neg_delta_std, sign_change_ratio;
  // pairwise order
  double pair_inc_ratio, inversion_ratio, tau_like;
  // runs and structure
  double max_inc_run, max_dec_run, num_monotone_runs, n_local_max, n_local_min, record_highs,
      record_lows;
  // heuristic LIS lengths
  double greedy_len, greedy_rev_len, beam2, beam3, budget1, budget2;
  // patience tails
  double tail_mean, tail_std, tail_iqr, tail_slope;
  // reference
  double rand_lis_baseline;

  static constexpr std::size_t kCount = 40;
  static std::span<const std::string_view> names();
  std::vector<double> values() const;
  bool all_finite() const;
};

/// Throws DomainError for fewer than two values.
LisFeatureVector lis_features(std::span<const int> values);

// Heuristic LIS lengths, exposed for testing.

/// Record-high count: append whenever a value beats the current chain end.
int greedy_lis_length(std::span<const int> values);

/// Right-to-left greedy: keep a value when it is below the last kept one.
/// The kept values, read left to right, form an increasing subsequence.
int greedy_reverse_lis_length(std::span<const int> values);

/// Nested beam search of width `width` over (length, last value) chain states.
/// The width-B state set always contains the width-(B-1) set, so lengths are
/// monotone in the width; width 1 is exactly the greedy.
int beam_lis_length(std::span<const int> values, int width);

/// Greedy append where, at up to `backtracks` failures, the chain may instead
/// replace its first element >= v by v and drop everything after it. Returns
/// the best final length over all such choices.
int budget_lis_length(std::span<const int> values, int backtracks);

/// Linear-interpolation quantile of an unsorted sample.
double quantile(std::vector<double> sample, double q);

// Grouped train/test split ---------------------------------------------------

struct GroupSplit {
  std::set<std::int64_t> train_instance_ids;
  std::set<std::int64_t> test_instance_ids;
  double test_fraction = 0.25;
  std::uint64_t split_seed = 0;

  bool is_test(std::int64_t instance_id) const { return test_instance_ids.count(instance_id) > 0; }
};

/// Seeded shuffle of the distinct ids; the first ceil(fraction * N) go to test.
/// Throws DomainError on an empty id set or a fraction outside (0, 1).
GroupSplit group_split(std::span<const std::int64_t> instance_ids, double test_fraction,
                       std::uint64_t seed);

// Feature export --------------------------------------------------------------

struct FeatureRecord {
  std::int64_t instance_id = 0;
  std::int64_t sample_idx = 0;
  std::vector<int> values;             // instance input
  std::optional<std::int64_t> answer;  // the model's emitted answer (regression target)
};

struct FeatureRow {
  std::int64_t instance_id = 0;
  std::int64_t sample_idx = 0;
  LisFeatureVector features{};
  std::int64_t target = 0;
  bool test = false;
};

struct FeatureTable {
  std::vector<FeatureRow> rows;
  std::size_t dropped = 0;  // undefined feature or missing answer
};

/// Builds rows for every record whose features are all finite and whose answer parsed.
FeatureTable export_features(std::span<const FeatureRecord> records, const GroupSplit& split);

/// Header: instance_id,sample_idx,<feature names>,target,split
void write_feature_csv(std::ostream& out, const FeatureTable& table);

}  // namespace rlvrseq
