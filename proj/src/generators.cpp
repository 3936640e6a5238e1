#include "rlvrseq/generators.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace rlvrseq {

void GeneratorConfig::validate() const {
  if (length_min < 1 || length_min > length_max) throw ConfigError("need 1 <= length_min <= length_max");
  if (start_max < 0) throw ConfigError("start_max must be >= 0");
  if (duration_min < 1 || duration_min > duration_max) {
    throw ConfigError("need 1 <= duration_min <= duration_max");
  }
  if (value_min > value_max) throw ConfigError("need value_min <= value_max");
  if (max_tries < 1) throw ConfigError("max_tries must be positive");
}

namespace {

// Intervals sorted by (finish, start, id).
std::vector<Activity> sorted_by_finish(const ActivityInstance& instance) {
  std::vector<Activity> sorted = instance.activities;
  std::sort(sorted.begin(), sorted.end(), [](const Activity& a, const Activity& b) {
    if (a.finish != b.finish) return a.finish < b.finish;
    if (a.start != b.start) return a.start < b.start;
    return a.id < b.id;
  });
  return sorted;
}

}  // namespace

OptCount count_optima_and_backtrack(const ActivityInstance& instance) {
  const auto sorted = sorted_by_finish(instance);
  const std::size_t n = sorted.size();

  std::vector<int> finishes(n);
  for (std::size_t i = 0; i < n; ++i) finishes[i] = sorted[i].finish;

  // pred[i] (1-based) = max{ j < i : f_j <= s_i }, 0 if none.
  std::vector<std::size_t> pred(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    auto it = std::upper_bound(finishes.begin(), finishes.begin() + static_cast<long>(i - 1),
                               sorted[i - 1].start);
    pred[i] = static_cast<std::size_t>(it - finishes.begin());
  }

  std::vector<int> opt(n + 1, 0);
  std::vector<BigCount> cnt(n + 1, 0);
  cnt[0] = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    const int incl = 1 + opt[pred[i]];
    const int excl = opt[i - 1];
    opt[i] = std::max(incl, excl);
    if (incl > excl) {
      cnt[i] = cnt[pred[i]];
    } else if (excl > incl) {
      cnt[i] = cnt[i - 1];
    } else {
      cnt[i] = cnt[pred[i]] + cnt[i - 1];
    }
  }

  OptCount result;
  result.opt = opt[n];
  result.count = cnt[n];
  if (cnt[n] != 1) return result;

  IdSequence chosen;
  std::size_t i = n;
  while (i > 0) {
    const int incl = 1 + opt[pred[i]];
    const int excl = opt[i - 1];
    bool take;
    if (incl > excl) {
      take = true;
    } else if (excl > incl) {
      take = false;
    } else {
      take = cnt[pred[i]] == 1 && cnt[i - 1] == 0;
    }
    if (take) {
      chosen.push_back(sorted[i - 1].id);
      i = pred[i];
    } else {
      --i;
    }
  }
  result.unique_solution = canonical_order_activity(chosen, instance);
  return result;
}

IdSequence greedy_earliest_finish(const ActivityInstance& instance) {
  IdSequence chosen;
  bool any = false;
  int last_finish = 0;
  for (const auto& a : sorted_by_finish(instance)) {
    if (!any || a.start >= last_finish) {
      chosen.push_back(a.id);
      last_finish = a.finish;
      any = true;
    }
  }
  return canonical_order_activity(chosen, instance);
}

ActivityInstance sample_activity_candidate(const GeneratorConfig& config, Rng& rng) {
  const auto m = static_cast<std::size_t>(uniform_int(rng, config.length_min, config.length_max));
  ActivityInstance inst;
  inst.activities.reserve(m);
  while (inst.activities.size() < m) {
    const auto start = static_cast<int>(uniform_int(rng, 0, config.start_max));
    const auto duration =
        static_cast<int>(uniform_int(rng, config.duration_min, config.duration_max));
    const int finish = start + duration;
    // Always true under these bounds; kept so the acceptance rule stays explicit.
    if (finish <= config.start_max + config.duration_max) {
      inst.activities.push_back({static_cast<RowId>(inst.activities.size() + 1), start, finish});
    }
  }
  return inst;
}

std::pair<ActivityInstance, GroundTruth> generate_activity(const GeneratorConfig& config,
                                                           std::uint64_t seed) {
  config.validate();
  Rng rng(seed);
  for (int attempt = 0; attempt < config.max_tries; ++attempt) {
    ActivityInstance inst = sample_activity_candidate(config, rng);
    OptCount oc = count_optima_and_backtrack(inst);
    if (oc.count != 1) continue;

    IdSequence greedy = greedy_earliest_finish(inst);
    IdSequence greedy_set = greedy;
    IdSequence unique_set = *oc.unique_solution;
    std::sort(greedy_set.begin(), greedy_set.end());
    std::sort(unique_set.begin(), unique_set.end());
    if (greedy_set != unique_set) continue;

    inst.seed = seed;
    GroundTruth truth{*oc.unique_solution, static_cast<std::int64_t>(oc.unique_solution->size())};
    return {std::move(inst), std::move(truth)};
  }
  throw GenerationError(seed, "no unique-optimum activity instance within " +
                                  std::to_string(config.max_tries) + " tries (seed " +
                                  std::to_string(seed) + ")");
}

OptCount count_lis_length_and_number(std::span<const int> values) {
  const std::size_t n = values.size();
  if (n == 0) throw DomainError("LIS of an empty sequence is undefined");

  std::vector<int> len_end(n, 1);
  std::vector<BigCount> cnt_end(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (values[j] >= values[i]) continue;
      if (len_end[j] + 1 > len_end[i]) {
        len_end[i] = len_end[j] + 1;
        cnt_end[i] = cnt_end[j];
      } else if (len_end[j] + 1 == len_end[i]) {
        cnt_end[i] += cnt_end[j];
      }
    }
  }

  OptCount result;
  result.opt = *std::max_element(len_end.begin(), len_end.end());
  for (std::size_t i = 0; i < n; ++i) {
    if (len_end[i] == result.opt) result.count += cnt_end[i];
  }
  if (result.count == 1) result.unique_solution = patience_reconstruct(values);
  return result;
}

IdSequence patience_reconstruct(std::span<const int> values) {
  std::vector<int> tail_values;
  std::vector<std::size_t> tail_index;  // row index of each pile top
  std::vector<std::ptrdiff_t> prev(values.size(), -1);

  for (std::size_t i = 0; i < values.size(); ++i) {
    auto it = std::lower_bound(tail_values.begin(), tail_values.end(), values[i]);
    const auto pos = static_cast<std::size_t>(it - tail_values.begin());
    if (pos > 0) prev[i] = static_cast<std::ptrdiff_t>(tail_index[pos - 1]);
    if (pos == tail_values.size()) {
      tail_values.push_back(values[i]);
      tail_index.push_back(i);
    } else {
      tail_values[pos] = values[i];
      tail_index[pos] = i;
    }
  }

  IdSequence out;
  if (tail_index.empty()) return out;
  for (auto i = static_cast<std::ptrdiff_t>(tail_index.back()); i >= 0; i = prev[static_cast<std::size_t>(i)]) {
    out.push_back(static_cast<RowId>(i + 1));
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<int> patience_tails(std::span<const int> values) {
  std::vector<int> tails;
  for (int v : values) {
    auto it = std::lower_bound(tails.begin(), tails.end(), v);
    if (it == tails.end()) {
      tails.push_back(v);
    } else {
      *it = v;
    }
  }
  return tails;
}

LisInstance sample_lis_candidate(const GeneratorConfig& config, Rng& rng) {
  const auto n = static_cast<std::size_t>(uniform_int(rng, config.length_min, config.length_max));
  LisInstance inst;
  inst.rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    inst.rows.push_back({static_cast<RowId>(i + 1),
                         static_cast<int>(uniform_int(rng, config.value_min, config.value_max))});
  }
  return inst;
}

std::pair<LisInstance, GroundTruth> generate_lis(const GeneratorConfig& config,
                                                 std::uint64_t seed) {
  config.validate();
  Rng rng(seed);
  for (int attempt = 0; attempt < config.max_tries; ++attempt) {
    LisInstance inst = sample_lis_candidate(config, rng);
    const auto values = inst.values();
    OptCount oc = count_lis_length_and_number(values);
    if (oc.opt < 2 || oc.count != 1) continue;

    inst.seed = seed;
    GroundTruth truth{*oc.unique_solution, oc.opt};
    return {std::move(inst), std::move(truth)};
  }
  throw GenerationError(seed, "no unique-LIS instance within " + std::to_string(config.max_tries) +
                                  " tries (seed " + std::to_string(seed) + ")");
}

}  // namespace rlvrseq
