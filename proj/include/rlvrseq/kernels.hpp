#pragma once

// Batch kernels. Each OpenMP version has a `_serial` twin that runs the same
// per-item function in a plain loop; the two must agree bit for bit for any
// thread count. `threads <= 0` means the OpenMP default.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rlvrseq/analysis.hpp"
#include "rlvrseq/domain.hpp"
#include "rlvrseq/features.hpp"
#include "rlvrseq/generators.hpp"
#include "rlvrseq/metrics.hpp"
#include "rlvrseq/rewards.hpp"

namespace rlvrseq {

struct GeneratedInstance {
  std::int64_t index = 0;
  Instance instance;
  GroundTruth truth;
};

/// Instance i is generated from derive_seed(master_seed, first_index + i).
std::vector<GeneratedInstance> generate_batch(Task task, const GeneratorConfig& config,
                                              std::uint64_t master_seed, std::size_t count,
                                              std::int64_t first_index = 0, int threads = 0);
std::vector<GeneratedInstance> generate_batch_serial(Task task, const GeneratorConfig& config,
                                                     std::uint64_t master_seed, std::size_t count,
                                                     std::int64_t first_index = 0);

struct ScoreItem {
  const Instance* instance = nullptr;
  const GroundTruth* truth = nullptr;
  std::string_view text;
  const RewardSpec* spec = nullptr;
};

std::vector<RewardBreakdown> score_batch(std::span<const ScoreItem> items, int threads = 0);
std::vector<RewardBreakdown> score_batch_serial(std::span<const ScoreItem> items);

/// Throws DomainError if the three inputs differ in length or any set is
/// shorter than config.k_max.
MetricReport evaluate(std::span<const ResponseSet> response_sets,
                      std::span<const Instance> instances, std::span<const GroundTruth> truths,
                      const EvalConfig& config, int threads = 0);
MetricReport evaluate_serial(std::span<const ResponseSet> response_sets,
                             std::span<const Instance> instances,
                             std::span<const GroundTruth> truths, const EvalConfig& config);

struct SortItem {
  const ActivityInstance* instance = nullptr;
  std::string_view text;
};

std::vector<SortAnalysis> analyze_sorting_batch(std::span<const SortItem> items, int threads = 0);
std::vector<SortAnalysis> analyze_sorting_batch_serial(std::span<const SortItem> items);

std::vector<LisFeatureVector> lis_features_batch(std::span<const std::vector<int>> sequences,
                                                 int threads = 0);
std::vector<LisFeatureVector> lis_features_batch_serial(std::span<const std::vector<int>> sequences);

}  // namespace rlvrseq
