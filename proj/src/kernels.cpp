#include "rlvrseq/kernels.hpp"

#include <exception>

#include <omp.h>

#include "rlvrseq/rng.hpp"

namespace rlvrseq {

namespace {

// Exceptions may not cross an OpenMP region, so each item records its own and
// the lowest-index failure is rethrown afterwards (same as the serial loop).
template <class Out, class Fn>
std::vector<Out> parallel_map(std::size_t n, int threads, Fn&& fn) {
  std::vector<Out> out(n);
  std::vector<std::exception_ptr> errors(n);
  const int team = threads > 0 ? threads : omp_get_max_threads();
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 4) num_threads(team)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

template <class Out, class Fn>
std::vector<Out> serial_map(std::size_t n, Fn&& fn) {
  std::vector<Out> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(fn(i));
  return out;
}

GeneratedInstance generate_one(Task task, const GeneratorConfig& config, std::uint64_t master_seed,
                               std::int64_t index) {
  const std::uint64_t seed = derive_seed(master_seed, static_cast<std::uint64_t>(index));
  GeneratedInstance g;
  g.index = index;
  if (task == Task::activity) {
    auto [inst, truth] = generate_activity(config, seed);
    g.instance = std::move(inst);
    g.truth = std::move(truth);
  } else {
    auto [inst, truth] = generate_lis(config, seed);
    g.instance = std::move(inst);
    g.truth = std::move(truth);
  }
  return g;
}

RewardBreakdown score_one(const ScoreItem& item) {
  return score(item.text, *item.instance, *item.truth, *item.spec);
}

void check_eval_inputs(std::span<const ResponseSet> sets, std::span<const Instance> instances,
                       std::span<const GroundTruth> truths) {
  if (sets.size() != instances.size() || sets.size() != truths.size()) {
    throw DomainError("evaluate: " + std::to_string(sets.size()) + " response sets, " +
                      std::to_string(instances.size()) + " instances, " +
                      std::to_string(truths.size()) + " truths");
  }
}

}  // namespace

std::vector<GeneratedInstance> generate_batch(Task task, const GeneratorConfig& config,
                                              std::uint64_t master_seed, std::size_t count,
                                              std::int64_t first_index, int threads) {
  config.validate();
  return parallel_map<GeneratedInstance>(count, threads, [&](std::size_t i) {
    return generate_one(task, config, master_seed, first_index + static_cast<std::int64_t>(i));
  });
}

std::vector<GeneratedInstance> generate_batch_serial(Task task, const GeneratorConfig& config,
                                                     std::uint64_t master_seed, std::size_t count,
                                                     std::int64_t first_index) {
  config.validate();
  return serial_map<GeneratedInstance>(count, [&](std::size_t i) {
    return generate_one(task, config, master_seed, first_index + static_cast<std::int64_t>(i));
  });
}

std::vector<RewardBreakdown> score_batch(std::span<const ScoreItem> items, int threads) {
  return parallel_map<RewardBreakdown>(items.size(), threads,
                                       [&](std::size_t i) { return score_one(items[i]); });
}

std::vector<RewardBreakdown> score_batch_serial(std::span<const ScoreItem> items) {
  return serial_map<RewardBreakdown>(items.size(), [&](std::size_t i) { return score_one(items[i]); });
}

MetricReport evaluate(std::span<const ResponseSet> response_sets,
                      std::span<const Instance> instances, std::span<const GroundTruth> truths,
                      const EvalConfig& config, int threads) {
  check_eval_inputs(response_sets, instances, truths);
  auto per_instance = parallel_map<InstanceMetrics>(response_sets.size(), threads, [&](std::size_t i) {
    return evaluate_instance(response_sets[i], instances[i], truths[i], config);
  });
  return aggregate_metrics(std::move(per_instance), config);
}

MetricReport evaluate_serial(std::span<const ResponseSet> response_sets,
                             std::span<const Instance> instances,
                             std::span<const GroundTruth> truths, const EvalConfig& config) {
  check_eval_inputs(response_sets, instances, truths);
  auto per_instance = serial_map<InstanceMetrics>(response_sets.size(), [&](std::size_t i) {
    return evaluate_instance(response_sets[i], instances[i], truths[i], config);
  });
  return aggregate_metrics(std::move(per_instance), config);
}

std::vector<SortAnalysis> analyze_sorting_batch(std::span<const SortItem> items, int threads) {
  return parallel_map<SortAnalysis>(items.size(), threads, [&](std::size_t i) {
    return analyze_sorting(items[i].text, *items[i].instance);
  });
}

std::vector<SortAnalysis> analyze_sorting_batch_serial(std::span<const SortItem> items) {
  return serial_map<SortAnalysis>(items.size(), [&](std::size_t i) {
    return analyze_sorting(items[i].text, *items[i].instance);
  });
}

std::vector<LisFeatureVector> lis_features_batch(std::span<const std::vector<int>> sequences,
                                                 int threads) {
  return parallel_map<LisFeatureVector>(sequences.size(), threads,
                                        [&](std::size_t i) { return lis_features(sequences[i]); });
}

std::vector<LisFeatureVector> lis_features_batch_serial(std::span<const std::vector<int>> sequences) {
  return serial_map<LisFeatureVector>(sequences.size(),
                                      [&](std::size_t i) { return lis_features(sequences[i]); });
}

}  // namespace rlvrseq
