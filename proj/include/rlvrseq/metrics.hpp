#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "rlvrseq/domain.hpp"

namespace rlvrseq {

enum class PassEstimator {
  prefix,    // any of the first k samples correct
  unbiased,  // 1 - C(n-c, k) / C(n, k)
};

std::string_view to_string(PassEstimator estimator);
PassEstimator parse_estimator(std::string_view name);

struct EvalConfig {
  int k_max = 256;
  std::vector<int> curve_ks;  // empty means 1, 2, 4, ..., k_max (k_max always included)
  PassEstimator estimator = PassEstimator::unbiased;

  /// The effective curve: explicit ks or powers of two, sorted, deduplicated.
  std::vector<int> resolved_curve() const;
};

/// Pass@k from per-sample correctness. Throws DomainError unless 1 <= k <= n.
double pass_at_k(const std::vector<bool>& correct, int k, PassEstimator estimator);

/// Unbiased estimator from counts alone.
double pass_at_k_unbiased(int n, int c, int k);

/// Mode of the first k predictions, skipping missing ones. Ties go to the
/// smallest value (numeric for answers, lexicographic for id sequences).
template <class T>
std::optional<T> majority_vote(std::span<const std::optional<T>> predictions, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > predictions.size()) {
    throw DomainError("self-consistency needs 1 <= k <= number of predictions");
  }
  std::map<T, int> counts;
  for (int j = 0; j < k; ++j) {
    if (predictions[static_cast<std::size_t>(j)]) ++counts[*predictions[static_cast<std::size_t>(j)]];
  }
  std::optional<T> best;
  int best_count = 0;
  for (const auto& [value, count] : counts) {  // ascending, so first max wins ties
    if (count > best_count) {
      best = value;
      best_count = count;
    }
  }
  return best;
}

template <class T>
bool self_consistency(std::span<const std::optional<T>> predictions, const T& truth, int k) {
  const auto mode = majority_vote(predictions, k);
  return mode && *mode == truth;
}

struct MetricPoint {
  int k = 0;
  double pass_ans = 0.0;
  double pass_ids = 0.0;
  double sc_ans = 0.0;
  double sc_ids = 0.0;

  friend bool operator==(const MetricPoint&, const MetricPoint&) = default;
};

struct InstanceMetrics {
  std::int64_t instance_id = 0;
  std::vector<MetricPoint> points;  // one per curve k

  friend bool operator==(const InstanceMetrics&, const InstanceMetrics&) = default;
};

struct MetricReport {
  int k_max = 0;
  PassEstimator estimator = PassEstimator::unbiased;
  std::vector<InstanceMetrics> per_instance;  // input order
  std::vector<MetricPoint> aggregate;         // unweighted mean over instances

  /// Aggregate row at k_max.
  const MetricPoint& at_k_max() const;
};

/// Metrics for one instance over its first config.k_max responses.
InstanceMetrics evaluate_instance(const ResponseSet& responses, const Instance& instance,
                                  const GroundTruth& truth, const EvalConfig& config);

/// Ordered mean of per-instance results.
MetricReport aggregate_metrics(std::vector<InstanceMetrics> per_instance, const EvalConfig& config);

void write_instance_csv(std::ostream& out, const MetricReport& report);
void write_aggregate_csv(std::ostream& out, const MetricReport& report);
nlohmann::json summary_json(const MetricReport& report);

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

}  // namespace rlvrseq
