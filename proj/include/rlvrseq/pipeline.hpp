#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rlvrseq/analysis.hpp"
#include "rlvrseq/features.hpp"
#include "rlvrseq/generators.hpp"
#include "rlvrseq/metrics.hpp"
#include "rlvrseq/records.hpp"

namespace rlvrseq {

// Dataset building -------------------------------------------------------------

struct DatasetSpec {
  Task task = Task::activity;
  std::size_t total_instances = 2000;
  double hinted_fraction = 0.5;
  GeneratorConfig generator;  // length_min/length_max are the length range
  std::set<int> test_lengths = {14, 15, 16};
  std::uint64_t master_seed = 0;

  void validate() const;
};

nlohmann::json to_json(const DatasetSpec& spec);

/// Overlays any keys present in `j` onto `spec` (config-file layer).
void apply_config(DatasetSpec& spec, const nlohmann::json& j);

/// Instance `index` of `total` is hinted iff floor((index+1)f) > floor(index*f);
/// exactly floor(total*f) instances are hinted, alternating for f = 0.5.
bool hinted_at(std::size_t index, double hinted_fraction);

struct BuiltDataset {
  std::vector<DatasetRecord> train;
  std::vector<DatasetRecord> test;
  nlohmann::json manifest;  // no timestamp; write_dataset adds one
};

BuiltDataset build_dataset(const DatasetSpec& spec, int threads = 0);

std::string to_jsonl(const std::vector<DatasetRecord>& records);

/// Writes <dir>/<task>_train.jsonl, <task>_test.jsonl and <task>_manifest.json.
void write_dataset(const BuiltDataset& dataset, Task task, const std::string& out_dir);

// Verification -------------------------------------------------------------------

struct Violation {
  std::size_t record_index = 0;
  std::int64_t instance_id = 0;
  std::string message;
};

struct VerificationReport {
  std::size_t records = 0;
  std::size_t brute_forced = 0;
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
};

/// Re-checks uniqueness, the greedy/patience solution, the stored ground truth
/// and the prompt of every record; instances up to brute_force_max rows are
/// also checked exhaustively.
VerificationReport verify_dataset(const std::vector<DatasetRecord>& records,
                                  std::size_t brute_force_max = 12);

// Evaluation -----------------------------------------------------------------------

/// Response rows that match no dataset record.
class JoinError : public std::runtime_error {
 public:
  struct Item {
    std::size_t response_index;
    std::int64_t instance_id;
  };
  explicit JoinError(std::vector<Item> items);
  const std::vector<Item>& items() const noexcept { return items_; }

 private:
  std::vector<Item> items_;
};

struct EvalRunOptions {
  std::optional<int> k_max;  // default: smallest response count over instances
  std::vector<int> curve_ks;
  PassEstimator estimator = PassEstimator::unbiased;
  int threads = 0;
};

struct EvalRunResult {
  MetricReport metrics;
  std::vector<SortRow> sort_rows;  // activity only
  std::optional<SortSummary> sort_summary;
  std::size_t instances_without_responses = 0;
};

/// Groups responses per instance (file order), evaluates every instance that
/// has responses, and adds the sorting analysis for activity datasets.
/// Throws JoinError listing every response row whose instance is unknown.
EvalRunResult evaluate_run(const std::vector<DatasetRecord>& dataset,
                           const std::vector<ResponseRecord>& responses,
                           const EvalRunOptions& options);

/// Writes metrics_per_instance.csv, metrics_curve.csv, summary.json and, for
/// activity runs, sort_analysis.csv into out_dir.
void write_eval_reports(const EvalRunResult& result, const std::string& out_dir);

struct SortRunResult {
  std::vector<SortRow> rows;
  SortSummary summary;
};

SortRunResult analyze_sort_run(const std::vector<DatasetRecord>& dataset,
                               const std::vector<ResponseRecord>& responses, int threads = 0);

FeatureTable features_run(const std::vector<DatasetRecord>& dataset,
                          const std::vector<ResponseRecord>& responses, double test_fraction,
                          std::uint64_t split_seed);

}  // namespace rlvrseq
