#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace rlvrseq {

/// Row identifiers are 1-based and dense (1..n) within an instance.
using RowId = int;
using IdSequence = std::vector<RowId>;

enum class Task { activity, lis };

std::string_view to_string(Task task);
Task parse_task(std::string_view name);

// Errors ------------------------------------------------------------------

/// Violated precondition or malformed domain value.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad reward spec, bad CLI/config combination, etc.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rejection sampling ran out of tries. Carries the seed so the failure can be replayed.
class GenerationError : public std::runtime_error {
 public:
  GenerationError(std::uint64_t seed, const std::string& what)
      : std::runtime_error(what), seed_(seed) {}
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
};

// Instances ---------------------------------------------------------------

/// Half-open interval [start, finish) in minutes since midnight.
struct Activity {
  RowId id = 0;
  int start = 0;
  int finish = 0;

  friend bool operator==(const Activity&, const Activity&) = default;
};

struct ActivityInstance {
  std::vector<Activity> activities;
  std::uint64_t seed = 0;
  bool hinted = false;

  std::size_t size() const noexcept { return activities.size(); }
  const Activity& at(RowId id) const;

  friend bool operator==(const ActivityInstance&, const ActivityInstance&) = default;
};

struct LisRow {
  RowId id = 0;
  int value = 0;

  friend bool operator==(const LisRow&, const LisRow&) = default;
};

struct LisInstance {
  std::vector<LisRow> rows;
  std::uint64_t seed = 0;
  bool hinted = false;

  std::size_t size() const noexcept { return rows.size(); }
  std::vector<int> values() const;

  friend bool operator==(const LisInstance&, const LisInstance&) = default;
};

using Instance = std::variant<ActivityInstance, LisInstance>;

Task task_of(const Instance& instance);
std::size_t row_count(const Instance& instance);
bool is_hinted(const Instance& instance);
std::uint64_t seed_of(const Instance& instance);

/// Throws DomainError if ids are not exactly 1..m in order or an interval is empty.
void check_invariants(const ActivityInstance& instance);
void check_invariants(const LisInstance& instance);

/// Builds an instance with ids 1..n from raw (start, finish) pairs / values.
ActivityInstance make_activity_instance(std::span<const std::pair<int, int>> intervals,
                                        std::uint64_t seed = 0, bool hinted = false);
LisInstance make_lis_instance(std::span<const int> values, std::uint64_t seed = 0,
                              bool hinted = false);

// Ground truth and parsed responses ----------------------------------------

struct GroundTruth {
  IdSequence ids;
  std::int64_t answer = 0;

  friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

enum class CandidateMethod { sorted_block_full, ids_braces, id_stream, comma_run };

std::string_view to_string(CandidateMethod method);

struct SortedCandidate {
  CandidateMethod method = CandidateMethod::comma_run;
  IdSequence ids;

  friend bool operator==(const SortedCandidate&, const SortedCandidate&) = default;
};

struct ParsedOutput {
  std::optional<std::int64_t> answer;
  std::optional<IdSequence> ids;
  bool has_format = false;
  std::vector<SortedCandidate> sorted_candidates;
};

// Reward configuration -----------------------------------------------------

enum class RewardKind { ans, ans_fmt, ids_exact, ids_prefix, sort };

std::string_view to_string(RewardKind kind);
RewardKind parse_reward_kind(std::string_view name);

struct RewardComponent {
  RewardKind kind = RewardKind::ans;
  double weight = 1.0;
};

struct RewardSpec {
  std::vector<RewardComponent> components;
  double lambda = 0.1;  // format-bonus mixing weight
  double gamma = 0.1;   // prefix length-mismatch penalty

  /// Throws ConfigError unless weights are non-negative, sum to 1 for
  /// multi-component specs, and lambda/gamma lie in [0,1].
  void validate() const;

  static RewardSpec single(RewardKind kind) { return RewardSpec{{{kind, 1.0}}}; }
};

// Response sets -------------------------------------------------------------

struct SamplingMeta {
  double temperature = 0.6;
  double top_p = 0.95;
  int k = 0;
};

/// All sampled responses for one instance, in file order.
struct ResponseSet {
  std::int64_t instance_id = 0;
  std::vector<std::string> responses;
  SamplingMeta meta;
};

// Operations ----------------------------------------------------------------

/// Sorts ids by (finish, id). Throws DomainError naming the first unknown id.
IdSequence canonical_order_activity(std::span<const RowId> ids, const ActivityInstance& instance);

/// All ids of the instance in canonical (finish, id) order.
IdSequence canonical_sorted_ids(const ActivityInstance& instance);

/// "\ids{a,b,c}" with no whitespace; the empty list is "\ids{}".
std::string id_sequence_to_wire(std::span<const RowId> ids);
std::string answer_to_wire(std::int64_t answer);

}  // namespace rlvrseq
