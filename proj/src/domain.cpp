#include "rlvrseq/domain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rlvrseq {

std::string_view to_string(Task task) {
  switch (task) {
    case Task::activity: return "activity";
    case Task::lis: return "lis";
  }
  return "?";
}

Task parse_task(std::string_view name) {
  if (name == "activity") return Task::activity;
  if (name == "lis") return Task::lis;
  throw ConfigError("unknown task '" + std::string(name) + "' (expected activity or lis)");
}

std::string_view to_string(CandidateMethod method) {
  switch (method) {
    case CandidateMethod::sorted_block_full: return "sorted_block_full";
    case CandidateMethod::ids_braces: return "ids_braces";
    case CandidateMethod::id_stream: return "id_stream";
    case CandidateMethod::comma_run: return "comma_run";
  }
  return "?";
}

std::string_view to_string(RewardKind kind) {
  switch (kind) {
    case RewardKind::ans: return "ans";
    case RewardKind::ans_fmt: return "ans_fmt";
    case RewardKind::ids_exact: return "ids_exact";
    case RewardKind::ids_prefix: return "ids_prefix";
    case RewardKind::sort: return "sort";
  }
  return "?";
}

RewardKind parse_reward_kind(std::string_view name) {
  for (auto kind : {RewardKind::ans, RewardKind::ans_fmt, RewardKind::ids_exact,
                    RewardKind::ids_prefix, RewardKind::sort}) {
    if (to_string(kind) == name) return kind;
  }
  throw ConfigError("unknown reward kind '" + std::string(name) + "'");
}

const Activity& ActivityInstance::at(RowId id) const {
  if (id < 1 || static_cast<std::size_t>(id) > activities.size()) {
    throw DomainError("unknown activity id " + std::to_string(id));
  }
  return activities[static_cast<std::size_t>(id - 1)];
}

std::vector<int> LisInstance::values() const {
  std::vector<int> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row.value);
  return out;
}

Task task_of(const Instance& instance) {
  return std::holds_alternative<ActivityInstance>(instance) ? Task::activity : Task::lis;
}

std::size_t row_count(const Instance& instance) {
  return std::visit([](const auto& inst) { return inst.size(); }, instance);
}

bool is_hinted(const Instance& instance) {
  return std::visit([](const auto& inst) { return inst.hinted; }, instance);
}

std::uint64_t seed_of(const Instance& instance) {
  return std::visit([](const auto& inst) { return inst.seed; }, instance);
}

void check_invariants(const ActivityInstance& instance) {
  for (std::size_t i = 0; i < instance.activities.size(); ++i) {
    const auto& a = instance.activities[i];
    if (a.id != static_cast<RowId>(i + 1)) {
      throw DomainError("activity ids must be 1..m in order; row " + std::to_string(i + 1) +
                        " has id " + std::to_string(a.id));
    }
    if (a.start < 0 || a.start >= a.finish) {
      throw DomainError("activity " + std::to_string(a.id) + " needs 0 <= start < finish");
    }
  }
}

void check_invariants(const LisInstance& instance) {
  for (std::size_t i = 0; i < instance.rows.size(); ++i) {
    if (instance.rows[i].id != static_cast<RowId>(i + 1)) {
      throw DomainError("LIS ids must be 1..n in row order; row " + std::to_string(i + 1) +
                        " has id " + std::to_string(instance.rows[i].id));
    }
  }
}

ActivityInstance make_activity_instance(std::span<const std::pair<int, int>> intervals,
                                        std::uint64_t seed, bool hinted) {
  ActivityInstance inst;
  inst.seed = seed;
  inst.hinted = hinted;
  inst.activities.reserve(intervals.size());
  RowId id = 1;
  for (auto [start, finish] : intervals) inst.activities.push_back({id++, start, finish});
  check_invariants(inst);
  return inst;
}

LisInstance make_lis_instance(std::span<const int> values, std::uint64_t seed, bool hinted) {
  LisInstance inst;
  inst.seed = seed;
  inst.hinted = hinted;
  inst.rows.reserve(values.size());
  RowId id = 1;
  for (int v : values) inst.rows.push_back({id++, v});
  return inst;
}

void RewardSpec::validate() const {
  if (components.empty()) throw ConfigError("reward spec has no components");
  double sum = 0.0;
  for (const auto& c : components) {
    if (!(c.weight >= 0.0) || c.weight > 1.0) {
      throw ConfigError("reward weight for " + std::string(to_string(c.kind)) +
                        " must lie in [0,1]");
    }
    sum += c.weight;
  }
  if (components.size() > 1 && std::abs(sum - 1.0) > 1e-9) {
    throw ConfigError("reward weights must sum to 1 (got " + std::to_string(sum) + ")");
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("lambda must lie in [0,1]");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in [0,1]");
}

IdSequence canonical_order_activity(std::span<const RowId> ids, const ActivityInstance& instance) {
  IdSequence out(ids.begin(), ids.end());
  for (RowId id : out) (void)instance.at(id);
  std::sort(out.begin(), out.end(), [&](RowId a, RowId b) {
    const int fa = instance.at(a).finish;
    const int fb = instance.at(b).finish;
    return fa != fb ? fa < fb : a < b;
  });
  return out;
}

IdSequence canonical_sorted_ids(const ActivityInstance& instance) {
  IdSequence all;
  all.reserve(instance.size());
  for (const auto& a : instance.activities) all.push_back(a.id);
  return canonical_order_activity(all, instance);
}

std::string id_sequence_to_wire(std::span<const RowId> ids) {
  std::string out = "\\ids{";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(ids[i]);
  }
  out += '}';
  return out;
}

std::string answer_to_wire(std::int64_t answer) {
  return "\\answer{" + std::to_string(answer) + "}";
}

}  // namespace rlvrseq
