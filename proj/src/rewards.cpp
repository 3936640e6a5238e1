#include "rlvrseq/rewards.hpp"

#include <algorithm>

namespace rlvrseq {

std::string_view to_string(ParseStatus status) {
  switch (status) {
    case ParseStatus::ok: return "ok";
    case ParseStatus::no_answer: return "no_answer";
    case ParseStatus::no_ids: return "no_ids";
    case ParseStatus::no_both: return "no_both";
  }
  return "?";
}

ParseStatus parse_status_of(const ParsedOutput& parsed) {
  const bool a = parsed.answer.has_value();
  const bool s = parsed.ids.has_value();
  if (a && s) return ParseStatus::ok;
  if (s) return ParseStatus::no_answer;
  if (a) return ParseStatus::no_ids;
  return ParseStatus::no_both;
}

double reward_ans(const ParsedOutput& parsed, const GroundTruth& truth) {
  return parsed.answer && *parsed.answer == truth.answer ? 1.0 : 0.0;
}

double reward_ans_fmt(const ParsedOutput& parsed, const GroundTruth& truth, double lambda) {
  const double fmt = parsed.has_format ? 1.0 : 0.0;
  return (1.0 - lambda) * reward_ans(parsed, truth) + lambda * fmt;
}

double reward_ids_exact(const ParsedOutput& parsed, const GroundTruth& truth) {
  return parsed.ids && *parsed.ids == truth.ids ? 1.0 : 0.0;
}

double reward_ids_prefix(const ParsedOutput& parsed, const GroundTruth& truth, double gamma) {
  const std::size_t target_len = truth.ids.size();
  if (target_len == 0) return reward_ids_exact(parsed, truth);

  std::size_t prefix = 0;
  bool penalty = true;
  if (parsed.ids) {
    const auto& got = *parsed.ids;
    const std::size_t limit = std::min(got.size(), target_len);
    while (prefix < limit && got[prefix] == truth.ids[prefix]) ++prefix;
    penalty = got.size() != target_len;
  }
  const double frac = static_cast<double>(prefix) / static_cast<double>(target_len);
  return std::max(0.0, frac - (penalty ? gamma : 0.0));
}

double reward_sort(const ExtractionResult& extraction, std::span<const RowId> truth_sorted) {
  if (!extraction.sorted_block_full) return 0.0;
  return std::equal(extraction.sorted_block_full->begin(), extraction.sorted_block_full->end(),
                    truth_sorted.begin(), truth_sorted.end())
             ? 1.0
             : 0.0;
}

RewardBreakdown score_parsed(const ParsedOutput& parsed, const Instance& instance,
                             const GroundTruth& truth, const RewardSpec& spec) {
  spec.validate();
  const bool activity = task_of(instance) == Task::activity;

  RewardBreakdown out;
  out.parse_status = parse_status_of(parsed);
  double total = 0.0;
  for (const auto& component : spec.components) {
    double raw = 0.0;
    switch (component.kind) {
      case RewardKind::ans: raw = reward_ans(parsed, truth); break;
      case RewardKind::ans_fmt: raw = reward_ans_fmt(parsed, truth, spec.lambda); break;
      case RewardKind::ids_exact: raw = reward_ids_exact(parsed, truth); break;
      case RewardKind::ids_prefix: raw = reward_ids_prefix(parsed, truth, spec.gamma); break;
      case RewardKind::sort: {
        if (!activity) throw ConfigError("the sort reward is defined for activity instances only");
        ExtractionResult extraction;
        for (const auto& c : parsed.sorted_candidates) {
          if (c.method == CandidateMethod::sorted_block_full) extraction.sorted_block_full = c.ids;
        }
        raw = reward_sort(extraction, canonical_sorted_ids(std::get<ActivityInstance>(instance)));
        break;
      }
    }
    out.per_component.push_back({component.kind, raw, component.weight});
    total += component.weight * raw;
  }
  out.total = std::clamp(total, 0.0, 1.0);
  return out;
}

RewardBreakdown score(std::string_view text, const Instance& instance, const GroundTruth& truth,
                      const RewardSpec& spec) {
  spec.validate();
  for (const auto& c : spec.components) {
    if (c.kind == RewardKind::sort && task_of(instance) != Task::activity) {
      throw ConfigError("the sort reward is defined for activity instances only");
    }
  }
  return score_parsed(parse_response(text, instance), instance, truth, spec);
}

}  // namespace rlvrseq
