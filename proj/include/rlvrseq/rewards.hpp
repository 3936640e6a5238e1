#pragma once

#include <string_view>
#include <vector>

#include "rlvrseq/domain.hpp"
#include "rlvrseq/parser.hpp"

namespace rlvrseq {

enum class ParseStatus { ok, no_answer, no_ids, no_both };

std::string_view to_string(ParseStatus status);
ParseStatus parse_status_of(const ParsedOutput& parsed);

struct ComponentValue {
  RewardKind kind = RewardKind::ans;
  double raw = 0.0;
  double weight = 0.0;
};

struct RewardBreakdown {
  double total = 0.0;
  std::vector<ComponentValue> per_component;
  ParseStatus parse_status = ParseStatus::no_both;
};

// Individual rewards. Every value lies in [0, 1].

double reward_ans(const ParsedOutput& parsed, const GroundTruth& truth);

/// (1 - lambda) * reward_ans + lambda * fmt.
double reward_ans_fmt(const ParsedOutput& parsed, const GroundTruth& truth, double lambda = 0.1);

double reward_ids_exact(const ParsedOutput& parsed, const GroundTruth& truth);

/// max(0, m/L - gamma * [parse failed or |ids| != L]) with m the common prefix length.
double reward_ids_prefix(const ParsedOutput& parsed, const GroundTruth& truth, double gamma = 0.1);

/// 1 iff the full sorted block exists and equals truth_sorted.
double reward_sort(const ExtractionResult& extraction, std::span<const RowId> truth_sorted);

/// Parses once and combines the requested components by weight, clamped to [0, 1].
/// Throws ConfigError for an invalid spec or a sort component on an LIS instance.
RewardBreakdown score(std::string_view text, const Instance& instance, const GroundTruth& truth,
                      const RewardSpec& spec);

/// Same, from an already parsed response.
RewardBreakdown score_parsed(const ParsedOutput& parsed, const Instance& instance,
                             const GroundTruth& truth, const RewardSpec& spec);

}  // namespace rlvrseq
