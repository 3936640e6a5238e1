#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rlvrseq/domain.hpp"
#include "rlvrseq/parser.hpp"

namespace rlvrseq {

enum class Anchor { start, end, both, neither };

std::string_view to_string(Anchor anchor);

struct LcsMatch {
  std::size_t length = 0;
  std::size_t begin = 0;  // 0-based position of the block inside the candidate
  Anchor anchor = Anchor::neither;
};

/// Longest block of `candidate` that appears contiguously (same order) in
/// `truth_order`. Earliest block wins ties. Throws DomainError if the
/// candidate repeats an id or holds one that truth_order lacks.
LcsMatch contiguous_lcs(std::span<const RowId> candidate, std::span<const RowId> truth_order);

struct SortAnalysis {
  bool extraction_success = false;  // a full sorted block was found
  bool exact_sorted = false;
  std::size_t lcs_len = 0;
  double lcs_frac = 0.0;
  std::optional<CandidateMethod> best_method;  // none when nothing was extracted
  Anchor anchor = Anchor::neither;
};

/// Grades the "sorted" preface of an activity response against truth_sorted
/// (all ids by finish, then id). The best candidate maximizes the contiguous
/// match; ties go to the higher-priority extraction method.
SortAnalysis analyze_sorting(std::string_view text, const ActivityInstance& instance,
                             std::span<const RowId> truth_sorted);
SortAnalysis analyze_sorting(std::string_view text, const ActivityInstance& instance);

/// Corpus-level view of a batch of SortAnalysis rows.
struct SortSummary {
  std::size_t responses = 0;
  double extraction_rate = 0.0;
  double exact_sort_rate = 0.0;     // missing extractions count as incorrect
  double coverage = 0.0;            // share of responses with lcs_len > 0
  double mean_lcs_frac = 0.0;       // over responses with lcs_len > 0
  std::array<std::size_t, 4> anchors{};  // indexed by Anchor, covered responses only
};

SortSummary summarize_sorting(std::span<const SortAnalysis> rows);

struct SortRow {
  std::int64_t instance_id = 0;
  std::int64_t sample_idx = 0;
  SortAnalysis analysis;
};

void write_sort_csv(std::ostream& out, std::span<const SortRow> rows);
nlohmann::json summary_json(const SortSummary& summary);

}  // namespace rlvrseq
