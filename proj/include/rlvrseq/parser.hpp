#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "rlvrseq/domain.hpp"

namespace rlvrseq {

/// Integer inside the last "\answer{...}" block; none if absent or malformed.
std::optional<std::int64_t> parse_answer(std::string_view text);

/// Comma-separated ids inside the last "\ids{...}" block. Whitespace around
/// items is tolerated; "\ids{}" is the empty list. Malformed content or an id
/// outside 1..row_count yields none.
std::optional<IdSequence> parse_ids(std::string_view text, std::size_t row_count);

/// True iff the text has well-formed <think>...</think> blocks (ordered,
/// unnested, closed) and both the answer and the id list parse.
bool format_indicator(std::string_view text, std::size_t row_count);

/// Whether <think>/</think> tags alternate properly with at least one pair.
bool has_think_block(std::string_view text);

struct ExtractionResult {
  /// In method-priority order: sorted_block_full (if any), every \ids{} block,
  /// the "ID k" stream, the longest comma run. All normalized and non-empty.
  std::vector<SortedCandidate> candidates;
  /// A permutation of all row ids found in a paragraph about sorting.
  std::optional<IdSequence> sorted_block_full;
};

/// Candidate "sorted" id lists from a free-form response to an activity prompt.
ExtractionResult extract_sorted_candidates(std::string_view text, const ActivityInstance& instance);

/// Same, keyed only on the row count (valid ids are 1..row_count).
ExtractionResult extract_sorted_candidates(std::string_view text, std::size_t row_count);

/// Parses a response once: answer, ids, format flag, and (activity only) the
/// sorted-list candidates.
ParsedOutput parse_response(std::string_view text, const Instance& instance);

}  // namespace rlvrseq
