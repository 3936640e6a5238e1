#include "rlvrseq/analysis.hpp"

#include <ostream>
#include <unordered_map>

#include "rlvrseq/metrics.hpp"

namespace rlvrseq {

std::string_view to_string(Anchor anchor) {
  switch (anchor) {
    case Anchor::start: return "start";
    case Anchor::end: return "end";
    case Anchor::both: return "both";
    case Anchor::neither: return "neither";
  }
  return "?";
}

LcsMatch contiguous_lcs(std::span<const RowId> candidate, std::span<const RowId> truth_order) {
  std::unordered_map<RowId, std::size_t> position;
  position.reserve(truth_order.size());
  for (std::size_t i = 0; i < truth_order.size(); ++i) position.emplace(truth_order[i], i);

  LcsMatch best;
  if (candidate.empty()) return best;

  std::unordered_map<RowId, bool> seen;
  std::size_t run = 0;
  std::size_t prev_pos = 0;
  for (std::size_t t = 0; t < candidate.size(); ++t) {
    auto it = position.find(candidate[t]);
    if (it == position.end()) {
      throw DomainError("candidate id " + std::to_string(candidate[t]) + " is not in the truth order");
    }
    if (!seen.emplace(candidate[t], true).second) {
      throw DomainError("candidate repeats id " + std::to_string(candidate[t]));
    }
    run = (t > 0 && it->second == prev_pos + 1) ? run + 1 : 1;
    prev_pos = it->second;
    if (run > best.length) {
      best.length = run;
      best.begin = t + 1 - run;
    }
  }
  const bool at_start = best.begin == 0;
  const bool at_end = best.begin + best.length == candidate.size();
  best.anchor = at_start && at_end ? Anchor::both
              : at_start           ? Anchor::start
              : at_end             ? Anchor::end
                                   : Anchor::neither;
  return best;
}

SortAnalysis analyze_sorting(std::string_view text, const ActivityInstance& instance,
                             std::span<const RowId> truth_sorted) {
  const ExtractionResult extraction = extract_sorted_candidates(text, instance);
  SortAnalysis out;
  out.extraction_success = extraction.sorted_block_full.has_value();
  out.exact_sorted = out.extraction_success &&
                     std::equal(extraction.sorted_block_full->begin(),
                                extraction.sorted_block_full->end(), truth_sorted.begin(),
                                truth_sorted.end());

  // Candidates arrive in priority order, so a strict improvement test keeps
  // the higher-priority method on ties.
  bool have_best = false;
  LcsMatch best;
  for (const auto& c : extraction.candidates) {
    const LcsMatch m = contiguous_lcs(c.ids, truth_sorted);
    if (!have_best || m.length > best.length) {
      best = m;
      out.best_method = c.method;
      have_best = true;
    }
  }
  if (have_best) {
    out.lcs_len = best.length;
    out.anchor = best.anchor;
  }
  out.lcs_frac = truth_sorted.empty()
                     ? 0.0
                     : static_cast<double>(out.lcs_len) / static_cast<double>(truth_sorted.size());
  return out;
}

SortAnalysis analyze_sorting(std::string_view text, const ActivityInstance& instance) {
  const IdSequence truth = canonical_sorted_ids(instance);
  return analyze_sorting(text, instance, truth);
}

SortSummary summarize_sorting(std::span<const SortAnalysis> rows) {
  SortSummary s;
  s.responses = rows.size();
  if (rows.empty()) return s;
  std::size_t extracted = 0, exact = 0, covered = 0;
  double frac_sum = 0.0;
  for (const auto& r : rows) {
    extracted += r.extraction_success;
    exact += r.exact_sorted;
    if (r.lcs_len > 0) {
      ++covered;
      frac_sum += r.lcs_frac;
      ++s.anchors[static_cast<std::size_t>(r.anchor)];
    }
  }
  const double total = static_cast<double>(rows.size());
  s.extraction_rate = static_cast<double>(extracted) / total;
  s.exact_sort_rate = static_cast<double>(exact) / total;
  s.coverage = static_cast<double>(covered) / total;
  s.mean_lcs_frac = covered ? frac_sum / static_cast<double>(covered) : 0.0;
  return s;
}

void write_sort_csv(std::ostream& out, std::span<const SortRow> rows) {
  out << "instance_id,sample_idx,extraction_success,exact_sorted,lcs_len,lcs_frac,best_method,anchor\n";
  for (const auto& row : rows) {
    const auto& a = row.analysis;
    out << row.instance_id << ',' << row.sample_idx << ',' << (a.extraction_success ? 1 : 0) << ','
        << (a.exact_sorted ? 1 : 0) << ',' << a.lcs_len << ',' << format_double(a.lcs_frac) << ','
        << (a.best_method ? to_string(*a.best_method) : std::string_view("none")) << ','
        << to_string(a.anchor) << '\n';
  }
}

nlohmann::json summary_json(const SortSummary& s) {
  nlohmann::json anchors;
  for (auto a : {Anchor::start, Anchor::end, Anchor::both, Anchor::neither}) {
    anchors[std::string(to_string(a))] = s.anchors[static_cast<std::size_t>(a)];
  }
  return nlohmann::json{{"responses", s.responses},
                        {"extraction_rate", s.extraction_rate},
                        {"exact_sort_rate", s.exact_sort_rate},
                        {"coverage", s.coverage},
                        {"mean_lcs_frac", s.mean_lcs_frac},
                        {"anchors", anchors}};
}

}  // namespace rlvrseq
