#include "rlvrseq/parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <limits>

namespace rlvrseq {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_word(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }
char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// Saturating so that absurdly long digit runs never wrap into valid ids.
std::int64_t parse_digits(std::string_view digits) {
  constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();
  std::int64_t v = 0;
  for (char c : digits) {
    const int d = c - '0';
    if (v > (kMax - d) / 10) return kMax;
    v = v * 10 + d;
  }
  return v;
}

// Body of the last "<marker>...}" block, or none if the last marker is unclosed.
std::optional<std::string_view> last_block(std::string_view text, std::string_view marker) {
  const std::size_t open = text.rfind(marker);
  if (open == std::string_view::npos) return std::nullopt;
  const std::size_t body = open + marker.size();
  const std::size_t close = text.find('}', body);
  if (close == std::string_view::npos) return std::nullopt;
  return text.substr(body, close - body);
}

std::optional<std::int64_t> parse_integer(std::string_view s) {
  s = trim(s);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty() || s.size() > 18) return std::nullopt;
  if (!std::all_of(s.begin(), s.end(), is_digit)) return std::nullopt;
  const std::int64_t v = parse_digits(s);
  return negative ? -v : v;
}

struct Token {
  std::size_t begin;
  std::size_t end;
};

// Maximal digit runs.
std::vector<Token> integer_tokens(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_digit(text[i])) {
      ++i;
      continue;
    }
    const std::size_t b = i;
    while (i < text.size() && is_digit(text[i])) ++i;
    out.push_back({b, i});
  }
  return out;
}

// Integers of the longest run "a, b, c" (comma with optional whitespace), at
// least two long; earliest run wins ties.
std::vector<std::int64_t> longest_comma_run(std::string_view text) {
  const auto tokens = integer_tokens(text);
  std::size_t best_begin = 0, best_len = 0;
  std::size_t run_begin = 0;
  auto linked = [&](const Token& a, const Token& b) {
    const std::string_view gap = text.substr(a.end, b.begin - a.end);
    const std::string_view t = trim(gap);
    return t == ",";
  };
  for (std::size_t i = 0; i <= tokens.size(); ++i) {
    const bool continues = i > 0 && i < tokens.size() && linked(tokens[i - 1], tokens[i]);
    if (i == tokens.size() || (i > 0 && !continues)) {
      const std::size_t len = i - run_begin;
      if (len >= 2 && len > best_len) {
        best_len = len;
        best_begin = run_begin;
      }
      run_begin = i;
    }
  }
  std::vector<std::int64_t> out;
  for (std::size_t i = best_begin; i < best_begin + best_len; ++i) {
    out.push_back(parse_digits(text.substr(tokens[i].begin, tokens[i].end - tokens[i].begin)));
  }
  return out;
}

// Values k of "ID k" tokens, left to right. "id" must be a whole word
// (case-insensitive); optional whitespace and one ':', '#' or '=' may sit
// between it and the digits.
std::vector<std::int64_t> id_token_stream(std::string_view text) {
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i + 1 < text.size(); ++i) {
    if (lower(text[i]) != 'i' || lower(text[i + 1]) != 'd') continue;
    if (i > 0 && is_word(text[i - 1])) continue;
    std::size_t j = i + 2;
    if (j < text.size() && is_word(text[j]) && !is_digit(text[j])) continue;
    while (j < text.size() && (text[j] == ' ' || text[j] == '\t')) ++j;
    if (j < text.size() && (text[j] == ':' || text[j] == '#' || text[j] == '=')) {
      ++j;
      while (j < text.size() && (text[j] == ' ' || text[j] == '\t')) ++j;
    }
    if (j >= text.size() || !is_digit(text[j])) continue;
    const std::size_t b = j;
    while (j < text.size() && is_digit(text[j])) ++j;
    out.push_back(parse_digits(text.substr(b, j - b)));
    i = j - 1;
  }
  return out;
}

// Keep ids in 1..n, first occurrence only.
IdSequence normalize(const std::vector<std::int64_t>& raw, std::size_t n) {
  IdSequence out;
  std::vector<bool> seen(n + 1, false);
  for (std::int64_t v : raw) {
    if (v < 1 || static_cast<std::uint64_t>(v) > n) continue;
    if (seen[static_cast<std::size_t>(v)]) continue;
    seen[static_cast<std::size_t>(v)] = true;
    out.push_back(static_cast<RowId>(v));
  }
  return out;
}

struct Word {
  std::size_t begin;
  std::size_t end;
};

std::vector<Word> words(std::string_view text) {
  std::vector<Word> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_word(text[i])) {
      ++i;
      continue;
    }
    const std::size_t b = i;
    while (i < text.size() && is_word(text[i])) ++i;
    out.push_back({b, i});
  }
  return out;
}

bool word_is(std::string_view text, const Word& w, std::string_view lowercase) {
  if (w.end - w.begin != lowercase.size()) return false;
  for (std::size_t k = 0; k < lowercase.size(); ++k) {
    if (lower(text[w.begin + k]) != lowercase[k]) return false;
  }
  return true;
}

constexpr std::array<std::string_view, 3> kSortWords = {"sort", "sorted", "sorting"};
constexpr std::array<std::string_view, 9> kStopWords = {
    "select", "greedy", "choose", "subset", "largest", "so", "thus", "therefore", "next"};

bool is_any(std::string_view text, const Word& w, std::span<const std::string_view> list) {
  return std::any_of(list.begin(), list.end(),
                     [&](std::string_view s) { return word_is(text, w, s); });
}

// Text from the first sort token up to (not including) the first stop word
// after it; empty if the paragraph never mentions sorting.
std::string_view sorting_segment(std::string_view para) {
  const auto ws = words(para);
  std::size_t k = 0;
  while (k < ws.size() && !is_any(para, ws[k], kSortWords)) ++k;
  if (k == ws.size()) return {};
  const std::size_t begin = ws[k].begin;
  std::size_t end = para.size();
  for (std::size_t j = k + 1; j < ws.size(); ++j) {
    const bool final_answer =
        word_is(para, ws[j], "final") && j + 1 < ws.size() && word_is(para, ws[j + 1], "answer") &&
        trim(para.substr(ws[j].end, ws[j + 1].begin - ws[j].end)).empty() &&
        ws[j + 1].begin > ws[j].end;
    if (final_answer || is_any(para, ws[j], kStopWords)) {
      end = ws[j].begin;
      break;
    }
  }
  return para.substr(begin, end - begin);
}

// Paragraphs are separated by one or more whitespace-only lines.
std::vector<std::string_view> paragraphs(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t para_begin = 0;
  std::size_t line_begin = 0;
  bool in_para = false;
  while (line_begin <= text.size()) {
    std::size_t line_end = text.find('\n', line_begin);
    if (line_end == std::string_view::npos) line_end = text.size();
    const bool blank = trim(text.substr(line_begin, line_end - line_begin)).empty();
    if (blank) {
      if (in_para) out.push_back(text.substr(para_begin, line_begin - para_begin));
      in_para = false;
    } else if (!in_para) {
      in_para = true;
      para_begin = line_begin;
    }
    if (line_end == text.size()) break;
    line_begin = line_end + 1;
  }
  if (in_para) out.push_back(text.substr(para_begin));
  return out;
}

std::optional<IdSequence> find_sorted_block(std::string_view text, std::size_t n) {
  for (std::string_view para : paragraphs(text)) {
    const std::string_view segment = sorting_segment(para);
    if (segment.empty()) continue;
    IdSequence via_tokens = normalize(id_token_stream(segment), n);
    if (via_tokens.size() == n) return via_tokens;
    IdSequence via_run = normalize(longest_comma_run(segment), n);
    if (via_run.size() == n) return via_run;
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::int64_t> parse_answer(std::string_view text) {
  const auto body = last_block(text, "\\answer{");
  if (!body) return std::nullopt;
  return parse_integer(*body);
}

std::optional<IdSequence> parse_ids(std::string_view text, std::size_t row_count) {
  const auto body = last_block(text, "\\ids{");
  if (!body) return std::nullopt;
  IdSequence ids;
  if (trim(*body).empty()) return ids;
  std::string_view rest = *body;
  while (true) {
    const std::size_t comma = rest.find(',');
    const std::string_view item = trim(rest.substr(0, comma));
    if (item.empty() || item.size() > 18 || !std::all_of(item.begin(), item.end(), is_digit)) {
      return std::nullopt;
    }
    const std::int64_t v = parse_digits(item);
    if (v < 1 || static_cast<std::uint64_t>(v) > row_count) return std::nullopt;
    ids.push_back(static_cast<RowId>(v));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return ids;
}

bool has_think_block(std::string_view text) {
  constexpr std::string_view kOpen = "<think>";
  constexpr std::string_view kClose = "</think>";
  bool open = false;
  int pairs = 0;
  std::size_t pos = 0;
  std::size_t o = text.find(kOpen);
  std::size_t c = text.find(kClose);
  while (true) {
    if (o != std::string_view::npos && o < pos) o = text.find(kOpen, pos);
    if (c != std::string_view::npos && c < pos) c = text.find(kClose, pos);
    if (o == std::string_view::npos && c == std::string_view::npos) break;
    if (o < c) {
      if (open) return false;  // nested
      open = true;
      pos = o + kOpen.size();
    } else {
      if (!open) return false;  // close without open
      open = false;
      ++pairs;
      pos = c + kClose.size();
    }
  }
  return !open && pairs > 0;
}

bool format_indicator(std::string_view text, std::size_t row_count) {
  return has_think_block(text) && parse_answer(text).has_value() &&
         parse_ids(text, row_count).has_value();
}

ExtractionResult extract_sorted_candidates(std::string_view text, std::size_t n) {
  ExtractionResult result;
  result.sorted_block_full = find_sorted_block(text, n);
  if (result.sorted_block_full) {
    result.candidates.push_back({CandidateMethod::sorted_block_full, *result.sorted_block_full});
  }

  constexpr std::string_view kIds = "\\ids{";
  std::size_t pos = 0;
  while ((pos = text.find(kIds, pos)) != std::string_view::npos) {
    const std::size_t body = pos + kIds.size();
    const std::size_t close = text.find('}', body);
    if (close == std::string_view::npos) break;
    std::vector<std::int64_t> raw;
    const std::string_view inner = text.substr(body, close - body);
    for (const auto& t : integer_tokens(inner)) raw.push_back(parse_digits(inner.substr(t.begin, t.end - t.begin)));
    IdSequence ids = normalize(raw, n);
    if (!ids.empty()) result.candidates.push_back({CandidateMethod::ids_braces, std::move(ids)});
    pos = close + 1;
  }

  IdSequence stream = normalize(id_token_stream(text), n);
  if (!stream.empty()) result.candidates.push_back({CandidateMethod::id_stream, std::move(stream)});

  IdSequence run = normalize(longest_comma_run(text), n);
  if (!run.empty()) result.candidates.push_back({CandidateMethod::comma_run, std::move(run)});
  return result;
}

ExtractionResult extract_sorted_candidates(std::string_view text, const ActivityInstance& instance) {
  return extract_sorted_candidates(text, instance.size());
}

ParsedOutput parse_response(std::string_view text, const Instance& instance) {
  const std::size_t n = row_count(instance);
  ParsedOutput out;
  out.answer = parse_answer(text);
  out.ids = parse_ids(text, n);
  out.has_format = has_think_block(text) && out.answer.has_value() && out.ids.has_value();
  if (task_of(instance) == Task::activity) {
    out.sorted_candidates = extract_sorted_candidates(text, n).candidates;
  }
  return out;
}

}  // namespace rlvrseq
