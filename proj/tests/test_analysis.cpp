#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "oracles.hpp"
#include "rlvrseq/analysis.hpp"

using namespace rlvrseq;

namespace {

std::vector<int> random_ids(std::mt19937_64& rng, int universe, int len) {
  std::vector<int> ids(static_cast<std::size_t>(universe));
  std::iota(ids.begin(), ids.end(), 1);
  std::shuffle(ids.begin(), ids.end(), rng);
  ids.resize(static_cast<std::size_t>(len));
  return ids;
}

}  // namespace

TEST_CASE("contiguous LCS basics") {
  const IdSequence truth = {5, 1, 2, 3, 4};
  auto m = contiguous_lcs(truth, truth);
  CHECK(m.length == 5);
  CHECK(m.anchor == Anchor::both);
  m = contiguous_lcs(IdSequence{3, 1, 2, 4}, truth);
  CHECK(m.length == 2);
  CHECK(m.begin == 1);
  CHECK(m.anchor == Anchor::neither);
  m = contiguous_lcs(IdSequence{4, 5, 1}, truth);
  CHECK(m.length == 2);
  CHECK(m.anchor == Anchor::end);
  m = contiguous_lcs(IdSequence{}, truth);
  CHECK(m.length == 0);
  CHECK(m.anchor == Anchor::neither);
  // Two blocks of length 2: the earlier one is reported.
  m = contiguous_lcs(IdSequence{5, 1, 3, 4}, truth);
  CHECK(m.length == 2);
  CHECK(m.anchor == Anchor::start);
  CHECK_THROWS_AS(contiguous_lcs(IdSequence{9}, truth), DomainError);
  CHECK_THROWS_AS(contiguous_lcs(IdSequence{1, 1}, truth), DomainError);
}

TEST_CASE("contiguous LCS equals the quadratic substring table") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 3000; ++t) {
    const int n = 1 + static_cast<int>(rng() % 16);
    const auto truth = random_ids(rng, n, n);
    const auto cand = random_ids(rng, n, static_cast<int>(rng() % (n + 1)));
    const auto m = contiguous_lcs(cand, truth);
    const auto ref = oracle::longest_common_substring(cand, truth);
    CHECK(m.length == ref.length);
    if (ref.length > 0) CHECK(m.begin == ref.begin);
  }
}

TEST_CASE("hand-labeled extraction corpus") {
  const auto doc = nlohmann::json::parse(oracle::read_file(oracle::data_path("fixtures/extraction_corpus.json")));
  std::map<std::string, ActivityInstance> instances;
  for (const auto& [name, rows] : doc.at("instances").items()) {
    instances[name] = make_activity_instance(rows.get<std::vector<std::pair<int, int>>>());
  }
  const auto& responses = doc.at("responses");
  CHECK(responses.size() == 20);

  std::set<std::string> methods_seen;
  for (const auto& r : responses) {
    const std::string name = r.at("name").get<std::string>();
    CAPTURE(name);
    const auto& inst = instances.at(r.at("instance").get<std::string>());
    const std::string text = r.at("text").get<std::string>();

    const auto ex = extract_sorted_candidates(text, inst);
    if (r.at("sorted_block_full").is_null()) {
      CHECK_FALSE(ex.sorted_block_full);
    } else {
      REQUIRE(ex.sorted_block_full);
      CHECK(*ex.sorted_block_full == r.at("sorted_block_full").get<IdSequence>());
    }
    std::vector<std::pair<std::string, IdSequence>> got, want;
    for (const auto& c : ex.candidates) got.emplace_back(std::string(to_string(c.method)), c.ids);
    for (const auto& c : r.at("candidates")) {
      want.emplace_back(c.at("method").get<std::string>(), c.at("ids").get<IdSequence>());
      methods_seen.insert(want.back().first);
    }
    CHECK(got == want);

    const auto a = analyze_sorting(text, inst);
    if (r.at("best_method").is_null()) {
      CHECK_FALSE(a.best_method);
    } else {
      REQUIRE(a.best_method);
      CHECK(to_string(*a.best_method) == r.at("best_method").get<std::string>());
    }
    CHECK(a.lcs_len == r.at("lcs_len").get<std::size_t>());
    CHECK(to_string(a.anchor) == r.at("anchor").get<std::string>());
    CHECK(a.exact_sorted == r.at("exact_sorted").get<bool>());
    CHECK(a.extraction_success == !r.at("sorted_block_full").is_null());
    CHECK(a.lcs_frac == doctest::Approx(static_cast<double>(a.lcs_len) / inst.size()));
  }
  CHECK(methods_seen.size() == 4);
}

TEST_CASE("sorting summary") {
  std::vector<SortAnalysis> rows(4);
  rows[0] = {true, true, 5, 1.0, CandidateMethod::sorted_block_full, Anchor::both};
  rows[1] = {true, false, 2, 0.4, CandidateMethod::sorted_block_full, Anchor::start};
  rows[2] = {false, false, 3, 0.6, CandidateMethod::comma_run, Anchor::both};
  rows[3] = {};
  const auto s = summarize_sorting(rows);
  CHECK(s.responses == 4);
  CHECK(s.extraction_rate == 0.5);
  CHECK(s.exact_sort_rate == 0.25);
  CHECK(s.coverage == 0.75);
  CHECK(s.mean_lcs_frac == doctest::Approx((1.0 + 0.4 + 0.6) / 3));
  CHECK(s.anchors[static_cast<std::size_t>(Anchor::both)] == 2);
  CHECK(s.anchors[static_cast<std::size_t>(Anchor::start)] == 1);
  CHECK(s.anchors[static_cast<std::size_t>(Anchor::neither)] == 0);

  std::ostringstream csv;
  std::vector<SortRow> sr = {{3, 0, rows[0]}, {3, 1, rows[3]}};
  write_sort_csv(csv, sr);
  const std::string out = csv.str();
  CHECK(out.substr(0, out.find('\n')) ==
        "instance_id,sample_idx,extraction_success,exact_sorted,lcs_len,lcs_frac,best_method,anchor");
  CHECK(out.find("3,1,0,0,0,0,none,neither") != std::string::npos);

  const auto j = summary_json(s);
  CHECK(j.at("coverage") == 0.75);
}
