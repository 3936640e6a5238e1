#include <doctest.h>

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "rlvrseq/rewards.hpp"

using namespace rlvrseq;

namespace {

const std::vector<std::pair<int, int>> kExampleActivity = {
    {369, 444}, {433, 503}, {449, 568}, {504, 618}, {288, 374}};

ParsedOutput with(std::optional<std::int64_t> answer, std::optional<IdSequence> ids, bool fmt) {
  ParsedOutput p;
  p.answer = answer;
  p.ids = std::move(ids);
  p.has_format = fmt;
  return p;
}

}  // namespace

TEST_CASE("answer reward") {
  const GroundTruth t{{5, 2, 4}, 3};
  CHECK(reward_ans(with(3, std::nullopt, false), t) == 1.0);
  CHECK(reward_ans(with(std::nullopt, std::nullopt, false), t) == 0.0);
  CHECK(reward_ans(with(4, std::nullopt, false), t) == 0.0);
}

TEST_CASE("answer plus format closed forms") {
  const GroundTruth t{{5, 2, 4}, 3};
  CHECK(reward_ans_fmt(with(3, IdSequence{5, 2, 4}, true), t) == 1.0);
  CHECK(reward_ans_fmt(with(3, std::nullopt, false), t) == 0.9);
  CHECK(reward_ans_fmt(with(2, IdSequence{5}, true), t) == 0.1);
  CHECK(reward_ans_fmt(with(2, std::nullopt, false), t) == 0.0);
}

TEST_CASE("exact sequence reward") {
  const GroundTruth t{{5, 2, 4}, 3};
  CHECK(reward_ids_exact(with(std::nullopt, IdSequence{5, 2, 4}, false), t) == 1.0);
  CHECK(reward_ids_exact(with(std::nullopt, IdSequence{2, 5, 4}, false), t) == 0.0);
  CHECK(reward_ids_exact(with(std::nullopt, std::nullopt, false), t) == 0.0);
}

TEST_CASE("prefix reward closed forms") {
  const GroundTruth t{{5, 2, 4}, 3};
  CHECK(reward_ids_prefix(with(std::nullopt, IdSequence{5, 2, 1}, false), t) == 2.0 / 3.0);
  CHECK(reward_ids_prefix(with(std::nullopt, std::nullopt, false), t) == 0.0);
  CHECK(reward_ids_prefix(with(std::nullopt, IdSequence{5, 2}, false), t) == 2.0 / 3.0 - 0.1);
  CHECK(reward_ids_prefix(with(std::nullopt, IdSequence{5, 2, 4, 1}, false), t) == 1.0 - 0.1);
  CHECK(reward_ids_prefix(with(std::nullopt, IdSequence{}, false), t) == 0.0);
  CHECK(reward_ids_prefix(with(std::nullopt, IdSequence{5, 2, 4}, false), t) == 1.0);
}

TEST_CASE("sort reward uses only the full sorted block") {
  const auto inst = make_activity_instance(kExampleActivity);
  const auto truth_sorted = canonical_sorted_ids(inst);
  ExtractionResult e;
  CHECK(reward_sort(e, truth_sorted) == 0.0);
  e.candidates.push_back({CandidateMethod::comma_run, truth_sorted});
  CHECK(reward_sort(e, truth_sorted) == 0.0);
  e.sorted_block_full = truth_sorted;
  CHECK(reward_sort(e, truth_sorted) == 1.0);
  std::swap((*e.sorted_block_full)[1], (*e.sorted_block_full)[2]);
  CHECK(reward_sort(e, truth_sorted) == 0.0);
}

TEST_CASE("score combines components") {
  const Instance inst = make_activity_instance(kExampleActivity);
  const GroundTruth t{{5, 2, 4}, 3};
  const std::string good =
      "<think>Sorted by end: 5, 1, 2, 3, 4. Select greedily.</think>\\ids{5,2,4}\n\\answer{3}";

  auto b = score(good, inst, t, RewardSpec::single(RewardKind::ans));
  CHECK(b.total == 1.0);
  CHECK(b.parse_status == ParseStatus::ok);

  const double third = 1.0 / 3.0;
  RewardSpec combo{{{RewardKind::ans, third}, {RewardKind::ids_exact, third}, {RewardKind::sort, third}}};
  b = score(good, inst, t, combo);
  CHECK(b.total == doctest::Approx(1.0).epsilon(1e-15));
  REQUIRE(b.per_component.size() == 3);
  for (const auto& c : b.per_component) CHECK(c.raw == 1.0);

  b = score("\\ids{5,2,1}", inst, t, RewardSpec::single(RewardKind::ids_prefix));
  CHECK(b.total == 2.0 / 3.0);
  CHECK(b.parse_status == ParseStatus::no_answer);
  CHECK(score("\\answer{3}", inst, t, RewardSpec::single(RewardKind::ans)).parse_status ==
        ParseStatus::no_ids);
  CHECK(score("", inst, t, RewardSpec::single(RewardKind::ans)).parse_status == ParseStatus::no_both);

  const Instance lis = make_lis_instance(std::vector<int>{797, 476, 335, 452, 606});
  CHECK_THROWS_AS(score(good, lis, {{3, 4, 5}, 3}, RewardSpec::single(RewardKind::sort)), ConfigError);
  CHECK_THROWS_AS(score(good, inst, t, RewardSpec{}), ConfigError);
}

TEST_CASE("reward properties on random inputs") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> len(0, 8), id(1, 8), coin(0, 1);
  for (int it = 0; it < 5000; ++it) {
    GroundTruth t;
    const int L = 1 + len(rng) % 8;
    for (int i = 0; i < L; ++i) t.ids.push_back(id(rng));
    t.answer = L;

    ParsedOutput p;
    if (coin(rng)) p.answer = len(rng);
    if (coin(rng)) {
      IdSequence ids = t.ids;
      ids.resize(static_cast<std::size_t>(len(rng)), 1);
      if (!ids.empty() && coin(rng)) ids[static_cast<std::size_t>(len(rng)) % ids.size()] = id(rng);
      p.ids = ids;
    }
    p.has_format = coin(rng);

    const double values[] = {reward_ans(p, t), reward_ans_fmt(p, t), reward_ids_exact(p, t),
                             reward_ids_prefix(p, t)};
    for (double v : values) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    if (reward_ids_exact(p, t) == 1.0) CHECK(reward_ids_prefix(p, t) == 1.0);
    CHECK((reward_ans_fmt(p, t) == 1.0) == (reward_ans(p, t) == 1.0 && p.has_format));

    // Extending the common prefix at fixed length never lowers the reward.
    if (p.ids && !p.ids->empty()) {
      IdSequence better = *p.ids;
      const std::size_t limit = std::min(better.size(), t.ids.size());
      std::size_t m = 0;
      while (m < limit && better[m] == t.ids[m]) ++m;
      if (m < limit) {
        better[m] = t.ids[m];
        ParsedOutput q = p;
        q.ids = better;
        CHECK(reward_ids_prefix(q, t) >= reward_ids_prefix(p, t));
      }
    }
  }
}
