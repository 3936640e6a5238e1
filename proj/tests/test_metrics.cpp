#include <doctest.h>

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "rlvrseq/metrics.hpp"

using namespace rlvrseq;

TEST_CASE("unbiased pass@k closed form") {
  CHECK(pass_at_k_unbiased(4, 1, 2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(pass_at_k_unbiased(10, 0, 3) == 0.0);
  CHECK(pass_at_k_unbiased(10, 10, 3) == 1.0);
  CHECK(pass_at_k_unbiased(10, 8, 3) == 1.0);  // fewer than k misses
  CHECK_THROWS_AS(pass_at_k_unbiased(4, 1, 5), DomainError);
  CHECK_THROWS_AS(pass_at_k_unbiased(4, 1, 0), DomainError);

  for (int n : {1, 2, 7, 64, 256}) {
    for (int c = 0; c <= n; c += std::max(1, n / 9)) {
      for (int k = 1; k <= n; k += std::max(1, n / 7)) {
        CHECK(pass_at_k_unbiased(n, c, k) ==
              doctest::Approx(oracle::pass_at_k_exact(n, c, k)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("pass@k agrees with sampling without replacement") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 10; ++t) {
    const int n = 5 + static_cast<int>(rng() % 40);
    const int c = static_cast<int>(rng() % (n + 1));
    const int k = 1 + static_cast<int>(rng() % n);
    const double mc = oracle::pass_at_k_monte_carlo(n, c, k, 40000, rng());
    CHECK(std::abs(pass_at_k_unbiased(n, c, k) - mc) < 0.01);
  }
}

TEST_CASE("pass@k from flags") {
  const std::vector<bool> flags = {false, false, true, false};
  CHECK(pass_at_k(flags, 1, PassEstimator::prefix) == 0.0);
  CHECK(pass_at_k(flags, 3, PassEstimator::prefix) == 1.0);
  CHECK(pass_at_k(flags, 1, PassEstimator::unbiased) == doctest::Approx(0.25));
  // Both estimators see all n samples at k = n.
  CHECK(pass_at_k(flags, 4, PassEstimator::prefix) == pass_at_k(flags, 4, PassEstimator::unbiased));
  double prev = 0.0;
  for (int k = 1; k <= 4; ++k) {
    const double v = pass_at_k(flags, k, PassEstimator::unbiased);
    CHECK(v >= prev);
    prev = v;
  }
  CHECK_THROWS_AS(pass_at_k(flags, 5, PassEstimator::prefix), DomainError);
}

TEST_CASE("majority vote tie-breaking") {
  using A = std::optional<std::int64_t>;
  const std::vector<A> tie = {5, 3, 5, 3, std::nullopt};
  CHECK(majority_vote<std::int64_t>(tie, 5) == 3);
  CHECK(majority_vote<std::int64_t>(tie, 1) == 5);
  const std::vector<A> none = {std::nullopt, std::nullopt};
  CHECK_FALSE(majority_vote<std::int64_t>(none, 2));
  CHECK_FALSE(self_consistency<std::int64_t>(none, 1, 2));
  const std::vector<A> neg = {-1, 2};
  CHECK(majority_vote<std::int64_t>(neg, 2) == -1);

  using S = std::optional<IdSequence>;
  const std::vector<S> seq = {IdSequence{2, 1}, IdSequence{1, 3, 4}, IdSequence{2, 1},
                              IdSequence{1, 3, 4}, IdSequence{1, 3}};
  CHECK(majority_vote<IdSequence>(seq, 4) == IdSequence{1, 3, 4});
  CHECK(majority_vote<IdSequence>(seq, 3) == IdSequence{2, 1});
  CHECK(self_consistency<IdSequence>(seq, IdSequence{1, 3, 4}, 5));
  CHECK_THROWS_AS(majority_vote<IdSequence>(seq, 6), DomainError);
}

TEST_CASE("curve resolution") {
  EvalConfig c;
  c.k_max = 6;
  CHECK(c.resolved_curve() == std::vector<int>{1, 2, 4, 6});
  c.k_max = 256;
  CHECK(c.resolved_curve().back() == 256);
  CHECK(c.resolved_curve().size() == 9);
  c.curve_ks = {16, 1, 16};
  CHECK(c.resolved_curve() == std::vector<int>{1, 16, 256});
  c.curve_ks = {300};
  CHECK_THROWS_AS(c.resolved_curve(), ConfigError);
}

TEST_CASE("instance evaluation on a hand-made response set") {
  const Instance lis = make_lis_instance(std::vector<int>{797, 476, 335, 452, 606});
  const GroundTruth truth{{3, 4, 5}, 3};
  ResponseSet rs;
  rs.instance_id = 9;
  rs.responses = {"\\ids{2,5}\\answer{2}", "\\ids{3,4,5}\\answer{3}", "\\answer{2}",
                  "\\ids{3,4,5}\\answer{3}"};
  EvalConfig cfg;
  cfg.k_max = 4;
  cfg.estimator = PassEstimator::prefix;
  const auto m = evaluate_instance(rs, lis, truth, cfg);
  REQUIRE(m.points.size() == 3);  // k = 1, 2, 4
  CHECK(m.points[0].pass_ans == 0.0);
  CHECK(m.points[1].pass_ans == 1.0);
  CHECK(m.points[1].sc_ans == 0.0);  // 2 vs 3 tie, smaller wins
  CHECK(m.points[2].sc_ans == 0.0);  // 2,3,2,3 tie again
  CHECK(m.points[2].sc_ids == 1.0);  // [3,4,5] twice, [2,5] once
  CHECK(m.points[2].pass_ids == 1.0);

  cfg.k_max = 5;
  CHECK_THROWS_AS(evaluate_instance(rs, lis, truth, cfg), DomainError);
}

TEST_CASE("aggregation and report output") {
  InstanceMetrics a{1, {{1, 1.0, 0.0, 1.0, 0.0}, {2, 1.0, 1.0, 1.0, 0.0}}};
  InstanceMetrics b{2, {{1, 0.0, 0.0, 0.0, 0.0}, {2, 0.5, 0.0, 0.0, 1.0}}};
  EvalConfig cfg;
  cfg.k_max = 2;
  const auto r = aggregate_metrics({a, b}, cfg);
  REQUIRE(r.aggregate.size() == 2);
  CHECK(r.at_k_max().pass_ans == 0.75);
  CHECK(r.at_k_max().sc_ids == 0.5);

  std::ostringstream inst, agg;
  write_instance_csv(inst, r);
  write_aggregate_csv(agg, r);
  CHECK(inst.str() ==
        "instance_id,k,pass_ans,pass_ids,sc_ans,sc_ids\n1,1,1,0,1,0\n1,2,1,1,1,0\n2,1,0,0,0,0\n"
        "2,2,0.5,0,0,1\n");
  CHECK(agg.str() == "k,pass_ans,pass_ids,sc_ans,sc_ids,instances\n1,0.5,0,0.5,0,2\n2,0.75,0.5,0.5,0.5,2\n");
  const auto j = summary_json(r);
  CHECK(j.at("at_k_max").at("k") == 2);
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(2.0 / 3.0) == "0.6666666666666666");
}
