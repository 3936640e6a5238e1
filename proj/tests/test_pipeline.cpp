#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "rlvrseq/pipeline.hpp"
#include "rlvrseq/prompt.hpp"

using namespace rlvrseq;
namespace fs = std::filesystem;

namespace {

DatasetSpec small_spec(Task task, std::uint64_t seed) {
  DatasetSpec s;
  s.task = task;
  s.total_instances = 120;
  s.hinted_fraction = 0.5;
  s.generator.length_min = 5;
  s.generator.length_max = 10;
  s.test_lengths = {9, 10};
  s.master_seed = seed;
  return s;
}

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("rlvrseq_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<ResponseRecord> oracle_responses(const std::vector<DatasetRecord>& data, int per) {
  std::vector<ResponseRecord> out;
  for (const auto& r : data) {
    for (int j = 0; j < per; ++j) {
      out.push_back({r.instance_id, j, id_sequence_to_wire(r.truth.ids) + answer_to_wire(r.truth.answer)});
    }
  }
  return out;
}

}  // namespace

TEST_CASE("hinted assignment") {
  for (double f : {0.0, 0.1, 0.25, 0.5, 0.8, 1.0}) {
    std::size_t hinted = 0;
    for (std::size_t i = 0; i < 2000; ++i) hinted += hinted_at(i, f);
    CHECK(hinted == static_cast<std::size_t>(std::floor(2000 * f)));
  }
  CHECK_FALSE(hinted_at(0, 0.5));
  CHECK(hinted_at(1, 0.5));
  CHECK_FALSE(hinted_at(2, 0.5));
}

TEST_CASE("dataset build is deterministic, split by length and verified") {
  for (Task task : {Task::activity, Task::lis}) {
    const auto spec = small_spec(task, 42);
    const auto a = build_dataset(spec, 1);
    const auto b = build_dataset(spec, 4);
    CHECK(to_jsonl(a.train) == to_jsonl(b.train));
    CHECK(to_jsonl(a.test) == to_jsonl(b.test));
    CHECK(a.manifest == b.manifest);
    CHECK(to_jsonl(build_dataset(small_spec(task, 43)).train) != to_jsonl(a.train));

    std::set<std::int64_t> ids;
    std::size_t hinted = 0;
    for (const auto& r : a.train) {
      CHECK(spec.test_lengths.count(static_cast<int>(row_count(r.instance))) == 0);
      ids.insert(r.instance_id);
      hinted += is_hinted(r.instance);
    }
    for (const auto& r : a.test) {
      CHECK(spec.test_lengths.count(static_cast<int>(row_count(r.instance))) == 1);
      ids.insert(r.instance_id);
      hinted += is_hinted(r.instance);
    }
    CHECK(ids.size() == 120);
    CHECK(*ids.rbegin() == 119);
    CHECK(hinted == 60);
    CHECK(a.manifest.at("counts").at("hinted") == 60);
    CHECK(a.manifest.at("counts").at("train") == a.train.size());

    const auto report = verify_dataset(a.train);
    CHECK(report.ok());
    CHECK(report.brute_forced == a.train.size());
    CHECK(verify_dataset(a.test).ok());
  }
}

TEST_CASE("verification flags tampered records") {
  auto data = build_dataset(small_spec(Task::activity, 5)).train;
  REQUIRE(data.size() >= 3);
  data[0].truth.answer += 1;
  data[1].prompt += " ";
  std::swap(data[2].truth.ids.front(), data[2].truth.ids.back());
  const auto report = verify_dataset(data);
  std::set<std::size_t> flagged;
  for (const auto& v : report.violations) flagged.insert(v.record_index);
  CHECK(flagged == std::set<std::size_t>{0, 1, 2});

  auto lis = build_dataset(small_spec(Task::lis, 5)).train;
  auto& rows = std::get<LisInstance>(lis[0].instance).rows;
  for (auto& r : rows) r.value = 7;  // every row equal: LIS not unique
  lis[0].prompt = render_prompt(lis[0].instance);
  CHECK(verify_dataset(lis).violations.size() == 1);
}

TEST_CASE("written dataset round-trips") {
  const auto spec = small_spec(Task::lis, 9);
  const auto built = build_dataset(spec);
  const auto dir = scratch_dir("roundtrip");
  write_dataset(built, spec.task, dir.string());
  const auto train = read_dataset_file((dir / "lis_train.jsonl").string());
  CHECK(to_jsonl(train) == to_jsonl(built.train));
  const auto manifest = nlohmann::json::parse(oracle::read_file((dir / "lis_manifest.json").string()));
  CHECK(manifest.contains("created_at_unix"));
  CHECK(manifest.at("config_hash") == built.manifest.at("config_hash"));
  fs::remove_all(dir);
}

TEST_CASE("config overlay") {
  DatasetSpec s;
  apply_config(s, nlohmann::json::parse(
                      R"({"task":"lis","total_instances":10,"test_lengths":[5],"master_seed":3,"value_max":50})"));
  CHECK(s.task == Task::lis);
  CHECK(s.total_instances == 10);
  CHECK(s.test_lengths == std::set<int>{5});
  CHECK(s.master_seed == 3);
  CHECK(s.generator.value_max == 50);
  CHECK(s.generator.length_max == 16);
  CHECK_THROWS_AS(apply_config(s, nlohmann::json::parse(R"({"total_instances":"many"})")), ConfigError);
  s.hinted_fraction = 1.5;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s.hinted_fraction = 0.5;
  s.test_lengths = {40};
  CHECK_THROWS_AS(s.validate(), ConfigError);
}

TEST_CASE("evaluation run with perfect responses") {
  const auto data = build_dataset(small_spec(Task::activity, 11)).train;
  const auto responses = oracle_responses(data, 4);
  const auto result = evaluate_run(data, responses, {});
  CHECK(result.metrics.k_max == 4);
  for (const auto& p : result.metrics.aggregate) {
    CHECK(p.pass_ans == 1.0);
    CHECK(p.pass_ids == 1.0);
    CHECK(p.sc_ans == 1.0);
    CHECK(p.sc_ids == 1.0);
  }
  CHECK(result.sort_rows.size() == responses.size());
  REQUIRE(result.sort_summary);
  CHECK(result.sort_summary->extraction_rate == 0.0);  // no sorted list in these responses

  const auto dir = scratch_dir("eval");
  write_eval_reports(result, dir.string());
  for (const char* f : {"metrics_per_instance.csv", "metrics_curve.csv", "summary.json", "sort_analysis.csv"}) {
    CHECK(fs::exists(dir / f));
  }
  const auto summary = nlohmann::json::parse(oracle::read_file((dir / "summary.json").string()));
  CHECK(summary.at("instances_without_responses") == 0);
  CHECK(summary.contains("sorting"));
  fs::remove_all(dir);
}

TEST_CASE("evaluation run on a hand-built set") {
  const auto data = build_dataset(small_spec(Task::lis, 13)).train;
  REQUIRE(data.size() >= 6);
  std::vector<DatasetRecord> five(data.begin(), data.begin() + 5);
  // Instance j gets j correct answers out of 4 samples; instance 4 gets no responses.
  std::vector<ResponseRecord> responses;
  for (int j = 0; j < 4; ++j) {
    for (int s = 0; s < 4; ++s) {
      const auto& t = five[static_cast<std::size_t>(j)].truth;
      const bool ok = s < j;
      responses.push_back({five[static_cast<std::size_t>(j)].instance_id, s,
                           answer_to_wire(ok ? t.answer : t.answer + 1)});
    }
  }
  EvalRunOptions opt;
  opt.curve_ks = {1, 2, 4};
  const auto r = evaluate_run(five, responses, opt);
  CHECK(r.instances_without_responses == 1);
  CHECK(r.metrics.per_instance.size() == 4);
  CHECK_FALSE(r.sort_summary);
  // Mean of 1 - C(4-c,1)/C(4,1) for c = 0..3.
  CHECK(r.metrics.aggregate[0].pass_ans == doctest::Approx((0.0 + 0.25 + 0.5 + 0.75) / 4));
  // k = 2: 1 - C(4-c,2)/6 = 0, 1/2, 5/6, 1.
  CHECK(r.metrics.aggregate[1].pass_ans == doctest::Approx((0.0 + 0.5 + 5.0 / 6.0 + 1.0) / 4));
  CHECK(r.metrics.aggregate[2].pass_ans == doctest::Approx(0.75));
  CHECK(r.metrics.aggregate[2].pass_ids == 0.0);
  // At k = 4 instances 2 and 3 vote for the truth (the 2:2 tie goes to the smaller, correct value).
  CHECK(r.metrics.aggregate[2].sc_ans == doctest::Approx(0.5));

  opt.k_max = 8;
  CHECK_THROWS_AS(evaluate_run(five, responses, opt), DomainError);
}

TEST_CASE("join errors and task checks") {
  const auto data = build_dataset(small_spec(Task::lis, 17)).train;
  std::vector<ResponseRecord> responses = {{data[0].instance_id, 0, "\\answer{2}"},
                                           {100000, 0, "x"}, {100001, 1, "y"}};
  try {
    evaluate_run(data, responses, {});
    FAIL("expected JoinError");
  } catch (const JoinError& e) {
    REQUIRE(e.items().size() == 2);
    CHECK(e.items()[0].response_index == 1);
    CHECK(e.items()[1].instance_id == 100001);
    CHECK(std::string(e.what()).find("instance_id 100000") != std::string::npos);
  }
  responses.resize(1);
  CHECK_THROWS_AS(analyze_sort_run(data, responses), ConfigError);
  const auto table = features_run(data, responses, 0.5, 1);
  CHECK(table.rows.size() + table.dropped == 1);

  const auto act = build_dataset(small_spec(Task::activity, 17)).train;
  CHECK_THROWS_AS(features_run(act, {}, 0.2, 1), ConfigError);
  auto mixed = act;
  mixed.push_back(data[0]);
  CHECK_THROWS_AS(evaluate_run(mixed, {}, {}), DomainError);
  CHECK_THROWS_AS(evaluate_run(act, {}, {}), DomainError);
}
