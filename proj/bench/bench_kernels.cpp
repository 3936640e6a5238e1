// Parallel kernels against their serial twins.

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "rlvrseq/kernels.hpp"

using namespace rlvrseq;

namespace {

struct ScoreFixture {
  std::vector<GeneratedInstance> gen;
  std::vector<Instance> instances;
  std::vector<GroundTruth> truths;
  std::vector<ResponseSet> sets;
  std::vector<ScoreItem> items;
  std::vector<SortItem> sort_items;
  RewardSpec spec = RewardSpec{{{RewardKind::ids_prefix, 0.5}, {RewardKind::sort, 0.5}}};

  ScoreFixture() {
    gen = generate_batch(Task::activity, GeneratorConfig{}, 1, 200);
    std::mt19937_64 rng(2);
    for (const auto& g : gen) {
      instances.push_back(g.instance);
      truths.push_back(g.truth);
      ResponseSet rs;
      rs.instance_id = g.index;
      const std::size_t n = row_count(g.instance);
      for (int j = 0; j < 64; ++j) {
        std::string text = "<think>Sorted by finish: ";
        for (std::size_t i = 0; i < n; ++i) text += std::to_string(1 + rng() % n) + ", ";
        text += "then pick greedily.</think>" + id_sequence_to_wire(g.truth.ids) +
                answer_to_wire(g.truth.answer + static_cast<std::int64_t>(rng() % 2));
        rs.responses.push_back(std::move(text));
      }
      sets.push_back(std::move(rs));
    }
    for (std::size_t i = 0; i < sets.size(); ++i) {
      for (const auto& t : sets[i].responses) {
        items.push_back({&instances[i], &truths[i], t, &spec});
        sort_items.push_back({&std::get<ActivityInstance>(instances[i]), t});
      }
    }
  }
};

const ScoreFixture& fixture() {
  static const ScoreFixture f;
  return f;
}

std::vector<std::vector<int>> random_sequences(std::size_t count) {
  std::mt19937_64 rng(3);
  std::vector<std::vector<int>> out(count);
  for (auto& v : out) {
    v.resize(5 + rng() % 12);
    for (auto& x : v) x = 1 + static_cast<int>(rng() % 1000);
  }
  return out;
}

void BM_generate_serial(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(generate_batch_serial(Task::activity, GeneratorConfig{}, 7, 500));
}
void BM_generate_parallel(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(generate_batch(Task::activity, GeneratorConfig{}, 7, 500));
}

void BM_score_serial(benchmark::State& s) {
  const auto& f = fixture();
  for (auto _ : s) benchmark::DoNotOptimize(score_batch_serial(f.items));
}
void BM_score_parallel(benchmark::State& s) {
  const auto& f = fixture();
  for (auto _ : s) benchmark::DoNotOptimize(score_batch(f.items));
}

void BM_evaluate_serial(benchmark::State& s) {
  const auto& f = fixture();
  EvalConfig c;
  c.k_max = 64;
  for (auto _ : s) benchmark::DoNotOptimize(evaluate_serial(f.sets, f.instances, f.truths, c));
}
void BM_evaluate_parallel(benchmark::State& s) {
  const auto& f = fixture();
  EvalConfig c;
  c.k_max = 64;
  for (auto _ : s) benchmark::DoNotOptimize(evaluate(f.sets, f.instances, f.truths, c));
}

void BM_sorting_serial(benchmark::State& s) {
  const auto& f = fixture();
  for (auto _ : s) benchmark::DoNotOptimize(analyze_sorting_batch_serial(f.sort_items));
}
void BM_sorting_parallel(benchmark::State& s) {
  const auto& f = fixture();
  for (auto _ : s) benchmark::DoNotOptimize(analyze_sorting_batch(f.sort_items));
}

void BM_features_serial(benchmark::State& s) {
  const auto seqs = random_sequences(5000);
  for (auto _ : s) benchmark::DoNotOptimize(lis_features_batch_serial(seqs));
}
void BM_features_parallel(benchmark::State& s) {
  const auto seqs = random_sequences(5000);
  for (auto _ : s) benchmark::DoNotOptimize(lis_features_batch(seqs));
}

}  // namespace

BENCHMARK(BM_generate_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_generate_parallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_score_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_score_parallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_evaluate_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_evaluate_parallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_sorting_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sorting_parallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_features_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_features_parallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
