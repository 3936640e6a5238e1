#include "rlvrseq/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "rlvrseq/kernels.hpp"
#include "rlvrseq/parser.hpp"
#include "rlvrseq/prompt.hpp"

namespace rlvrseq {

namespace {

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << v;
  return out.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

void DatasetSpec::validate() const {
  generator.validate();
  if (!(hinted_fraction >= 0.0 && hinted_fraction <= 1.0)) {
    throw ConfigError("hinted_fraction must lie in [0,1]");
  }
  for (int len : test_lengths) {
    if (len < generator.length_min || len > generator.length_max) {
      throw ConfigError("test length " + std::to_string(len) + " is outside the length range");
    }
  }
}

nlohmann::json to_json(const DatasetSpec& spec) {
  const auto& g = spec.generator;
  return nlohmann::json{{"task", std::string(to_string(spec.task))},
                        {"total_instances", spec.total_instances},
                        {"hinted_fraction", spec.hinted_fraction},
                        {"length_min", g.length_min},
                        {"length_max", g.length_max},
                        {"start_max", g.start_max},
                        {"duration_min", g.duration_min},
                        {"duration_max", g.duration_max},
                        {"value_min", g.value_min},
                        {"value_max", g.value_max},
                        {"max_tries", g.max_tries},
                        {"test_lengths", spec.test_lengths},
                        {"master_seed", spec.master_seed}};
}

void apply_config(DatasetSpec& spec, const nlohmann::json& j) {
  try {
    if (j.contains("task")) spec.task = parse_task(j.at("task").get<std::string>());
    if (j.contains("total_instances")) spec.total_instances = j.at("total_instances").get<std::size_t>();
    if (j.contains("hinted_fraction")) spec.hinted_fraction = j.at("hinted_fraction").get<double>();
    auto& g = spec.generator;
    if (j.contains("length_min")) g.length_min = j.at("length_min").get<int>();
    if (j.contains("length_max")) g.length_max = j.at("length_max").get<int>();
    if (j.contains("start_max")) g.start_max = j.at("start_max").get<int>();
    if (j.contains("duration_min")) g.duration_min = j.at("duration_min").get<int>();
    if (j.contains("duration_max")) g.duration_max = j.at("duration_max").get<int>();
    if (j.contains("value_min")) g.value_min = j.at("value_min").get<int>();
    if (j.contains("value_max")) g.value_max = j.at("value_max").get<int>();
    if (j.contains("max_tries")) g.max_tries = j.at("max_tries").get<int>();
    if (j.contains("test_lengths")) spec.test_lengths = j.at("test_lengths").get<std::set<int>>();
    if (j.contains("master_seed")) spec.master_seed = j.at("master_seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
}

bool hinted_at(std::size_t index, double hinted_fraction) {
  const auto i = static_cast<double>(index);
  return std::floor((i + 1.0) * hinted_fraction) > std::floor(i * hinted_fraction);
}

BuiltDataset build_dataset(const DatasetSpec& spec, int threads) {
  spec.validate();
  auto generated = generate_batch(spec.task, spec.generator, spec.master_seed, spec.total_instances,
                                  0, threads);
  BuiltDataset out;
  std::size_t hinted = 0;
  for (std::size_t i = 0; i < generated.size(); ++i) {
    auto& g = generated[i];
    const bool hint = hinted_at(i, spec.hinted_fraction);
    hinted += hint;
    std::visit([hint](auto& inst) { inst.hinted = hint; }, g.instance);

    DatasetRecord rec;
    rec.instance_id = g.index;
    rec.prompt = render_prompt(g.instance);
    rec.truth = std::move(g.truth);
    const int length = static_cast<int>(row_count(g.instance));
    rec.instance = std::move(g.instance);
    (spec.test_lengths.count(length) ? out.test : out.train).push_back(std::move(rec));
  }
  const std::string config_text = to_json(spec).dump();
  out.manifest = {{"config", to_json(spec)},
                  {"config_hash", hex64(fnv1a(config_text))},
                  {"seed_scheme", "splitmix64(splitmix64(master) ^ splitmix64(index + 0x632BE59BD9B4E019))"},
                  {"counts", {{"total", generated.size()},
                              {"train", out.train.size()},
                              {"test", out.test.size()},
                              {"hinted", hinted}}}};
  return out;
}

std::string to_jsonl(const std::vector<DatasetRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += to_jsonl_line(r);
    out += '\n';
  }
  return out;
}

void write_dataset(const BuiltDataset& dataset, Task task, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const std::string prefix(to_string(task));
  write_file(fs::path(out_dir) / (prefix + "_train.jsonl"), to_jsonl(dataset.train));
  write_file(fs::path(out_dir) / (prefix + "_test.jsonl"), to_jsonl(dataset.test));

  nlohmann::json manifest = dataset.manifest;
  const auto now = std::chrono::system_clock::now().time_since_epoch();
  manifest["created_at_unix"] = std::chrono::duration_cast<std::chrono::seconds>(now).count();
  write_file(fs::path(out_dir) / (prefix + "_manifest.json"), manifest.dump(2) + "\n");
}

VerificationReport verify_dataset(const std::vector<DatasetRecord>& records,
                                  std::size_t brute_force_max) {
  VerificationReport report;
  report.records = records.size();
  for (std::size_t idx = 0; idx < records.size(); ++idx) {
    const auto& rec = records[idx];
    auto flag = [&](const std::string& msg) {
      report.violations.push_back({idx, rec.instance_id, msg});
    };
    if (rec.truth.answer != static_cast<std::int64_t>(rec.truth.ids.size())) {
      flag("ground_truth_answer does not equal the number of ground-truth ids");
    }
    if (rec.prompt != render_prompt(rec.instance)) flag("prompt does not match the rendered instance");

    const std::size_t n = row_count(rec.instance);
    if (const auto* act = std::get_if<ActivityInstance>(&rec.instance)) {
      const OptCount oc = count_optima_and_backtrack(*act);
      if (oc.count != 1) {
        flag("optimum is not unique (count " + oc.count.str() + ")");
        continue;
      }
      if (*oc.unique_solution != rec.truth.ids) flag("ground-truth ids differ from the unique optimum");
      IdSequence greedy = greedy_earliest_finish(*act);
      IdSequence unique = *oc.unique_solution;
      std::sort(greedy.begin(), greedy.end());
      std::sort(unique.begin(), unique.end());
      if (greedy != unique) flag("greedy schedule differs from the unique optimum");
      if (n <= brute_force_max) {
        ++report.brute_forced;
        const auto bf = brute_force_activity(*act);
        if (bf.opt != oc.opt || bf.count != 1 || bf.optima.front() != rec.truth.ids) {
          flag("exhaustive enumeration disagrees with the stored ground truth");
        }
      }
    } else {
      const auto values = std::get<LisInstance>(rec.instance).values();
      if (values.empty()) {
        flag("empty LIS instance");
        continue;
      }
      const OptCount oc = count_lis_length_and_number(values);
      if (oc.count != 1) {
        flag("LIS is not unique (count " + oc.count.str() + ")");
        continue;
      }
      if (oc.opt < 2) flag("LIS shorter than 2");
      if (*oc.unique_solution != rec.truth.ids) flag("ground-truth ids differ from the unique LIS");
      if (n <= brute_force_max) {
        ++report.brute_forced;
        const auto bf = brute_force_lis(values);
        if (bf.opt != oc.opt || bf.count != 1 || bf.optima.front() != rec.truth.ids) {
          flag("exhaustive enumeration disagrees with the stored ground truth");
        }
      }
    }
  }
  return report;
}

JoinError::JoinError(std::vector<Item> items)
    : std::runtime_error([&] {
        std::string msg = std::to_string(items.size()) + " response row(s) match no dataset record:";
        for (std::size_t i = 0; i < items.size() && i < 20; ++i) {
          msg += " [row " + std::to_string(items[i].response_index + 1) + ": instance_id " +
                 std::to_string(items[i].instance_id) + "]";
        }
        if (items.size() > 20) msg += " ...";
        return msg;
      }()),
      items_(std::move(items)) {}

namespace {

struct Joined {
  std::vector<std::size_t> dataset_index;  // per response set, in dataset order
  std::vector<ResponseSet> sets;
  std::vector<std::vector<std::int64_t>> sample_idx;
  std::size_t without_responses = 0;
};

Joined join_responses(const std::vector<DatasetRecord>& dataset,
                      const std::vector<ResponseRecord>& responses) {
  std::map<std::int64_t, std::size_t> by_id;
  for (std::size_t i = 0; i < dataset.size(); ++i) by_id.emplace(dataset[i].instance_id, i);

  std::vector<JoinError::Item> unjoined;
  std::vector<std::vector<std::size_t>> rows_for(dataset.size());
  for (std::size_t r = 0; r < responses.size(); ++r) {
    auto it = by_id.find(responses[r].instance_id);
    if (it == by_id.end()) {
      unjoined.push_back({r, responses[r].instance_id});
      continue;
    }
    rows_for[it->second].push_back(r);
  }
  if (!unjoined.empty()) throw JoinError(std::move(unjoined));

  Joined out;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (rows_for[i].empty()) {
      ++out.without_responses;
      continue;
    }
    ResponseSet set;
    set.instance_id = dataset[i].instance_id;
    std::vector<std::int64_t> samples;
    for (std::size_t r : rows_for[i]) {
      set.responses.push_back(responses[r].text);
      samples.push_back(responses[r].sample_idx);
    }
    set.meta.k = static_cast<int>(set.responses.size());
    out.dataset_index.push_back(i);
    out.sets.push_back(std::move(set));
    out.sample_idx.push_back(std::move(samples));
  }
  return out;
}

SortRunResult sort_rows_for(const std::vector<DatasetRecord>& dataset, const Joined& joined,
                            int threads) {
  std::vector<SortItem> items;
  std::vector<std::pair<std::int64_t, std::int64_t>> keys;
  for (std::size_t s = 0; s < joined.sets.size(); ++s) {
    const auto& inst = std::get<ActivityInstance>(dataset[joined.dataset_index[s]].instance);
    for (std::size_t j = 0; j < joined.sets[s].responses.size(); ++j) {
      items.push_back({&inst, joined.sets[s].responses[j]});
      keys.emplace_back(joined.sets[s].instance_id, joined.sample_idx[s][j]);
    }
  }
  const auto analyses = analyze_sorting_batch(items, threads);
  SortRunResult out;
  for (std::size_t i = 0; i < analyses.size(); ++i) {
    out.rows.push_back({keys[i].first, keys[i].second, analyses[i]});
  }
  out.summary = summarize_sorting(analyses);
  return out;
}

Task dataset_task(const std::vector<DatasetRecord>& dataset) {
  if (dataset.empty()) throw DomainError("dataset is empty");
  const Task task = task_of(dataset.front().instance);
  for (const auto& r : dataset) {
    if (task_of(r.instance) != task) throw DomainError("dataset mixes activity and LIS records");
  }
  return task;
}

}  // namespace

EvalRunResult evaluate_run(const std::vector<DatasetRecord>& dataset,
                           const std::vector<ResponseRecord>& responses,
                           const EvalRunOptions& options) {
  const Task task = dataset_task(dataset);
  Joined joined = join_responses(dataset, responses);
  if (joined.sets.empty()) throw DomainError("no responses to evaluate");

  EvalConfig config;
  config.curve_ks = options.curve_ks;
  config.estimator = options.estimator;
  if (options.k_max) {
    config.k_max = *options.k_max;
  } else {
    config.k_max = static_cast<int>(joined.sets.front().responses.size());
    for (const auto& s : joined.sets) {
      config.k_max = std::min(config.k_max, static_cast<int>(s.responses.size()));
    }
  }
  if (!options.k_max && !config.curve_ks.empty()) {
    std::erase_if(config.curve_ks, [&](int k) { return k > config.k_max; });
  }

  std::vector<Instance> instances;
  std::vector<GroundTruth> truths;
  for (std::size_t idx : joined.dataset_index) {
    instances.push_back(dataset[idx].instance);
    truths.push_back(dataset[idx].truth);
  }

  EvalRunResult out;
  out.metrics = evaluate(joined.sets, instances, truths, config, options.threads);
  out.instances_without_responses = joined.without_responses;
  if (task == Task::activity) {
    auto sort = sort_rows_for(dataset, joined, options.threads);
    out.sort_rows = std::move(sort.rows);
    out.sort_summary = sort.summary;
  }
  return out;
}

void write_eval_reports(const EvalRunResult& result, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::ostringstream per_instance, curve;
  write_instance_csv(per_instance, result.metrics);
  write_aggregate_csv(curve, result.metrics);
  write_file(fs::path(out_dir) / "metrics_per_instance.csv", per_instance.str());
  write_file(fs::path(out_dir) / "metrics_curve.csv", curve.str());

  nlohmann::json summary = summary_json(result.metrics);
  summary["instances_without_responses"] = result.instances_without_responses;
  if (result.sort_summary) {
    summary["sorting"] = summary_json(*result.sort_summary);
    std::ostringstream sort_csv;
    write_sort_csv(sort_csv, result.sort_rows);
    write_file(fs::path(out_dir) / "sort_analysis.csv", sort_csv.str());
  }
  write_file(fs::path(out_dir) / "summary.json", summary.dump(2) + "\n");
}

SortRunResult analyze_sort_run(const std::vector<DatasetRecord>& dataset,
                               const std::vector<ResponseRecord>& responses, int threads) {
  if (dataset_task(dataset) != Task::activity) {
    throw ConfigError("sorting analysis applies to activity datasets only");
  }
  return sort_rows_for(dataset, join_responses(dataset, responses), threads);
}

FeatureTable features_run(const std::vector<DatasetRecord>& dataset,
                          const std::vector<ResponseRecord>& responses, double test_fraction,
                          std::uint64_t split_seed) {
  if (dataset_task(dataset) != Task::lis) throw ConfigError("LIS features apply to LIS datasets only");
  const Joined joined = join_responses(dataset, responses);

  std::vector<FeatureRecord> records;
  std::vector<std::int64_t> ids;
  for (std::size_t s = 0; s < joined.sets.size(); ++s) {
    const auto values = std::get<LisInstance>(dataset[joined.dataset_index[s]].instance).values();
    ids.push_back(joined.sets[s].instance_id);
    for (std::size_t j = 0; j < joined.sets[s].responses.size(); ++j) {
      records.push_back({joined.sets[s].instance_id, joined.sample_idx[s][j], values,
                         parse_answer(joined.sets[s].responses[j])});
    }
  }
  if (ids.empty()) throw DomainError("no responses to extract features from");
  return export_features(records, group_split(ids, test_fraction, split_seed));
}

}  // namespace rlvrseq
