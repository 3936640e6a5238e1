// rlvrseq command line: dataset generation, verification, evaluation,
// sorting analysis, LIS feature export and the scoring service.
//
// Settings resolve as: command-line flag > --config file > environment
// (RLVRSEQ_SEED, RLVRSEQ_OUT_DIR) > built-in defaults.

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rlvrseq/pipeline.hpp"
#include "rlvrseq/records.hpp"
#include "rlvrseq/service.hpp"

namespace {

using namespace rlvrseq;
namespace fs = std::filesystem;

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop.store(true); }

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

std::uint64_t parse_seed(const std::string& text, const char* origin) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used, 0);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw ConfigError(std::string("bad seed '") + text + "' from " + origin);
  }
  return v;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ConfigError(path + " is not a JSON object");
  return j;
}

std::string default_out_dir() { return env("RLVRSEQ_OUT_DIR").value_or("out"); }

// generate ---------------------------------------------------------------------

struct GenerateArgs {
  std::string config;
  std::string task;
  std::optional<std::size_t> total;
  std::optional<double> hinted_fraction;
  std::optional<int> length_min, length_max, start_max, duration_min, duration_max, value_min,
      value_max, max_tries;
  std::vector<int> test_lengths;
  std::string seed;
  std::string out_dir;
  int threads = 0;
};

int run_generate(const GenerateArgs& a) {
  DatasetSpec spec;
  std::string out_dir = default_out_dir();
  if (auto s = env("RLVRSEQ_SEED")) spec.master_seed = parse_seed(*s, "RLVRSEQ_SEED");
  if (!a.config.empty()) {
    const auto j = read_json_file(a.config);
    apply_config(spec, j);
    if (j.contains("out_dir")) out_dir = j.at("out_dir").get<std::string>();
  }
  if (!a.task.empty()) spec.task = parse_task(a.task);
  if (a.total) spec.total_instances = *a.total;
  if (a.hinted_fraction) spec.hinted_fraction = *a.hinted_fraction;
  auto& g = spec.generator;
  if (a.length_min) g.length_min = *a.length_min;
  if (a.length_max) g.length_max = *a.length_max;
  if (a.start_max) g.start_max = *a.start_max;
  if (a.duration_min) g.duration_min = *a.duration_min;
  if (a.duration_max) g.duration_max = *a.duration_max;
  if (a.value_min) g.value_min = *a.value_min;
  if (a.value_max) g.value_max = *a.value_max;
  if (a.max_tries) g.max_tries = *a.max_tries;
  if (!a.test_lengths.empty()) spec.test_lengths = {a.test_lengths.begin(), a.test_lengths.end()};
  if (!a.seed.empty()) spec.master_seed = parse_seed(a.seed, "--seed");
  if (!a.out_dir.empty()) out_dir = a.out_dir;

  const BuiltDataset ds = build_dataset(spec, a.threads);
  write_dataset(ds, spec.task, out_dir);
  std::cerr << "wrote " << ds.train.size() << " train and " << ds.test.size() << " test "
            << to_string(spec.task) << " records to " << out_dir << "\n";
  return 0;
}

// verify -----------------------------------------------------------------------

int run_verify(const std::vector<std::string>& files, std::size_t brute_force_max) {
  bool ok = true;
  for (const auto& file : files) {
    const auto report = verify_dataset(read_dataset_file(file), brute_force_max);
    std::cout << file << ": " << report.records << " records, " << report.brute_forced
              << " brute-forced, " << report.violations.size() << " violations\n";
    for (const auto& v : report.violations) {
      std::cout << "  record " << v.record_index << " (instance_id " << v.instance_id
                << "): " << v.message << "\n";
    }
    ok = ok && report.ok();
  }
  return ok ? 0 : 1;
}

// evaluate ---------------------------------------------------------------------

struct EvaluateArgs {
  std::string dataset, responses, out_dir, estimator = "unbiased";
  std::optional<int> k_max;
  std::vector<int> ks;
  int threads = 0;
};

int run_evaluate(const EvaluateArgs& a) {
  EvalRunOptions opts;
  opts.k_max = a.k_max;
  opts.curve_ks = a.ks;
  opts.threads = a.threads;
  if (a.estimator == "unbiased") {
    opts.estimator = PassEstimator::unbiased;
  } else if (a.estimator == "prefix") {
    opts.estimator = PassEstimator::prefix;
  } else {
    throw ConfigError("unknown estimator '" + a.estimator + "' (prefix|unbiased)");
  }
  const std::string out_dir = a.out_dir.empty() ? default_out_dir() : a.out_dir;
  const auto result = evaluate_run(read_dataset_file(a.dataset), read_responses_file(a.responses), opts);
  write_eval_reports(result, out_dir);

  const auto& last = result.metrics.at_k_max();
  std::cout << "instances " << result.metrics.per_instance.size() << ", k=" << last.k
            << ": pass_ans " << last.pass_ans << ", pass_ids " << last.pass_ids << ", sc_ans "
            << last.sc_ans << ", sc_ids " << last.sc_ids << "\n";
  if (result.instances_without_responses > 0) {
    std::cout << result.instances_without_responses << " dataset instances had no responses\n";
  }
  return 0;
}

// analyze-sort / features -------------------------------------------------------

int run_analyze_sort(const std::string& dataset, const std::string& responses,
                     const std::string& out_dir_arg, int threads) {
  const std::string out_dir = out_dir_arg.empty() ? default_out_dir() : out_dir_arg;
  const auto run = analyze_sort_run(read_dataset_file(dataset), read_responses_file(responses), threads);
  fs::create_directories(out_dir);
  std::ofstream csv(fs::path(out_dir) / "sort_analysis.csv");
  write_sort_csv(csv, run.rows);
  std::ofstream summary(fs::path(out_dir) / "sort_summary.json");
  summary << summary_json(run.summary).dump(2) << "\n";
  if (!csv || !summary) throw std::runtime_error("cannot write reports to " + out_dir);
  std::cout << summary_json(run.summary).dump() << "\n";
  return 0;
}

int run_features(const std::string& dataset, const std::string& responses,
                 const std::string& out_arg, double test_fraction, const std::string& split_seed) {
  std::uint64_t seed = 0;
  if (auto s = env("RLVRSEQ_SEED")) seed = parse_seed(*s, "RLVRSEQ_SEED");
  if (!split_seed.empty()) seed = parse_seed(split_seed, "--split-seed");
  const std::string out =
      out_arg.empty() ? (fs::path(default_out_dir()) / "lis_features.csv").string() : out_arg;

  const auto table = features_run(read_dataset_file(dataset), read_responses_file(responses),
                                  test_fraction, seed);
  if (fs::path(out).has_parent_path()) fs::create_directories(fs::path(out).parent_path());
  std::ofstream csv(out);
  write_feature_csv(csv, table);
  if (!csv) throw std::runtime_error("cannot write " + out);
  std::cout << table.rows.size() << " feature rows written to " << out << ", " << table.dropped
            << " responses dropped\n";
  return 0;
}

// serve -----------------------------------------------------------------------

int run_serve(const std::string& listen, const std::string& reward) {
  ServiceOptions opts;
  if (!reward.empty()) opts.default_spec = parse_reward_spec_arg(reward);
  ServiceCounters counters;

  if (listen.empty()) {
    std::ios::sync_with_stdio(false);
    const bool ok = serve_stream(std::cin, std::cout, opts, &counters);
    std::cerr << "served " << counters.requests << " requests (" << counters.errors
              << " errors)\n";
    return ok ? 0 : 1;
  }

  const auto colon = listen.rfind(':');
  if (colon == std::string::npos) throw ConfigError("--listen expects host:port");
  const std::string host = listen.substr(0, colon);
  int port = 0;
  try {
    port = std::stoi(listen.substr(colon + 1));
  } catch (const std::exception&) {
    port = -1;
  }
  if (port < 0 || port > 65535) throw ConfigError("bad port in '" + listen + "'");

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  serve_tcp(host, static_cast<std::uint16_t>(port), opts, g_stop, &counters,
            [](std::uint16_t p) { std::cerr << "listening on port " << p << std::endl; });
  std::cerr << "served " << counters.requests << " requests (" << counters.errors << " errors)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verifiable-reward toolkit for activity scheduling and LIS tasks"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Build a train/test dataset");
  generate->add_option("--config", gen.config, "JSON config file");
  generate->add_option("--task", gen.task, "activity or lis");
  generate->add_option("--total", gen.total, "Number of instances (default 2000)");
  generate->add_option("--hinted-fraction", gen.hinted_fraction, "Fraction of hinted prompts");
  generate->add_option("--length-min", gen.length_min);
  generate->add_option("--length-max", gen.length_max);
  generate->add_option("--start-max", gen.start_max, "Latest start, minutes");
  generate->add_option("--duration-min", gen.duration_min);
  generate->add_option("--duration-max", gen.duration_max);
  generate->add_option("--value-min", gen.value_min);
  generate->add_option("--value-max", gen.value_max);
  generate->add_option("--max-tries", gen.max_tries);
  generate->add_option("--test-lengths", gen.test_lengths, "Lengths routed to the test split")
      ->delimiter(',');
  generate->add_option("--seed", gen.seed, "Master seed");
  generate->add_option("--out-dir", gen.out_dir);
  generate->add_option("--threads", gen.threads);

  std::vector<std::string> verify_files;
  std::size_t brute_force_max = 12;
  auto* verify = app.add_subcommand("verify", "Re-check every record of a dataset");
  verify->add_option("files", verify_files, "Dataset JSONL files")->required()->check(CLI::ExistingFile);
  verify->add_option("--brute-force-max", brute_force_max, "Enumerate instances up to this size");

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "Pass@k and self-consistency reports");
  evaluate->add_option("--dataset", ev.dataset)->required()->check(CLI::ExistingFile);
  evaluate->add_option("--responses", ev.responses)->required()->check(CLI::ExistingFile);
  evaluate->add_option("--out-dir", ev.out_dir);
  evaluate->add_option("--k-max", ev.k_max, "Default: smallest response count");
  evaluate->add_option("--ks", ev.ks, "Curve points")->delimiter(',');
  evaluate->add_option("--estimator", ev.estimator, "prefix or unbiased");
  evaluate->add_option("--threads", ev.threads);

  std::string sort_dataset, sort_responses, sort_out;
  int sort_threads = 0;
  auto* analyze = app.add_subcommand("analyze-sort", "Sorting-behaviour analysis (activity)");
  analyze->add_option("--dataset", sort_dataset)->required()->check(CLI::ExistingFile);
  analyze->add_option("--responses", sort_responses)->required()->check(CLI::ExistingFile);
  analyze->add_option("--out-dir", sort_out);
  analyze->add_option("--threads", sort_threads);

  std::string feat_dataset, feat_responses, feat_out, feat_seed;
  double test_fraction = 0.2;
  auto* features = app.add_subcommand("features", "LIS feature table for regression");
  features->add_option("--dataset", feat_dataset)->required()->check(CLI::ExistingFile);
  features->add_option("--responses", feat_responses)->required()->check(CLI::ExistingFile);
  features->add_option("--out", feat_out, "CSV path");
  features->add_option("--test-fraction", test_fraction);
  features->add_option("--split-seed", feat_seed);

  std::string listen, reward;
  auto* serve = app.add_subcommand("serve", "Line-delimited JSON scoring service");
  serve->add_option("--listen", listen, "host:port; stdin/stdout when omitted");
  serve->add_option("--reward", reward, "Default reward, e.g. ids_prefix or ans=0.5,ids_exact=0.5");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) return run_generate(gen);
    if (*verify) return run_verify(verify_files, brute_force_max);
    if (*evaluate) return run_evaluate(ev);
    if (*analyze) return run_analyze_sort(sort_dataset, sort_responses, sort_out, sort_threads);
    if (*features) return run_features(feat_dataset, feat_responses, feat_out, test_fraction, feat_seed);
    if (*serve) return run_serve(listen, reward);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const GenerationError& e) {
    std::cerr << "generation failed (seed " << e.seed() << "): " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
