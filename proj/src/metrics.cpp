#include "rlvrseq/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>

#include "rlvrseq/parser.hpp"

namespace rlvrseq {

std::string_view to_string(PassEstimator estimator) {
  return estimator == PassEstimator::prefix ? "prefix" : "unbiased";
}

PassEstimator parse_estimator(std::string_view name) {
  if (name == "prefix") return PassEstimator::prefix;
  if (name == "unbiased") return PassEstimator::unbiased;
  throw ConfigError("unknown estimator '" + std::string(name) + "' (expected prefix or unbiased)");
}

std::vector<int> EvalConfig::resolved_curve() const {
  if (k_max < 1) throw ConfigError("k_max must be positive");
  std::vector<int> ks = curve_ks;
  if (ks.empty()) {
    for (int k = 1; k < k_max; k *= 2) ks.push_back(k);
  }
  ks.push_back(k_max);
  for (int k : ks) {
    if (k < 1 || k > k_max) throw ConfigError("curve k=" + std::to_string(k) + " outside 1..k_max");
  }
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  return ks;
}

double pass_at_k_unbiased(int n, int c, int k) {
  if (k < 1 || k > n) throw DomainError("pass@k needs 1 <= k <= n");
  if (c < 0 || c > n) throw DomainError("correct count outside 0..n");
  if (n - c < k) return 1.0;
  // C(n-c, k) / C(n, k) = prod_{i=n-c+1}^{n} (1 - k/i); stays in [0, 1], no overflow.
  double miss = 1.0;
  for (int i = n - c + 1; i <= n; ++i) miss *= 1.0 - static_cast<double>(k) / i;
  return 1.0 - miss;
}

double pass_at_k(const std::vector<bool>& correct, int k, PassEstimator estimator) {
  const int n = static_cast<int>(correct.size());
  if (k < 1 || k > n) throw DomainError("pass@k needs 1 <= k <= n (k=" + std::to_string(k) +
                                        ", n=" + std::to_string(n) + ")");
  if (estimator == PassEstimator::prefix) {
    return std::any_of(correct.begin(), correct.begin() + k, [](bool b) { return b; }) ? 1.0 : 0.0;
  }
  const int c = static_cast<int>(std::count(correct.begin(), correct.end(), true));
  return pass_at_k_unbiased(n, c, k);
}

namespace {

// Running mode with smallest-value tie-break; one count changes per step, so
// only the touched value can overtake the current leader.
template <class T>
class RunningMode {
 public:
  void add(const T& value) {
    const int c = ++counts_[value];
    if (!best_ || c > best_count_ || (c == best_count_ && value < *best_)) {
      best_ = value;
      best_count_ = c;
    }
  }
  const std::optional<T>& mode() const { return best_; }

 private:
  std::map<T, int> counts_;
  std::optional<T> best_;
  int best_count_ = 0;
};

}  // namespace

InstanceMetrics evaluate_instance(const ResponseSet& responses, const Instance& instance,
                                  const GroundTruth& truth, const EvalConfig& config) {
  const auto curve = config.resolved_curve();
  const int n = config.k_max;
  if (static_cast<int>(responses.responses.size()) < n) {
    throw DomainError("instance " + std::to_string(responses.instance_id) + " has " +
                      std::to_string(responses.responses.size()) + " responses, k_max is " +
                      std::to_string(n));
  }
  const std::size_t rows = row_count(instance);

  std::vector<bool> ans_ok(static_cast<std::size_t>(n)), ids_ok(static_cast<std::size_t>(n));
  std::vector<std::optional<std::int64_t>> answers(static_cast<std::size_t>(n));
  std::vector<std::optional<IdSequence>> id_lists(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const auto u = static_cast<std::size_t>(j);
    answers[u] = parse_answer(responses.responses[u]);
    id_lists[u] = parse_ids(responses.responses[u], rows);
    ans_ok[u] = answers[u] && *answers[u] == truth.answer;
    ids_ok[u] = id_lists[u] && *id_lists[u] == truth.ids;
  }

  InstanceMetrics out;
  out.instance_id = responses.instance_id;
  RunningMode<std::int64_t> ans_mode;
  RunningMode<IdSequence> ids_mode;
  std::size_t next = 0;
  for (int j = 0; j < n && next < curve.size(); ++j) {
    const auto u = static_cast<std::size_t>(j);
    if (answers[u]) ans_mode.add(*answers[u]);
    if (id_lists[u]) ids_mode.add(*id_lists[u]);
    if (j + 1 != curve[next]) continue;
    const int k = curve[next++];
    MetricPoint p;
    p.k = k;
    p.pass_ans = pass_at_k(ans_ok, k, config.estimator);
    p.pass_ids = pass_at_k(ids_ok, k, config.estimator);
    p.sc_ans = ans_mode.mode() && *ans_mode.mode() == truth.answer ? 1.0 : 0.0;
    p.sc_ids = ids_mode.mode() && *ids_mode.mode() == truth.ids ? 1.0 : 0.0;
    out.points.push_back(p);
  }
  return out;
}

MetricReport aggregate_metrics(std::vector<InstanceMetrics> per_instance, const EvalConfig& config) {
  const auto curve = config.resolved_curve();
  MetricReport report;
  report.k_max = config.k_max;
  report.estimator = config.estimator;
  report.per_instance = std::move(per_instance);
  for (std::size_t idx = 0; idx < curve.size(); ++idx) {
    MetricPoint mean;
    mean.k = curve[idx];
    for (const auto& inst : report.per_instance) {
      const auto& p = inst.points.at(idx);
      mean.pass_ans += p.pass_ans;
      mean.pass_ids += p.pass_ids;
      mean.sc_ans += p.sc_ans;
      mean.sc_ids += p.sc_ids;
    }
    if (!report.per_instance.empty()) {
      const double count = static_cast<double>(report.per_instance.size());
      mean.pass_ans /= count;
      mean.pass_ids /= count;
      mean.sc_ans /= count;
      mean.sc_ids /= count;
    }
    report.aggregate.push_back(mean);
  }
  return report;
}

const MetricPoint& MetricReport::at_k_max() const {
  if (aggregate.empty() || aggregate.back().k != k_max) throw DomainError("report has no k_max row");
  return aggregate.back();
}

std::string format_double(double value) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

void write_instance_csv(std::ostream& out, const MetricReport& report) {
  out << "instance_id,k,pass_ans,pass_ids,sc_ans,sc_ids\n";
  for (const auto& inst : report.per_instance) {
    for (const auto& p : inst.points) {
      out << inst.instance_id << ',' << p.k << ',' << format_double(p.pass_ans) << ','
          << format_double(p.pass_ids) << ',' << format_double(p.sc_ans) << ','
          << format_double(p.sc_ids) << '\n';
    }
  }
}

void write_aggregate_csv(std::ostream& out, const MetricReport& report) {
  out << "k,pass_ans,pass_ids,sc_ans,sc_ids,instances\n";
  for (const auto& p : report.aggregate) {
    out << p.k << ',' << format_double(p.pass_ans) << ',' << format_double(p.pass_ids) << ','
        << format_double(p.sc_ans) << ',' << format_double(p.sc_ids) << ','
        << report.per_instance.size() << '\n';
  }
}

nlohmann::json summary_json(const MetricReport& report) {
  auto point = [](const MetricPoint& p) {
    return nlohmann::json{{"k", p.k},           {"pass_ans", p.pass_ans}, {"pass_ids", p.pass_ids},
                          {"sc_ans", p.sc_ans}, {"sc_ids", p.sc_ids}};
  };
  nlohmann::json curve = nlohmann::json::array();
  for (const auto& p : report.aggregate) curve.push_back(point(p));
  nlohmann::json j{{"k_max", report.k_max},
                   {"estimator", std::string(to_string(report.estimator))},
                   {"instances", report.per_instance.size()},
                   {"curve", curve}};
  if (!report.aggregate.empty()) j["at_k_max"] = point(report.at_k_max());
  return j;
}

}  // namespace rlvrseq
