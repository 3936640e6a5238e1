#include "rlvrseq/features.hpp"

#include <algorithm>
#include <array>
#include <climits>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>
#include <utility>

#include "rlvrseq/domain.hpp"
#include "rlvrseq/generators.hpp"
#include "rlvrseq/metrics.hpp"
#include "rlvrseq/rng.hpp"

namespace rlvrseq {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Member = double LisFeatureVector::*;

constexpr std::array<std::pair<std::string_view, Member>, LisFeatureVector::kCount> kFields = {{
    {"n", &LisFeatureVector::n},
    {"min", &LisFeatureVector::min},
    {"max", &LisFeatureVector::max},
    {"range", &LisFeatureVector::range},
    {"mean", &LisFeatureVector::mean},
    {"std", &LisFeatureVector::std},
    {"q25", &LisFeatureVector::q25},
    {"q50", &LisFeatureVector::q50},
    {"q75", &LisFeatureVector::q75},
    {"uniq_ratio", &LisFeatureVector::uniq_ratio},
    {"dup_ratio", &LisFeatureVector::dup_ratio},
    {"adj_inc_ratio", &LisFeatureVector::adj_inc_ratio},
    {"adj_dec_ratio", &LisFeatureVector::adj_dec_ratio},
    {"adj_eq_ratio", &LisFeatureVector::adj_eq_ratio},
    {"pos_delta_mean", &LisFeatureVector::pos_delta_mean},
    {"pos_delta_std", &LisFeatureVector::pos_delta_std},
    {"neg_delta_mean", &LisFeatureVector::neg_delta_mean},
    {"neg_delta_std", &LisFeatureVector::neg_delta_std},
    {"sign_change_ratio", &LisFeatureVector::sign_change_ratio},
    {"pair_inc_ratio", &LisFeatureVector::pair_inc_ratio},
    {"inversion_ratio", &LisFeatureVector::inversion_ratio},
    {"tau_like", &LisFeatureVector::tau_like},
    {"max_inc_run", &LisFeatureVector::max_inc_run},
    {"max_dec_run", &LisFeatureVector::max_dec_run},
    {"num_monotone_runs", &LisFeatureVector::num_monotone_runs},
    {"n_local_max", &LisFeatureVector::n_local_max},
    {"n_local_min", &LisFeatureVector::n_local_min},
    {"record_highs", &LisFeatureVector::record_highs},
    {"record_lows", &LisFeatureVector::record_lows},
    {"greedy_len", &LisFeatureVector::greedy_len},
    {"greedy_rev_len", &LisFeatureVector::greedy_rev_len},
    {"beam2", &LisFeatureVector::beam2},
    {"beam3", &LisFeatureVector::beam3},
    {"budget1", &LisFeatureVector::budget1},
    {"budget2", &LisFeatureVector::budget2},
    {"tail_mean", &LisFeatureVector::tail_mean},
    {"tail_std", &LisFeatureVector::tail_std},
    {"tail_iqr", &LisFeatureVector::tail_iqr},
    {"tail_slope", &LisFeatureVector::tail_slope},
    {"rand_lis_baseline", &LisFeatureVector::rand_lis_baseline},
}};

constexpr auto kNames = [] {
  std::array<std::string_view, LisFeatureVector::kCount> names{};
  for (std::size_t i = 0; i < kFields.size(); ++i) names[i] = kFields[i].first;
  return names;
}();

double mean_of(std::span<const double> xs) {
  if (xs.empty()) return kNaN;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

// Population standard deviation.
double std_of(std::span<const double> xs) {
  if (xs.empty()) return kNaN;
  const double m = mean_of(xs);
  double acc = 0.0;
  for (double x : xs) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(xs.size()));
}

int sign(long long d) { return (d > 0) - (d < 0); }

// Chain state for the beam search: (length, last value). The empty chain has
// last = LLONG_MIN so any value extends it.
struct ChainState {
  int length;
  long long last;
  friend bool operator==(const ChainState&, const ChainState&) = default;
};

// Beam rank: longer first, then smaller end value.
bool ranks_before(const ChainState& a, const ChainState& b) {
  return a.length != b.length ? a.length > b.length : a.last < b.last;
}

void budget_search(std::span<const int> values, std::size_t pos, std::vector<int>& chain,
                   int budget, int& best) {
  for (; pos < values.size(); ++pos) {
    const int v = values[pos];
    if (chain.empty() || v > chain.back()) {
      chain.push_back(v);
      continue;
    }
    if (budget > 0) {
      std::vector<int> alt(chain.begin(), std::lower_bound(chain.begin(), chain.end(), v));
      alt.push_back(v);
      budget_search(values, pos + 1, alt, budget - 1, best);
    }
    // otherwise skip v and keep going
  }
  best = std::max(best, static_cast<int>(chain.size()));
}

}  // namespace

std::span<const std::string_view> LisFeatureVector::names() { return kNames; }

std::vector<double> LisFeatureVector::values() const {
  std::vector<double> out;
  out.reserve(kCount);
  for (const auto& [name, member] : kFields) out.push_back(this->*member);
  return out;
}

bool LisFeatureVector::all_finite() const {
  return std::all_of(kFields.begin(), kFields.end(),
                     [this](const auto& f) { return std::isfinite(this->*f.second); });
}

double quantile(std::vector<double> sample, double q) {
  if (sample.empty()) return kNaN;
  std::sort(sample.begin(), sample.end());
  const double pos = q * static_cast<double>(sample.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  return sample[lo] + (pos - static_cast<double>(lo)) * (sample[hi] - sample[lo]);
}

int greedy_lis_length(std::span<const int> values) {
  int len = 0;
  long long last = LLONG_MIN;
  for (int v : values) {
    if (v > last) {
      ++len;
      last = v;
    }
  }
  return len;
}

int greedy_reverse_lis_length(std::span<const int> values) {
  int len = 0;
  long long last = LLONG_MAX;
  for (auto it = values.rbegin(); it != values.rend(); ++it) {
    if (*it < last) {
      ++len;
      last = *it;
    }
  }
  return len;
}

int beam_lis_length(std::span<const int> values, int width) {
  if (width < 1) throw DomainError("beam width must be positive");
  const auto w = static_cast<std::size_t>(width);
  // levels[b] holds the state set of the width-(b+1) beam.
  std::vector<std::vector<ChainState>> levels(w, {ChainState{0, LLONG_MIN}});
  for (int v : values) {
    std::vector<std::vector<ChainState>> next(w);
    for (std::size_t b = 0; b < w; ++b) {
      std::vector<ChainState> pool = levels[b];
      for (const auto& s : levels[b]) {
        if (v > s.last) pool.push_back({s.length + 1, v});
      }
      next[b] = b > 0 ? next[b - 1] : std::vector<ChainState>{};
      const ChainState* pick = nullptr;
      for (const auto& s : pool) {
        if (std::find(next[b].begin(), next[b].end(), s) != next[b].end()) continue;
        if (!pick || ranks_before(s, *pick)) pick = &s;
      }
      if (pick) next[b].push_back(*pick);
    }
    levels = std::move(next);
  }
  int best = 0;
  for (const auto& s : levels.back()) best = std::max(best, s.length);
  return best;
}

int budget_lis_length(std::span<const int> values, int backtracks) {
  if (backtracks < 0) throw DomainError("backtrack budget must be non-negative");
  std::vector<int> chain;
  int best = 0;
  budget_search(values, 0, chain, backtracks, best);
  return best;
}

LisFeatureVector lis_features(std::span<const int> values) {
  const std::size_t n = values.size();
  if (n < 2) throw DomainError("LIS features need at least two values");
  const double nd = static_cast<double>(n);

  LisFeatureVector f{};
  std::vector<double> xs(values.begin(), values.end());

  f.n = nd;
  f.min = *std::min_element(xs.begin(), xs.end());
  f.max = *std::max_element(xs.begin(), xs.end());
  f.range = f.max - f.min;
  f.mean = mean_of(xs);
  f.std = std_of(xs);
  f.q25 = quantile(xs, 0.25);
  f.q50 = quantile(xs, 0.50);
  f.q75 = quantile(xs, 0.75);
  f.uniq_ratio = static_cast<double>(std::set<int>(values.begin(), values.end()).size()) / nd;
  f.dup_ratio = 1.0 - f.uniq_ratio;

  std::vector<long long> deltas(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) deltas[i] = static_cast<long long>(values[i + 1]) - values[i];
  std::vector<double> pos, neg;
  std::size_t inc = 0, dec = 0, eq = 0;
  for (long long d : deltas) {
    if (d > 0) {
      ++inc;
      pos.push_back(static_cast<double>(d));
    } else if (d < 0) {
      ++dec;
      neg.push_back(static_cast<double>(d));
    } else {
      ++eq;
    }
  }
  const double nd1 = nd - 1.0;
  f.adj_inc_ratio = static_cast<double>(inc) / nd1;
  f.adj_dec_ratio = static_cast<double>(dec) / nd1;
  f.adj_eq_ratio = static_cast<double>(eq) / nd1;
  f.pos_delta_mean = mean_of(pos);
  f.pos_delta_std = std_of(pos);
  f.neg_delta_mean = mean_of(neg);
  f.neg_delta_std = std_of(neg);

  std::size_t flips = 0, sign_changes = 0;
  for (std::size_t i = 0; i + 1 < deltas.size(); ++i) {
    const int a = sign(deltas[i]), b = sign(deltas[i + 1]);
    if (a * b < 0) ++flips;
    if (a != b) ++sign_changes;
  }
  f.sign_change_ratio = n > 2 ? static_cast<double>(flips) / static_cast<double>(n - 2) : 0.0;
  f.num_monotone_runs = 1.0 + static_cast<double>(sign_changes);

  std::size_t pair_inc = 0, pair_dec = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (values[j] > values[i]) ++pair_inc;
      if (values[j] < values[i]) ++pair_dec;
    }
  }
  const double pairs = nd * (nd - 1.0) / 2.0;
  f.pair_inc_ratio = static_cast<double>(pair_inc) / pairs;
  f.inversion_ratio = static_cast<double>(pair_dec) / pairs;
  f.tau_like = f.pair_inc_ratio - f.inversion_ratio;

  std::size_t inc_run = 1, dec_run = 1, best_inc = 1, best_dec = 1;
  for (std::size_t i = 1; i < n; ++i) {
    inc_run = values[i] > values[i - 1] ? inc_run + 1 : 1;
    dec_run = values[i] < values[i - 1] ? dec_run + 1 : 1;
    best_inc = std::max(best_inc, inc_run);
    best_dec = std::max(best_dec, dec_run);
  }
  f.max_inc_run = static_cast<double>(best_inc);
  f.max_dec_run = static_cast<double>(best_dec);

  std::size_t local_max = 0, local_min = 0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (values[i] > values[i - 1] && values[i] > values[i + 1]) ++local_max;
    if (values[i] < values[i - 1] && values[i] < values[i + 1]) ++local_min;
  }
  f.n_local_max = static_cast<double>(local_max);
  f.n_local_min = static_cast<double>(local_min);

  std::size_t highs = 1, lows = 1;
  int hi = values[0], lo = values[0];
  for (std::size_t i = 1; i < n; ++i) {
    if (values[i] > hi) {
      ++highs;
      hi = values[i];
    }
    if (values[i] < lo) {
      ++lows;
      lo = values[i];
    }
  }
  f.record_highs = static_cast<double>(highs);
  f.record_lows = static_cast<double>(lows);

  f.greedy_len = greedy_lis_length(values);
  f.greedy_rev_len = greedy_reverse_lis_length(values);
  f.beam2 = beam_lis_length(values, 2);
  f.beam3 = beam_lis_length(values, 3);
  f.budget1 = budget_lis_length(values, 1);
  f.budget2 = budget_lis_length(values, 2);

  const auto tails_int = patience_tails(values);
  std::vector<double> tails(tails_int.begin(), tails_int.end());
  f.tail_mean = mean_of(tails);
  f.tail_std = std_of(tails);
  f.tail_iqr = quantile(tails, 0.75) - quantile(tails, 0.25);
  if (tails.size() >= 2) {
    // OLS slope of tails[i] against i = 1..L.
    const double idx_mean = (static_cast<double>(tails.size()) + 1.0) / 2.0;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < tails.size(); ++i) {
      const double dx = static_cast<double>(i + 1) - idx_mean;
      sxy += dx * (tails[i] - f.tail_mean);
      sxx += dx * dx;
    }
    f.tail_slope = sxy / sxx;
  } else {
    f.tail_slope = kNaN;
  }

  f.rand_lis_baseline = 2.0 * std::sqrt(nd);
  return f;
}

GroupSplit group_split(std::span<const std::int64_t> instance_ids, double test_fraction,
                       std::uint64_t seed) {
  if (instance_ids.empty()) throw DomainError("group split needs at least one instance id");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw DomainError("test fraction must lie strictly between 0 and 1");
  }
  std::vector<std::int64_t> ids(instance_ids.begin(), instance_ids.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

  Rng rng(seed);
  for (std::size_t i = ids.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(i - 1)));
    std::swap(ids[i - 1], ids[j]);
  }
  // Small slack so that e.g. 0.1 * 30 does not round up to 4.
  const auto n_test = static_cast<std::size_t>(
      std::ceil(test_fraction * static_cast<double>(ids.size()) - 1e-9));

  GroupSplit split;
  split.test_fraction = test_fraction;
  split.split_seed = seed;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    (i < n_test ? split.test_instance_ids : split.train_instance_ids).insert(ids[i]);
  }
  return split;
}

FeatureTable export_features(std::span<const FeatureRecord> records, const GroupSplit& split) {
  FeatureTable table;
  for (const auto& rec : records) {
    if (!rec.answer || rec.values.size() < 2) {
      ++table.dropped;
      continue;
    }
    LisFeatureVector f = lis_features(rec.values);
    if (!f.all_finite()) {
      ++table.dropped;
      continue;
    }
    table.rows.push_back({rec.instance_id, rec.sample_idx, f, *rec.answer, split.is_test(rec.instance_id)});
  }
  return table;
}

void write_feature_csv(std::ostream& out, const FeatureTable& table) {
  out << "instance_id,sample_idx";
  for (auto name : LisFeatureVector::names()) out << ',' << name;
  out << ",target,split\n";
  for (const auto& row : table.rows) {
    out << row.instance_id << ',' << row.sample_idx;
    for (double v : row.features.values()) out << ',' << format_double(v);
    out << ',' << row.target << ',' << (row.test ? "test" : "train") << '\n';
  }
}

}  // namespace rlvrseq
