#include "gempart/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <unordered_map>

namespace gempart {

FrequencyStream::FrequencyStream(const GemParams<double>& params, Rng rng, long stick_cap)
    : params_(params), rng_(rng), cap_(stick_cap) {
  params_.validate();
}

void FrequencyStream::add_stick() {
  if (static_cast<long>(sticks_.size()) >= cap_) {
    throw CapExceeded("stick-breaking exceeded " + std::to_string(cap_) + " sticks");
  }
  const double i = static_cast<double>(sticks_.size() + 1);
  const double h = rng_.beta(1.0 - params_.alpha, params_.theta + i * params_.alpha);
  const double r = remainder();
  sticks_.push_back(h);
  freqs_.push_back(h * r);
  remainders_.push_back(r * (1.0 - h));
}

void FrequencyStream::extend(std::size_t m) {
  while (sticks_.size() < m) add_stick();
}

long FrequencyStream::locate(double u) {
  // u falls in stick j iff R_j < 1 - u <= R_{j-1}; working with remainders
  // avoids cancellation in 1 - (P_1 + ... + P_j).
  const double r = 1.0 - u;
  while (remainder() >= r) add_stick();
  auto it = std::upper_bound(remainders_.begin(), remainders_.end(), r, std::greater<double>());
  // first remainder strictly below r
  while (it != remainders_.end() && *it >= r) ++it;
  return static_cast<long>(it - remainders_.begin()) + 1;
}

FrequencyStream stick_breaking(const GemParams<double>& params, Rng& rng, long stick_cap) {
  return FrequencyStream(params, rng.split(), stick_cap);
}

SampleTrace::SampleTrace(std::vector<long> values) : values_(std::move(values)) {
  for (long v : values_) {
    if (v < 1) throw InvalidArgument("sample values must be positive integers");
  }
}

int SampleTrace::num_values() const {
  std::vector<long> v = values_;
  std::sort(v.begin(), v.end());
  return static_cast<int>(std::unique(v.begin(), v.end()) - v.begin());
}

SetPartition SampleTrace::partition() const {
  SetPartition p;
  p.n = n();
  std::unordered_map<long, std::size_t> block_of;
  for (int i = 0; i < n(); ++i) {
    auto [it, fresh] = block_of.try_emplace(values_[i], p.blocks.size());
    if (fresh) p.blocks.emplace_back();
    p.blocks[it->second].push_back(i + 1);
  }
  return p;
}

OrderedSetPartition SampleTrace::value_partition() const {
  std::map<long, std::vector<int>> by_value;
  for (int i = 0; i < n(); ++i) by_value[values_[i]].push_back(i + 1);
  OrderedSetPartition p;
  p.n = n();
  for (auto& [v, block] : by_value) p.blocks.push_back(std::move(block));
  return p;
}

Composition SampleTrace::n_star() const { return partition().sizes(); }
Composition SampleTrace::n_up() const { return value_partition().sizes(); }
Composition SampleTrace::n_down() const { return n_up().ranked(); }

SampleTrace paintbox_sample(FrequencyStream& fs, int n, Rng& rng) {
  if (n < 1) throw InvalidArgument("paintbox_sample needs n >= 1");
  std::vector<long> values(n);
  for (auto& x : values) x = fs.locate(rng.uniform01());
  return SampleTrace(std::move(values));
}

namespace {

// Chooses an index with probability proportional to weights (n_i - alpha)
// given a point v in [0, total).
std::size_t pick_by_excess(const std::vector<int>& sizes, double alpha, double v) {
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
    const double w = sizes[i] - alpha;
    if (v < w) return i;
    v -= w;
  }
  return sizes.size() - 1;
}

}  // namespace

SampleTrace crp_run(const GibbsWeights<double>& weights, int n, Rng& rng) {
  if (n < 1) throw InvalidArgument("crp_run needs n >= 1");
  const double alpha = weights.alpha();
  std::vector<int> sizes{1};
  std::vector<long> values{1};
  values.reserve(n);
  for (int m = 1; m < n; ++m) {
    const int k = static_cast<int>(sizes.size());
    const double p = weights.discovery_prob(k, m);
    const double u = rng.uniform01();
    if (u < p) {
      sizes.push_back(1);
      values.push_back(k + 1);
    } else {
      const double v = (u - p) / (1.0 - p) * (m - k * alpha);
      const std::size_t i = pick_by_excess(sizes, alpha, v);
      ++sizes[i];
      values.push_back(static_cast<long>(i) + 1);
    }
  }
  return SampleTrace(std::move(values));
}

OcrpRun ocrp_run(const GibbsWeights<double>& weights, int n, Rng& rng) {
  if (n < 1) throw InvalidArgument("ocrp_run needs n >= 1");
  std::vector<int> parts{1};
  std::vector<int> table_at{0};  // table id of each part, value order
  std::vector<int> customer_table{0};
  int tables = 1;
  OcrpRun run;
  run.trajectory.push_back(Composition(parts));
  run.steps.push_back(OcrpStep{true, 0, 1.0});
  for (int m = 1; m < n; ++m) {
    const auto tr = ocrp_transitions(weights, Composition(parts));
    double u = rng.uniform01();
    OcrpStep step;
    bool chosen = false;
    for (std::size_t j = 0; j < tr.insert.size() && !chosen; ++j) {
      if (u < tr.insert[j]) {
        step = OcrpStep{true, static_cast<int>(j), tr.insert[j]};
        chosen = true;
      } else {
        u -= tr.insert[j];
      }
    }
    for (std::size_t j = 0; j < tr.join.size() && !chosen; ++j) {
      if (u < tr.join[j] || j + 1 == tr.join.size()) {
        step = OcrpStep{false, static_cast<int>(j), tr.join[j]};
        chosen = true;
      } else {
        u -= tr.join[j];
      }
    }
    if (step.new_table) {
      parts.insert(parts.begin() + step.position, 1);
      table_at.insert(table_at.begin() + step.position, tables);
      customer_table.push_back(tables++);
    } else {
      ++parts[step.position];
      customer_table.push_back(table_at[step.position]);
    }
    run.trajectory.push_back(Composition(parts));
    run.steps.push_back(step);
  }
  std::vector<long> rank(tables);
  for (std::size_t j = 0; j < table_at.size(); ++j) rank[table_at[j]] = static_cast<long>(j) + 1;
  std::vector<long> values(n);
  for (int i = 0; i < n; ++i) values[i] = rank[customer_table[i]];
  run.trace = SampleTrace(std::move(values));
  return run;
}

std::vector<int> TwoPhaseResult::order_of_tables() const {
  const std::size_t k = table_sizes.size();
  if (rediscovery_order.size() == k) return rediscovery_order;
  if (rediscovery_order.size() + 1 != k) return {};
  std::vector<int> out = rediscovery_order;
  std::vector<bool> seen(k, false);
  for (int i : out) seen[i] = true;
  for (std::size_t i = 0; i < k; ++i) {
    if (!seen[i]) out.push_back(static_cast<int>(i));
  }
  return out;
}

SampleTrace TwoPhaseResult::trace() const {
  if (!complete) {
    throw RediscoveryTimeout("rediscovery incomplete after " + std::to_string(secondary_customers) +
                             " secondary customers");
  }
  std::vector<long> x(primary.values().size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = labels[primary.values()[i] - 1];
  return SampleTrace(std::move(x));
}

TwoPhaseResult two_phase_sample(const GibbsWeights<double>& weights, int n, Rng& rng, long cap,
                                int stop_after) {
  if (n < 1) throw InvalidArgument("two_phase_sample needs n >= 1");
  if (cap < n) throw InvalidArgument("two_phase_sample needs cap >= n");
  const double alpha = weights.alpha();

  TwoPhaseResult out;
  out.primary = crp_run(weights, n, rng);
  out.table_sizes.assign(out.primary.num_values(), 0);
  for (long v : out.primary.values()) ++out.table_sizes[v - 1];

  const int K = static_cast<int>(out.table_sizes.size());
  int target = K;
  if (stop_after > 0) target = std::min(stop_after, K);
  if (stop_after < 0) target = std::max(0, K + stop_after);
  out.labels.assign(K, 0);

  std::vector<int> undiscovered(K);
  for (int i = 0; i < K; ++i) undiscovered[i] = i;
  std::vector<int> s_sizes = out.table_sizes;
  double w_s = 0.0;
  for (int s : s_sizes) w_s += s - alpha;

  long m = n;
  int k = K;
  long label = 0;
  while (static_cast<int>(out.rediscovery_order.size()) < target && out.secondary_customers < cap) {
    const double p = weights.discovery_prob(k, static_cast<int>(std::min<long>(m, std::numeric_limits<int>::max())));
    const double u = rng.uniform01();
    ++out.secondary_customers;
    if (u < p) {
      ++k;
      ++label;
    } else {
      const double v = (u - p) / (1.0 - p) * (m - k * alpha);
      if (v < w_s) {
        const std::size_t h = pick_by_excess(s_sizes, alpha, v);
        const int table = undiscovered[h];
        out.labels[table] = ++label;
        out.rediscovery_order.push_back(table);
        out.rediscovery_times.push_back(m + 1);
        undiscovered.erase(undiscovered.begin() + static_cast<std::ptrdiff_t>(h));
        s_sizes.erase(s_sizes.begin() + static_cast<std::ptrdiff_t>(h));
        w_s = 0.0;
        for (int s : s_sizes) w_s += s - alpha;
      }
    }
    ++m;
  }
  out.complete = static_cast<int>(out.rediscovery_order.size()) == K;
  return out;
}

DiscoveryRecord discovery_stats(const SampleTrace& trace) {
  DiscoveryRecord rec;
  const auto& x = trace.values();
  rec.delta.assign(x.size(), 0);
  rec.lower.assign(x.size(), 0);
  std::vector<long> seen;
  long current_min = 0;
  long min_first_time = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto it = std::lower_bound(seen.begin(), seen.end(), x[i]);
    if (it != seen.end() && *it == x[i]) continue;
    seen.insert(it, x[i]);
    rec.delta[i] = 1;
    rec.discovery_times.push_back(static_cast<long>(i) + 1);
    if (seen.size() == 1 || x[i] < current_min) {
      rec.lower[i] = 1;
      current_min = x[i];
      min_first_time = static_cast<long>(i) + 1;
      rec.x_index = static_cast<int>(rec.discovery_times.size());
    }
  }
  rec.x_time = min_first_time;
  return rec;
}

double p_alpha(long n, int k, double alpha) { return (1.0 - alpha) / (static_cast<double>(n) - k * alpha); }

namespace {

// log Gamma(y - c) - log Gamma(y), y - c > 0.
double log_gamma_ratio(double y, double c) {
  if (y > 1e5 && std::fabs(c) < 50.0) {
    const double a = -c;
    auto b2 = [](double x) { return x * x - x + 1.0 / 6.0; };
    auto b3 = [](double x) { return x * x * x - 1.5 * x * x + 0.5 * x; };
    auto b4 = [](double x) { return x * x * x * x - 2.0 * x * x * x + x * x - 1.0 / 30.0; };
    const double inv = 1.0 / y;
    return a * std::log(y) + (b2(a) - b2(0.0)) * inv / 2.0 - (b3(a) - b3(0.0)) * inv * inv / 6.0 +
           (b4(a) - b4(0.0)) * inv * inv * inv / 12.0;
  }
  return std::lgamma(y - c) - std::lgamma(y);
}

constexpr long kDirectSteps = 64;

}  // namespace

DiscoverySequence::DiscoverySequence(const GemParams<double>& params) : params_(params) {
  params_.validate();
}

double DiscoverySequence::log_survival(long t) const {
  const double c = params_.theta + k_ * params_.alpha;
  return log_gamma_ratio(params_.theta + static_cast<double>(t), c) -
         log_gamma_ratio(params_.theta + static_cast<double>(m_), c);
}

long DiscoverySequence::next(Rng& rng, long horizon) {
  const double c = params_.theta + k_ * params_.alpha;
  // short gaps: plain Bernoulli steps
  while (m_ < kDirectSteps) {
    if (m_ >= horizon) return horizon + 1;
    const double p = c / (params_.theta + static_cast<double>(m_));
    ++m_;
    if (rng.uniform01() < p) {
      ++k_;
      return m_;
    }
  }
  if (m_ >= horizon) return horizon + 1;
  const double log_u = std::log(1.0 - rng.uniform01());
  if (log_survival(horizon) >= log_u) {
    m_ = horizon;
    return horizon + 1;
  }
  // S(lo) >= u > S(hi); T is the smallest t with S(t) < u
  long lo = m_;
  long hi = horizon;
  const double guess = static_cast<double>(m_) * std::exp(-log_u / c);
  if (guess < static_cast<double>(horizon)) {
    const long g_lo = static_cast<long>(guess * 0.9);
    const long g_hi = static_cast<long>(guess * 1.1) + 1;
    if (g_hi < hi && g_hi > lo && log_survival(g_hi) < log_u) hi = g_hi;
    if (g_lo > lo && g_lo < hi && log_survival(g_lo) >= log_u) lo = g_lo;
  }
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    if (log_survival(mid) < log_u) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  m_ = hi;
  ++k_;
  return m_;
}

}  // namespace gempart
