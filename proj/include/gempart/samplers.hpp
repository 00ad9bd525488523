#pragma once

#include <cstdint>
#include <vector>

#include "gempart/composition.hpp"
#include "gempart/gibbs.hpp"
#include "gempart/rng.hpp"

namespace gempart {

inline constexpr long kDefaultStickCap = 1'000'000;
inline constexpr long kDefaultRediscoveryCap = 100'000;

/// Lazily extended GEM(alpha, theta) frequencies
/// P_j = H_j prod_{i<j} (1 - H_i), H_i ~ beta(1 - alpha, theta + i alpha).
class FrequencyStream {
 public:
  FrequencyStream(const GemParams<double>& params, Rng rng, long stick_cap = kDefaultStickCap);

  const GemParams<double>& params() const { return params_; }
  std::size_t size() const { return sticks_.size(); }
  double stick(std::size_t j) const { return sticks_.at(j); }
  double frequency(std::size_t j) const { return freqs_.at(j); }
  const std::vector<double>& frequencies() const { return freqs_; }
  /// R_m = prod_{i<=m} (1 - H_i) after m realized sticks.
  double remainder() const { return remainders_.empty() ? 1.0 : remainders_.back(); }
  /// R_j for j = 0..m (R_0 = 1).
  double remainder_after(std::size_t j) const { return j == 0 ? 1.0 : remainders_.at(j - 1); }

  void extend(std::size_t m);
  /// 1-based index j with u in [P_1 + ... + P_{j-1}, P_1 + ... + P_j).
  long locate(double u);

 private:
  void add_stick();

  GemParams<double> params_;
  Rng rng_;
  long cap_;
  std::vector<double> sticks_;
  std::vector<double> freqs_;
  std::vector<double> remainders_;
};

FrequencyStream stick_breaking(const GemParams<double>& params, Rng& rng, long stick_cap = kDefaultStickCap);

/// A sample X_1..X_n of positive integer values and its derived orderings.
class SampleTrace {
 public:
  SampleTrace() = default;
  explicit SampleTrace(std::vector<long> values);

  int n() const { return static_cast<int>(values_.size()); }
  const std::vector<long>& values() const { return values_; }
  int num_values() const;

  /// Blocks ordered by least element (appearance order).
  SetPartition partition() const;
  /// Blocks ordered by increasing common value.
  OrderedSetPartition value_partition() const;
  Composition n_star() const;
  Composition n_up() const;
  Composition n_down() const;

  friend bool operator==(const SampleTrace&, const SampleTrace&) = default;

 private:
  std::vector<long> values_;
};

SampleTrace paintbox_sample(FrequencyStream& fs, int n, Rng& rng);

/// Chinese restaurant process; values are table numbers in order of
/// appearance.
SampleTrace crp_run(const GibbsWeights<double>& weights, int n, Rng& rng);

struct OcrpStep {
  bool new_table = false;
  int position = 0;  // 0-based insertion place or joined part
  double probability = 0.0;
};

struct OcrpRun {
  SampleTrace trace;  // values are ranks in the final value order
  std::vector<Composition> trajectory;  // state after each customer
  std::vector<OcrpStep> steps;
  OrderedSetPartition ordered_partition() const { return trace.value_partition(); }
};

/// Value-ordered restaurant driven by ocrp_transitions.
OcrpRun ocrp_run(const GibbsWeights<double>& weights, int n, Rng& rng);

/// Primary CRP on n customers, then secondary customers until the primary
/// tables are rediscovered. Tables are labelled 1, 2, ... in order of first
/// visit by a secondary customer.
struct TwoPhaseResult {
  SampleTrace primary;                  // appearance-labelled CRP sample
  std::vector<int> table_sizes;         // primary table sizes, appearance order
  std::vector<long> labels;             // per primary table; 0 if not yet rediscovered
  std::vector<int> rediscovery_order;   // primary table indices (0-based) by rediscovery
  std::vector<long> rediscovery_times;  // customer number of each rediscovery
  long secondary_customers = 0;
  bool complete = false;

  /// Rediscovery order with an implied last table when exactly one is
  /// missing; empty if two or more are missing.
  std::vector<int> order_of_tables() const;
  /// Primary table that receives the minimal label (first rediscovery).
  int first_rediscovered() const { return rediscovery_order.empty() ? -1 : rediscovery_order.front(); }
  /// X_i = label of customer i's table. Throws RediscoveryTimeout unless complete.
  SampleTrace trace() const;
};

/// `stop_after` limits how many primary tables must be rediscovered:
/// 0 means all, s > 0 means s, s < 0 means all but |s|. `cap` bounds the
/// number of secondary customers.
TwoPhaseResult two_phase_sample(const GibbsWeights<double>& weights, int n, Rng& rng,
                                long cap = kDefaultRediscoveryCap, int stop_after = 0);

struct DiscoveryRecord {
  std::vector<int> delta;            // new value at step n
  std::vector<int> lower;            // new value below all earlier ones
  std::vector<long> discovery_times; // M_1 < M_2 < ...
  int x_index = 0;                   // X: M_X is the first time the minimum appears
  long x_time = 0;                   // M_X
};

DiscoveryRecord discovery_stats(const SampleTrace& trace);

/// (1 - alpha) / (n - k alpha).
double p_alpha(long n, int k, double alpha);

/// Times of new values in GEM(alpha, theta) sampling: after step m with k
/// values, the next new value comes at t > m with
/// P(no new value in m+1..t) = Gamma(t - k alpha) Gamma(theta + m) / (Gamma(m - k alpha) Gamma(theta + t)).
/// Sampled by inversion, so long gaps cost O(log) work.
class DiscoverySequence {
 public:
  DiscoverySequence(const GemParams<double>& params);

  long time() const { return m_; }
  int count() const { return k_; }
  /// Advances to the next discovery and returns its time, or returns
  /// horizon + 1 (leaving the state censored) if it falls beyond horizon.
  long next(Rng& rng, long horizon);

 private:
  double log_survival(long t) const;

  GemParams<double> params_;
  long m_ = 1;
  int k_ = 1;
};

}  // namespace gempart
