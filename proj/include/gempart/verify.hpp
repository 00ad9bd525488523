#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gempart/oracle.hpp"
#include "gempart/rational.hpp"
#include "gempart/samplers.hpp"

namespace gempart {

struct GridPoint {
  Rational alpha;
  Rational theta;

  GemParams<Rational> params() const { return GemParams<Rational>(alpha, theta); }
  /// "a=1/2,t=1/2"
  std::string label() const;
};

std::vector<GridPoint> default_grid();

struct VerifyConfig {
  std::uint64_t seed = 42;
  int threads = 0;  // 0: hardware concurrency
  std::vector<GridPoint> grid = default_grid();
  std::vector<Rational> dt_thetas{Rational(1, 2), Rational(1), Rational(5)};
  std::vector<Rational> discovery_thetas{Rational(1, 2), Rational(1), Rational(2)};
  int exact_n_max = 8;  // enumeration-based checks
  int dp_n_max = 10;    // value DP against the closed form
  int dp_cap = kDefaultDpCap;
  int enum_cap = kDefaultEnumerationCap;
  int mc_n = 6;
  long mc_replicates = 1'000'000;
  long x_replicates = 1'000'000;
  long nkident_replicates = 100'000;
  long rediscovery_cap = kDefaultRediscoveryCap;
  bool timings = false;  // runtime_ms is reported as 0 unless set
};

struct CheckResult {
  std::string id;
  std::string anchor;
  std::string mode;  // "exact", "numeric" or "monte-carlo"
  std::variant<Rational, double> statistic;
  double threshold = 0.0;
  bool pass = false;
  double runtime_ms = 0.0;
  std::string detail;
};

/// Suites in default run order.
const std::vector<std::string>& suite_names();

std::vector<CheckResult> run_suite(std::string_view name, const VerifyConfig& config);
std::vector<CheckResult> run_suites(const std::vector<std::string>& names, const VerifyConfig& config);

bool all_pass(const std::vector<CheckResult>& results);

enum class ReportFormat { Json, Csv, Table };

/// Checks are listed by id, so the document depends only on the results.
std::string emit_report(std::string_view suite, std::uint64_t seed, const std::vector<CheckResult>& results,
                        ReportFormat format);

/// (1/2) sum |p_i - q_i / N| over the union of supports.
template <Scalar T>
double tv_distance(const ExactDistribution<T>& p, const std::map<Composition, long>& counts) {
  long total = 0;
  for (const auto& [c, m] : counts) {
    if (c.total() != p.n) throw InvalidArgument("tv_distance: counts are not compositions of n");
    total += m;
  }
  if (total == 0) throw InvalidArgument("tv_distance: no counts");
  double s = 0.0;
  for (std::size_t i = 0; i < p.support.size(); ++i) {
    auto it = counts.find(p.support[i]);
    const double q = it == counts.end() ? 0.0 : static_cast<double>(it->second) / total;
    s += std::fabs(to_double(p.probabilities[i]) - q);
  }
  for (const auto& [c, m] : counts) {
    if (p.at(c) == T(0)) s += static_cast<double>(m) / total;
  }
  return 0.5 * s;
}

/// Same on a common indexed support.
double tv_distance(const std::vector<double>& p, const std::vector<long>& counts);

}  // namespace gempart
