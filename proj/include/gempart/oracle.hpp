#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "gempart/biasing.hpp"
#include "gempart/composition.hpp"
#include "gempart/gibbs.hpp"
#include "gempart/mathcore.hpp"

namespace gempart {

inline constexpr int kDefaultDpCap = 14;

/// Law on compositions of n, support in composition-index order.
template <Scalar T>
struct ExactDistribution {
  int n = 0;
  std::vector<Composition> support;
  std::vector<T> probabilities;

  T total() const {
    T s(0);
    for (const auto& p : probabilities) s += p;
    return s;
  }

  T at(const Composition& c) const {
    for (std::size_t i = 0; i < support.size(); ++i) {
      if (support[i] == c) return probabilities[i];
    }
    return T(0);
  }

  /// Builds from a dense table indexed by composition_index, dropping zeros.
  static ExactDistribution from_dense(int n, const std::vector<T>& dense) {
    ExactDistribution d;
    d.n = n;
    for (std::size_t i = 0; i < dense.size(); ++i) {
      if (dense[i] != T(0)) {
        d.support.push_back(composition_from_index(n, i));
        d.probabilities.push_back(dense[i]);
      }
    }
    return d;
  }
};

/// Appearance-order law by enumeration: every set partition of [n] carries
/// its EPPF mass, spread over block orders by size-biased permutation.
template <Scalar T>
ExactDistribution<T> exact_appearance_distribution(const GibbsWeights<T>& weights, int n,
                                                   int cap = kDefaultEnumerationCap) {
  std::vector<T> dense(std::size_t{1} << (n - 1), T(0));
  const auto size_bias = PseudoSize<T>::size();
  SetPartitionStream stream(n, cap);
  std::map<std::size_t, std::vector<Permutation>> perms;
  while (auto part = stream.next()) {
    const Composition sizes = part->sizes();
    const T mass = eppf(weights, sizes);
    auto& ps = perms[sizes.size()];
    if (ps.empty()) ps = all_permutations(sizes.size());
    for (const auto& sigma : ps) {
      const Composition c = sigma.apply(sizes);
      dense[composition_index(c)] += mass * permutation_probability(sizes, sigma, size_bias);
    }
  }
  return ExactDistribution<T>::from_dense(n, dense);
}

/// Appearance-order law read directly off set partitions: blocks listed by
/// least element are in order of first occurrence.
template <Scalar T>
ExactDistribution<T> exact_appearance_distribution_by_first_occurrence(const GibbsWeights<T>& weights, int n,
                                                                       int cap = kDefaultEnumerationCap) {
  std::vector<T> dense(std::size_t{1} << (n - 1), T(0));
  SetPartitionStream stream(n, cap);
  while (auto part = stream.next()) {
    const Composition sizes = part->sizes();
    dense[composition_index(sizes)] += eppf(weights, sizes);
  }
  return ExactDistribution<T>::from_dense(n, dense);
}

/// Forward recursion of the value-ordered restaurant; layers[m-1] is the
/// law of the value-ordered composition after m customers.
template <Scalar T>
std::vector<ExactDistribution<T>> value_dp_layers(const GibbsWeights<T>& weights, int n, int cap = kDefaultDpCap) {
  if (n < 1) throw InvalidArgument("value DP needs n >= 1");
  if (n > cap) {
    throw CapExceeded("value DP size n=" + std::to_string(n) + " exceeds cap " + std::to_string(cap));
  }
  std::vector<ExactDistribution<T>> layers;
  std::vector<T> cur{T(1)};
  layers.push_back(ExactDistribution<T>::from_dense(1, cur));
  for (int m = 1; m < n; ++m) {
    std::vector<T> nxt(std::size_t{1} << m, T(0));
    for (std::size_t idx = 0; idx < cur.size(); ++idx) {
      if (cur[idx] == T(0)) continue;
      const Composition c = composition_from_index(m, idx);
      const auto tr = ocrp_transitions(weights, c);
      for (std::size_t j = 0; j < tr.insert.size(); ++j) {
        nxt[composition_index(c.with_inserted_one(j))] += cur[idx] * tr.insert[j];
      }
      for (std::size_t j = 0; j < tr.join.size(); ++j) {
        nxt[composition_index(c.with_incremented(j))] += cur[idx] * tr.join[j];
      }
    }
    cur = std::move(nxt);
    layers.push_back(ExactDistribution<T>::from_dense(m + 1, cur));
  }
  return layers;
}

template <Scalar T>
ExactDistribution<T> exact_value_distribution_dp(const GibbsWeights<T>& weights, int n, int cap = kDefaultDpCap) {
  return value_dp_layers(weights, n, cap).back();
}

/// Value-ordered pmf of a GEM sample from the decomposition over the stick
/// carrying each successive value, with moments
/// E[H_i^r (1-H_i)^s] = (1-alpha)_r (theta+i alpha)_s / (theta+(i-1)alpha+1)_{r+s}.
/// The last value is summed in closed form through gauss_2f1_unit. The
/// series over sticks stops once the certified remainder is below tol
/// times the partial sum (so also below tol in absolute terms).
double recursive_value_pmf(const GemParams<double>& params, const Composition& c, double tol = 1e-12,
                           long stick_cap = 1'000'000);

/// P(value-ordered counts = (n)) = sum_m E[P_m^n], closed by gauss_2f1_unit.
double single_value_probability(const GemParams<double>& params, int n);

/// P(M_k = n) = C_{n-1,k-1} theta^k / (theta)_n for GEM(0, theta).
template <Scalar T>
T mk_pmf(const T& theta, int k, int n) {
  if (!(theta > T(0))) throw InvalidArgument("mk_pmf needs theta > 0");
  if (k < 1 || n < 1) throw InvalidArgument("mk_pmf needs k, n >= 1");
  if (k > n) return T(0);
  T pow(1);
  for (int i = 0; i < k; ++i) pow *= theta;
  return from_bigint<T>(stirling_first_unsigned(n - 1, k - 1)) * pow / rising_factorial<T>(theta, n);
}

/// E[1 / (M_k + theta)_r] = theta^{k-1} / ((theta + r)^k (theta + 1)_{r-1}), r > -theta.
template <Scalar T>
T inv_pochhammer_moment(const T& theta, int k, int r) {
  if (!(theta > T(0))) throw InvalidArgument("inv_pochhammer_moment needs theta > 0");
  if (k < 1) throw InvalidArgument("inv_pochhammer_moment needs k >= 1");
  if (!(T(r) > -theta)) throw InvalidArgument("inv_pochhammer_moment needs r > -theta");
  T num(1);
  for (int i = 1; i < k; ++i) num *= theta;
  T den(1);
  for (int i = 0; i < k; ++i) den *= theta + T(r);
  return num / (den * pochhammer<T>(theta + T(1), r - 1));
}

/// Real-order version with (x)_r = Gamma(x + r) / Gamma(x).
double inv_pochhammer_moment_real(double theta, int k, double r);

/// P(M_X = n) = theta / ((theta + n)(theta + n - 1)) for GEM(0, theta).
template <Scalar T>
T mx_pmf(const T& theta, int n) {
  if (!(theta > T(0))) throw InvalidArgument("mx_pmf needs theta > 0");
  if (n < 1) throw InvalidArgument("mx_pmf needs n >= 1");
  return theta / ((theta + T(n)) * (theta + T(n - 1)));
}

/// P(M_X > n) = E(1 - P_1)^n = (alpha + theta)_n / (1 + theta)_n.
template <Scalar T>
T mx_survival(const GemParams<T>& params, int n) {
  params.validate();
  if (n < 0) throw InvalidArgument("mx_survival needs n >= 0");
  return rising_factorial<T>(params.alpha + params.theta, n) / rising_factorial<T>(T(1) + params.theta, n);
}

/// E[P_k] = (1-alpha)/(1+theta+(k-1)alpha) prod_{i<k} (theta+i alpha)/(1+theta+(i-1)alpha).
template <Scalar T>
T expected_frequency(const GemParams<T>& params, int k) {
  params.validate();
  if (k < 1) throw InvalidArgument("expected_frequency needs k >= 1");
  const T& a = params.alpha;
  const T& t = params.theta;
  T out = (T(1) - a) / (T(1) + t + T(k - 1) * a);
  for (int i = 1; i < k; ++i) out *= (t + T(i) * a) / (T(1) + t + T(i - 1) * a);
  return out;
}

/// Partial sums over n <= N of P(M_k = n) / (n + theta)_r for GEM(0, theta),
/// from the forward law of the number of values K_n, with the remainder
/// bound P(M_k > N) / (N + 1 + theta)_r.
struct DiscoverySeries {
  double theta = 0;
  int k_max = 0;
  int r_max = 0;
  long terms = 0;
  std::vector<std::vector<double>> sum;    // [k-1][r-1]
  std::vector<std::vector<double>> bound;  // [k-1][r-1]
  std::vector<double> mass;                // sum_n P(M_k = n), [k-1]
};

DiscoverySeries discovery_series(double theta, int k_max, int r_max, double tol,
                                 long term_cap = 1L << 31);

/// Law of M_k for GEM(0, theta) on dyadic bins [2^b, 2^{b+1}), b < bins,
/// plus a last entry for M_k >= 2^bins.
std::vector<double> mk_dyadic_law(double theta, int k, int bins);

struct NkidentEstimate {
  std::vector<double> lhs;     // E[P_k], k = 1..k_max
  std::vector<double> rhs;     // Monte Carlo mean
  std::vector<double> std_error; // of rhs
  long replicates = 0;
  long censored = 0;
  double truncation = 0;       // bound on the neglected tail of the product
};

/// Monte Carlo for E[p_alpha(M_k, k) prod_{j>k} (1 - p_alpha(M_j, j))],
/// following each discovery sequence until the remaining product can move
/// the estimate by less than eps. Works for every 0 <= alpha < 1.
NkidentEstimate nkident_check(const GemParams<double>& params, int k_max, long replicates, std::uint64_t seed,
                              double eps, int threads = 0, long horizon = 1'000'000'000'000L);

}  // namespace gempart
