#include "gempart/oracle.hpp"

#include <cmath>
#include <string>

#include "gempart/parallel.hpp"
#include "gempart/samplers.hpp"

namespace gempart {

namespace {

double rising(double x, int r) {
  double out = 1.0;
  for (int i = 0; i < r; ++i) out *= x + i;
  return out;
}

// Kahan-Babuska-Neumaier running sum.
struct NeumaierSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + comp; }
};

// E[H_i^r (1 - H_i)^s] for H_i ~ beta(1 - alpha, theta + i alpha).
double stick_moment(double alpha, double theta, long i, int r, int s) {
  const double b = theta + static_cast<double>(i) * alpha;
  return rising(1.0 - alpha, r) * rising(b, s) / rising(b - alpha + 1.0, r + s);
}

// Probability that nu draws from GEM(alpha, theta) are all distinct:
// V_{nu:nu} of the GEM weights.
double all_distinct(double alpha, double theta, int nu) {
  double out = 1.0;
  for (int i = 1; i < nu; ++i) out *= (theta + i * alpha) / (theta + 1.0 + (i - 1));
  return out;
}

}  // namespace

double single_value_probability(const GemParams<double>& params, int n) {
  params.validate();
  if (n < 1) throw InvalidArgument("single_value_probability needs n >= 1");
  const double a = params.alpha;
  const double t = params.theta;
  // sum_m prod_{i<m} (theta + i alpha) / (theta + i alpha + n)
  double series;
  if (a > 0.0) {
    series = gauss_2f1_unit((t + a) / a, (t + a + n) / a);
  } else {
    series = (t + n) / n;  // geometric with ratio theta / (theta + n)
  }
  return rising(1.0 - a, n) / rising(t + 1.0, n) * series;
}

double recursive_value_pmf(const GemParams<double>& params, const Composition& c, double tol, long stick_cap) {
  params.validate();
  if (c.empty()) throw InvalidArgument("recursive_value_pmf needs a nonempty composition");
  const int k = static_cast<int>(c.size());
  if (k == 1) return single_value_probability(params, c[0]);

  const double a = params.alpha;
  const double t = params.theta;
  const double coeff = multinomial(c.total(), c).get_d();

  // nu[j] = c_j + ... + c_{k-1}; ones[j] says whether that suffix is all ones
  std::vector<int> nu(k + 1, 0);
  std::vector<bool> ones(k + 1, true);
  for (int j = k - 1; j >= 0; --j) {
    nu[j] = nu[j + 1] + c[j];
    ones[j] = ones[j + 1] && c[j] == 1;
  }
  std::vector<double> suffix_factorial(k + 1, 1.0);
  for (int j = 0; j < k; ++j) {
    for (int m = 2; m <= nu[j]; ++m) suffix_factorial[j] *= m;
  }

  // d[j]: weight of placements of the first j values on sticks <= i, for
  // j = 0..k-2 (the last two values are closed when value k-2 is placed)
  std::vector<double> d(k - 1, 0.0);
  d[0] = 1.0;
  NeumaierSum total;
  for (long i = 1; i <= stick_cap; ++i) {
    std::vector<double> nd(k - 1, 0.0);
    for (int j = 0; j <= k - 2; ++j) {
      if (d[j] == 0.0) continue;
      nd[j] += d[j] * stick_moment(a, t, i, 0, nu[j]);
      const double place = d[j] * stick_moment(a, t, i, c[j], nu[j + 1]);
      if (j + 1 <= k - 2) {
        nd[j + 1] += place;
      } else {
        // value k-1 lives on sticks i+1, i+2, ... : GEM(alpha, theta + i alpha)
        const GemParams<double> shifted{a, t + static_cast<double>(i) * a};
        total.add(place * single_value_probability(shifted, c[k - 1]));
      }
    }
    d = std::move(nd);

    // Remaining placements behave as a GEM(alpha, theta + i alpha) sample of
    // the suffix values: exactly V_{nu:nu} / nu! when the suffix is all
    // ones, at most (1 - V_{nu:nu}) otherwise.
    const double t_shift = t + static_cast<double>(i) * a;
    double exact_rest = 0.0;
    double bound = 0.0;
    for (int j = 0; j <= k - 2; ++j) {
      if (d[j] == 0.0) continue;
      const double v = all_distinct(a, t_shift, nu[j]);
      if (ones[j]) {
        exact_rest += d[j] * v / suffix_factorial[j];
      } else {
        bound += d[j] * std::min(1.0, 1.0 - v);
      }
    }
    const double partial = coeff * (total.value() + exact_rest);
    if (coeff * bound < tol * partial) return partial;
  }
  throw DivergentSeries("recursive_value_pmf could not certify the tail below " + std::to_string(tol) +
                        " within " + std::to_string(stick_cap) + " sticks");
}

double inv_pochhammer_moment_real(double theta, int k, double r) {
  if (!(theta > 0.0)) throw InvalidArgument("inv_pochhammer_moment needs theta > 0");
  if (k < 1) throw InvalidArgument("inv_pochhammer_moment needs k >= 1");
  if (!(r > -theta)) throw InvalidArgument("inv_pochhammer_moment needs r > -theta");
  const double log_poch = std::lgamma(theta + r) - std::lgamma(theta + 1.0);  // (theta+1)_{r-1}
  return std::exp((k - 1) * std::log(theta) - k * std::log(theta + r) - log_poch);
}

DiscoverySeries discovery_series(double theta, int k_max, int r_max, double tol, long term_cap) {
  constexpr int kMaxK = 8;
  constexpr int kMaxR = 4;
  if (!(theta > 0.0)) throw InvalidArgument("discovery_series needs theta > 0");
  if (k_max < 1 || k_max > kMaxK || r_max < 1 || r_max > kMaxR) {
    throw InvalidArgument("discovery_series supports 1 <= k_max <= 8, 1 <= r_max <= 4");
  }
  DiscoverySeries out;
  out.theta = theta;
  out.k_max = k_max;
  out.r_max = r_max;
  // plain sums inside a chunk, compensated sums across chunks
  constexpr long kChunk = 4096;
  NeumaierSum sums[kMaxK][kMaxR];
  NeumaierSum mass[kMaxK];
  double chunk[kMaxK][kMaxR] = {};
  double chunk_mass[kMaxK] = {};
  // q[j] = P(K_{n-1} = j), j < k_max
  double q[kMaxK] = {};
  q[0] = 1.0;
  // one division per step: next_recip = 1 / (theta + n)
  double recip = 1.0 / theta;
  // Orders r >= 2 converge much faster than r = 1; they are frozen (with
  // their bound at that point) once negligible, leaving one division per step.
  int active = r_max;
  double frozen_bound[kMaxK][kMaxR] = {};
  auto bounds_at = [&](long m, int r, double* per_k) {
    double tail = 0.0;
    double poch = 1.0;
    for (int i = 1; i <= r; ++i) poch *= m + 1 + theta + (i - 1);
    for (int k = 0; k < k_max; ++k) {
      tail += q[k];
      per_k[k] = tail / poch;
    }
  };
  long n = 1;
  for (;; ++n) {
    const double p_new = theta * recip;
    const double stay = (n - 1) * recip;
    const double g1 = 1.0 / (theta + n);
    double g[kMaxR];
    g[0] = g1;
    for (int r = 1; r < active; ++r) g[r] = g[r - 1] / (theta + n + r);
    for (int k = 0; k < k_max; ++k) {
      const double pm = q[k] * p_new;  // P(M_{k+1} = n)
      chunk_mass[k] += pm;
      for (int r = 0; r < active; ++r) chunk[k][r] += pm * g[r];
    }
    for (int j = k_max - 1; j >= 1; --j) q[j] = q[j] * stay + q[j - 1] * p_new;
    q[0] *= stay;
    recip = g1;

    if (n % kChunk == 0 || n >= term_cap) {
      for (int k = 0; k < k_max; ++k) {
        mass[k].add(chunk_mass[k]);
        chunk_mass[k] = 0.0;
        for (int r = 0; r < r_max; ++r) {
          sums[k][r].add(chunk[k][r]);
          chunk[k][r] = 0.0;
        }
      }
      while (active > 1) {
        double b[kMaxK];
        bounds_at(n, active, b);
        if (b[k_max - 1] >= tol * 1e-3) break;
        for (int k = 0; k < k_max; ++k) frozen_bound[k][active - 1] = b[k];
        --active;
      }
      // P(M_k > n) = P(K_n < k); remainder <= P(M_k > n) / (n + 1 + theta)_r,
      // largest at r = 1 and k = k_max
      double tail = 0.0;
      for (int k = 0; k < k_max; ++k) tail += q[k];
      if (tail / (n + 1 + theta) < tol || n >= term_cap) break;
    }
  }
  out.terms = n;
  out.sum.assign(k_max, std::vector<double>(r_max));
  out.bound.assign(k_max, std::vector<double>(r_max));
  out.mass.assign(k_max, 0.0);
  for (int r = 1; r <= active; ++r) {
    double b[kMaxK];
    bounds_at(n, r, b);
    for (int k = 0; k < k_max; ++k) frozen_bound[k][r - 1] = b[k];
  }
  for (int k = 0; k < k_max; ++k) {
    out.mass[k] = mass[k].value();
    for (int r = 0; r < r_max; ++r) {
      out.sum[k][r] = sums[k][r].value();
      out.bound[k][r] = frozen_bound[k][r];
    }
  }
  return out;
}

std::vector<double> mk_dyadic_law(double theta, int k, int bins) {
  if (!(theta > 0.0)) throw InvalidArgument("mk_dyadic_law needs theta > 0");
  if (k < 1) throw InvalidArgument("mk_dyadic_law needs k >= 1");
  std::vector<double> law(bins + 1, 0.0);
  std::vector<NeumaierSum> acc(bins);
  std::vector<double> q(k, 0.0);
  q[0] = 1.0;
  const long last = 1L << bins;
  int b = 0;
  for (long n = 1; n < last; ++n) {
    if (n >= (2L << b)) ++b;
    const double inv = 1.0 / (theta + n - 1);
    const double p_new = theta * inv;
    acc[b].add(q[k - 1] * p_new);
    const double stay = (n - 1) * inv;
    for (int j = k - 1; j >= 1; --j) q[j] = q[j] * stay + q[j - 1] * p_new;
    q[0] *= stay;
  }
  double tail = 0.0;
  for (int j = 0; j < k; ++j) tail += q[j];  // P(K_{2^bins - 1} < k)
  for (int i = 0; i < bins; ++i) law[i] = acc[i].value();
  law[bins] = tail;
  return law;
}

namespace {

struct NkidentAcc {
  std::vector<double> sum;
  std::vector<double> sum_sq;
  long count = 0;
  long censored = 0;
  double worst_truncation = 0.0;

  explicit NkidentAcc(int k_max = 0) : sum(k_max, 0.0), sum_sq(k_max, 0.0) {}
  void merge(const NkidentAcc& o) {
    for (std::size_t i = 0; i < sum.size(); ++i) {
      sum[i] += o.sum[i];
      sum_sq[i] += o.sum_sq[i];
    }
    count += o.count;
    censored += o.censored;
    worst_truncation = std::max(worst_truncation, o.worst_truncation);
  }
};

}  // namespace

NkidentEstimate nkident_check(const GemParams<double>& params, int k_max, long replicates, std::uint64_t seed,
                              double eps, int threads, long horizon) {
  params.validate();
  if (k_max < 1) throw InvalidArgument("nkident_check needs k >= 1");
  const double a = params.alpha;
  const double t = params.theta;
  // Expected size of the neglected sum of p_alpha terms beyond the last
  // simulated discovery at time m with j values. For alpha = 0 this is
  // sum_{l>m} theta / ((theta + l - 1) l) <= theta / m.
  auto remaining = [&](long m, int j) { return ((1.0 - a) * t + a * j) / static_cast<double>(m); };

  const NkidentAcc zero(k_max);
  const auto acc = run_blocks(seed, hash_name("nkident"), replicates, threads, zero,
                              [&](Rng& rng, long count, NkidentAcc& out) {
    std::vector<double> p;
    for (long rep = 0; rep < count; ++rep) {
      DiscoverySequence seq(params);
      p.assign(1, 1.0);  // p_alpha(M_1, 1) = 1
      bool censored = false;
      while (static_cast<int>(p.size()) < k_max || remaining(seq.time(), seq.count()) >= eps) {
        const long m = seq.next(rng, horizon);
        if (m > horizon) {
          // No discovery up to the horizon: later p terms are at most remaining(horizon).
          censored = remaining(horizon, seq.count()) >= eps;
          if (!censored) {
            out.worst_truncation = std::max(out.worst_truncation, remaining(horizon, seq.count()));
            p.resize(std::max<std::size_t>(p.size(), k_max), 0.0);
          }
          break;
        }
        p.push_back(p_alpha(m, seq.count(), a));
      }
      if (censored) {
        ++out.censored;
        continue;
      }
      if (seq.time() <= horizon) {
        out.worst_truncation = std::max(out.worst_truncation, remaining(seq.time(), seq.count()));
      }
      // Y_k = p_k prod_{j>k} (1 - p_j)
      double suffix = 1.0;
      std::vector<double> y(p.size());
      for (std::size_t j = p.size(); j-- > 0;) {
        y[j] = p[j] * suffix;
        suffix *= 1.0 - p[j];
      }
      for (int k = 0; k < k_max; ++k) {
        out.sum[k] += y[k];
        out.sum_sq[k] += y[k] * y[k];
      }
      ++out.count;
    }
  });

  NkidentEstimate est;
  est.replicates = acc.count;
  est.censored = acc.censored;
  est.truncation = acc.worst_truncation;
  for (int k = 1; k <= k_max; ++k) {
    est.lhs.push_back(expected_frequency(params, k));
    const double mean = acc.sum[k - 1] / acc.count;
    const double var = std::max(0.0, acc.sum_sq[k - 1] / acc.count - mean * mean);
    est.rhs.push_back(mean);
    est.std_error.push_back(std::sqrt(var / acc.count));
  }
  return est;
}

}  // namespace gempart
