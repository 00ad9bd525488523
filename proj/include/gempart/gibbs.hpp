#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "gempart/biasing.hpp"
#include "gempart/composition.hpp"
#include "gempart/errors.hpp"
#include "gempart/mathcore.hpp"
#include "gempart/rational.hpp"

namespace gempart {

template <Scalar T>
struct GemParams {
  T alpha{0};
  T theta{1};

  GemParams() = default;
  GemParams(T a, T t) : alpha(std::move(a)), theta(std::move(t)) { validate(); }

  void validate() const {
    if (alpha < T(0) || !(alpha < T(1))) {
      throw InvalidArgument("alpha must lie in [0, 1)");
    }
    if (!(theta > -alpha)) {
      throw InvalidArgument("theta must exceed -alpha");
    }
  }

  /// The regenerative pseudo-size needs theta >= 0.
  bool regenerative_compatible() const { return !(theta < T(0)); }

  GemParams<double> to_double() const {
    GemParams<double> p;
    p.alpha = gempart::to_double(alpha);
    p.theta = gempart::to_double(theta);
    return p;
  }
};

enum class Provenance { Gem, UserSupplied };

inline std::string to_string(Provenance p) { return p == Provenance::Gem ? "GEM" : "user-supplied"; }

/// (1 - alpha)_{m-1}.
template <Scalar T>
T w_weight(const T& alpha, int m) {
  if (m < 1) {
    throw InvalidArgument("w_weight needs m >= 1");
  }
  return rising_factorial<T>(T(1) - alpha, m - 1);
}

/// Triangular array V_{k:n}, 1 <= k <= n <= n_max, of a Gibbs(alpha)
/// partition. GEM arrays answer queries beyond n_max from the closed form.
template <Scalar T>
class GibbsWeights {
 public:
  static constexpr int kDefaultNMax = 64;

  static GibbsWeights gem(const GemParams<T>& params, int n_max = kDefaultNMax) {
    params.validate();
    if (n_max < 1) throw InvalidArgument("n_max must be >= 1");
    GibbsWeights w;
    w.alpha_ = params.alpha;
    w.gem_ = params;
    w.provenance_ = Provenance::Gem;
    w.n_max_ = n_max;
    w.v_.resize(n_max + 1);
    // prod_{i<k}(theta + i alpha) / (1 + theta)_{n-1}
    std::vector<T> numer(n_max + 1);
    numer[1] = T(1);
    for (int k = 2; k <= n_max; ++k) numer[k] = numer[k - 1] * (params.theta + T(k - 1) * params.alpha);
    T denom(1);
    for (int n = 1; n <= n_max; ++n) {
      if (n > 1) denom *= T(1) + params.theta + T(n - 2);
      w.v_[n].resize(n + 1);
      for (int k = 1; k <= n; ++k) w.v_[n][k] = numer[k] / denom;
    }
    return w;
  }

  /// rows[n-1] = (V_{1:n}, ..., V_{n:n}). Validated for positivity,
  /// V_{1:1} = 1 and the consistency relation.
  static GibbsWeights from_table(const T& alpha, const std::vector<std::vector<T>>& rows) {
    if (alpha < T(0) || !(alpha < T(1))) {
      throw InvalidArgument("alpha must lie in [0, 1)");
    }
    if (rows.empty()) throw InvalidArgument("empty weight table");
    GibbsWeights w;
    w.alpha_ = alpha;
    w.provenance_ = Provenance::UserSupplied;
    w.n_max_ = static_cast<int>(rows.size());
    w.v_.resize(w.n_max_ + 1);
    for (int n = 1; n <= w.n_max_; ++n) {
      const auto& row = rows[n - 1];
      if (static_cast<int>(row.size()) != n) {
        throw InvalidArgument("weight row " + std::to_string(n) + " must have " + std::to_string(n) +
                              " entries");
      }
      w.v_[n].resize(n + 1);
      for (int k = 1; k <= n; ++k) {
        if (!(row[k - 1] > T(0))) {
          throw InvalidArgument("weights must be positive");
        }
        w.v_[n][k] = row[k - 1];
      }
    }
    if (w.v_[1][1] != T(1)) {
      throw InvalidArgument("V_{1:1} must equal 1");
    }
    if (auto bad = w.consistency_violation()) {
      throw ConsistencyError("consistency relation fails at (k, n) = (" + std::to_string(bad->first) +
                             ", " + std::to_string(bad->second) + ")");
    }
    return w;
  }

  const T& alpha() const { return alpha_; }
  int n_max() const { return n_max_; }
  Provenance provenance() const { return provenance_; }
  const std::optional<GemParams<T>>& gem_params() const { return gem_; }

  T V(int k, int n) const {
    if (n < 1 || k < 1 || k > n) {
      throw RangeError("V_{k:n} needs 1 <= k <= n");
    }
    if (n <= n_max_) return v_[n][k];
    if (!gem_) {
      throw RangeError("n = " + std::to_string(n) + " beyond the stored weight array (n_max = " +
                       std::to_string(n_max_) + ")");
    }
    return gem_closed_form(k, n);
  }

  /// p_{k:n} = V_{k+1:n+1} / V_{k:n}.
  T discovery_prob(int k, int n) const {
    if (n < 1 || k < 1 || k > n) {
      throw RangeError("discovery_prob needs 1 <= k <= n");
    }
    if (gem_) {
      return (gem_->theta + T(k) * gem_->alpha) / (gem_->theta + T(n));
    }
    if (n + 1 > n_max_) {
      throw RangeError("discovery_prob needs n < n_max for user-supplied weights");
    }
    return v_[n + 1][k + 1] / v_[n][k];
  }

  /// First (k, n) with V_{k:n} != (n - k alpha) V_{k:n+1} + V_{k+1:n+1}.
  std::optional<std::pair<int, int>> consistency_violation() const {
    for (int n = 1; n < n_max_; ++n) {
      for (int k = 1; k <= n; ++k) {
        const T rhs = (T(n) - T(k) * alpha_) * v_[n + 1][k] + v_[n + 1][k + 1];
        if constexpr (is_exact_v<T>) {
          if (rhs != v_[n][k]) return std::pair{k, n};
        } else {
          if (std::fabs(rhs - v_[n][k]) > 1e-10 * std::fabs(v_[n][k])) return std::pair{k, n};
        }
      }
    }
    return std::nullopt;
  }

  GibbsWeights<double> to_double() const {
    GibbsWeights<double> out;
    out.alpha_ = gempart::to_double(alpha_);
    out.n_max_ = n_max_;
    out.provenance_ = provenance_;
    if (gem_) out.gem_ = gem_->to_double();
    out.v_.resize(v_.size());
    for (std::size_t n = 0; n < v_.size(); ++n) {
      out.v_[n].resize(v_[n].size());
      for (std::size_t k = 0; k < v_[n].size(); ++k) out.v_[n][k] = gempart::to_double(v_[n][k]);
    }
    return out;
  }

 private:
  template <Scalar U>
  friend class GibbsWeights;

  T gem_closed_form(int k, int n) const {
    const T& a = gem_->alpha;
    const T& t = gem_->theta;
    if constexpr (is_exact_v<T>) {
      T num(1);
      for (int i = 1; i < k; ++i) num *= t + T(i) * a;
      return num / rising_factorial<T>(T(1) + t, n - 1);
    } else {
      double lv = 0.0;
      for (int i = 1; i < k; ++i) lv += std::log(t + i * a);
      lv -= std::lgamma(t + n) - std::lgamma(t + 1.0);
      return std::exp(lv);
    }
  }

  T alpha_{0};
  int n_max_ = 0;
  Provenance provenance_ = Provenance::Gem;
  std::optional<GemParams<T>> gem_;
  std::vector<std::vector<T>> v_;  // v_[n][k]
};

/// p(n_1, ..., n_k) = V_{k:n} prod w(n_i).
template <Scalar T>
T eppf(const GibbsWeights<T>& weights, const Composition& c) {
  if (c.empty()) throw InvalidArgument("eppf of an empty composition");
  T out = weights.V(static_cast<int>(c.size()), c.total());
  for (int part : c) out *= w_weight(weights.alpha(), part);
  return out;
}

template <Scalar T>
T discovery_prob(const GibbsWeights<T>& weights, int k, int n) {
  return weights.discovery_prob(k, n);
}

/// P[N* = c] = multinomial(n; c) s_tilde_size(c) p(c).
template <Scalar T>
T appearance_pmf(const GibbsWeights<T>& weights, const Composition& c) {
  return from_bigint<T>(multinomial(c.total(), c)) * s_tilde(c, PseudoSize<T>::size()) * eppf(weights, c);
}

/// P[N-up = c] = multinomial(n; c) s_tilde_{size - alpha}(c) p(c).
template <Scalar T>
T value_ordered_pmf(const GibbsWeights<T>& weights, const Composition& c) {
  return from_bigint<T>(multinomial(c.total(), c)) *
         s_tilde(c, PseudoSize<T>::size_minus_alpha(weights.alpha())) * eppf(weights, c);
}

/// p-tilde(c) = s_tilde(c) p(c).
template <Scalar T>
T oeppf(const GibbsWeights<T>& weights, const Composition& c, const PseudoSize<T>& ps) {
  return s_tilde(c, ps) * eppf(weights, c);
}

enum class RankedRoute { ValueOrder, AppearanceOrder };

/// P[N-down = lambda], summing an ordered law over the distinct
/// rearrangements of lambda.
template <Scalar T>
T ranked_pmf(const GibbsWeights<T>& weights, const Composition& lambda,
             RankedRoute route = RankedRoute::ValueOrder) {
  if (!lambda.is_weakly_decreasing()) {
    throw InvalidArgument("ranked_pmf needs a weakly decreasing composition");
  }
  std::vector<int> parts = lambda.vec();
  std::sort(parts.begin(), parts.end());
  T out(0);
  do {
    const Composition c(parts);
    out += route == RankedRoute::ValueOrder ? value_ordered_pmf(weights, c) : appearance_pmf(weights, c);
  } while (std::next_permutation(parts.begin(), parts.end()));
  return out;
}

/// One-step transition probabilities of the value-ordered restaurant from
/// state c: insert[j] puts a new singleton before part j (j = 0..k),
/// join[j] increments part j.
template <Scalar T>
struct OcrpTransitions {
  std::vector<T> insert;
  std::vector<T> join;

  T total() const {
    T s(0);
    for (const auto& x : insert) s += x;
    for (const auto& x : join) s += x;
    return s;
  }
};

template <Scalar T>
OcrpTransitions<T> ocrp_transitions(const GibbsWeights<T>& weights, const Composition& c) {
  if (c.empty()) throw InvalidArgument("ocrp_transitions needs a nonempty state");
  const int k = static_cast<int>(c.size());
  const int n = c.total();
  const T& a = weights.alpha();
  const T p = weights.discovery_prob(k, n);

  // tail[i] = sum_{l >= i} (n_l - alpha)
  std::vector<T> tail(k + 1, T(0));
  for (int i = k - 1; i >= 0; --i) tail[i] = tail[i + 1] + (T(c[i]) - a);

  OcrpTransitions<T> out;
  out.insert.resize(k + 1);
  out.join.resize(k);

  // new singleton at place j: h(1, n_j..n_k) prod_{i<j} [1 - h(1, n_i..n_k)]
  T survive(1);
  for (int j = 0; j <= k; ++j) {
    const T one = T(1) - a;
    const T h = one / (one + tail[j]);
    out.insert[j] = p * h * survive;
    survive *= T(1) - h;
  }
  // increment part j: h(n_j+1, n_{j+1}..n_k) prod_{i<j} [1 - h(n_i+1, n_{i+1}..n_k)]
  survive = T(1);
  for (int j = 0; j < k; ++j) {
    const T bumped = T(c[j] + 1) - a;
    const T h = bumped / (bumped + tail[j + 1]);
    out.join[j] = (T(1) - p) * h * survive;
    survive *= T(1) - h;
  }
  return out;
}

}  // namespace gempart
