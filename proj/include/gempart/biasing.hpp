#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "gempart/composition.hpp"
#include "gempart/errors.hpp"
#include "gempart/rational.hpp"
#include "gempart/rng.hpp"

namespace gempart {

/// Positive weight attached to a cluster size. Simple kinds look at the
/// part only; general kinds also see the remaining total ("universe")
/// of the items not yet picked.
template <Scalar T>
class PseudoSize {
 public:
  enum class Kind { Size, SizeMinusAlpha, ConstantOne, Regenerative, CustomSimple, CustomGeneral };

  static PseudoSize size() { return PseudoSize(Kind::Size); }

  static PseudoSize size_minus_alpha(const T& alpha) {
    if (alpha < T(0) || !(alpha < T(1))) {
      throw InvalidArgument("size-minus-alpha pseudo-size needs 0 <= alpha < 1");
    }
    PseudoSize ps(Kind::SizeMinusAlpha);
    ps.alpha_ = alpha;
    return ps;
  }

  static PseudoSize constant_one() { return PseudoSize(Kind::ConstantOne); }

  /// s(n', n'') = alpha (n' - n'') + theta n''.
  static PseudoSize regenerative(const T& alpha, const T& theta) {
    if (alpha < T(0) || !(alpha < T(1))) {
      throw InvalidArgument("regenerative pseudo-size needs 0 <= alpha < 1");
    }
    if (theta < T(0)) {
      throw InvalidArgument("regenerative pseudo-size needs theta >= 0");
    }
    PseudoSize ps(Kind::Regenerative);
    ps.alpha_ = alpha;
    ps.theta_ = theta;
    return ps;
  }

  static PseudoSize custom(std::map<int, T> table) {
    PseudoSize ps(Kind::CustomSimple);
    ps.simple_ = std::move(table);
    return ps;
  }

  /// Keys are (universe, part).
  static PseudoSize custom_general(std::map<std::pair<int, int>, T> table) {
    PseudoSize ps(Kind::CustomGeneral);
    ps.general_ = std::move(table);
    return ps;
  }

  Kind kind() const { return kind_; }
  bool is_general() const { return kind_ == Kind::Regenerative || kind_ == Kind::CustomGeneral; }

  T operator()(int universe, int part) const {
    if (part < 1 || universe < part) {
      throw RangeError("pseudo-size evaluated outside 1 <= part <= universe");
    }
    T s = raw(universe, part);
    if (!(s > T(0))) {
      throw NonPositivePseudoSize("pseudo-size is not positive at (" + std::to_string(universe) +
                                  ", " + std::to_string(part) + ")");
    }
    return s;
  }

 private:
  explicit PseudoSize(Kind k) : kind_(k) {}

  T raw(int universe, int part) const {
    switch (kind_) {
      case Kind::Size:
        return T(part);
      case Kind::SizeMinusAlpha:
        return T(part) - alpha_;
      case Kind::ConstantOne:
        return T(1);
      case Kind::Regenerative:
        return alpha_ * T(universe - part) + theta_ * T(part);
      case Kind::CustomSimple: {
        auto it = simple_.find(part);
        if (it == simple_.end()) {
          throw RangeError("custom pseudo-size has no entry for size " + std::to_string(part));
        }
        return it->second;
      }
      case Kind::CustomGeneral: {
        auto it = general_.find({universe, part});
        if (it == general_.end()) {
          throw RangeError("custom pseudo-size has no entry for (" + std::to_string(universe) +
                           ", " + std::to_string(part) + ")");
        }
        return it->second;
      }
    }
    return T(0);
  }

  Kind kind_;
  T alpha_{0};
  T theta_{0};
  std::map<int, T> simple_;
  std::map<std::pair<int, int>, T> general_;
};

/// prod_i s(nu_i, n_i) / sum_{j >= i} s(nu_i, n_j), nu_i = n_i + ... + n_k.
/// For simple pseudo-sizes nu_i is ignored.
template <Scalar T>
T s_tilde(const Composition& c, const PseudoSize<T>& ps) {
  T out(1);
  const std::size_t k = c.size();
  int nu = c.total();
  for (std::size_t i = 0; i + 1 < k; ++i) {
    const T num = ps(nu, c[i]);
    T den = num;
    for (std::size_t j = i + 1; j < k; ++j) den += ps(nu, c[j]);
    out *= num / den;
    nu -= c[i];
  }
  if (k > 0) {
    ps(nu, c[k - 1]);  // the last factor is s/s = 1, but s must still be positive
  }
  return out;
}

/// (n_1 - alpha) / (n - k alpha).
template <Scalar T>
T h_alpha(const Composition& sizes, const T& alpha) {
  if (sizes.empty()) {
    throw InvalidArgument("h_alpha of an empty composition");
  }
  const T k(static_cast<long>(sizes.size()));
  return (T(sizes[0]) - alpha) / (T(sizes.total()) - k * alpha);
}

/// Bijection of {0..k-1}. Applied to a composition c it gives
/// (c[map[0]], ..., c[map[k-1]]): map[i] is the item placed i-th.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> map) : map_(std::move(map)) {
    std::vector<bool> seen(map_.size(), false);
    for (int v : map_) {
      if (v < 0 || static_cast<std::size_t>(v) >= map_.size() || seen[v]) {
        throw InvalidArgument("permutation map is not a bijection");
      }
      seen[v] = true;
    }
  }

  static Permutation identity(std::size_t k) {
    std::vector<int> m(k);
    std::iota(m.begin(), m.end(), 0);
    return Permutation(std::move(m));
  }

  std::size_t size() const { return map_.size(); }
  int operator[](std::size_t i) const { return map_[i]; }
  const std::vector<int>& map() const { return map_; }

  Composition apply(const Composition& c) const {
    if (c.size() != map_.size()) {
      throw InvalidArgument("permutation arity does not match composition");
    }
    std::vector<int> parts(c.size());
    for (std::size_t i = 0; i < map_.size(); ++i) parts[i] = c[map_[i]];
    return Composition(std::move(parts));
  }

  Permutation inverse() const {
    std::vector<int> inv(map_.size());
    for (std::size_t i = 0; i < map_.size(); ++i) inv[map_[i]] = static_cast<int>(i);
    return Permutation(std::move(inv));
  }

  bool is_identity() const {
    for (std::size_t i = 0; i < map_.size(); ++i) {
      if (map_[i] != static_cast<int>(i)) return false;
    }
    return true;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation& a, const Permutation& b) { return a.map_ <=> b.map_; }

 private:
  std::vector<int> map_;
};

/// P(sigma) = s_tilde(sigma applied to c).
template <Scalar T>
T permutation_probability(const Composition& c, const Permutation& sigma, const PseudoSize<T>& ps) {
  return s_tilde(sigma.apply(c), ps);
}

/// All k! permutations of {0..k-1} in lexicographic order.
std::vector<Permutation> all_permutations(std::size_t k);

/// Index h with probability s(universe, sizes[h]) / sum, universe = sum of
/// sizes. One uniform draw, inverse CDF.
template <Scalar T>
std::size_t s_biased_pick(const std::vector<int>& sizes, const PseudoSize<T>& ps, Rng& rng) {
  if (sizes.empty()) {
    throw InvalidArgument("s_biased_pick on an empty list");
  }
  const int universe = std::accumulate(sizes.begin(), sizes.end(), 0);
  std::vector<double> w(sizes.size());
  double total = 0.0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    w[i] = to_double(ps(universe, sizes[i]));
    total += w[i];
  }
  double u = rng.uniform01() * total;
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
    if (u < w[i]) return i;
    u -= w[i];
  }
  return sizes.size() - 1;
}

/// Exhaustive sequential picks without replacement. The general pseudo-size
/// sees the total of the items still unpicked at each stage.
template <Scalar T>
Permutation s_biased_permutation(const std::vector<int>& sizes, const PseudoSize<T>& ps, Rng& rng) {
  if (sizes.empty()) {
    throw InvalidArgument("s_biased_permutation on an empty list");
  }
  std::vector<int> left(sizes.size());
  std::iota(left.begin(), left.end(), 0);
  std::vector<int> order;
  order.reserve(sizes.size());
  std::vector<int> remaining_sizes;
  while (left.size() > 1) {
    remaining_sizes.clear();
    for (int idx : left) remaining_sizes.push_back(sizes[idx]);
    const std::size_t h = s_biased_pick(remaining_sizes, ps, rng);
    order.push_back(left[h]);
    left.erase(left.begin() + static_cast<std::ptrdiff_t>(h));
  }
  order.push_back(left.front());
  return Permutation(std::move(order));
}

}  // namespace gempart
