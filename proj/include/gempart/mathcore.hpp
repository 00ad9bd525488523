#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "gempart/composition.hpp"
#include "gempart/errors.hpp"
#include "gempart/rational.hpp"

namespace gempart {

inline constexpr int kDefaultEnumerationCap = 12;

/// (x)_r = x (x+1) ... (x+r-1), (x)_0 = 1.
template <Scalar T>
T rising_factorial(const T& x, int r) {
  if (r < 0) {
    throw InvalidArgument("rising_factorial: r must be nonnegative");
  }
  if constexpr (!is_exact_v<T>) {
    // long products of positive factors go through log-gamma
    if (r > 64 && x > 0.0) {
      return std::exp(std::lgamma(x + r) - std::lgamma(x));
    }
  }
  T out(1);
  for (int i = 0; i < r; ++i) {
    out *= x + T(i);
  }
  return out;
}

/// (x)_r for any integer r, with (x)_{-m} = 1 / ((x-1)(x-2)...(x-m)).
template <Scalar T>
T pochhammer(const T& x, int r) {
  if (r >= 0) {
    return rising_factorial(x, r);
  }
  T denom(1);
  for (int i = 1; i <= -r; ++i) {
    const T f = x - T(i);
    if (f == T(0)) {
      throw InvalidArgument("pochhammer: pole at nonpositive integer");
    }
    denom *= f;
  }
  return T(1) / denom;
}

/// n! / prod n_i!. Throws InvalidArgument if the parts do not sum to n.
BigInt multinomial(int n, const Composition& parts);

BigInt factorial(int n);

/// Unsigned Stirling number of the first kind: permutations of [n] with k
/// cycles. Zero for k > n. Rows up to n = 64 are cached.
BigInt stirling_first_unsigned(int n, int k);

/// Unit-argument Gauss function with first parameter 1:
/// 2F1(1, a; b; 1) = sum_j (a)_j / (b)_j = (b-1)/(b-a-1), valid for b > a+1.
template <Scalar T>
T gauss_2f1_unit(const T& a, const T& b) {
  if (!(b > a + T(1))) {
    throw DivergentSeries("gauss_2f1_unit requires b > a + 1");
  }
  return (b - T(1)) / (b - a - T(1));
}

/// Compositions of n in index order (see composition_index):
/// (n), (n-1,1), (n-2,2), (n-2,1,1), ..., (1,...,1).
class CompositionStream {
 public:
  explicit CompositionStream(int n, int cap = kDefaultEnumerationCap);
  std::optional<Composition> next();

 private:
  int n_;
  std::size_t index_ = 0;
  std::size_t count_;
};

/// Set partitions of [n] in lexicographic order of their restricted growth
/// strings (element i goes to block a_i, a_1 = 0, a_i <= 1 + max prefix).
class SetPartitionStream {
 public:
  explicit SetPartitionStream(int n, int cap = kDefaultEnumerationCap);
  std::optional<SetPartition> next();

 private:
  int n_;
  std::vector<int> rgs_;
  std::vector<int> prefix_max_;
  bool done_ = false;
  bool started_ = false;
};

/// Ordered set partitions of [n] in lexicographic order of their block-index
/// strings (element i goes to block a_i; used values are exactly 0..k-1).
class OrderedSetPartitionStream {
 public:
  explicit OrderedSetPartitionStream(int n, int cap = kDefaultEnumerationCap);
  std::optional<OrderedSetPartition> next();

 private:
  bool advance();
  void fill_minimal_suffix(std::size_t from);

  int n_;
  std::vector<int> code_;
  bool done_ = false;
  bool started_ = false;
};

std::vector<Composition> all_compositions(int n, int cap = kDefaultEnumerationCap);

}  // namespace gempart
