#include "gempart/mathcore.hpp"

#include <algorithm>
#include <mutex>
#include <string>

namespace gempart {

namespace {

void check_enumeration_size(int n, int cap) {
  if (n < 1) {
    throw InvalidArgument("enumeration requires n >= 1");
  }
  if (n > cap) {
    throw CapExceeded("enumeration size n=" + std::to_string(n) + " exceeds cap " +
                      std::to_string(cap));
  }
}

constexpr int kStirlingCacheRows = 64;

const std::vector<std::vector<BigInt>>& stirling_cache() {
  static const std::vector<std::vector<BigInt>> table = [] {
    std::vector<std::vector<BigInt>> t(kStirlingCacheRows + 1);
    t[0] = {BigInt(1)};
    for (int n = 1; n <= kStirlingCacheRows; ++n) {
      t[n].assign(n + 1, BigInt(0));
      for (int k = 1; k <= n; ++k) {
        BigInt v = (k - 1 <= n - 1) ? t[n - 1][k - 1] : BigInt(0);
        if (k <= n - 1) v += BigInt(n - 1) * t[n - 1][k];
        t[n][k] = v;
      }
    }
    return t;
  }();
  return table;
}

}  // namespace

BigInt factorial(int n) {
  if (n < 0) throw InvalidArgument("factorial of negative number");
  BigInt out;
  mpz_fac_ui(out.get_mpz_t(), static_cast<unsigned long>(n));
  return out;
}

BigInt multinomial(int n, const Composition& parts) {
  if (parts.total() != n) {
    throw InvalidArgument("multinomial: parts sum to " + std::to_string(parts.total()) +
                          ", expected " + std::to_string(n));
  }
  BigInt out = factorial(n);
  for (int p : parts) {
    out /= factorial(p);
  }
  return out;
}

BigInt stirling_first_unsigned(int n, int k) {
  if (n < 0 || k < 0) {
    throw InvalidArgument("stirling_first_unsigned: negative argument");
  }
  if (k > n) return BigInt(0);
  if (n <= kStirlingCacheRows) {
    return stirling_cache()[n][k];
  }
  std::vector<BigInt> row = stirling_cache()[kStirlingCacheRows];
  for (int m = kStirlingCacheRows + 1; m <= n; ++m) {
    std::vector<BigInt> next(m + 1, BigInt(0));
    for (int j = 1; j <= m; ++j) {
      BigInt v = row[j - 1];
      if (j <= m - 1) v += BigInt(m - 1) * row[j];
      next[j] = v;
    }
    row = std::move(next);
  }
  return row[k];
}

CompositionStream::CompositionStream(int n, int cap) : n_(n) {
  check_enumeration_size(n, cap);
  count_ = std::size_t{1} << (n - 1);
}

std::optional<Composition> CompositionStream::next() {
  if (index_ >= count_) return std::nullopt;
  return composition_from_index(n_, index_++);
}

SetPartitionStream::SetPartitionStream(int n, int cap) : n_(n) {
  check_enumeration_size(n, cap);
  rgs_.assign(n, 0);
  prefix_max_.assign(n, 0);
}

std::optional<SetPartition> SetPartitionStream::next() {
  if (done_) return std::nullopt;
  if (started_) {
    // rightmost position that can still grow: a_i <= 1 + max(a_1..a_{i-1})
    int i = n_ - 1;
    while (i > 0 && rgs_[i] > prefix_max_[i - 1]) --i;
    if (i == 0) {
      done_ = true;
      return std::nullopt;
    }
    ++rgs_[i];
    prefix_max_[i] = std::max(prefix_max_[i - 1], rgs_[i]);
    for (int j = i + 1; j < n_; ++j) {
      rgs_[j] = 0;
      prefix_max_[j] = prefix_max_[i];
    }
  }
  started_ = true;
  SetPartition out;
  out.n = n_;
  out.blocks.resize(static_cast<std::size_t>(prefix_max_[n_ - 1]) + 1);
  for (int e = 0; e < n_; ++e) {
    out.blocks[rgs_[e]].push_back(e + 1);
  }
  return out;
}

OrderedSetPartitionStream::OrderedSetPartitionStream(int n, int cap) : n_(n) {
  check_enumeration_size(n, cap);
  code_.assign(n, 0);
}

void OrderedSetPartitionStream::fill_minimal_suffix(std::size_t from) {
  // Smallest completion: the missing block indices must all appear, the
  // remaining slots take the smallest value 0.
  int max_used = -1;
  std::vector<bool> used(n_, false);
  for (std::size_t i = 0; i < from; ++i) {
    used[code_[i]] = true;
    max_used = std::max(max_used, code_[i]);
  }
  std::vector<int> missing;
  for (int v = 0; v <= max_used; ++v) {
    if (!used[v]) missing.push_back(v);
  }
  const std::size_t slots = static_cast<std::size_t>(n_) - from;
  std::vector<int> tail(slots - missing.size(), 0);
  tail.insert(tail.end(), missing.begin(), missing.end());
  std::sort(tail.begin(), tail.end());
  std::copy(tail.begin(), tail.end(), code_.begin() + static_cast<std::ptrdiff_t>(from));
}

bool OrderedSetPartitionStream::advance() {
  for (int i = n_ - 1; i >= 0; --i) {
    std::vector<bool> used(n_, false);
    int max_used = -1;
    for (int j = 0; j < i; ++j) {
      used[code_[j]] = true;
      max_used = std::max(max_used, code_[j]);
    }
    for (int v = code_[i] + 1; v < n_; ++v) {
      const int new_max = std::max(max_used, v);
      int missing = 0;
      for (int u = 0; u <= new_max; ++u) {
        if (!used[u] && u != v) ++missing;
      }
      if (missing > n_ - 1 - i) continue;
      code_[i] = v;
      fill_minimal_suffix(static_cast<std::size_t>(i) + 1);
      return true;
    }
  }
  return false;
}

std::optional<OrderedSetPartition> OrderedSetPartitionStream::next() {
  if (done_) return std::nullopt;
  if (started_ && !advance()) {
    done_ = true;
    return std::nullopt;
  }
  started_ = true;
  OrderedSetPartition out;
  out.n = n_;
  const int k = *std::max_element(code_.begin(), code_.end()) + 1;
  out.blocks.resize(k);
  for (int e = 0; e < n_; ++e) {
    out.blocks[code_[e]].push_back(e + 1);
  }
  return out;
}

std::vector<Composition> all_compositions(int n, int cap) {
  std::vector<Composition> out;
  CompositionStream stream(n, cap);
  while (auto c = stream.next()) out.push_back(std::move(*c));
  return out;
}

}  // namespace gempart
