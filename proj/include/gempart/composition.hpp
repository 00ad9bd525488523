#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gempart {

/// Ordered sequence of positive parts (n_1, ..., n_k) summing to n.
/// The empty composition is the unique composition of 0.
class Composition {
 public:
  Composition() = default;
  explicit Composition(std::vector<int> parts);
  Composition(std::initializer_list<int> parts) : Composition(std::vector<int>(parts)) {}

  /// Parses "2,1" (whitespace tolerated, optional surrounding parentheses).
  static Composition parse(std::string_view text);

  std::span<const int> parts() const { return parts_; }
  const std::vector<int>& vec() const { return parts_; }
  int operator[](std::size_t i) const { return parts_[i]; }
  std::size_t size() const { return parts_.size(); }
  int total() const { return total_; }
  bool empty() const { return parts_.empty(); }
  auto begin() const { return parts_.begin(); }
  auto end() const { return parts_.end(); }

  bool is_weakly_decreasing() const;
  /// Weakly decreasing rearrangement.
  Composition ranked() const;
  /// Copy with a 1 inserted before position j (0 <= j <= size()).
  Composition with_inserted_one(std::size_t j) const;
  /// Copy with part j incremented.
  Composition with_incremented(std::size_t j) const;
  /// Parts j, j+1, ..., k-1.
  Composition suffix(std::size_t j) const;

  /// "2,1"; the empty composition renders as "".
  std::string to_string() const;

  friend bool operator==(const Composition&, const Composition&) = default;
  friend auto operator<=>(const Composition& a, const Composition& b) { return a.parts_ <=> b.parts_; }

 private:
  std::vector<int> parts_;
  int total_ = 0;
};

/// Bijection between compositions of n >= 1 and [0, 2^{n-1}): bit i (from
/// the most significant of n-1 bits) is set iff there is a cut after
/// element i+1. Index order is the enumeration order: (n), (n-1,1), ..., (1,...,1).
std::size_t composition_index(const Composition& c);
Composition composition_from_index(int n, std::size_t index);

/// Partition of [n] = {1..n} into blocks; blocks listed by least element,
/// elements ascending within a block.
struct SetPartition {
  int n = 0;
  std::vector<std::vector<int>> blocks;

  Composition sizes() const;
  friend bool operator==(const SetPartition&, const SetPartition&) = default;
};

/// Partition of [n] with an explicit block order.
struct OrderedSetPartition {
  int n = 0;
  std::vector<std::vector<int>> blocks;

  Composition sizes() const;
  /// Forgets the order: blocks re-sorted by least element.
  SetPartition unordered() const;
  friend bool operator==(const OrderedSetPartition&, const OrderedSetPartition&) = default;
};

}  // namespace gempart
