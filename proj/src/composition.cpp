#include "gempart/composition.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <numeric>

#include "gempart/errors.hpp"

namespace gempart {

Composition::Composition(std::vector<int> parts) : parts_(std::move(parts)) {
  for (int p : parts_) {
    if (p < 1) {
      throw InvalidArgument("composition parts must be positive");
    }
    total_ += p;
  }
}

Composition Composition::parse(std::string_view text) {
  std::vector<int> parts;
  std::string cleaned;
  for (char ch : text) {
    if (ch != ' ' && ch != '(' && ch != ')' && ch != '\t') {
      cleaned.push_back(ch);
    }
  }
  if (cleaned.empty()) {
    return Composition{};
  }
  std::size_t pos = 0;
  while (pos <= cleaned.size()) {
    std::size_t next = cleaned.find(',', pos);
    if (next == std::string::npos) {
      next = cleaned.size();
    }
    int value = 0;
    const char* first = cleaned.data() + pos;
    const char* last = cleaned.data() + next;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
      throw InvalidArgument("malformed composition: '" + std::string(text) + "'");
    }
    parts.push_back(value);
    pos = next + 1;
  }
  return Composition(std::move(parts));
}

bool Composition::is_weakly_decreasing() const {
  return std::is_sorted(parts_.begin(), parts_.end(), std::greater<>());
}

Composition Composition::ranked() const {
  std::vector<int> p = parts_;
  std::sort(p.begin(), p.end(), std::greater<>());
  return Composition(std::move(p));
}

Composition Composition::with_inserted_one(std::size_t j) const {
  std::vector<int> p = parts_;
  p.insert(p.begin() + static_cast<std::ptrdiff_t>(j), 1);
  return Composition(std::move(p));
}

Composition Composition::with_incremented(std::size_t j) const {
  std::vector<int> p = parts_;
  ++p.at(j);
  return Composition(std::move(p));
}

Composition Composition::suffix(std::size_t j) const {
  return Composition(std::vector<int>(parts_.begin() + static_cast<std::ptrdiff_t>(j), parts_.end()));
}

std::string Composition::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i) out.push_back(',');
    out += std::to_string(parts_[i]);
  }
  return out;
}

std::size_t composition_index(const Composition& c) {
  if (c.total() < 1) {
    throw InvalidArgument("composition_index needs n >= 1");
  }
  const int n = c.total();
  if (n > 63) {
    throw RangeError("composition_index supports n <= 63");
  }
  std::size_t index = 0;
  int position = 0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    position += c[i];
    index |= std::size_t{1} << (n - 1 - position);
  }
  return index;
}

Composition composition_from_index(int n, std::size_t index) {
  if (n < 1 || n > 63) {
    throw RangeError("composition_from_index supports 1 <= n <= 63");
  }
  if (index >> (n - 1) != 0) {
    throw RangeError("composition index out of range");
  }
  std::vector<int> parts;
  int run = 1;
  for (int position = 1; position < n; ++position) {
    if ((index >> (n - 1 - position)) & 1U) {
      parts.push_back(run);
      run = 1;
    } else {
      ++run;
    }
  }
  parts.push_back(run);
  return Composition(std::move(parts));
}

Composition SetPartition::sizes() const {
  std::vector<int> s;
  s.reserve(blocks.size());
  for (const auto& b : blocks) s.push_back(static_cast<int>(b.size()));
  return Composition(std::move(s));
}

Composition OrderedSetPartition::sizes() const {
  std::vector<int> s;
  s.reserve(blocks.size());
  for (const auto& b : blocks) s.push_back(static_cast<int>(b.size()));
  return Composition(std::move(s));
}

SetPartition OrderedSetPartition::unordered() const {
  SetPartition out{n, blocks};
  std::sort(out.blocks.begin(), out.blocks.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

}  // namespace gempart
