#include "gempart/biasing.hpp"

namespace gempart {

std::vector<Permutation> all_permutations(std::size_t k) {
  std::vector<int> m(k);
  std::iota(m.begin(), m.end(), 0);
  std::vector<Permutation> out;
  do {
    out.emplace_back(m);
  } while (std::next_permutation(m.begin(), m.end()));
  return out;
}

}  // namespace gempart
