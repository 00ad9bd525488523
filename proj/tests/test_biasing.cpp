#include <doctest.h>

#include <map>

#include "gempart/biasing.hpp"
#include "gempart/errors.hpp"
#include "gempart/mathcore.hpp"

using namespace gempart;

namespace {

Rational total_over_permutations(const Composition& c, const PseudoSize<Rational>& ps) {
  Rational s(0);
  for (const auto& sigma : all_permutations(c.size())) s += permutation_probability(c, sigma, ps);
  return s;
}

}  // namespace

TEST_CASE("pseudo-size kinds") {
  CHECK(PseudoSize<Rational>::size()(5, 3) == Rational(3));
  CHECK(PseudoSize<Rational>::size_minus_alpha(Rational(1, 2))(5, 3) == Rational(5, 2));
  CHECK(PseudoSize<Rational>::constant_one()(5, 3) == Rational(1));
  // alpha (nu - m) + theta m
  CHECK(PseudoSize<Rational>::regenerative(Rational(1, 2), Rational(2))(5, 3) == Rational(7));
  CHECK(PseudoSize<Rational>::regenerative(Rational(1, 2), Rational(2)).is_general());
  CHECK_FALSE(PseudoSize<Rational>::size().is_general());
  const auto custom = PseudoSize<Rational>::custom({{1, Rational(2)}, {2, Rational(1)}});
  CHECK(custom(3, 1) == Rational(2));
  CHECK_THROWS_AS(custom(3, 3), RangeError);
  CHECK_THROWS_AS(PseudoSize<Rational>::size()(2, 3), RangeError);
  CHECK_THROWS_AS(PseudoSize<Rational>::size_minus_alpha(Rational(1)), InvalidArgument);
  // theta = 0 makes the weight of a full-universe part zero
  CHECK_THROWS_AS(PseudoSize<Rational>::regenerative(Rational(1, 2), Rational(0))(3, 3), NonPositivePseudoSize);
}

TEST_CASE("s_tilde values") {
  const auto size = PseudoSize<Rational>::size();
  CHECK(s_tilde(Composition{2, 1}, size) == Rational(2, 3));
  CHECK(s_tilde(Composition{1, 2}, size) == Rational(1, 3));
  CHECK(s_tilde(Composition{3}, size) == Rational(1));
  const auto sma = PseudoSize<Rational>::size_minus_alpha(Rational(1, 2));
  CHECK(s_tilde(Composition{2, 1}, sma) == Rational(3, 4));
  CHECK(s_tilde(Composition{1, 1, 1}, PseudoSize<Rational>::constant_one()) == Rational(1, 6));
}

TEST_CASE("permutation probabilities sum to one") {
  const std::vector<PseudoSize<Rational>> sizes{
      PseudoSize<Rational>::size(), PseudoSize<Rational>::size_minus_alpha(Rational(1, 3)),
      PseudoSize<Rational>::constant_one(), PseudoSize<Rational>::regenerative(Rational(1, 2), Rational(3, 2))};
  for (const auto& ps : sizes) {
    for (int n = 1; n <= 6; ++n) {
      for (const auto& c : all_compositions(n)) CHECK(total_over_permutations(c, ps) == Rational(1));
    }
  }
}

TEST_CASE("permutations and h_alpha") {
  const Permutation p(std::vector<int>{2, 0, 1});
  CHECK(p.apply(Composition{5, 6, 7}) == Composition{7, 5, 6});
  CHECK(p.inverse().apply(p.apply(Composition{5, 6, 7})) == Composition{5, 6, 7});
  CHECK(Permutation::identity(3).is_identity());
  CHECK_THROWS_AS(Permutation(std::vector<int>{0, 0}), InvalidArgument);
  CHECK(all_permutations(4).size() == 24);
  CHECK(h_alpha(Composition{3, 1}, Rational(1, 2)) == Rational(5, 6));
  CHECK(h_alpha(Composition{2, 2}, Rational(0)) == Rational(1, 2));
}

TEST_CASE("sampled biased permutations follow permutation_probability") {
  const std::vector<int> sizes{3, 1, 2};
  const Composition c(sizes);
  const auto ps = PseudoSize<Rational>::size_minus_alpha(Rational(1, 2));
  Rng rng(11);
  std::map<Permutation, long> counts;
  const long reps = 200000;
  for (long i = 0; i < reps; ++i) ++counts[s_biased_permutation(sizes, ps, rng)];
  for (const auto& sigma : all_permutations(3)) {
    const double p = to_double(permutation_probability(c, sigma, ps));
    const double z = (counts[sigma] - reps * p) / std::sqrt(reps * p * (1 - p));
    CHECK(std::fabs(z) < 4.5);
  }
}
