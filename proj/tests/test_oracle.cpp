#include <doctest.h>

#include <cmath>

#include "gempart/errors.hpp"
#include "gempart/oracle.hpp"

using namespace gempart;

namespace {

using Q = Rational;

GibbsWeights<Q> gem(Q a, Q t) { return GibbsWeights<Q>::gem(GemParams<Q>(a, t)); }

const std::vector<std::pair<Q, Q>>& grid() {
  static const std::vector<std::pair<Q, Q>> g{{Q(0), Q(1, 2)},    {Q(0), Q(1)},    {Q(0), Q(5)},
                                              {Q(1, 2), Q(1, 2)}, {Q(1, 2), Q(0)}, {Q(1, 3), Q(2)}};
  return g;
}

}  // namespace

TEST_CASE("enumerated appearance laws match the closed form") {
  for (const auto& [a, t] : grid()) {
    const auto w = gem(a, t);
    for (int n = 1; n <= 7; ++n) {
      const auto by_bias = exact_appearance_distribution(w, n);
      const auto by_first = exact_appearance_distribution_by_first_occurrence(w, n);
      CHECK(by_bias.total() == Q(1));
      CHECK(by_first.total() == Q(1));
      for (const auto& c : all_compositions(n)) {
        CHECK(by_bias.at(c) == appearance_pmf(w, c));
        CHECK(by_first.at(c) == appearance_pmf(w, c));
      }
    }
  }
}

TEST_CASE("value DP matches the closed form") {
  for (const auto& [a, t] : grid()) {
    const auto w = gem(a, t);
    const auto layers = value_dp_layers(w, 7);
    REQUIRE(layers.size() == 7);
    for (int n = 1; n <= 7; ++n) {
      CHECK(layers[n - 1].n == n);
      CHECK(layers[n - 1].total() == Q(1));
      for (const auto& c : all_compositions(n)) CHECK(layers[n - 1].at(c) == value_ordered_pmf(w, c));
    }
  }
  const auto w = gem(Q(1, 2), Q(1, 2));
  const auto three = exact_value_distribution_dp(w, 3);
  CHECK(three.at(Composition{2, 1}) == Q(3, 10));
  CHECK(exact_value_distribution_dp(w, 1).at(Composition{1}) == Q(1));
  CHECK_THROWS_AS(exact_value_distribution_dp(w, 15), CapExceeded);
  CHECK_THROWS_AS(exact_value_distribution_dp(w, 0), InvalidArgument);
}

TEST_CASE("stick-series value pmf agrees with the closed form") {
  for (const auto& [a, t] : grid()) {
    const auto w = gem(a, t);
    const GemParams<double> p(to_double(a), to_double(t));
    double worst = 0.0;
    for (int n = 1; n <= 7; ++n) {
      for (const auto& c : all_compositions(n)) {
        const double exact = to_double(value_ordered_pmf(w, c));
        worst = std::max(worst, std::fabs(recursive_value_pmf(p, c) - exact) / exact);
      }
    }
    CHECK(worst < 1e-9);
  }
  CHECK(single_value_probability(GemParams<double>(0.0, 1.0), 3) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("discovery time laws") {
  // theta = 1: P(M_2 = n) = 1 / (n (n - 1))
  for (int n = 2; n <= 10; ++n) CHECK(mk_pmf<Q>(Q(1), 2, n) == Q(1, n * (n - 1)));
  CHECK(mk_pmf<Q>(Q(1), 1, 1) == Q(1));
  CHECK(mk_pmf<Q>(Q(1), 1, 2) == Q(0));
  CHECK(mk_pmf<Q>(Q(2), 4, 3) == Q(0));
  CHECK_THROWS_AS(mk_pmf<Q>(Q(0), 1, 1), InvalidArgument);

  CHECK(inv_pochhammer_moment<Q>(Q(3), 1, 1) == Q(1, 4));
  CHECK(inv_pochhammer_moment<Q>(Q(1), 1, 2) == Q(1, 6));
  CHECK(inv_pochhammer_moment_real(1.0, 2, 1.0) == doctest::Approx(0.25));
  CHECK(inv_pochhammer_moment_real(2.0, 3, 1.5) ==
        doctest::Approx(2.0 * 2.0 / std::pow(3.5, 3) * std::tgamma(3.0) / std::tgamma(3.5)));

  CHECK(mx_pmf<Q>(Q(1), 1) == Q(1, 2));
  Q total(0);
  for (int n = 1; n <= 30; ++n) total += mx_pmf<Q>(Q(3, 2), n);
  CHECK(total == Q(1) - mx_survival<Q>(GemParams<Q>(Q(0), Q(3, 2)), 30));
  CHECK(mx_survival<Q>(GemParams<Q>(Q(1, 2), Q(1, 2)), 0) == Q(1));

  CHECK(expected_frequency<Q>(GemParams<Q>(Q(1, 2), Q(1, 2)), 1) == Q(1, 3));
  CHECK(expected_frequency<Q>(GemParams<Q>(Q(0), Q(1)), 3) == Q(1, 8));
  Q mass(0);
  for (int k = 1; k <= 60; ++k) mass += expected_frequency<Q>(GemParams<Q>(Q(0), Q(1)), k);
  CHECK(Q(1) - mass == Q(1) / Q(BigInt(1) << 60));
}

TEST_CASE("dyadic law of M_k sums to one and matches the pmf") {
  for (double theta : {0.5, 1.0, 2.0}) {
    for (int k = 1; k <= 4; ++k) {
      const auto law = mk_dyadic_law(theta, k, 20);
      double s = 0.0;
      for (double p : law) s += p;
      CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
      double first = 0.0;  // bins [1,2) and [2,4)
      for (int n = 1; n <= 3; ++n) first += to_double(mk_pmf<Q>(from_double<Q>(theta), k, n));
      CHECK(law[0] + law[1] == doctest::Approx(first).epsilon(1e-12));
    }
  }
}

TEST_CASE("discovery series brackets the identities") {
  const auto s = discovery_series(2.0, 3, 2, 1e-10);
  for (int k = 1; k <= 3; ++k) {
    const double target = std::pow(2.0, k - 1) / std::pow(3.0, k);
    CHECK(s.sum[k - 1][0] <= target + 1e-14);
    CHECK(s.sum[k - 1][0] + s.bound[k - 1][0] >= target - 1e-14);
    CHECK(s.bound[k - 1][0] < 1e-10);
    CHECK(s.mass[k - 1] == doctest::Approx(1.0).epsilon(1e-4));
  }
  CHECK_THROWS_AS(discovery_series(1.0, 9, 1, 1e-6), InvalidArgument);
}

TEST_CASE("nkident Monte Carlo at alpha = 0, theta = 1") {
  const auto est = nkident_check(GemParams<double>(0.0, 1.0), 3, 100000, 5, 1e-4, 2);
  CHECK(est.lhs[0] == doctest::Approx(0.5));
  CHECK(est.lhs[2] == doctest::Approx(0.125));
  CHECK(est.censored == 0);
  for (int k = 0; k < 3; ++k) CHECK(std::fabs(est.lhs[k] - est.rhs[k]) <= 3 * est.std_error[k] + 1e-4);
  CHECK(est.truncation < 1e-4);
}
