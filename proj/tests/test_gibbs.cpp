#include <doctest.h>

#include "gempart/errors.hpp"
#include "gempart/gibbs.hpp"
#include "gempart/mathcore.hpp"

using namespace gempart;

namespace {

using Q = Rational;

GibbsWeights<Q> gem(Q a, Q t, int n_max = 64) { return GibbsWeights<Q>::gem(GemParams<Q>(a, t), n_max); }

const std::vector<std::pair<Q, Q>>& grid() {
  static const std::vector<std::pair<Q, Q>> g{{Q(0), Q(1, 2)},    {Q(0), Q(1)},    {Q(0), Q(5)},
                                              {Q(1, 2), Q(1, 2)}, {Q(1, 2), Q(0)}, {Q(1, 3), Q(2)}};
  return g;
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(GemParams<Q>(Q(1, 2), Q(-1, 4)));
  CHECK_THROWS_AS(GemParams<Q>(Q(1), Q(1)), InvalidArgument);
  CHECK_THROWS_AS(GemParams<Q>(Q(-1, 2), Q(1)), InvalidArgument);
  CHECK_THROWS_AS(GemParams<Q>(Q(1, 2), Q(-1, 2)), InvalidArgument);
  CHECK_THROWS_AS(GemParams<double>(0.0, 0.0), InvalidArgument);
  CHECK(GemParams<Q>(Q(1, 2), Q(0)).regenerative_compatible());
  CHECK_FALSE(GemParams<Q>(Q(1, 2), Q(-1, 4)).regenerative_compatible());
}

TEST_CASE("GEM weights") {
  const auto w = gem(Q(1, 2), Q(1, 2));
  CHECK(w.V(1, 1) == Q(1));
  CHECK(w.provenance() == Provenance::Gem);
  CHECK(to_string(w.provenance()) == "GEM");
  // V_{2:3} = (theta + alpha) / ((theta + 1)(theta + 2))
  CHECK(w.V(2, 3) == Q(4, 15));
  CHECK(w.discovery_prob(2, 3) == Q(3, 7));
  CHECK_FALSE(w.consistency_violation().has_value());
  const auto small = gem(Q(1, 2), Q(1, 2), 8);
  CHECK(small.V(3, 20) == w.V(3, 20));
  CHECK_THROWS_AS(w.V(3, 2), RangeError);
}

TEST_CASE("imported weight tables are validated") {
  const auto w = gem(Q(1, 3), Q(2), 6);
  std::vector<std::vector<Q>> rows;
  for (int n = 1; n <= 6; ++n) {
    rows.emplace_back();
    for (int k = 1; k <= n; ++k) rows.back().push_back(w.V(k, n));
  }
  const auto imported = GibbsWeights<Q>::from_table(Q(1, 3), rows);
  CHECK(imported.provenance() == Provenance::UserSupplied);
  CHECK(imported.V(4, 6) == w.V(4, 6));
  CHECK(imported.discovery_prob(2, 4) == w.discovery_prob(2, 4));
  CHECK_THROWS_AS(imported.V(1, 7), RangeError);
  CHECK_THROWS_AS(imported.discovery_prob(1, 6), RangeError);

  auto broken = rows;
  broken[3][1] += Q(1, 1000);
  CHECK_THROWS_AS(GibbsWeights<Q>::from_table(Q(1, 3), broken), ConsistencyError);
  auto unnormalized = rows;
  unnormalized[0][0] = Q(2);
  CHECK_THROWS_AS(GibbsWeights<Q>::from_table(Q(1, 3), unnormalized), InvalidArgument);
  auto ragged = rows;
  ragged[2].pop_back();
  CHECK_THROWS_AS(GibbsWeights<Q>::from_table(Q(1, 3), ragged), InvalidArgument);
}

TEST_CASE("EPPF examples and normalization over set partitions") {
  const auto w = gem(Q(0), Q(1));
  CHECK(eppf(w, Composition{2}) == Q(1, 2));
  CHECK(eppf(w, Composition{1, 1}) == Q(1, 2));
  for (const auto& [a, t] : grid()) {
    const auto g = gem(a, t);
    for (int n = 1; n <= 7; ++n) {
      Q total(0);
      SetPartitionStream stream(n);
      while (auto p = stream.next()) total += eppf(g, p->sizes());
      CHECK(total == Q(1));
    }
  }
}

TEST_CASE("appearance and value laws at alpha = theta = 1/2, n = 3") {
  const auto w = gem(Q(1, 2), Q(1, 2));
  const std::vector<Composition> cs{{3}, {2, 1}, {1, 2}, {1, 1, 1}};
  const std::vector<Q> value{Q(1, 5), Q(3, 10), Q(1, 10), Q(2, 5)};
  const std::vector<Q> appearance{Q(1, 5), Q(4, 15), Q(2, 15), Q(2, 5)};
  for (std::size_t i = 0; i < cs.size(); ++i) {
    CHECK(value_ordered_pmf(w, cs[i]) == value[i]);
    CHECK(appearance_pmf(w, cs[i]) == appearance[i]);
  }
  CHECK(value_ordered_pmf(w, Composition{2, 1}) - appearance_pmf(w, Composition{2, 1}) == Q(1, 30));
  CHECK(ranked_pmf(w, Composition{2, 1}) == Q(2, 5));
  CHECK(ranked_pmf(w, Composition{2, 1}, RankedRoute::AppearanceOrder) == Q(2, 5));
  CHECK_THROWS_AS(ranked_pmf(w, Composition{1, 2}), InvalidArgument);
}

TEST_CASE("ordered laws are normalized and rank to the same law") {
  for (const auto& [a, t] : grid()) {
    const auto w = gem(a, t);
    for (int n = 1; n <= 7; ++n) {
      Q v(0), s(0), r(0);
      for (const auto& c : all_compositions(n)) {
        v += value_ordered_pmf(w, c);
        s += appearance_pmf(w, c);
        if (c.is_weakly_decreasing()) {
          CHECK(ranked_pmf(w, c) == ranked_pmf(w, c, RankedRoute::AppearanceOrder));
          r += ranked_pmf(w, c);
        }
      }
      CHECK(v == Q(1));
      CHECK(s == Q(1));
      CHECK(r == Q(1));
    }
  }
}

TEST_CASE("value and appearance laws agree at alpha = 0") {
  for (const auto& t : {Q(1, 2), Q(1), Q(5)}) {
    const auto w = gem(Q(0), t);
    for (int n = 1; n <= 7; ++n) {
      for (const auto& c : all_compositions(n)) CHECK(value_ordered_pmf(w, c) == appearance_pmf(w, c));
    }
  }
}

TEST_CASE("value-ordered restaurant transitions") {
  const auto w = gem(Q(1, 2), Q(1, 2));
  const auto tr = ocrp_transitions(w, Composition{2, 1});
  REQUIRE(tr.insert.size() == 3);
  REQUIRE(tr.join.size() == 2);
  CHECK(tr.insert[0] == Q(3, 35));
  CHECK(tr.insert[1] == Q(6, 35));
  CHECK(tr.insert[2] == Q(6, 35));
  CHECK(tr.join[0] == Q(10, 21));
  CHECK(tr.join[1] == Q(2, 21));
  CHECK(tr.total() == Q(1));
  CHECK(ocrp_transitions(w, Composition{1}).total() == Q(1));
  CHECK_THROWS_AS(ocrp_transitions(w, Composition{}), InvalidArgument);

  for (const auto& [a, t] : grid()) {
    const auto g = gem(a, t);
    for (int n = 1; n <= 7; ++n) {
      for (const auto& c : all_compositions(n)) {
        const auto x = ocrp_transitions(g, c);
        CHECK(x.total() == Q(1));
        Q new_table(0);
        for (const auto& p : x.insert) new_table += p;
        CHECK(new_table == g.discovery_prob(static_cast<int>(c.size()), n));
      }
    }
  }
}

TEST_CASE("floating weights track the exact ones") {
  const auto w = gem(Q(1, 3), Q(2));
  const auto d = w.to_double();
  for (const auto& c : all_compositions(6)) {
    CHECK(value_ordered_pmf(d, c) == doctest::Approx(to_double(value_ordered_pmf(w, c))).epsilon(1e-12));
  }
}
