#include <doctest.h>

#include <bit>
#include <cmath>
#include <map>

#include "gempart/errors.hpp"
#include "gempart/oracle.hpp"
#include "gempart/parallel.hpp"
#include "gempart/samplers.hpp"
#include "gempart/verify.hpp"

using namespace gempart;

namespace {

using Q = Rational;

std::vector<double> law_of(int n, const GibbsWeights<Q>& w, bool value_order) {
  std::vector<double> p(std::size_t{1} << (n - 1));
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto c = composition_from_index(n, i);
    p[i] = to_double(value_order ? value_ordered_pmf(w, c) : appearance_pmf(w, c));
  }
  return p;
}

std::size_t dyadic(long m) { return static_cast<std::size_t>(std::bit_width(static_cast<unsigned long>(m)) - 1); }

}  // namespace

TEST_CASE("frequency stream") {
  Rng rng(3);
  FrequencyStream fs(GemParams<double>(0.5, 0.5), rng);
  fs.extend(50);
  REQUIRE(fs.size() == 50);
  double sum = 0.0;
  for (std::size_t j = 0; j < fs.size(); ++j) {
    CHECK(fs.frequency(j) > 0.0);
    sum += fs.frequency(j);
    CHECK(1.0 - sum == doctest::Approx(fs.remainder_after(j + 1)).epsilon(1e-9));
  }
  CHECK(fs.remainder() == fs.remainder_after(50));
  CHECK(fs.locate(0.0) == 1);
  const double u = fs.frequency(0) + 0.5 * fs.frequency(1);
  CHECK(fs.locate(u) == 2);

  Rng a(9), b(9);
  auto fa = stick_breaking(GemParams<double>(0.3, 1.0), a);
  auto fb = stick_breaking(GemParams<double>(0.3, 1.0), b);
  fa.extend(20);
  fb.extend(20);
  CHECK(fa.frequencies() == fb.frequencies());
}

TEST_CASE("stick cap") {
  Rng rng(1);
  FrequencyStream fs(GemParams<double>(0.0, 1.0), rng, 5);
  CHECK_THROWS_AS(fs.extend(6), CapExceeded);
}

TEST_CASE("sample trace orderings") {
  const SampleTrace t(std::vector<long>{3, 1, 3, 2});
  CHECK(t.num_values() == 3);
  CHECK(t.n_star() == Composition{2, 1, 1});
  CHECK(t.n_up() == Composition{1, 1, 2});
  CHECK(t.n_down() == Composition{2, 1, 1});
  CHECK(t.partition().blocks == std::vector<std::vector<int>>{{1, 3}, {2}, {4}});
  CHECK(t.value_partition().blocks == std::vector<std::vector<int>>{{2}, {4}, {1, 3}});
  CHECK_THROWS_AS(SampleTrace(std::vector<long>{1, 0}), InvalidArgument);
}

TEST_CASE("discovery statistics") {
  const auto rec = discovery_stats(SampleTrace(std::vector<long>{3, 1, 3, 2, 1}));
  CHECK(rec.delta == std::vector<int>{1, 1, 0, 1, 0});
  CHECK(rec.lower == std::vector<int>{1, 1, 0, 0, 0});
  CHECK(rec.discovery_times == std::vector<long>{1, 2, 4});
  CHECK(rec.x_index == 2);
  CHECK(rec.x_time == 2);
  CHECK(p_alpha(3, 2, 0.5) == doctest::Approx(0.25));
}

TEST_CASE("OCRP runs are self-consistent") {
  const auto w = GibbsWeights<double>::gem(GemParams<double>(0.5, 0.5));
  Rng rng(4);
  for (int rep = 0; rep < 200; ++rep) {
    const auto run = ocrp_run(w, 7, rng);
    REQUIRE(run.trajectory.size() == 7);
    CHECK(run.trajectory.back() == run.trace.n_up());
    CHECK(run.ordered_partition().sizes() == run.trace.n_up());
    for (int m = 0; m < 7; ++m) CHECK(run.trajectory[m].total() == m + 1);
  }
}

TEST_CASE("samplers reproduce the exact laws at n = 3") {
  const auto wq = GibbsWeights<Q>::gem(GemParams<Q>(Q(1, 2), Q(1, 2)));
  const auto w = wq.to_double();
  const auto value = law_of(3, wq, true);
  const auto appearance = law_of(3, wq, false);
  const long reps = 200000;
  auto run = [&](std::uint64_t job, auto draw) {
    return run_blocks(17, job, reps, 2, Counts(4), [&](Rng& rng, long count, Counts& out) {
      for (long i = 0; i < count; ++i) ++out.bins[composition_index(draw(rng))];
    });
  };
  const auto pb = run(1, [&](Rng& rng) {
    auto fs = stick_breaking(GemParams<double>(0.5, 0.5), rng);
    return paintbox_sample(fs, 3, rng).n_up();
  });
  const auto crp = run(2, [&](Rng& rng) { return crp_run(w, 3, rng).n_star(); });
  const auto ocrp = run(3, [&](Rng& rng) { return ocrp_run(w, 3, rng).trace.n_up(); });
  CHECK(tv_distance(value, pb.bins) < 0.01);
  CHECK(tv_distance(appearance, crp.bins) < 0.01);
  CHECK(tv_distance(value, ocrp.bins) < 0.01);
  // the value law is detectably different from the appearance law
  CHECK(tv_distance(appearance, pb.bins) > 0.02);
}

TEST_CASE("alpha = 0: empirical value-order and appearance-order laws coincide") {
  for (double theta : {0.5, 1.0, 5.0}) {
    const GemParams<double> p(0.0, theta);
    struct Pair {
      Counts up{32}, star{32};
      void merge(const Pair& o) {
        up.merge(o.up);
        star.merge(o.star);
      }
    };
    const auto acc = run_blocks(23, hash_name("dt"), 1'000'000, 0, Pair{}, [&](Rng& rng, long count, Pair& out) {
      for (long i = 0; i < count; ++i) {
        auto fs = stick_breaking(p, rng);
        const auto t = paintbox_sample(fs, 6, rng);
        ++out.up.bins[composition_index(t.n_up())];
        ++out.star.bins[composition_index(t.n_star())];
      }
    });
    std::vector<double> star(32);
    for (int i = 0; i < 32; ++i) star[i] = static_cast<double>(acc.star.bins[i]) / acc.star.total();
    CHECK(tv_distance(star, acc.up.bins) < 0.005);
  }
}

TEST_CASE("two-phase rediscovery order is a size-minus-alpha biased permutation") {
  const double alpha = 0.5;
  const auto w = GibbsWeights<double>::gem(GemParams<double>(alpha, 1.5));
  const Composition target{2, 1, 1};
  const auto ps = PseudoSize<Q>::size_minus_alpha(Q(1, 2));
  struct Acc {
    std::map<std::vector<int>, long> perms;
    long conditioned = 0;
    void merge(const Acc& o) {
      for (const auto& [k, v] : o.perms) perms[k] += v;
      conditioned += o.conditioned;
    }
  };
  const auto acc = run_blocks(31, 1, 1'200'000, 0, Acc{}, [&](Rng& rng, long count, Acc& out) {
    for (long i = 0; i < count; ++i) {
      const auto res = two_phase_sample(w, 4, rng, kDefaultRediscoveryCap, -1);
      if (res.primary.n_star() != target) continue;
      const auto order = res.order_of_tables();
      if (order.empty()) continue;
      ++out.perms[order];
      ++out.conditioned;
    }
  });
  REQUIRE(acc.conditioned >= 100000);
  for (const auto& sigma : all_permutations(3)) {
    const double p = to_double(permutation_probability(target, sigma, ps));
    const auto it = acc.perms.find(sigma.map());
    const double hits = it == acc.perms.end() ? 0.0 : static_cast<double>(it->second);
    const double z = (hits - acc.conditioned * p) / std::sqrt(acc.conditioned * p * (1 - p));
    CHECK(std::fabs(z) < 4.0);
  }
}

TEST_CASE("two-phase stopping rules and labels") {
  const auto w = GibbsWeights<double>::gem(GemParams<double>(0.0, 2.0));
  Rng rng(8);
  for (int rep = 0; rep < 300; ++rep) {
    const auto all = two_phase_sample(w, 6, rng);
    const int k = static_cast<int>(all.table_sizes.size());
    if (all.complete) {
      CHECK(static_cast<int>(all.rediscovery_order.size()) == k);
      const auto x = all.trace();
      CHECK(x.n_star() == all.primary.n_star());
      // labels increase along the rediscovery order
      for (std::size_t i = 1; i < all.rediscovery_order.size(); ++i) {
        CHECK(all.labels[all.rediscovery_order[i - 1]] < all.labels[all.rediscovery_order[i]]);
      }
      std::vector<int> by_label;
      for (int t : all.rediscovery_order) by_label.push_back(all.table_sizes[t]);
      CHECK(x.n_up() == Composition(by_label));
    }
    const auto first = two_phase_sample(w, 6, rng, kDefaultRediscoveryCap, 1);
    CHECK(first.rediscovery_order.size() == 1);
    CHECK(first.first_rediscovered() == first.rediscovery_order.front());
    const auto most = two_phase_sample(w, 6, rng, kDefaultRediscoveryCap, -1);
    const int km = static_cast<int>(most.table_sizes.size());
    CHECK(static_cast<int>(most.rediscovery_order.size()) == std::max(0, km - 1));
    CHECK(static_cast<int>(most.order_of_tables().size()) == km);
    if (km > 1) CHECK_THROWS_AS(most.trace(), RediscoveryTimeout);
  }
  CHECK_THROWS_AS(two_phase_sample(w, 6, rng, 5), InvalidArgument);
}

TEST_CASE("discovery index of the minimal value from paintbox traces") {
  // alpha = 0, theta = 1: P(X = k) = 2^{-k}
  constexpr int bins = 12;
  std::vector<double> law(bins);
  for (int k = 1; k < bins; ++k) law[k - 1] = std::ldexp(1.0, -k);
  law[bins - 1] = std::ldexp(1.0, -(bins - 1));
  const auto counts = run_blocks(5, 2, 100000, 0, Counts(bins), [&](Rng& rng, long count, Counts& out) {
    for (long i = 0; i < count; ++i) {
      auto fs = stick_breaking(GemParams<double>(0.0, 1.0), rng);
      std::vector<long> values;
      do {
        values.push_back(fs.locate(rng.uniform01()));
      } while (values.back() != 1 && values.size() < 1'000'000);
      const int x = discovery_stats(SampleTrace(values)).x_index;
      ++out.bins[std::min(x, bins) - 1];
    }
  });
  CHECK(tv_distance(law, counts.bins) < 0.01);
}

TEST_CASE("discovery sequence matches direct new-value indicators") {
  for (const auto& params : {GemParams<double>(0.0, 1.0), GemParams<double>(0.5, 0.5), GemParams<double>(1.0 / 3, 2.0)}) {
    constexpr int bins = 14;
    constexpr long horizon = (1L << bins) - 1;
    struct Acc {
      std::vector<Counts> k{Counts(bins + 1), Counts(bins + 1)};
      void merge(const Acc& o) {
        k[0].merge(o.k[0]);
        k[1].merge(o.k[1]);
      }
    };
    const long reps = 100000;
    const auto fast = run_blocks(6, 1, reps, 0, Acc{}, [&](Rng& rng, long count, Acc& out) {
      for (long i = 0; i < count; ++i) {
        DiscoverySequence seq(params);
        for (int j = 0; j < 2; ++j) {
          const long m = seq.next(rng, horizon);
          if (m > horizon) {
            for (; j < 2; ++j) ++out.k[j].bins[bins];
            break;
          }
          ++out.k[j].bins[dyadic(m)];
        }
      }
    });
    const auto slow = run_blocks(6, 2, reps, 0, Acc{}, [&](Rng& rng, long count, Acc& out) {
      for (long i = 0; i < count; ++i) {
        int k = 1;
        long m = 1;
        int found = 0;
        while (found < 2 && m < horizon) {
          const double p = (params.theta + k * params.alpha) / (params.theta + m);
          ++m;
          if (rng.uniform01() < p) {
            ++k;
            ++out.k[found++].bins[dyadic(m)];
          }
        }
        for (; found < 2; ++found) ++out.k[found].bins[bins];
      }
    });
    for (int j = 0; j < 2; ++j) {
      std::vector<double> p(bins + 1);
      for (int b = 0; b <= bins; ++b) p[b] = static_cast<double>(slow.k[j].bins[b]) / reps;
      CHECK(tv_distance(p, fast.k[j].bins) < 0.01);
    }
  }
}

TEST_CASE("Monte Carlo aggregation does not depend on the thread count") {
  auto run = [](int threads) {
    return run_blocks(42, 7, 100000, threads, Counts(32), [](Rng& rng, long count, Counts& out) {
      const auto w = GibbsWeights<double>::gem(GemParams<double>(0.5, 0.5));
      for (long i = 0; i < count; ++i) ++out.bins[composition_index(crp_run(w, 6, rng).n_star())];
    });
  };
  CHECK(run(1).bins == run(3).bins);
  CHECK(run(1).bins == run(8).bins);
}
