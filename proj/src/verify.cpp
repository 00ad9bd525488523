#include "gempart/verify.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <sstream>

#include "gempart/io.hpp"
#include "gempart/parallel.hpp"

namespace gempart {

std::string GridPoint::label() const { return "a=" + to_string(alpha) + ",t=" + to_string(theta); }

std::vector<GridPoint> default_grid() {
  return {{Rational(0), Rational(1, 2)},    {Rational(0), Rational(1)},    {Rational(0), Rational(5)},
          {Rational(1, 2), Rational(1, 2)}, {Rational(1, 2), Rational(0)}, {Rational(1, 3), Rational(2)}};
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"theorem", "dt",      "conditional", "consistency",
                                              "oldest",  "closure", "discovery",    "x-law"};
  return names;
}

double tv_distance(const std::vector<double>& p, const std::vector<long>& counts) {
  if (p.size() != counts.size()) throw InvalidArgument("tv_distance: supports differ in size");
  long total = 0;
  for (long c : counts) total += c;
  if (total == 0) throw InvalidArgument("tv_distance: no counts");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::fabs(p[i] - static_cast<double>(counts[i]) / total);
  return 0.5 * s;
}

bool all_pass(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.pass; });
}

namespace {

using Clock = std::chrono::steady_clock;

CheckResult exact_result(std::string id, std::string anchor, Rational stat, std::string detail = {}) {
  CheckResult r;
  r.id = std::move(id);
  r.anchor = std::move(anchor);
  r.mode = "exact";
  r.pass = stat == 0;
  r.statistic = std::move(stat);
  r.threshold = 0.0;
  r.detail = std::move(detail);
  return r;
}

CheckResult numeric_result(std::string id, std::string anchor, std::string mode, double stat, double threshold,
                           std::string detail = {}) {
  CheckResult r;
  r.id = std::move(id);
  r.anchor = std::move(anchor);
  r.mode = std::move(mode);
  r.statistic = stat;
  r.threshold = threshold;
  r.pass = std::isfinite(stat) && stat <= threshold;
  r.detail = std::move(detail);
  return r;
}

class Runner {
 public:
  explicit Runner(const VerifyConfig& config) : config_(config) {}

  /// Runs one check; an exception becomes a failed result.
  void add(const std::string& id, const std::string& anchor, const std::string& mode,
           const std::function<CheckResult()>& body) {
    const auto start = Clock::now();
    CheckResult r;
    try {
      r = body();
    } catch (const std::exception& e) {
      r = numeric_result(id, anchor, mode, -1.0, 0.0, std::string("error: ") + e.what());
      r.pass = false;
    }
    r.id = id;
    r.anchor = anchor;
    const std::chrono::duration<double, std::milli> ms = Clock::now() - start;
    r.runtime_ms = config_.timings ? ms.count() : 0.0;
    results_.push_back(std::move(r));
  }

  std::vector<CheckResult>& results() { return results_; }

 private:
  const VerifyConfig& config_;
  std::vector<CheckResult> results_;
};

template <Scalar T>
std::vector<T> dense(const ExactDistribution<T>& d) {
  std::vector<T> out(std::size_t{1} << (d.n - 1), T(0));
  for (std::size_t i = 0; i < d.support.size(); ++i) out[composition_index(d.support[i])] = d.probabilities[i];
  return out;
}

template <class F>
std::vector<Rational> closed_form_dense(int n, F f) {
  std::vector<Rational> out(std::size_t{1} << (n - 1));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(composition_from_index(n, i));
  return out;
}

Rational max_abs_diff(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  if (a.size() != b.size()) throw InvalidArgument("tables differ in size");
  Rational m(0);
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, Rational(abs(a[i] - b[i])));
  return m;
}

std::vector<double> to_doubles(const std::vector<Rational>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(to_double(x));
  return out;
}

std::string nlabel(int n) { return ".n" + std::to_string(n); }

std::string tlabel(const Rational& theta) { return "t=" + to_string(theta); }

/// TV of the completed runs plus the censored fraction, a bound on the TV
/// of the sampler's full output law.
double censored_tv(const std::vector<double>& law, const Counts& counts) {
  const long done = counts.total();
  const long all = done + counts.censored;
  if (done == 0) return 1.0;
  return tv_distance(law, counts.bins) * done / all + static_cast<double>(counts.censored) / all;
}

std::string count_detail(const Counts& c) {
  return "runs=" + std::to_string(c.total() + c.censored) + " censored=" + std::to_string(c.censored);
}

// ---------------------------------------------------------------- theorem

void suite_theorem(const VerifyConfig& cfg, Runner& run) {
  for (const auto& g : cfg.grid) {
    const auto w = GibbsWeights<Rational>::gem(g.params());
    std::vector<ExactDistribution<Rational>> layers;
    run.add("theorem.dp." + g.label() + ".build", "value-order law", "exact", [&] {
      layers = value_dp_layers(w, std::max(cfg.exact_n_max, cfg.dp_n_max), cfg.dp_cap);
      Rational dev(0);
      for (const auto& layer : layers) dev = std::max(dev, Rational(abs(layer.total() - 1)));
      return exact_result("", "", dev, "layer totals");
    });
    const auto ps = PseudoSize<Rational>::size_minus_alpha(g.alpha);
    for (int n = 1; n <= std::max(cfg.exact_n_max, cfg.dp_n_max); ++n) {
      const auto value_law = closed_form_dense(n, [&](const Composition& c) { return value_ordered_pmf(w, c); });
      run.add("theorem.dp." + g.label() + nlabel(n), "value-order law", "exact", [&] {
        if (layers.empty()) throw CapExceeded("value DP unavailable");
        return exact_result("", "", max_abs_diff(dense(layers[n - 1]), value_law));
      });
      if (n > cfg.exact_n_max) continue;
      run.add("theorem.sbp." + g.label() + nlabel(n), "size-minus-alpha biased permutation", "exact", [&] {
        const auto appearance = exact_appearance_distribution_by_first_occurrence(w, n, cfg.enum_cap);
        std::vector<Rational> rebuilt(std::size_t{1} << (n - 1), Rational(0));
        std::map<std::size_t, std::vector<Permutation>> perms;
        for (std::size_t i = 0; i < appearance.support.size(); ++i) {
          const Composition& c = appearance.support[i];
          auto& all = perms[c.size()];
          if (all.empty()) all = all_permutations(c.size());
          for (const auto& sigma : all) {
            rebuilt[composition_index(sigma.apply(c))] +=
                appearance.probabilities[i] * permutation_probability(c, sigma, ps);
          }
        }
        return exact_result("", "", max_abs_diff(rebuilt, value_law));
      });
    }
  }
}

// --------------------------------------------------------------------- dt

void suite_dt(const VerifyConfig& cfg, Runner& run) {
  for (const auto& theta : cfg.dt_thetas) {
    const auto w = GibbsWeights<Rational>::gem(GemParams<Rational>(Rational(0), theta));
    std::vector<ExactDistribution<Rational>> layers;
    try {
      layers = value_dp_layers(w, cfg.exact_n_max, cfg.dp_cap);
    } catch (const Error&) {
    }
    for (int n = 1; n <= cfg.exact_n_max; ++n) {
      run.add("dt.equal." + tlabel(theta) + nlabel(n), "order invariance at alpha=0", "exact", [&] {
        if (layers.empty()) throw CapExceeded("value DP unavailable");
        const auto appearance = exact_appearance_distribution_by_first_occurrence(w, n, cfg.enum_cap);
        return exact_result("", "", max_abs_diff(dense(layers[n - 1]), dense(appearance)));
      });
    }
  }
  const auto w = GibbsWeights<Rational>::gem(GemParams<Rational>(Rational(1, 2), Rational(1, 2)));
  for (int n = 3; n <= cfg.exact_n_max; ++n) {
    run.add("dt.witness.a=1/2,t=1/2" + nlabel(n), "order dependence at alpha>0", "exact", [&] {
      const auto v = closed_form_dense(n, [&](const Composition& c) { return value_ordered_pmf(w, c); });
      const auto a = closed_form_dense(n, [&](const Composition& c) { return appearance_pmf(w, c); });
      if (n == 3) {
        const std::size_t i = composition_index(Composition{2, 1});
        return exact_result("", "", Rational(abs(v[i] - a[i] - Rational(1, 30))),
                            "value " + to_string(v[i]) + " appearance " + to_string(a[i]));
      }
      std::string where;
      for (std::size_t i = 0; i < v.size() && where.empty(); ++i) {
        if (v[i] != a[i]) where = composition_from_index(n, i).to_string();
      }
      return exact_result("", "", Rational(where.empty() ? 1 : 0), where.empty() ? "laws agree" : "differ at " + where);
    });
  }
}

// ------------------------------------------------------------ conditional

void suite_conditional(const VerifyConfig& cfg, Runner& run) {
  for (const auto& g : cfg.grid) {
    const auto w = GibbsWeights<Rational>::gem(g.params());
    const auto ps = PseudoSize<Rational>::size_minus_alpha(g.alpha);
    std::vector<ExactDistribution<Rational>> layers;
    try {
      layers = value_dp_layers(w, cfg.exact_n_max, cfg.dp_cap);
    } catch (const Error&) {
    }
    for (int n = 1; n <= cfg.exact_n_max; ++n) {
      run.add("conditional." + g.label() + nlabel(n), "new-value probability given value order", "exact", [&] {
        if (layers.empty()) throw CapExceeded("value DP unavailable");
        const auto& layer = layers[n - 1];
        Rational dev(0);
        for (std::size_t i = 0; i < layer.support.size(); ++i) {
          const Composition& c = layer.support[i];
          const int k = static_cast<int>(c.size());
          const Rational p = w.discovery_prob(k, n);
          // P(new and c) / P(c) from the DP flow
          const auto tr = ocrp_transitions(w, c);
          Rational flow(0);
          for (const auto& x : tr.insert) flow += layer.probabilities[i] * x;
          dev = std::max(dev, Rational(abs(flow / layer.probabilities[i] - p)));
          // ordered EPPF ratio over the k + 1 insertion places
          const Rational base = oeppf(w, c, ps);
          Rational ratio(0);
          for (std::size_t j = 0; j <= c.size(); ++j) ratio += oeppf(w, c.with_inserted_one(j), ps);
          dev = std::max(dev, Rational(abs(ratio / base - p)));
        }
        return exact_result("", "", dev, std::to_string(layer.support.size()) + " compositions");
      });
    }
  }
}

// ------------------------------------------------------------ consistency

void suite_consistency(const VerifyConfig& cfg, Runner& run) {
  for (const auto& g : cfg.grid) {
    run.add("consistency." + g.label(), "consistency relation", "exact", [&] {
      const auto w = GibbsWeights<Rational>::gem(g.params(), 64);
      Rational dev(0);
      for (int n = 1; n < 64; ++n) {
        for (int k = 1; k <= n; ++k) {
          const Rational rhs = (Rational(n) - Rational(k) * g.alpha) * w.V(k, n + 1) + w.V(k + 1, n + 1);
          dev = std::max(dev, Rational(abs(w.V(k, n) - rhs)));
        }
      }
      return exact_result("", "", dev, "1 <= k <= n < 64");
    });
  }
}

// ----------------------------------------------------------------- oldest

struct OldestAcc {
  int n = 0;
  std::vector<long> total;  // by appearance composition index
  std::vector<long> first;  // [index * n + table]
  long censored = 0;
  explicit OldestAcc(int n_ = 1) : n(n_), total(std::size_t{1} << (n_ - 1), 0), first(total.size() * n_, 0) {}
  void merge(const OldestAcc& o) {
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += o.total[i];
    for (std::size_t i = 0; i < first.size(); ++i) first[i] += o.first[i];
    censored += o.censored;
  }
};

void suite_oldest(const VerifyConfig& cfg, Runner& run) {
  const int n = cfg.mc_n;
  for (const auto& g : cfg.grid) {
    const std::string id = "oldest." + g.label() + nlabel(n);
    run.add(id, "oldest-cluster probability", "monte-carlo", [&] {
      const auto w = GibbsWeights<double>::gem(g.params().to_double());
      const double alpha = to_double(g.alpha);
      const auto acc = run_blocks(cfg.seed, hash_name(id), cfg.mc_replicates, cfg.threads, OldestAcc(n),
                                  [&](Rng& rng, long count, OldestAcc& out) {
        for (long r = 0; r < count; ++r) {
          const auto res = two_phase_sample(w, n, rng, cfg.rediscovery_cap, 1);
          if (res.first_rediscovered() < 0) {
            ++out.censored;
            continue;
          }
          const std::size_t idx = composition_index(Composition(res.table_sizes));
          ++out.total[idx];
          ++out.first[idx * n + res.first_rediscovered()];
        }
      });
      double worst = 0.0;
      int tested = 0;
      for (std::size_t idx = 0; idx < acc.total.size(); ++idx) {
        const long m = acc.total[idx];
        if (m < 1000) continue;
        ++tested;
        const Composition c = composition_from_index(n, idx);
        const double k = static_cast<double>(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) {
          const double p = (c[i] - alpha) / (n - k * alpha);
          const double hits = static_cast<double>(acc.first[idx * n + i]);
          double z = 0.0;
          if (p >= 1.0) {
            z = hits == static_cast<double>(m) ? 0.0 : INFINITY;
          } else {
            z = (hits - m * p) / std::sqrt(m * p * (1.0 - p));
          }
          worst = std::max(worst, std::fabs(z));
        }
      }
      auto r = numeric_result("", "", "monte-carlo", worst, 4.0,
                              "compositions tested=" + std::to_string(tested) +
                                  " censored=" + std::to_string(acc.censored));
      if (tested == 0) r.pass = false;
      return r;
    });
  }
}

// ---------------------------------------------------------------- closure

void suite_closure(const VerifyConfig& cfg, Runner& run) {
  const int n = cfg.mc_n;
  const std::size_t size = std::size_t{1} << (n - 1);
  for (const auto& g : cfg.grid) {
    const auto wq = GibbsWeights<Rational>::gem(g.params());
    const auto value_law =
        to_doubles(closed_form_dense(n, [&](const Composition& c) { return value_ordered_pmf(wq, c); }));
    const auto appearance_law =
        to_doubles(closed_form_dense(n, [&](const Composition& c) { return appearance_pmf(wq, c); }));
    const auto w = GibbsWeights<double>::gem(g.params().to_double());
    const auto pd = g.params().to_double();

    auto mc = [&](const std::string& sampler, const std::vector<double>& law,
                  const std::function<void(Rng&, Counts&)>& draw) {
      const std::string id = "closure." + sampler + "." + g.label() + nlabel(n);
      run.add(id, "sampler closure", "monte-carlo", [&] {
        const auto counts = run_blocks(cfg.seed, hash_name(id), cfg.mc_replicates, cfg.threads, Counts(size),
                                       [&](Rng& rng, long count, Counts& out) {
          for (long r = 0; r < count; ++r) draw(rng, out);
        });
        auto res = numeric_result("", "", "monte-carlo", censored_tv(law, counts), 0.005, count_detail(counts));
        return res;
      });
    };

    mc("paintbox", value_law, [&](Rng& rng, Counts& out) {
      try {
        auto fs = stick_breaking(pd, rng);
        ++out.bins[composition_index(paintbox_sample(fs, n, rng).n_up())];
      } catch (const CapExceeded&) {
        ++out.censored;
      }
    });
    mc("ocrp", value_law, [&](Rng& rng, Counts& out) {
      ++out.bins[composition_index(ocrp_run(w, n, rng).trajectory.back())];
    });
    mc("crp", appearance_law, [&](Rng& rng, Counts& out) {
      ++out.bins[composition_index(crp_run(w, n, rng).n_star())];
    });
    mc("two-phase", value_law, [&](Rng& rng, Counts& out) {
      const auto res = two_phase_sample(w, n, rng, cfg.rediscovery_cap, -1);
      const auto order = res.order_of_tables();
      if (order.empty()) {
        ++out.censored;
        return;
      }
      std::vector<int> parts;
      for (int t : order) parts.push_back(res.table_sizes[t]);
      ++out.bins[composition_index(Composition(parts))];
    });
  }
}

// --------------------------------------------------------------- discovery

std::string bracket_detail(double lhs, double s, double b, long terms) {
  std::ostringstream os;
  os << std::setprecision(17) << "lhs=" << lhs << " partial=" << s << " tail<=" << b << " terms=" << terms;
  return os.str();
}

void suite_discovery(const VerifyConfig& cfg, Runner& run) {
  constexpr int kMax = 5;
  constexpr int rMax = 3;
  for (const auto& theta : cfg.discovery_thetas) {
    const double t = to_double(theta);
    DiscoverySeries series;
    bool have_series = false;
    try {
      series = discovery_series(t, kMax, rMax, 5e-11);
      have_series = true;
    } catch (const Error&) {
    }
    for (int k = 1; k <= kMax; ++k) {
      run.add("discovery.nkident1." + tlabel(theta) + ".k" + std::to_string(k), "discovery-time identity", "numeric",
              [&] {
        if (!have_series) throw Error("series unavailable");
        Rational lhs_q = 1;
        for (int i = 1; i < k; ++i) lhs_q *= theta;
        for (int i = 0; i < k; ++i) lhs_q /= Rational(1) + theta;
        const double lhs = to_double(lhs_q);
        const double s = series.sum[k - 1][0];
        const double b = series.bound[k - 1][0];
        const double stat = std::max(std::fabs(lhs - s), std::fabs(lhs - s - b));
        return numeric_result("", "", "numeric", stat, 1e-10, bracket_detail(lhs, s, b, series.terms));
      });
      for (int r = 1; r <= rMax; ++r) {
        run.add("discovery.moment." + tlabel(theta) + ".k" + std::to_string(k) + ".r" + std::to_string(r),
                "inverse Pochhammer moments", "numeric", [&] {
          if (!have_series) throw Error("series unavailable");
          const double lhs = to_double(inv_pochhammer_moment<Rational>(theta, k, r));
          const double s = series.sum[k - 1][r - 1];
          const double b = series.bound[k - 1][r - 1];
          const double stat = std::max(std::fabs(lhs - s), std::fabs(lhs - s - b));
          return numeric_result("", "", "numeric", stat, 1e-8, bracket_detail(lhs, s, b, series.terms));
        });
      }
    }

    // M_X: first time the minimal value appears, geometric given P_1.
    {
      const std::string id = "discovery.mx." + tlabel(theta);
      run.add(id, "law of the first time of the minimal value", "monte-carlo", [&] {
        constexpr int bins = 5;  // n = 1..4, then n >= 5
        const auto counts = run_blocks(cfg.seed, hash_name(id), cfg.mc_replicates, cfg.threads, Counts(bins),
                                       [&](Rng& rng, long count, Counts& out) {
          for (long i = 0; i < count; ++i) {
            const double p1 = rng.beta(1.0, t);
            const double u = 1.0 - rng.uniform01();
            const double m = p1 >= 1.0 ? 1.0 : 1.0 + std::floor(std::log(u) / std::log1p(-p1));
            ++out.bins[m >= bins ? bins - 1 : static_cast<std::size_t>(m) - 1];
          }
        });
        const double total = static_cast<double>(counts.total());
        double worst = 0.0;
        for (int j = 0; j < bins; ++j) {
          const double p = j + 1 < bins ? to_double(mx_pmf<Rational>(theta, j + 1))
                                        : to_double(mx_survival<Rational>(GemParams<Rational>(0, theta), bins - 1));
          const double z = (counts.bins[j] - total * p) / std::sqrt(total * p * (1.0 - p));
          worst = std::max(worst, std::fabs(z));
        }
        return numeric_result("", "", "monte-carlo", worst, 3.0, count_detail(counts));
      });
    }

    // M_k on dyadic bins, all k from one discovery sequence.
    {
      constexpr int kDiscoveries = 4;
      constexpr int bins = 20;
      const long horizon = (1L << bins) - 1;
      const std::string job = "discovery.mk." + tlabel(theta);
      std::vector<Counts> per_k;
      std::string failure;
      try {
        struct MkAcc {
          std::vector<Counts> k;
          void merge(const MkAcc& o) {
            for (std::size_t i = 0; i < k.size(); ++i) k[i].merge(o.k[i]);
          }
        };
        const auto acc = run_blocks(cfg.seed, hash_name(job), cfg.mc_replicates, cfg.threads,
                                    MkAcc{std::vector<Counts>(kDiscoveries, Counts(bins + 1))},
                                    [&](Rng& rng, long count, MkAcc& out) {
          const GemParams<double> params(0.0, t);
          for (long i = 0; i < count; ++i) {
            DiscoverySequence seq(params);
            ++out.k[0].bins[0];
            int k = 1;
            for (; k < kDiscoveries; ++k) {
              const long m = seq.next(rng, horizon);
              if (m > horizon) break;
              ++out.k[k].bins[std::bit_width(static_cast<unsigned long>(m)) - 1];
            }
            for (; k < kDiscoveries; ++k) ++out.k[k].bins[bins];
          }
        });
        per_k = acc.k;
      } catch (const std::exception& e) {
        failure = e.what();
      }
      for (int k = 1; k <= kDiscoveries; ++k) {
        run.add(job + ".k" + std::to_string(k), "law of the k-th discovery time", "monte-carlo", [&] {
          if (!failure.empty()) throw Error(failure);
          const auto law = mk_dyadic_law(t, k, bins);
          return numeric_result("", "", "monte-carlo", tv_distance(law, per_k[k - 1].bins), 0.01,
                                count_detail(per_k[k - 1]));
        });
      }
    }

    // Exact telescoping of the partial products and sums.
    run.add("discovery.telescope." + tlabel(theta), "telescoping product", "exact", [&] {
      Rational dev(0);
      for (int n = 1; n <= 6; ++n) {
        const int big = n + 40;
        Rational prod(1);
        for (int m = n + 1; m <= big; ++m) prod *= Rational(1) - theta / ((theta + Rational(m - 1)) * Rational(m));
        const Rational closed = Rational(n, big) * (Rational(big) + theta) / (Rational(n) + theta);
        dev = std::max(dev, Rational(abs(prod - closed)));
      }
      Rational sum(0);
      for (int n = 1; n <= 50; ++n) {
        sum += mx_pmf<Rational>(theta, n);
        const Rational closed = Rational(1) - theta / (theta + Rational(n));
        dev = std::max(dev, Rational(abs(sum - closed)));
        dev = std::max(dev, Rational(abs(Rational(1) - sum -
                                         mx_survival<Rational>(GemParams<Rational>(0, theta), n))));
      }
      return exact_result("", "", dev);
    });
  }

  // E[P_1 (1-p) ...] identity by simulation, for every alpha.
  std::vector<GridPoint> points;
  for (const auto& theta : cfg.discovery_thetas) points.push_back({Rational(0), theta});
  for (const auto& g : cfg.grid) {
    if (g.alpha > 0) points.push_back(g);
  }
  for (const auto& g : points) {
    const std::string id = "discovery.nkident-mc." + g.label();
    run.add(id, "frequency of the k-th discovered value", "monte-carlo", [&] {
      const double eps = g.alpha == 0 ? 1e-4 : 1e-2;
      const auto est = nkident_check(g.params().to_double(), 4, cfg.nkident_replicates,
                                     cfg.seed ^ hash_name(id), eps, cfg.threads);
      double worst = 0.0;
      std::ostringstream os;
      os << std::setprecision(6);
      for (std::size_t k = 0; k < est.lhs.size(); ++k) {
        const double gap = std::max(0.0, std::fabs(est.lhs[k] - est.rhs[k]) - eps);
        worst = std::max(worst, est.std_error[k] > 0 ? gap / est.std_error[k] : (gap > 0 ? INFINITY : 0.0));
        os << "k" << k + 1 << ":" << est.lhs[k] << "/" << est.rhs[k] << " ";
      }
      os << "censored=" << est.censored;
      auto r = numeric_result("", "", "monte-carlo", worst, 3.0, os.str());
      if (est.censored * 100 > est.replicates + est.censored) r.pass = false;
      return r;
    });
  }

  // P(M_X > n) = E(1 - P_1)^n on the full grid.
  for (const auto& g : cfg.grid) {
    const std::string id = "discovery.mx-survival." + g.label();
    run.add(id, "survival of the first time of the minimal value", "monte-carlo", [&] {
      constexpr int nmax = 4;
      const double a = to_double(g.alpha);
      const double t = to_double(g.theta);
      const auto counts = run_blocks(cfg.seed, hash_name(id), cfg.mc_replicates, cfg.threads, Counts(nmax + 1),
                                     [&](Rng& rng, long count, Counts& out) {
        for (long i = 0; i < count; ++i) {
          const double p1 = rng.beta(1.0 - a, t + a);
          const double u = 1.0 - rng.uniform01();
          const double m = p1 >= 1.0 ? 1.0 : 1.0 + std::floor(std::log(u) / std::log1p(-p1));
          ++out.bins[m > nmax ? nmax : static_cast<std::size_t>(m) - 1];
        }
      });
      const double total = static_cast<double>(counts.total());
      double worst = 0.0;
      long above = counts.total();
      for (int j = 1; j <= nmax; ++j) {
        above -= counts.bins[j - 1];
        const double p = to_double(mx_survival(g.params(), j));
        const double z = (above - total * p) / std::sqrt(total * p * (1.0 - p));
        worst = std::max(worst, std::fabs(z));
      }
      return numeric_result("", "", "monte-carlo", worst, 4.0, count_detail(counts));
    });
  }
}

// ------------------------------------------------------------------ x-law

void suite_x_law(const VerifyConfig& cfg, Runner& run) {
  for (const auto& g : cfg.grid) {
    const auto params = g.params();
    std::vector<double> law;  // k = 1..K, then the tail
    Rational cumulative(0);
    for (int k = 1; cumulative <= Rational(999, 1000); ++k) {
      const Rational p = expected_frequency(params, k);
      cumulative += p;
      law.push_back(to_double(p));
    }
    law.push_back(to_double(Rational(1) - cumulative));
    const long tail = static_cast<long>(law.size()) - 1;
    auto bin = [&](long x) { return static_cast<std::size_t>(std::min(x, tail + 1) - 1); };
    const auto w = GibbsWeights<double>::gem(params.to_double());
    const auto pd = params.to_double();

    auto mc = [&](const std::string& variant, const std::string& anchor,
                  const std::function<void(Rng&, Counts&)>& draw) {
      const std::string id = "x-law." + variant + "." + g.label();
      run.add(id, anchor, "monte-carlo", [&] {
        const auto counts = run_blocks(cfg.seed, hash_name(id), cfg.x_replicates, cfg.threads, Counts(law.size()),
                                       [&](Rng& rng, long count, Counts& out) {
          for (long r = 0; r < count; ++r) draw(rng, out);
        });
        auto res = numeric_result("", "", "monte-carlo", censored_tv(law, counts), 0.01,
                                  "K=" + std::to_string(tail) + " " + count_detail(counts));
        if (counts.censored * 100 > counts.total() + counts.censored) {
          res.pass = false;
          res.detail += " timeout rate above 1%";
        }
        return res;
      });
    };

    mc("two-phase", "label of the minimal value equals first-sample law", [&](Rng& rng, Counts& out) {
      const auto res = two_phase_sample(w, 1, rng, cfg.rediscovery_cap, 0);
      if (!res.complete) {
        ++out.censored;
        return;
      }
      ++out.bins[bin(res.labels[0])];
    });
    mc("first-sample", "law of the first sample value", [&](Rng& rng, Counts& out) {
      try {
        auto fs = stick_breaking(pd, rng);
        ++out.bins[bin(fs.locate(rng.uniform01()))];
      } catch (const CapExceeded&) {
        ++out.censored;
      }
    });
  }
}

}  // namespace

std::vector<CheckResult> run_suite(std::string_view name, const VerifyConfig& config) {
  Runner run(config);
  if (name == "theorem") {
    suite_theorem(config, run);
  } else if (name == "dt") {
    suite_dt(config, run);
  } else if (name == "conditional") {
    suite_conditional(config, run);
  } else if (name == "consistency") {
    suite_consistency(config, run);
  } else if (name == "oldest") {
    suite_oldest(config, run);
  } else if (name == "closure") {
    suite_closure(config, run);
  } else if (name == "discovery") {
    suite_discovery(config, run);
  } else if (name == "x-law") {
    suite_x_law(config, run);
  } else {
    throw InvalidArgument("unknown suite '" + std::string(name) + "'");
  }
  return std::move(run.results());
}

std::vector<CheckResult> run_suites(const std::vector<std::string>& names, const VerifyConfig& config) {
  std::vector<CheckResult> out;
  for (const auto& name : names) {
    auto part = run_suite(name, config);
    out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  return out;
}

std::string emit_report(std::string_view suite, std::uint64_t seed, const std::vector<CheckResult>& results,
                        ReportFormat format) {
  std::vector<const CheckResult*> sorted;
  for (const auto& r : results) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) { return a->id < b->id; });

  if (format == ReportFormat::Json) {
    Json doc;
    doc["suite"] = std::string(suite);
    doc["seed"] = seed;
    doc["checks"] = Json::array();
    for (const auto* r : sorted) {
      Json c;
      c["id"] = r->id;
      c["anchor"] = r->anchor;
      c["mode"] = r->mode;
      if (const auto* q = std::get_if<Rational>(&r->statistic)) {
        c["statistic"] = {{"p", q->get_num().get_str()}, {"q", q->get_den().get_str()}};
      } else {
        c["statistic"] = std::get<double>(r->statistic);
      }
      c["threshold"] = r->threshold;
      c["pass"] = r->pass;
      c["runtime_ms"] = r->runtime_ms;
      if (!r->detail.empty()) c["detail"] = r->detail;
      doc["checks"].push_back(std::move(c));
    }
    return doc.dump(2) + "\n";
  }

  auto stat_text = [](const CheckResult& r) {
    if (const auto* q = std::get_if<Rational>(&r.statistic)) return to_string(*q);
    return to_string(std::get<double>(r.statistic));
  };

  std::ostringstream os;
  if (format == ReportFormat::Csv) {
    os << "suite,seed,id,anchor,mode,statistic,threshold,pass,runtime_ms,detail\n";
    for (const auto* r : sorted) {
      os << csv_escape(std::string(suite)) << ',' << seed << ',' << csv_escape(r->id) << ','
         << csv_escape(r->anchor) << ',' << r->mode << ',' << stat_text(*r) << ',' << to_string(r->threshold) << ','
         << (r->pass ? "true" : "false") << ',' << to_string(r->runtime_ms) << ',' << csv_escape(r->detail)
         << '\n';
    }
    return os.str();
  }
  std::size_t width = 2;
  for (const auto* r : sorted) width = std::max(width, r->id.size());
  os << "suite " << suite << " seed " << seed << "\n";
  os << std::left << std::setw(static_cast<int>(width)) << "id" << "  " << std::setw(11) << "mode" << "  "
     << std::setw(14) << "statistic" << "  " << std::setw(10) << "threshold" << "  result\n";
  long failed = 0;
  for (const auto* r : sorted) {
    std::string stat;
    if (const auto* q = std::get_if<Rational>(&r->statistic)) {
      stat = to_string(*q);
    } else {
      std::ostringstream s;
      s << std::setprecision(6) << std::get<double>(r->statistic);
      stat = s.str();
    }
    std::ostringstream thr;
    thr << std::setprecision(6) << r->threshold;
    os << std::left << std::setw(static_cast<int>(width)) << r->id << "  " << std::setw(11) << r->mode << "  "
       << std::setw(14) << stat << "  " << std::setw(10) << thr.str() << "  " << (r->pass ? "pass" : "FAIL");
    if (!r->detail.empty()) os << "  " << r->detail;
    os << "\n";
    if (!r->pass) ++failed;
  }
  os << sorted.size() - failed << "/" << sorted.size() << " checks passed\n";
  return os.str();
}

}  // namespace gempart
