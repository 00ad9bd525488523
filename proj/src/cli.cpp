#include "gempart/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "gempart/io.hpp"
#include "gempart/oracle.hpp"
#include "gempart/samplers.hpp"
#include "gempart/verify.hpp"

namespace gempart {

namespace {

struct UsageError : Error {
  using Error::Error;
};

struct CliConfig {
  std::string alpha = "0";
  std::string theta = "1";
  int n = 3;
  long samples = 1;
  std::string seed;
  std::string format = "json";
  std::string out_path;
  int dp_cap = kDefaultDpCap;
  int enum_cap = kDefaultEnumerationCap;
  long rediscovery_cap = kDefaultRediscoveryCap;
  std::string kind;
  int k = 1;
  int r = 1;
  std::vector<std::string> suites;
  bool timings = false;
  int threads = 0;
  bool alpha_set = false;
  bool theta_set = false;
  bool n_set = false;
  bool samples_set = false;
};

std::uint64_t resolve_seed(const std::string& flag) {
  std::string text = flag;
  if (text.empty()) {
    const char* env = std::getenv("GEMPART_SEED");
    if (env == nullptr || *env == '\0') return kDefaultSeed;
    text = env;
  }
  if (text == "random") {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }
  std::uint64_t value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size()) throw UsageError("invalid seed '" + text + "'");
  return value;
}

/// Two-column table (key, value) written as JSON, CSV or aligned text.
struct Table {
  std::string kind;
  std::string key_name;
  std::string value_name = "probability";
  std::vector<std::string> keys;
  std::vector<Json> values;
};

std::string json_cell(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return to_string(v.get<double>());
  return v.dump();
}

void write_table(const Table& t, const CliConfig& cfg, std::ostream& out) {
  if (cfg.format == "json") {
    Json doc;
    doc["kind"] = t.kind;
    doc["alpha"] = cfg.alpha;
    doc["theta"] = cfg.theta;
    doc["n"] = cfg.n;
    doc["key"] = t.key_name;
    doc["support"] = t.keys;
    doc[t.value_name == "probability" ? "probabilities" : "values"] = t.values;
    out << doc.dump(2) << "\n";
  } else if (cfg.format == "csv") {
    out << t.key_name << ',' << t.value_name << '\n';
    for (std::size_t i = 0; i < t.keys.size(); ++i) {
      out << csv_escape(t.keys[i]) << ',' << csv_escape(json_cell(t.values[i])) << '\n';
    }
  } else {
    std::size_t width = t.key_name.size();
    for (const auto& k : t.keys) width = std::max(width, k.size());
    out << std::left << std::setw(static_cast<int>(width)) << t.key_name << "  " << t.value_name << '\n';
    for (std::size_t i = 0; i < t.keys.size(); ++i) {
      out << std::setw(static_cast<int>(width)) << t.keys[i] << "  " << json_cell(t.values[i]) << '\n';
    }
  }
}

template <Scalar T>
void require_alpha_zero(const GemParams<T>& p, const std::string& kind) {
  if (p.alpha != T(0)) throw UsageError("exact " + kind + " needs --alpha 0");
}

template <Scalar T>
Table exact_table(const CliConfig& cfg, const GemParams<T>& params) {
  Table t;
  t.kind = cfg.kind;
  const int n = cfg.n;
  if (n < 1) throw UsageError("--n must be >= 1");
  const auto w = GibbsWeights<T>::gem(params);
  auto over_compositions = [&](auto f) {
    t.key_name = "composition";
    CompositionStream stream(n, cfg.enum_cap);
    while (auto c = stream.next()) {
      t.keys.push_back(c->to_string());
      t.values.push_back(scalar_json(f(*c)));
    }
  };
  const std::string& kind = cfg.kind;
  if (kind == "eppf") {
    over_compositions([&](const Composition& c) { return eppf(w, c); });
  } else if (kind == "appearance") {
    over_compositions([&](const Composition& c) { return appearance_pmf(w, c); });
  } else if (kind == "value") {
    over_compositions([&](const Composition& c) { return value_ordered_pmf(w, c); });
  } else if (kind == "ranked") {
    t.key_name = "partition";
    CompositionStream stream(n, cfg.enum_cap);
    while (auto c = stream.next()) {
      if (!c->is_weakly_decreasing()) continue;
      t.keys.push_back(c->to_string());
      t.values.push_back(scalar_json(ranked_pmf(w, *c)));
    }
  } else if (kind == "dp-value") {
    const auto law = exact_value_distribution_dp(w, n, cfg.dp_cap);
    over_compositions([&](const Composition& c) { return law.at(c); });
  } else if (kind == "recursive-value") {
    const auto pd = params.to_double();
    over_compositions([&](const Composition& c) { return recursive_value_pmf(pd, c); });
  } else if (kind == "mk") {
    require_alpha_zero(params, kind);
    t.key_name = "m";
    for (int m = 1; m <= n; ++m) {
      t.keys.push_back(std::to_string(m));
      t.values.push_back(scalar_json(mk_pmf<T>(params.theta, cfg.k, m)));
    }
  } else if (kind == "mx") {
    require_alpha_zero(params, kind);
    t.key_name = "m";
    for (int m = 1; m <= n; ++m) {
      t.keys.push_back(std::to_string(m));
      t.values.push_back(scalar_json(mx_pmf<T>(params.theta, m)));
    }
  } else if (kind == "moments") {
    require_alpha_zero(params, kind);
    t.key_name = "k";
    t.value_name = "moment";
    for (int k = 1; k <= n; ++k) {
      t.keys.push_back(std::to_string(k));
      t.values.push_back(scalar_json(inv_pochhammer_moment<T>(params.theta, k, cfg.r)));
    }
  } else {
    throw UsageError("unknown exact kind '" + kind + "'");
  }
  return t;
}

int cmd_exact(const CliConfig& cfg, std::ostream& out) {
  const auto a = parse_number(cfg.alpha);
  const auto th = parse_number(cfg.theta);
  if (std::holds_alternative<Rational>(a) && std::holds_alternative<Rational>(th)) {
    write_table(exact_table(cfg, GemParams<Rational>(std::get<Rational>(a), std::get<Rational>(th))), cfg, out);
  } else {
    auto d = [](const std::variant<Rational, double>& v) {
      return std::holds_alternative<double>(v) ? std::get<double>(v) : to_double(std::get<Rational>(v));
    };
    write_table(exact_table(cfg, GemParams<double>(d(a), d(th))), cfg, out);
  }
  return kExitOk;
}

GemParams<double> double_params(const CliConfig& cfg) {
  auto d = [](const std::string& s) {
    const auto v = parse_number(s);
    return std::holds_alternative<double>(v) ? std::get<double>(v) : to_double(std::get<Rational>(v));
  };
  return GemParams<double>(d(cfg.alpha), d(cfg.theta));
}

Json sample_one(const CliConfig& cfg, const GemParams<double>& params, const GibbsWeights<double>& w, Rng& rng,
                long& timeouts) {
  const int n = cfg.n;
  const std::string& kind = cfg.kind;
  if (kind == "gem-sticks") {
    auto fs = stick_breaking(params, rng);
    fs.extend(static_cast<std::size_t>(n));
    Json j;
    std::vector<double> sticks;
    for (std::size_t i = 0; i < fs.size(); ++i) sticks.push_back(fs.stick(i));
    j["sticks"] = sticks;
    j["frequencies"] = fs.frequencies();
    j["remainder"] = fs.remainder();
    return j;
  }
  if (kind == "paintbox") {
    auto fs = stick_breaking(params, rng);
    return trace_to_json(paintbox_sample(fs, n, rng));
  }
  if (kind == "crp") return trace_to_json(crp_run(w, n, rng));
  if (kind == "ocrp") {
    const auto run = ocrp_run(w, n, rng);
    Json j = trace_to_json(run.trace);
    Json traj = Json::array();
    for (const auto& c : run.trajectory) traj.push_back(composition_json(c));
    j["trajectory"] = std::move(traj);
    j["ordered_partition"] = run.ordered_partition().blocks;
    return j;
  }
  if (kind == "two-phase") {
    const auto res = two_phase_sample(w, n, rng, cfg.rediscovery_cap, 0);
    Json j;
    j["primary"] = trace_to_json(res.primary);
    j["table_sizes"] = res.table_sizes;
    j["labels"] = res.labels;
    j["rediscovery_times"] = res.rediscovery_times;
    j["secondary_customers"] = res.secondary_customers;
    j["complete"] = res.complete;
    if (res.complete) {
      const auto trace = res.trace();
      j["X"] = trace.values();
      j["N_up"] = composition_json(trace.n_up());
    } else {
      ++timeouts;
    }
    return j;
  }
  throw UsageError("unknown sampler '" + kind + "'");
}

int cmd_sample(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.n < 1 && cfg.kind != "gem-sticks") throw UsageError("--n must be >= 1");
  if (cfg.samples < 0) throw UsageError("--samples must be >= 0");
  const auto params = double_params(cfg);
  const auto w = GibbsWeights<double>::gem(params);
  const std::uint64_t seed = resolve_seed(cfg.seed);
  Rng rng(seed);
  long timeouts = 0;
  std::vector<Json> samples;
  for (long i = 0; i < cfg.samples; ++i) samples.push_back(sample_one(cfg, params, w, rng, timeouts));

  if (cfg.format == "json") {
    Json doc;
    doc["sampler"] = cfg.kind;
    doc["alpha"] = cfg.alpha;
    doc["theta"] = cfg.theta;
    doc["n"] = cfg.n;
    doc["seed"] = seed;
    doc["samples"] = samples;
    doc["timeouts"] = timeouts;
    out << doc.dump(2) << "\n";
  } else {
    const char sep = cfg.format == "csv" ? ',' : '\t';
    std::vector<std::string> keys;
    if (!samples.empty()) {
      for (const auto& [key, value] : samples.front().items()) keys.push_back(key);
    }
    out << "sample";
    for (const auto& k : keys) out << sep << k;
    out << '\n';
    for (std::size_t i = 0; i < samples.size(); ++i) {
      out << i;
      for (const auto& k : keys) {
        const std::string cell = samples[i].contains(k) ? json_cell(samples[i][k]) : "";
        out << sep << (sep == ',' ? csv_escape(cell) : cell);
      }
      out << '\n';
    }
  }
  if (timeouts > 0) err << "warning: " << timeouts << " two-phase samples hit the rediscovery cap\n";
  return kExitOk;
}

Rational rational_input(const std::string& text) {
  const auto v = parse_number(text);
  return std::holds_alternative<Rational>(v) ? std::get<Rational>(v) : Rational(std::get<double>(v));
}

int cmd_verify(const CliConfig& cfg, std::ostream& out) {
  std::vector<std::string> names;
  for (const auto& entry : cfg.suites) {
    std::stringstream ss(entry);
    std::string name;
    while (std::getline(ss, name, ',')) {
      if (name.empty()) continue;
      if (name == "all") {
        names.insert(names.end(), suite_names().begin(), suite_names().end());
        continue;
      }
      if (std::find(suite_names().begin(), suite_names().end(), name) == suite_names().end()) {
        throw UsageError("unknown suite '" + name + "'");
      }
      names.push_back(name);
    }
  }
  if (names.empty()) names = suite_names();

  VerifyConfig vc;
  vc.seed = resolve_seed(cfg.seed);
  vc.threads = cfg.threads;
  vc.timings = cfg.timings;
  vc.dp_cap = cfg.dp_cap;
  vc.enum_cap = cfg.enum_cap;
  vc.rediscovery_cap = cfg.rediscovery_cap;
  if (cfg.n_set) {
    if (cfg.n < 1) throw UsageError("--n must be >= 1");
    vc.exact_n_max = cfg.n;
    vc.dp_n_max = cfg.n;
    vc.mc_n = cfg.n;
  }
  if (cfg.samples_set) {
    if (cfg.samples < 1) throw UsageError("--samples must be >= 1");
    vc.mc_replicates = vc.x_replicates = vc.nkident_replicates = cfg.samples;
  }
  const bool has_dt = std::find(names.begin(), names.end(), "dt") != names.end();
  if (cfg.alpha_set || cfg.theta_set) {
    const Rational alpha = rational_input(cfg.alpha);
    const Rational theta = rational_input(cfg.theta);
    if (has_dt && alpha != 0) throw UsageError("suite dt fixes alpha = 0");
    GemParams<Rational>(alpha, theta);
    vc.grid = {{alpha, theta}};
    if (cfg.theta_set) {
      if (!(theta > 0)) throw UsageError("suites dt and discovery need theta > 0");
      vc.dt_thetas = {theta};
      vc.discovery_thetas = {theta};
    }
  }
  const auto results = run_suites(names, vc);
  std::string label;
  for (const auto& n : names) label += (label.empty() ? "" : ",") + n;
  const ReportFormat format = cfg.format == "json"  ? ReportFormat::Json
                              : cfg.format == "csv" ? ReportFormat::Csv
                                                    : ReportFormat::Table;
  out << emit_report(label, vc.seed, results, format);
  return all_pass(results) ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  CLI::App app{"Random partitions from GEM(alpha, theta) and Gibbs(alpha) weights"};
  app.require_subcommand(1);
  app.fallthrough();
  auto* alpha = app.add_option("--alpha", cfg.alpha, "alpha in [0,1); p/q runs exact, decimal runs floating");
  auto* theta = app.add_option("--theta", cfg.theta, "theta > -alpha");
  auto* n_opt = app.add_option("--n", cfg.n, "sample size");
  auto* samples = app.add_option("--samples", cfg.samples, "number of samples or Monte Carlo replicates");
  app.add_option("--seed", cfg.seed, "unsigned seed or 'random' (default 42, or GEMPART_SEED)");
  app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "csv", "table"}));
  app.add_option("--out", cfg.out_path, "output file (default stdout)");
  app.add_option("--dp-cap", cfg.dp_cap, "largest n for the value DP");
  app.add_option("--enum-cap", cfg.enum_cap, "largest n for enumeration");
  app.add_option("--rediscovery-cap", cfg.rediscovery_cap, "secondary customers per two-phase run");

  auto* sample = app.add_subcommand("sample", "draw samples");
  sample->add_option("sampler", cfg.kind, "sampler")
      ->required()
      ->check(CLI::IsMember({"gem-sticks", "paintbox", "crp", "ocrp", "two-phase"}));

  auto* exact = app.add_subcommand("exact", "exact laws and identities");
  exact->add_option("kind", cfg.kind, "quantity")
      ->required()
      ->check(CLI::IsMember(
          {"eppf", "appearance", "value", "ranked", "dp-value", "recursive-value", "mk", "mx", "moments"}));
  exact->add_option("--k", cfg.k, "discovery index for mk");
  exact->add_option("--r", cfg.r, "order for moments");

  auto* verify = app.add_subcommand("verify", "run verification suites");
  verify->add_option("--suite", cfg.suites, "suites (comma separated or repeated)");
  verify->add_flag("--timings", cfg.timings, "report check runtimes");
  verify->add_option("--threads", cfg.threads, "worker threads (0: all cores)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  cfg.alpha_set = alpha->count() > 0;
  cfg.theta_set = theta->count() > 0;
  cfg.n_set = n_opt->count() > 0;
  cfg.samples_set = samples->count() > 0;

  std::ofstream file;
  if (!cfg.out_path.empty()) {
    file.open(cfg.out_path);
    if (!file) {
      err << "error: cannot open '" << cfg.out_path << "'\n";
      return kExitUsage;
    }
  }
  std::ostream& dest = cfg.out_path.empty() ? out : file;

  try {
    if (sample->parsed()) return cmd_sample(cfg, dest, err);
    if (exact->parsed()) return cmd_exact(cfg, dest);
    return cmd_verify(cfg, dest);
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kExitCap;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace gempart
