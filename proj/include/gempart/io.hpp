#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "gempart/gibbs.hpp"
#include "gempart/oracle.hpp"
#include "gempart/samplers.hpp"

namespace gempart {

using Json = nlohmann::ordered_json;

/// Rationals as "p/q" strings, doubles as JSON numbers.
inline Json scalar_json(const Rational& q) { return to_string(q); }
inline Json scalar_json(double x) { return x; }

/// Accepts a "p/q" string (exact) or a JSON number (floating).
std::variant<Rational, double> scalar_from_json(const Json& j);

Json composition_json(const Composition& c);

template <Scalar T>
Json weights_to_json(const GibbsWeights<T>& w) {
  Json rows = Json::array();
  for (int n = 1; n <= w.n_max(); ++n) {
    Json row = Json::array();
    for (int k = 1; k <= n; ++k) row.push_back(scalar_json(w.V(k, n)));
    rows.push_back(std::move(row));
  }
  Json out;
  out["alpha"] = scalar_json(w.alpha());
  out["V"] = std::move(rows);
  out["provenance"] = to_string(w.provenance());
  return out;
}

using AnyWeights = std::variant<GibbsWeights<Rational>, GibbsWeights<double>>;

/// Exact when alpha and every V entry are "p/q" strings, floating otherwise.
/// Imported arrays are validated and tagged user-supplied.
AnyWeights weights_from_json(const Json& j);

Json trace_to_json(const SampleTrace& trace);

template <Scalar T>
Json distribution_to_json(const ExactDistribution<T>& d) {
  Json support = Json::array();
  Json probs = Json::array();
  for (std::size_t i = 0; i < d.support.size(); ++i) {
    support.push_back(d.support[i].to_string());
    probs.push_back(scalar_json(d.probabilities[i]));
  }
  Json out;
  out["n"] = d.n;
  out["support"] = std::move(support);
  out["probabilities"] = std::move(probs);
  return out;
}

/// "composition,probability" rows; compositions are quoted.
template <Scalar T>
std::string distribution_to_csv(const ExactDistribution<T>& d) {
  std::string out = "composition,probability\n";
  for (std::size_t i = 0; i < d.support.size(); ++i) {
    out += '"' + d.support[i].to_string() + "\"," + to_string(d.probabilities[i]) + '\n';
  }
  return out;
}

struct CsvRow {
  std::vector<std::string> cells;
};

/// Minimal RFC 4180 reader (quoted cells, doubled quotes).
std::vector<CsvRow> parse_csv(std::string_view text);

std::string csv_escape(const std::string& cell);

}  // namespace gempart
