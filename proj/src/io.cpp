#include "gempart/io.hpp"

namespace gempart {

std::variant<Rational, double> scalar_from_json(const Json& j) {
  if (j.is_string()) return parse_number(j.get<std::string>());
  if (j.is_number()) return j.get<double>();
  throw InvalidArgument("expected a number or a \"p/q\" string");
}

Json composition_json(const Composition& c) { return Json(c.vec()); }

AnyWeights weights_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("alpha") || !j.contains("V")) {
    throw InvalidArgument("weights JSON needs \"alpha\" and \"V\"");
  }
  const auto alpha = scalar_from_json(j.at("alpha"));
  bool exact = std::holds_alternative<Rational>(alpha);
  std::vector<std::vector<std::variant<Rational, double>>> raw;
  for (const auto& row : j.at("V")) {
    auto& r = raw.emplace_back();
    for (const auto& v : row) {
      r.push_back(scalar_from_json(v));
      exact = exact && std::holds_alternative<Rational>(r.back());
    }
  }
  if (exact) {
    std::vector<std::vector<Rational>> rows;
    for (const auto& r : raw) {
      auto& out = rows.emplace_back();
      for (const auto& v : r) out.push_back(std::get<Rational>(v));
    }
    return GibbsWeights<Rational>::from_table(std::get<Rational>(alpha), rows);
  }
  auto as_double = [](const std::variant<Rational, double>& v) {
    return std::holds_alternative<Rational>(v) ? to_double(std::get<Rational>(v)) : std::get<double>(v);
  };
  std::vector<std::vector<double>> rows;
  for (const auto& r : raw) {
    auto& out = rows.emplace_back();
    for (const auto& v : r) out.push_back(as_double(v));
  }
  return GibbsWeights<double>::from_table(as_double(alpha), rows);
}

Json trace_to_json(const SampleTrace& trace) {
  Json out;
  out["values"] = trace.values();
  out["N_star"] = composition_json(trace.n_star());
  out["N_up"] = composition_json(trace.n_up());
  out["partition"] = trace.partition().blocks;
  return out;
}

std::vector<CsvRow> parse_csv(std::string_view text) {
  std::vector<CsvRow> rows;
  CsvRow row;
  std::string cell;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += ch;
      }
      continue;
    }
    if (ch == '"') {
      quoted = true;
      any = true;
    } else if (ch == ',') {
      row.cells.push_back(std::move(cell));
      cell.clear();
      any = true;
    } else if (ch == '\n') {
      if (any || !cell.empty()) {
        row.cells.push_back(std::move(cell));
        rows.push_back(std::move(row));
      }
      row = CsvRow{};
      cell.clear();
      any = false;
    } else if (ch != '\r') {
      cell += ch;
      any = true;
    }
  }
  if (any || !cell.empty()) {
    row.cells.push_back(std::move(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char ch : cell) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

}  // namespace gempart
