#include "gempart/rational.hpp"

#include <array>
#include <cstdint>
#include <cstring>
#include <charconv>
#include <cmath>
#include <limits>
#include <regex>

#include "gempart/errors.hpp"

namespace gempart {

double to_double(const Rational& q) {
  double d = q.get_d();
  if (!std::isfinite(d)) {
    return d;
  }
  const Rational err = abs(q - Rational(d));
  if (err == 0) {
    return d;
  }
  // get_d truncates toward zero, so the nearest double is d or the next one
  // away from zero.
  const double away = std::nextafter(d, q > 0 ? std::numeric_limits<double>::infinity()
                                              : -std::numeric_limits<double>::infinity());
  if (!std::isfinite(away)) {
    return d;
  }
  const Rational err_away = abs(q - Rational(away));
  if (err_away < err) {
    return away;
  }
  if (err_away == err) {
    // tie: pick the candidate with an even mantissa
    std::int64_t bits_d = 0;
    std::memcpy(&bits_d, &d, sizeof d);
    return (bits_d & 1) == 0 ? d : away;
  }
  return d;
}

std::string to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_str();
}

std::string to_string(double x) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc{}) {
    throw Error("failed to format double");
  }
  return std::string(buf.data(), end);
}

namespace {

const std::regex& rational_pattern() {
  static const std::regex re(R"(^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$)");
  return re;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::cmatch m;
  if (!std::regex_match(text.begin(), text.end(), m, rational_pattern())) {
    throw InvalidArgument("not a rational number: '" + std::string(text) + "'");
  }
  std::string num = m[1].str();
  if (!num.empty() && num.front() == '+') {
    num.erase(0, 1);
  }
  BigInt p(num);
  BigInt q(1);
  if (m[2].matched) {
    q = BigInt(m[2].str());
    if (q == 0) {
      throw InvalidArgument("zero denominator in '" + std::string(text) + "'");
    }
  }
  Rational r(p, q);
  r.canonicalize();
  return r;
}

std::variant<Rational, double> parse_number(std::string_view text) {
  std::cmatch m;
  if (std::regex_match(text.begin(), text.end(), m, rational_pattern())) {
    return parse_rational(text);
  }
  std::string s(text);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("not a number: '" + s + "'");
  }
  while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) {
    ++used;
  }
  if (used != s.size() || !std::isfinite(value)) {
    throw InvalidArgument("not a number: '" + s + "'");
  }
  return value;
}

}  // namespace gempart
