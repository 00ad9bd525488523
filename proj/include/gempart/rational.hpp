#pragma once

#include <gmpxx.h>

#include <cmath>
#include <concepts>
#include <string>
#include <string_view>
#include <variant>

namespace gempart {

using BigInt = mpz_class;
using Rational = mpq_class;

// The two arithmetic modes: exact rationals for identities, doubles for
// simulation.
template <class T>
concept Scalar = std::same_as<T, double> || std::same_as<T, Rational>;

template <Scalar T>
inline constexpr bool is_exact_v = std::same_as<T, Rational>;

/// Nearest double to q (ties to even). mpq's get_d truncates, so the
/// result is corrected against its neighbours.
double to_double(const Rational& q);
inline double to_double(double x) { return x; }

template <Scalar T>
T ratio(long num, long den = 1) {
  if constexpr (is_exact_v<T>) {
    Rational q(num, den);
    q.canonicalize();
    return q;
  } else {
    return static_cast<double>(num) / static_cast<double>(den);
  }
}

template <Scalar T>
T from_double(double x) {
  if constexpr (is_exact_v<T>) {
    return Rational(x);
  } else {
    return x;
  }
}

template <Scalar T>
T scalar_abs(const T& x) {
  if constexpr (is_exact_v<T>) {
    return abs(x);
  } else {
    return std::fabs(x);
  }
}

template <Scalar T>
T from_bigint(const BigInt& z) {
  if constexpr (is_exact_v<T>) {
    return Rational(z);
  } else {
    return z.get_d();
  }
}

/// "p/q" (or "p" for integers) for rationals; shortest round-trip form for doubles.
std::string to_string(const Rational& q);
std::string to_string(double x);

/// Accepts "p/q", "p", "-p/q". Throws InvalidArgument otherwise.
Rational parse_rational(std::string_view text);

/// Rational syntax gives a Rational; decimal or exponent syntax gives a double.
std::variant<Rational, double> parse_number(std::string_view text);

}  // namespace gempart
