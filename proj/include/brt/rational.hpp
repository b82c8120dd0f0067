#pragma once

// Exact scalar types. Every feasibility and dominance decision in the library
// goes through these; no floating point is involved.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace brt {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

/// Largest integer not above r.
inline BigInt floor_of(const Rational& r) {
  BigInt num = numerator_of(r);
  const BigInt den = denominator_of(r);
  BigInt q = num / den;  // truncates toward zero
  if (num < 0 && q * den != num) --q;
  return q;
}

/// Smallest integer not below r.
inline BigInt ceil_of(const Rational& r) { return -floor_of(-r); }

/// Round half up: floor(r + 1/2).
inline BigInt round_of(const Rational& r) { return floor_of(r + Rational(1, 2)); }

inline bool is_integer(const Rational& r) { return denominator_of(r) == 1; }

inline BigInt gcd_of(const BigInt& a, const BigInt& b) { return boost::multiprecision::gcd(a, b); }
inline BigInt lcm_of(const BigInt& a, const BigInt& b) {
  if (a == 0 || b == 0) return 0;
  return boost::multiprecision::abs(a / gcd_of(a, b) * b);
}

/// Narrowing conversion that refuses to lose information.
inline std::int64_t to_int64(const BigInt& v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    throw std::overflow_error("integer does not fit into 64 bits: " + v.str());
  }
  return v.convert_to<std::int64_t>();
}

/// "p/q" in lowest terms, or "p" when the denominator is one.
inline std::string to_string(const Rational& r) {
  if (is_integer(r)) return numerator_of(r).str();
  return numerator_of(r).str() + "/" + denominator_of(r).str();
}

inline std::string to_string(const BigInt& v) { return v.str(); }

/// Fixed-point rendering used for plots and human-readable tables only.
inline std::string to_decimal(const Rational& r, int places) {
  BigInt scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  const bool negative = r < 0;
  const BigInt scaled = round_of(boost::multiprecision::abs(r) * scale);
  const BigInt whole = scaled / scale;
  std::string frac = BigInt(scaled % scale).str();
  if (places > 0) frac.insert(frac.begin(), static_cast<std::size_t>(places) - frac.size(), '0');
  std::string out = negative && scaled != 0 ? "-" : "";
  out += whole.str();
  if (places > 0) out += "." + frac;
  return out;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

namespace detail {
inline BigInt parse_integer(std::string_view text, std::string_view whole) {
  std::size_t pos = 0;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) pos = 1;
  if (pos == text.size()) throw std::invalid_argument("malformed rational: '" + std::string(whole) + "'");
  for (std::size_t i = pos; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') {
      throw std::invalid_argument("malformed rational: '" + std::string(whole) + "'");
    }
  }
  BigInt v(std::string(text[0] == '+' ? text.substr(1) : text));
  return v;
}
}  // namespace detail

/// Parses "p/q", "p" or "-p/q". The denominator must be nonzero.
inline Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(detail::parse_integer(text, text));
  const BigInt num = detail::parse_integer(text.substr(0, slash), text);
  const BigInt den = detail::parse_integer(text.substr(slash + 1), text);
  if (den == 0) throw std::invalid_argument("zero denominator in rational: '" + std::string(text) + "'");
  return Rational(num, den);
}

}  // namespace brt
