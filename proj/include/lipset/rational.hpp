#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace lipset {

/// Exact rational number. GMP keeps every value in canonical form
/// (positive denominator, reduced), so equality is structural.
using Rational = mpq_class;
using Integer = mpz_class;

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A requested computation would exceed a configured resource budget.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Textual or structural input could not be interpreted.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Parses "p/q", "p" or a finite decimal such as "-0.125".
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form; the denominator is always written, even when it is 1.
std::string format_rational(const Rational& r);

/// Approximate decimal rendering, display only.
std::string format_decimal(const Rational& r, int digits = 12);

double to_double(const Rational& r);

inline Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }
inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

/// base^exp for exp >= 0.
Rational pow(const Rational& base, unsigned long exp);

/// 2^(-k).
Rational dyadic(unsigned long k);

/// num / den in canonical form.
inline Rational ratio(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace lipset
