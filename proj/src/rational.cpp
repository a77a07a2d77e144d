#include "lipset/rational.hpp"

#include <cctype>
#include <iomanip>
#include <sstream>

namespace lipset {

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

Integer to_integer(std::string_view s) {
  std::string str(s);
  if (!str.empty() && str[0] == '+') str.erase(0, 1);
  return Integer(str, 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = s.substr(0, slash);
    auto den = s.substr(slash + 1);
    if (!is_integer_literal(num) || !is_integer_literal(den) || den[0] == '-' || den[0] == '+') {
      throw ParseError("malformed rational '" + std::string(text) + "'");
    }
    Integer d = to_integer(den);
    if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    Rational r(to_integer(num), d);
    r.canonicalize();
    return r;
  }
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    auto whole = s.substr(0, dot);
    auto frac = s.substr(dot + 1);
    bool negative = !whole.empty() && whole[0] == '-';
    std::string_view digits_whole = whole;
    if (!digits_whole.empty() && (digits_whole[0] == '-' || digits_whole[0] == '+')) {
      digits_whole.remove_prefix(1);
    }
    if (frac.empty() && digits_whole.empty()) throw ParseError("malformed rational '" + std::string(text) + "'");
    for (char c : digits_whole) {
      if (!std::isdigit(static_cast<unsigned char>(c))) throw ParseError("malformed rational '" + std::string(text) + "'");
    }
    for (char c : frac) {
      if (!std::isdigit(static_cast<unsigned char>(c))) throw ParseError("malformed rational '" + std::string(text) + "'");
    }
    std::string all = std::string(digits_whole) + std::string(frac);
    if (all.empty()) all = "0";
    Integer den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
    Rational r(Integer(all, 10), den);
    r.canonicalize();
    return negative ? Rational(-r) : r;
  }
  if (!is_integer_literal(s)) throw ParseError("malformed rational '" + std::string(text) + "'");
  return Rational(to_integer(s));
}

std::string format_rational(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string format_decimal(const Rational& r, int digits) {
  std::ostringstream os;
  os << std::setprecision(digits) << r.get_d();
  return os.str();
}

double to_double(const Rational& r) { return r.get_d(); }

Rational pow(const Rational& base, unsigned long exp) {
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), exp);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), exp);
  return Rational(num, den);
}

Rational dyadic(unsigned long k) {
  Integer den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, k);
  return Rational(Integer(1), den);
}

}  // namespace lipset
