#include "lipset/cantor.hpp"

#include <string>

namespace lipset {

AlphaRule::AlphaRule(std::vector<Rational> prefix, std::optional<Tail> tail)
    : prefix_(std::move(prefix)), tail_(std::move(tail)) {
  for (std::size_t i = 0; i < prefix_.size(); ++i) {
    if (prefix_[i] < 0 || prefix_[i] >= 1) {
      throw std::invalid_argument("alpha_" + std::to_string(i + 1) + " outside [0, 1)");
    }
  }
  if (tail_) {
    if (tail_->c < 0) throw std::invalid_argument("geometric tail needs c >= 0");
    if (tail_->q < 0 || tail_->q >= 1) {
      throw std::invalid_argument("geometric tail needs 0 <= q < 1 for a summable rule");
    }
    if (alpha(prefix_.size() + 1) >= 1) {
      throw std::invalid_argument("geometric tail produces alpha >= 1");
    }
  }
}

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

AlphaRule AlphaRule::parse(std::string_view text) {
  std::vector<Rational> prefix;
  std::optional<Tail> tail;
  for (auto piece : split(text, ';')) {
    if (piece.empty()) continue;
    if (piece.substr(0, 5) == "geom:") {
      auto args = split(piece.substr(5), ',');
      if (args.size() != 2) throw ParseError("geom tail expects 'geom:c,q'");
      tail = Tail{parse_rational(args[0]), parse_rational(args[1])};
    } else {
      if (tail) throw ParseError("alpha prefix must precede the geometric tail");
      for (auto item : split(piece, ',')) prefix.push_back(parse_rational(item));
    }
  }
  return AlphaRule(std::move(prefix), std::move(tail));
}

Rational AlphaRule::alpha(unsigned long k) const {
  if (k == 0) throw std::invalid_argument("alpha index starts at 1");
  if (k <= prefix_.size()) return prefix_[k - 1];
  if (!tail_) return 0;
  return tail_->c * pow(tail_->q, k);
}

Rational AlphaRule::tail_sum(unsigned long depth) const {
  Rational total = 0;
  for (std::size_t k = depth + 1; k <= prefix_.size(); ++k) total += prefix_[k - 1];
  if (tail_) {
    unsigned long m = std::max<unsigned long>(depth, prefix_.size());
    total += tail_->c * pow(tail_->q, m + 1) / (1 - tail_->q);
  }
  return total;
}

Rational AlphaRule::tail_sup(unsigned long depth) const {
  Rational best = 0;
  for (std::size_t k = depth + 1; k <= prefix_.size(); ++k) best = max(best, prefix_[k - 1]);
  if (tail_) {
    unsigned long m = std::max<unsigned long>(depth, prefix_.size());
    best = max(best, tail_->c * pow(tail_->q, m + 1));
  }
  return best;
}

bool operator==(const AlphaRule& a, const AlphaRule& b) {
  if (a.prefix_ != b.prefix_) return false;
  if (a.tail_.has_value() != b.tail_.has_value()) return false;
  return !a.tail_ || (a.tail_->c == b.tail_->c && a.tail_->q == b.tail_->q);
}

CantorGeometry::CantorGeometry(const CantorSpec& spec, unsigned long depth)
    : spec_(spec), depth_(depth) {
  d_.reserve(depth + 2);
  d_.push_back(spec.base.length());
  for (unsigned long k = 1; k <= depth + 1; ++k) {
    Rational a = spec.alpha.alpha(k);
    if (spec.require_below_third && a * 3 >= 1) {
      throw std::invalid_argument("alpha_" + std::to_string(k) + " >= 1/3 with the below-third flag set");
    }
    d_.push_back((1 - a) * d_.back() / 2);
  }
  beta_lower_ = max(Rational(0), Rational(1 - spec.alpha.tail_sum(depth)));
}

IntervalSet stage(const CantorSpec& spec, unsigned long n, std::size_t budget) {
  if (n >= 63 || (std::size_t{1} << n) > budget) {
    throw ResourceError("stage " + std::to_string(n) + " needs 2^" + std::to_string(n) +
                        " intervals, above the budget of " + std::to_string(budget));
  }
  CantorGeometry geo(spec, n);
  // Integer numerators over a common denominator.
  Integer den = spec.base.lo.get_den();
  mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), geo.d(n).get_den_mpz_t());
  for (unsigned long k = 0; k < n; ++k) {
    Rational shift = geo.child_shift(k);
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), shift.get_den_mpz_t());
  }
  auto scaled = [&](const Rational& r) { return Integer(r.get_num() * (den / r.get_den())); };
  std::vector<Integer> lefts{scaled(spec.base.lo)};
  lefts.reserve(std::size_t{1} << n);
  for (unsigned long k = 0; k < n; ++k) {
    Integer shift = scaled(geo.child_shift(k));
    std::vector<Integer> next;
    next.reserve(2 * lefts.size());
    for (auto& l : lefts) {
      Integer r = l + shift;
      next.push_back(std::move(l));
      next.push_back(std::move(r));
    }
    lefts = std::move(next);
  }
  const Integer len = scaled(geo.d(n));
  std::vector<Interval> parts;
  parts.reserve(lefts.size());
  for (auto& l : lefts) {
    Rational lo(l, den), hi(l + len, den);
    lo.canonicalize();
    hi.canonicalize();
    parts.emplace_back(std::move(lo), std::move(hi));
  }
  return IntervalSet::from_sorted(std::move(parts));
}

CantorParams params(const CantorSpec& spec, unsigned long n, unsigned long tail_depth) {
  if (tail_depth < n) throw std::invalid_argument("params needs tail_depth >= n");
  CantorGeometry geo(spec, n);
  CantorParams p;
  p.n = n;
  p.d_n = geo.d(n);
  p.stage_measure = p.d_n;
  mpz_class count;
  mpz_ui_pow_ui(count.get_mpz_t(), 2, n);
  p.stage_measure *= count;

  Rational beta_upper = 1;
  for (unsigned long k = n + 1; k <= tail_depth; ++k) beta_upper *= 1 - spec.alpha.alpha(k);
  Rational beta_lower = beta_upper * (1 - spec.alpha.tail_sum(tail_depth));
  if (beta_lower < 0) beta_lower = 0;
  p.beta_n = {beta_lower, beta_upper};
  p.gamma_n = {1 - 12 * (1 - beta_lower), 1 - 12 * (1 - beta_upper)};
  p.delta_n = p.d_n / 2;

  Rational next_alpha = spec.alpha.alpha(n + 1);
  p.next_length_above_third = 3 * geo.d(n + 1) > geo.d(n);
  bool below_third = true;
  for (unsigned long k = 1; k <= n + 1; ++k) below_third = below_third && 3 * spec.alpha.alpha(k) < 1;
  p.radius_range_valid = below_third && 3 * next_alpha < 1;
  return p;
}

}  // namespace lipset
