#include "lipset/interval_set.hpp"

#include <algorithm>

namespace lipset {

Interval::Interval(Rational lo_, Rational hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
  if (hi < lo) {
    throw std::invalid_argument("interval with lo > hi: [" + format_rational(lo) + ", " +
                                format_rational(hi) + "]");
  }
}

Rational overlap(const Interval& a, const Interval& b) {
  const Rational& lo = max(a.lo, b.lo);
  const Rational& hi = min(a.hi, b.hi);
  return hi > lo ? Rational(hi - lo) : Rational(0);
}

IntervalSet IntervalSet::normalize(std::span<const Interval> raw) {
  std::vector<Interval> sorted;
  sorted.reserve(raw.size());
  for (const auto& iv : raw) {
    if (iv.hi < iv.lo) {
      throw std::invalid_argument("interval with lo > hi in normalize");
    }
    if (iv.lo < iv.hi) sorted.push_back(iv);
  }
  std::sort(sorted.begin(), sorted.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> merged;
  merged.reserve(sorted.size());
  for (auto& iv : sorted) {
    if (!merged.empty() && iv.lo <= merged.back().hi) {
      if (merged.back().hi < iv.hi) merged.back().hi = iv.hi;
    } else {
      merged.push_back(std::move(iv));
    }
  }
  return IntervalSet(std::move(merged));
}

IntervalSet IntervalSet::normalize(std::initializer_list<Interval> raw) {
  return normalize(std::span<const Interval>(raw.begin(), raw.size()));
}

IntervalSet IntervalSet::single(const Interval& iv) {
  return normalize(std::span<const Interval>(&iv, 1));
}

IntervalSet IntervalSet::from_sorted(std::vector<Interval> sorted) {
  std::vector<Interval> merged;
  merged.reserve(sorted.size());
  for (auto& iv : sorted) {
    if (!(iv.lo < iv.hi)) continue;
    if (!merged.empty()) {
      if (iv.lo < merged.back().lo) throw std::invalid_argument("from_sorted: input not sorted");
      if (iv.lo <= merged.back().hi) {
        if (merged.back().hi < iv.hi) merged.back().hi = std::move(iv.hi);
        continue;
      }
    }
    merged.push_back(std::move(iv));
  }
  return IntervalSet(std::move(merged));
}

Rational IntervalSet::measure() const {
  // Numerators over a running common denominator; most parts of a
  // construction stage share one, which avoids a gcd per addition.
  Integer num = 0, den = 1, scale;
  auto add = [&](const Rational& v, bool negate) {
    if (!mpz_divisible_p(den.get_mpz_t(), v.get_den_mpz_t())) {
      Integer g;
      mpz_lcm(g.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t());
      num *= g / den;
      den = g;
    }
    mpz_divexact(scale.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t());
    if (negate) {
      mpz_submul(num.get_mpz_t(), v.get_num_mpz_t(), scale.get_mpz_t());
    } else {
      mpz_addmul(num.get_mpz_t(), v.get_num_mpz_t(), scale.get_mpz_t());
    }
  };
  for (const auto& p : parts_) {
    add(p.hi, false);
    add(p.lo, true);
  }
  Rational total(num, den);
  total.canonicalize();
  return total;
}

Rational IntervalSet::measure_in(const Interval& window) const {
  Rational total = 0;
  // First part whose right end exceeds window.lo.
  auto it = std::upper_bound(parts_.begin(), parts_.end(), window.lo,
                             [](const Rational& x, const Interval& p) { return x < p.hi; });
  for (; it != parts_.end() && it->lo < window.hi; ++it) total += overlap(*it, window);
  return total;
}

std::ptrdiff_t IntervalSet::part_index(const Rational& x) const {
  auto it = std::lower_bound(parts_.begin(), parts_.end(), x,
                             [](const Interval& p, const Rational& v) { return p.hi < v; });
  if (it != parts_.end() && it->lo <= x) return it - parts_.begin();
  return -1;
}

bool IntervalSet::contains(const Rational& x) const { return part_index(x) >= 0; }

bool IntervalSet::contains(const IntervalSet& other) const {
  return other.subtract(*this).empty();
}

std::vector<Rational> IntervalSet::endpoints() const {
  std::vector<Rational> out;
  out.reserve(2 * parts_.size());
  for (const auto& p : parts_) {
    out.push_back(p.lo);
    out.push_back(p.hi);
  }
  return out;
}

std::vector<Interval> IntervalSet::gaps() const {
  std::vector<Interval> out;
  for (std::size_t i = 1; i < parts_.size(); ++i) out.emplace_back(parts_[i - 1].hi, parts_[i].lo);
  return out;
}

IntervalSet IntervalSet::complement_in(const Interval& window) const {
  return IntervalSet::single(window).subtract(*this);
}

Interval IntervalSet::hull() const {
  if (parts_.empty()) return Interval(0, 0);
  return Interval(parts_.front().lo, parts_.back().hi);
}

IntervalSet IntervalSet::unite(const IntervalSet& other) const {
  std::vector<Interval> all = parts_;
  all.insert(all.end(), other.parts_.begin(), other.parts_.end());
  return normalize(all);
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
  std::vector<Interval> out;
  std::size_t i = 0, j = 0;
  while (i < parts_.size() && j < other.parts_.size()) {
    const auto& a = parts_[i];
    const auto& b = other.parts_[j];
    const Rational& lo = max(a.lo, b.lo);
    const Rational& hi = min(a.hi, b.hi);
    if (lo < hi) out.emplace_back(lo, hi);
    if (a.hi < b.hi) ++i; else ++j;
  }
  return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::subtract(const IntervalSet& other) const {
  std::vector<Interval> out;
  std::size_t j = 0;
  for (const auto& a : parts_) {
    Rational cursor = a.lo;
    while (j < other.parts_.size() && other.parts_[j].hi <= cursor) ++j;
    std::size_t k = j;
    while (k < other.parts_.size() && other.parts_[k].lo < a.hi) {
      const auto& b = other.parts_[k];
      if (cursor < b.lo) out.emplace_back(cursor, b.lo);
      if (cursor < b.hi) cursor = b.hi;
      if (b.hi >= a.hi) break;
      ++k;
    }
    if (cursor < a.hi) out.emplace_back(cursor, a.hi);
  }
  return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::clip(const Interval& window) const {
  return intersect(IntervalSet::single(window));
}

std::vector<Interval> IntervalSet::split_at(std::span<const Rational> points) const {
  std::vector<Rational> cuts(points.begin(), points.end());
  std::sort(cuts.begin(), cuts.end());
  std::vector<Interval> out;
  auto it = cuts.begin();
  for (const auto& p : parts_) {
    it = std::upper_bound(cuts.begin(), cuts.end(), p.lo);
    Rational left = p.lo;
    for (; it != cuts.end() && *it < p.hi; ++it) {
      if (left < *it) out.emplace_back(left, *it);
      left = *it;
    }
    out.emplace_back(left, p.hi);
  }
  return out;
}

IntervalSet combine(SetOp op, const IntervalSet& s, const IntervalSet& t) {
  switch (op) {
    case SetOp::Union: return s.unite(t);
    case SetOp::Intersection: return s.intersect(t);
    case SetOp::Difference: return s.subtract(t);
  }
  return {};
}

Rational symdiff_measure(const IntervalSet& s, const IntervalSet& t) {
  return s.subtract(t).measure() + t.subtract(s).measure();
}

}  // namespace lipset
