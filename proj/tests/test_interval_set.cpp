#include <random>

#include <doctest.h>

#include "lipset/interval_set.hpp"

using namespace lipset;

namespace {

IntervalSet set_of(std::initializer_list<std::pair<Rational, Rational>> parts) {
  std::vector<Interval> v;
  for (const auto& [lo, hi] : parts) v.emplace_back(lo, hi);
  return IntervalSet::normalize(v);
}

/// Membership of cell midpoints on a grid of the given step; sets with
/// endpoints on the grid are determined up to measure zero by these.
std::vector<bool> grid_membership(const IntervalSet& s, const Rational& lo, const Rational& hi, const Rational& step) {
  std::vector<bool> out;
  for (Rational x = lo + step / 2; x < hi; x += step) out.push_back(s.contains(x));
  return out;
}

Rational grid_measure(const IntervalSet& s, const Rational& lo, const Rational& hi, const Rational& step) {
  Rational m = 0;
  for (bool b : grid_membership(s, lo, hi, step)) {
    if (b) m += step;
  }
  return m;
}

IntervalSet random_set(std::mt19937_64& rng, int parts) {
  std::vector<Interval> raw;
  for (int i = 0; i < parts; ++i) {
    long a = static_cast<long>(rng() % 64), len = 1 + static_cast<long>(rng() % 12);
    raw.emplace_back(ratio(a, 8), ratio(a + len, 8));
  }
  return IntervalSet::normalize(raw);
}

}  // namespace

TEST_SUITE("interval_set") {
  TEST_CASE("normalize merges touching and overlapping parts") {
    CHECK(set_of({{0, 1}, {1, 2}}) == set_of({{0, 2}}));
    CHECK(set_of({}).empty());
    IntervalSet s = set_of({{2, 5}, {0, 1}, {4, 6}});
    REQUIRE(s.size() == 2);
    CHECK(s.parts()[0] == Interval(0, 1));
    CHECK(s.parts()[1] == Interval(2, 6));
  }

  TEST_CASE("normalize drops degenerate intervals") {
    CHECK(set_of({{1, 1}}).empty());
    CHECK(set_of({{1, 1}, {0, 2}}) == set_of({{0, 2}}));
  }

  TEST_CASE("normalize agrees with a membership grid") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 50; ++t) {
      std::vector<Interval> raw;
      for (int i = 0; i < 6; ++i) {
        long a = static_cast<long>(rng() % 40), len = 1 + static_cast<long>(rng() % 8);
        raw.emplace_back(ratio(a, 4), ratio(a + len, 4));
      }
      IntervalSet s = IntervalSet::normalize(raw);
      for (std::size_t i = 1; i < s.size(); ++i) CHECK(s.parts()[i - 1].hi < s.parts()[i].lo);
      const Rational step(1, 8);
      std::size_t idx = 0;
      for (Rational x = step / 2; x < 16; x += step, ++idx) {
        bool in_raw = false;
        for (const auto& iv : raw) in_raw = in_raw || (iv.lo <= x && x <= iv.hi);
        CHECK(s.contains(x) == in_raw);
      }
    }
  }

  TEST_CASE("set operations on small examples") {
    CHECK(set_of({{0, 1}}).intersect(set_of({{Rational(1, 2), 2}})) == set_of({{Rational(1, 2), 1}}));
    CHECK(set_of({{0, 3}}).subtract(set_of({{1, 2}})) == set_of({{0, 1}, {2, 3}}));
    CHECK(set_of({{0, 1}, {2, 3}}).unite(set_of({{Rational(1, 2), Rational(5, 2)}})) == set_of({{0, 3}}));
    CHECK(combine(SetOp::Union, set_of({{0, 1}}), set_of({{2, 3}})) == set_of({{0, 1}, {2, 3}}));
  }

  TEST_CASE("set operations agree with a membership grid") {
    std::mt19937_64 rng(11);
    const Rational lo = 0, hi = 10, step(1, 16);
    for (int t = 0; t < 40; ++t) {
      IntervalSet s = random_set(rng, 5), u = random_set(rng, 5);
      auto gs = grid_membership(s, lo, hi, step), gu = grid_membership(u, lo, hi, step);
      auto gi = grid_membership(s.intersect(u), lo, hi, step);
      auto gn = grid_membership(s.unite(u), lo, hi, step);
      auto gd = grid_membership(s.subtract(u), lo, hi, step);
      for (std::size_t i = 0; i < gs.size(); ++i) {
        CHECK(gi[i] == (gs[i] && gu[i]));
        CHECK(gn[i] == (gs[i] || gu[i]));
        CHECK(gd[i] == (gs[i] && !gu[i]));
      }
    }
  }

  TEST_CASE("measure_in") {
    IntervalSet s = set_of({{0, 1}, {2, 5}});
    CHECK(s.measure_in(Interval(-10, 10)) == 4);
    CHECK(set_of({{0, 1}}).measure_in(Interval(Rational(1, 2), Rational(3, 4))) == Rational(1, 4));
    CHECK(s.measure_in(Interval(Rational(1, 2), 3)) == Rational(3, 2));
    CHECK(grid_measure(s, Rational(1, 2), 3, Rational(1, 100)) == Rational(3, 2));
    CHECK(set_of({}).measure() == 0);
  }

  TEST_CASE("measure agrees with grid summation") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 30; ++t) {
      IntervalSet s = random_set(rng, 6);
      CHECK(s.measure() == grid_measure(s, 0, 10, Rational(1, 8)));
      Interval w(Rational(3, 2), Rational(29, 4));
      CHECK(s.measure_in(w) == grid_measure(s.clip(w), 0, 10, Rational(1, 8)));
    }
  }

  TEST_CASE("symmetric difference measure") {
    CHECK(symdiff_measure(set_of({{0, 1}}), set_of({{0, 1}})) == 0);
    CHECK(symdiff_measure(set_of({{0, 1}}), set_of({{0, Rational(1, 2)}})) == Rational(1, 2));
    IntervalSet s = set_of({{0, 1}, {2, 3}}), u = set_of({{Rational(1, 2), Rational(5, 2)}});
    CHECK(symdiff_measure(s, u) == 2);
    CHECK(grid_measure(s.subtract(u).unite(u.subtract(s)), 0, 4, Rational(1, 100)) == 2);
  }

  TEST_CASE("complement and gaps") {
    IntervalSet s = set_of({{0, 1}, {2, 3}});
    auto g = s.gaps();
    REQUIRE(g.size() == 1);
    CHECK(g[0] == Interval(1, 2));
    CHECK(s.complement_in(Interval(-1, 4)) == set_of({{-1, 0}, {1, 2}, {3, 4}}));
    CHECK(s.hull() == Interval(0, 3));
  }

  TEST_CASE("split_at cuts only inside parts") {
    IntervalSet s = set_of({{0, 2}, {3, 4}});
    std::vector<Rational> cuts{1, Rational(5, 2), 3};
    auto pieces = s.split_at(cuts);
    REQUIRE(pieces.size() == 3);
    CHECK(pieces[0] == Interval(0, 1));
    CHECK(pieces[1] == Interval(1, 2));
    CHECK(pieces[2] == Interval(3, 4));
  }

  TEST_CASE("from_sorted rejects unsorted input") {
    CHECK_THROWS(IntervalSet::from_sorted({Interval(2, 3), Interval(0, 1)}));
    CHECK(IntervalSet::from_sorted({Interval(0, 1), Interval(1, 2)}) == set_of({{0, 2}}));
  }

  TEST_CASE("rational parsing") {
    CHECK(parse_rational("3/6") == Rational(1, 2));
    CHECK(parse_rational("-2") == -2);
    CHECK(parse_rational("0.25") == Rational(1, 4));
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("abc"), ParseError);
    CHECK(format_rational(Rational(-3, 4)) == "-3/4");
  }
}
