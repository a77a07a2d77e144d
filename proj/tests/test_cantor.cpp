#include <doctest.h>

#include "lipset/cantor.hpp"
#include "lipset/packing.hpp"

using namespace lipset;

namespace {

CantorSpec quarter() { return CantorSpec{AlphaRule::geometric(1, Rational(1, 4)), Interval(0, 1)}; }

/// Removes the centered open middle proportion alpha_k from every interval,
/// level by level.
std::vector<Interval> naive_stage(const CantorSpec& spec, unsigned long n) {
  std::vector<Interval> cur{spec.base};
  for (unsigned long k = 1; k <= n; ++k) {
    std::vector<Interval> next;
    const Rational a = spec.alpha.alpha(k);
    for (const auto& iv : cur) {
      const Rational keep = (1 - a) * iv.length() / 2;
      next.emplace_back(iv.lo, iv.lo + keep);
      next.emplace_back(iv.hi - keep, iv.hi);
    }
    cur = std::move(next);
  }
  return cur;
}

Rational product(const CantorSpec& spec, unsigned long from, unsigned long to) {
  Rational p = 1;
  for (unsigned long k = from; k <= to; ++k) p *= 1 - spec.alpha.alpha(k);
  return p;
}

}  // namespace

TEST_SUITE("cantor") {
  TEST_CASE("alpha rules") {
    AlphaRule g = AlphaRule::geometric(1, Rational(1, 4));
    CHECK(g.alpha(1) == Rational(1, 4));
    CHECK(g.alpha(3) == Rational(1, 64));
    CHECK(g.tail_sum(3) == Rational(1, 192));
    AlphaRule p = AlphaRule::parse("1/2,1/3;geom:1,1/4");
    CHECK(p.alpha(1) == Rational(1, 2));
    CHECK(p.alpha(2) == Rational(1, 3));
    CHECK(p.alpha(3) == Rational(1, 64));
    CHECK(AlphaRule::parse("geom:1,1/4") == g);
    AlphaRule finite = AlphaRule::parse("1/4");
    CHECK(finite.alpha(2) == 0);
    CHECK(finite.tail_sum(1) == 0);
    CHECK_THROWS(AlphaRule::parse("geom:1,2"));
    CHECK_THROWS(AlphaRule::parse("3/2"));
  }

  TEST_CASE("small stages") {
    CHECK(stage(quarter(), 0) == IntervalSet::single(Interval(0, 1)));
    CHECK(stage(quarter(), 1) ==
          IntervalSet::normalize({Interval(0, Rational(3, 8)), Interval(Rational(5, 8), 1)}));
    IntervalSet s2 = stage(quarter(), 2);
    CHECK(s2.size() == 4);
    for (const auto& iv : s2.parts()) CHECK(iv.length() == Rational(45, 256));
    CHECK(s2.measure_in(Interval(0, 1)) == Rational(45, 64));
    CHECK(stage(quarter(), 3).measure() == Rational(2835, 4096));
  }

  TEST_CASE("stages agree with direct removal") {
    CantorSpec shifted{AlphaRule::parse("1/3,1/5;geom:1/2,1/3"), Interval(-2, 1)};
    for (const auto& spec : {quarter(), shifted}) {
      for (unsigned long n = 0; n <= 9; ++n) {
        auto naive = naive_stage(spec, n);
        IntervalSet s = stage(spec, n);
        REQUIRE(s.size() == naive.size());
        for (std::size_t i = 0; i < naive.size(); ++i) CHECK(s.parts()[i] == naive[i]);
        CHECK(s.measure() == spec.base.length() * product(spec, 1, n));
      }
    }
  }

  TEST_CASE("geometry lengths") {
    CantorGeometry g(quarter(), 20);
    CHECK(g.d(0) == 1);
    CHECK(g.d(1) == Rational(3, 8));
    for (unsigned long n = 1; n <= 20; ++n) {
      CHECK(2 * g.d(n) == (1 - quarter().alpha.alpha(n)) * g.d(n - 1));
      CHECK(g.child_shift(n - 1) == g.d(n - 1) - g.d(n));
    }
  }

  TEST_CASE("params") {
    CantorParams p1 = params(quarter(), 1, 10);
    CHECK(p1.d_n == Rational(3, 8));
    CHECK(p1.delta_n == Rational(3, 16));
    CHECK(p1.next_length_above_third);
    CHECK(p1.radius_range_valid);

    CantorParams p2 = params(quarter(), 2, 10);
    const Rational upper = product(quarter(), 3, 10);
    CHECK(p2.beta_n.upper == upper);
    CHECK(p2.beta_n.lower == upper * (1 - dyadic(20) / 3));
    CHECK(p2.gamma_n.lower >= 1 - 12 * (1 - p2.beta_n.lower));
    CHECK(p2.gamma_n.upper == 1 - 12 * (1 - p2.beta_n.upper));
    CHECK(p2.stage_measure == Rational(45, 64));

    CantorSpec finite{AlphaRule::parse("1/4,1/8"), Interval(0, 1)};
    CantorParams pf = params(finite, 2, 10);
    CHECK(pf.beta_n.upper == 1);
    CHECK(pf.gamma_n.upper == 1);
  }

  TEST_CASE("d_{n+1} > d_n / 3 for the quarter rule") {
    CantorGeometry g(quarter(), 21);
    for (unsigned long n = 0; n < 20; ++n) CHECK(3 * g.d(n + 1) > g.d(n));
  }

  TEST_CASE("stage budget") { CHECK_THROWS_AS(stage(quarter(), 12, 1000), ResourceError); }

  TEST_CASE("packing a single set") {
    auto [packed, oracle] = pack(1, GapPolicy::WidestFirst, 8);
    CHECK(packed.count == 1);
    MeasureBounds b = bounds(oracle, Interval(0, 1), 12);
    CHECK(b.lower >= Rational(11, 24));
    CHECK(b.upper <= Rational(1, 2));
  }

  TEST_CASE("packed sets are disjoint and centered") {
    for (auto policy : {GapPolicy::WidestFirst, GapPolicy::LeftmostFirst}) {
      auto [packed, oracle] = pack(3, policy, 8);
      REQUIRE(packed.placements.size() == 3);
      for (std::size_t i = 1; i < 3; ++i) {
        const Placement& p = packed.placements[i];
        CHECK(p.gap.lo < p.placed.lo);
        CHECK(p.placed.hi < p.gap.hi);
        CHECK(p.placed.lo - p.gap.lo == p.gap.hi - p.placed.hi);
        CHECK(p.placed.length() * 3 == p.gap.length());
        IntervalSet earlier = realize(packed.prefix(i), 8);
        CHECK(earlier.measure_in(p.placed) == 0);
      }
      MeasureBounds total = bounds(oracle, oracle.hull(), 12);
      CHECK(total.upper <= Rational(1, 2) + Rational(1, 4) + Rational(1, 8));
    }
  }

  TEST_CASE("gap report") {
    auto [one, o1] = pack(1, GapPolicy::WidestFirst, 8);
    auto rows1 = gap_report(one, 1, 1);
    REQUIRE(rows1.size() == 1);
    CHECK(rows1[0].ratio_upper == 0);

    auto [three, o3] = pack(3, GapPolicy::WidestFirst, 8);
    for (const auto& row : gap_report(three, 2, 8)) CHECK(row.ratio_upper < Rational(1, 2));
  }
}
