#include <random>

#include <doctest.h>

#include "lipset/cantor.hpp"
#include "lipset/density.hpp"

using namespace lipset;

namespace {

IntervalSet unit() { return IntervalSet::single(Interval(0, 1)); }
OracleSpec unit_oracle() { return OracleSpec::finite(unit()); }
CantorSpec quarter() { return CantorSpec{AlphaRule::geometric(1, Rational(1, 4)), Interval(0, 1)}; }

/// min over grid radii r = delta i / steps of max one-sided ratio.
Rational grid_inf(const IntervalSet& e, const Rational& x, const Rational& delta, int steps) {
  Rational best = 2;
  for (int i = 1; i <= steps; ++i) {
    Rational r = delta * ratio(i, steps);
    Rational left = e.measure_in(Interval(x - r, x)) / r, right = e.measure_in(Interval(x, x + r)) / r;
    best = min(best, max(left, right));
  }
  return best;
}

}  // namespace

TEST_SUITE("density") {
  TEST_CASE("side density of an interval") {
    MeasureBounds right = side_density(unit_oracle(), 0, Rational(1, 2), Side::Right, 4);
    CHECK(right.lower == 1);
    CHECK(right.upper == 1);
    CHECK(side_density(unit_oracle(), 0, Rational(1, 2), Side::Left, 4).upper == 0);
    OracleSpec two = OracleSpec::finite(IntervalSet::normalize({Interval(0, 1), Interval(2, 3)}));
    for (Side s : {Side::Left, Side::Right}) CHECK(side_density(two, Rational(3, 2), Rational(1, 2), s, 4).upper == 0);
  }

  TEST_CASE("side measure functions") {
    PLFunction m = side_measure(unit(), Rational(1, 2), Side::Right, 1);
    CHECK(m.eval(Rational(1, 4)) == Rational(1, 4));
    CHECK(m.eval(1) == Rational(1, 2));
    OracleSpec q = OracleSpec::cantor(quarter());
    PLFunction lo = side_measure_lower(q, 0, Side::Right, Rational(1, 2), 8);
    PLFunction hi = side_measure_upper(q, 0, Side::Right, Rational(1, 2), 8);
    for (int i = 1; i <= 32; ++i) {
      Rational r = ratio(i, 64);
      MeasureBounds b = bounds(q, Interval(0, r), 14);
      CHECK(lo.eval(r) <= b.upper);
      CHECK(b.lower <= hi.eval(r));
    }
  }

  TEST_CASE("membership examples") {
    const Rational g(1, 2), d(1, 4);
    EgdVerdict at0 = egd_member(unit(), 0, g, d);
    CHECK(at0.status == Verdict::Member);
    EgdVerdict out = egd_member(unit(), Rational(-1, 16), g, d);
    CHECK(out.status == Verdict::Nonmember);
    REQUIRE(out.witness_r);
    CHECK(*out.witness_r == Rational(1, 16));
    CHECK(*out.witness_value == 0);
    REQUIRE(out.stable_radius);
    CHECK(*out.stable_radius > 0);
  }

  TEST_CASE("membership region of [0,1] is [0,1]") {
    const Rational g(1, 2), d(1, 4);
    for (int i = -40; i <= 80; ++i) {
      Rational x = ratio(i, 64);
      bool inside = 0 <= x && x <= 1;
      CHECK((egd_member(unit(), x, g, d).status == Verdict::Member) == inside);
    }
    CHECK(egd_member(unit(), Rational(-1, 1000000), g, d).status == Verdict::Nonmember);
    CHECK(egd_member(unit(), Rational(1000001, 1000000), g, d).status == Verdict::Nonmember);
  }

  TEST_CASE("membership agrees with a dense radius grid") {
    std::mt19937_64 rng(17);
    IntervalSet e = IntervalSet::normalize({Interval(0, Rational(3, 8)), Interval(Rational(1, 2), Rational(5, 8)),
                                            Interval(Rational(3, 4), 1)});
    for (int t = 0; t < 60; ++t) {
      Rational x = ratio(static_cast<long>(rng() % 160) - 16, 128);
      Rational gamma = ratio(1 + static_cast<long>(rng() % 15), 16);
      Rational delta = ratio(1 + static_cast<long>(rng() % 8), 32);
      EgdVerdict v = egd_member(e, x, gamma, delta);
      Rational grid = grid_inf(e, x, delta, 512);
      REQUIRE(v.status != Verdict::Unknown);
      REQUIRE(v.witness_value);
      CHECK(*v.witness_value <= grid);
      CHECK((v.status == Verdict::Member) == (*v.witness_value >= gamma));
      if (v.status == Verdict::Nonmember) CHECK(grid_inf(e, x, *v.witness_r, 1) < gamma);
    }
  }

  TEST_CASE("inf_max_ratio") {
    PLFunction a({{0, 0}, {1, 1}}), b({{0, 0}, {Rational(1, 2), 0}, {1, Rational(1, 2)}});
    RatioMin m = inf_max_ratio(a, b, 0, 1);
    CHECK(m.value == 1);
    PLFunction c({{0, 0}, {Rational(1, 2), 0}, {1, 1}});
    RatioMin m2 = inf_max_ratio(c, c, 0, 1);
    CHECK(m2.value == 0);
  }

  TEST_CASE("regions") {
    const Rational g(1, 2), d(1, 4);
    EgdRegion r = egd_region(unit(), g, d, Interval(-1, 2), Rational(1, 64));
    CHECK(r.outer.contains(r.inner));
    CHECK(unit().contains(r.inner));
    CHECK(r.outer.contains(unit()));
    CHECK(r.outer.subtract(r.inner).measure() <= Rational(3, 64));
    CHECK(IntervalSet::single(Interval(Rational(1, 8), Rational(7, 8))).subtract(r.inner).empty());

    EgdRegion empty = egd_region(IntervalSet{}, g, d, Interval(0, 1), Rational(1, 16));
    CHECK(empty.inner.empty());
    CHECK(empty.outer.empty());

    EgdRegion full = egd_region(unit(), 1, d, Interval(-1, 2), Rational(1, 64));
    CHECK(full.outer.subtract(unit()).measure() <= Rational(3, 64));
    CHECK(full.inner.contains(IntervalSet::single(Interval(Rational(1, 4), Rational(3, 4)))));
  }

  TEST_CASE("certificates on [0,1]") {
    CertificateSeq seq;
    seq.first = 1;
    for (unsigned long n = 1; n <= 6; ++n) {
      seq.gammas.push_back(1 - dyadic(n));
      seq.deltas.push_back(dyadic(n));
    }
    CertificateReport rep = certificate_check({Rational(1, 2)}, unit_oracle(), seq, {1, 2, 3}, 8);
    REQUIRE(rep.points.size() == 1);
    for (Verdict v : rep.points[0].sudt) CHECK(v == Verdict::Member);
    for (Verdict v : rep.points[0].udt) CHECK(v == Verdict::Member);
    CHECK(rep.sudt_without_udt() == 0);

    CertificateSeq bad = seq;
    std::swap(bad.gammas[0], bad.gammas[1]);
    CHECK_THROWS(bad.validate());
  }

  TEST_CASE("cantor endpoints carry the certificate") {
    CertificateSeq seq;
    seq.first = 4;
    for (unsigned long n = 4; n <= 5; ++n) {
      CantorParams p = params(quarter(), n, 20);
      seq.gammas.push_back(p.gamma_n.upper);
      seq.deltas.push_back(p.delta_n);
    }
    std::vector<Rational> pts;
    IntervalSet s5 = stage(quarter(), 5);
    for (const auto& iv : s5.parts()) pts.push_back(iv.lo);
    CertificateReport rep = certificate_check(pts, OracleSpec::cantor(quarter()), seq, {4}, 20);
    CHECK(rep.count(Verdict::Member) == pts.size() * 2);
  }

  TEST_CASE("weak density witnesses") {
    Interval i = wnd_witness(unit_oracle(), Interval(0, 2), Rational(1, 2), 8);
    CHECK(Interval(0, 2).contains(i));
    CHECK(unit().measure_in(i) < i.length() / 2);
    CHECK_THROWS_AS(wnd_witness(unit_oracle(), Interval(0, 1), Rational(1, 2), 8, 6), NotFoundError);
    Interval c = wnd_witness(OracleSpec::cantor(quarter()), Interval(0, 1), Rational(1, 4), 12);
    CHECK(bounds(OracleSpec::cantor(quarter()), c, 12).upper < c.length() / 4);
  }

  TEST_CASE("one-sided failure scan") {
    auto scales = dyadic_scales(6);
    CHECK(scales.front() == Rational(1, 2));
    CHECK(scales.back() == Rational(1, 64));
    auto hits = onesided_failure_scan(unit_oracle(), {-1}, scales, Rational(1, 2), 4);
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].x == -1);
    CHECK(onesided_failure_scan(unit_oracle(), {Rational(1, 2)}, scales, Rational(1, 2), 4).empty());

    auto candidates = alternating_candidates(quarter(), 8, 2);
    CHECK(!candidates.empty());
    IntervalSet s8 = stage(quarter(), 8);
    for (const auto& x : candidates) {
      bool endpoint = false;
      for (const auto& iv : s8.parts()) endpoint = endpoint || iv.lo == x || iv.hi == x;
      CHECK(endpoint);
    }
  }
}
