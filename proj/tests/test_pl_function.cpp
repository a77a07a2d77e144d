#include <random>

#include <doctest.h>

#include "lipset/pl_function.hpp"

using namespace lipset;

namespace {

PLFunction id01() { return PLFunction({{0, 0}, {1, 1}}); }
PLFunction ramp() { return PLFunction({{0, 0}, {1, 1}, {2, 1}}); }
PLFunction absval() { return PLFunction({{-1, 1}, {0, 0}, {1, 1}}); }

PLFunction random_pl(std::mt19937_64& rng) {
  std::vector<PLFunction::Point> pts;
  long x = -static_cast<long>(rng() % 8);
  for (int i = 0; i < 6; ++i) {
    pts.push_back({ratio(x, 4), ratio(static_cast<long>(rng() % 17) - 8, 8)});
    x += 1 + static_cast<long>(rng() % 4);
  }
  return PLFunction(pts);
}

/// sup over a grid of y in [x - r, x + r] that includes every breakpoint.
Rational grid_mf(const PLFunction& f, const Rational& x, const Rational& r) {
  Rational best = 0;
  const Rational fx = f.eval(x);
  auto consider = [&](const Rational& y) {
    if (x - r <= y && y <= x + r) best = max(best, abs(f.eval(y) - fx));
  };
  for (int i = -64; i <= 64; ++i) consider(x + r * ratio(i, 64));
  for (const auto& p : f.points()) consider(p.x);
  return best / r;
}

}  // namespace

TEST_SUITE("pl_function") {
  TEST_CASE("evaluation and extension") {
    CHECK(id01().eval(Rational(1, 2)) == Rational(1, 2));
    CHECK(id01().eval(-5) == 0);
    CHECK(id01().eval(7) == 1);
    CHECK(ramp().eval(Rational(3, 2)) == 1);
    CHECK_THROWS(PLFunction({{1, 0}, {0, 1}}));
    CHECK(simplify(PLFunction({{0, 0}, {1, 1}, {2, 2}})) == PLFunction({{0, 0}, {2, 2}}));
  }

  TEST_CASE("slopes") {
    CHECK(ramp().slope_left(1) == 1);
    CHECK(ramp().slope_right(1) == 0);
    CHECK(ramp().slope_left(0) == 0);
    CHECK(absval().max_abs_slope() == 1);
  }

  TEST_CASE("M_f examples") {
    CHECK(mf(id01(), Rational(1, 2), Rational(1, 4)) == 1);
    CHECK(mf(ramp(), Rational(3, 2), Rational(1, 2)) == 0);
    CHECK(mf(ramp(), 1, Rational(1, 2)) == 1);
    CHECK(mf_argmax(ramp(), 1, Rational(1, 2)) == Rational(1, 2));
  }

  TEST_CASE("M_f agrees with a grid search") {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 60; ++t) {
      PLFunction f = random_pl(rng);
      Rational x = ratio(static_cast<long>(rng() % 64) - 16, 8), r = ratio(1 + static_cast<long>(rng() % 32), 16);
      CHECK(mf(f, x, r) == grid_mf(f, x, r));
      Rational y = mf_argmax(f, x, r);
      CHECK(abs(y - x) <= r);
      CHECK(abs(f.eval(y) - f.eval(x)) == mf(f, x, r) * r);
    }
  }

  TEST_CASE("pointwise Lipschitz constant") {
    CHECK(lip_pl(absval(), 0) == 1);
    CHECK(lip_pl(PLFunction::constant(3), 5) == 0);
    CHECK(lip_pl(ramp(), 1) == 1);
    std::mt19937_64 rng(29);
    for (int t = 0; t < 40; ++t) {
      PLFunction f = random_pl(rng);
      Rational x = ratio(static_cast<long>(rng() % 64) - 16, 8);
      Rational rad = lip_radius(f, x);
      if (rad == 0) continue;
      for (int k = 1; k <= 8; ++k) CHECK(mf(f, x, rad * dyadic(k)) == lip_pl(f, x));
    }
  }

  TEST_CASE("profiles") {
    std::vector<Rational> rs{Rational(1, 2), Rational(1, 8), Rational(1, 32)};
    for (const auto& [r, v] : lip_profile(PLFunction::constant(2), 0, rs)) CHECK(v == 0);
    for (const auto& [r, v] : lip_profile(absval(), 0, rs)) CHECK(v == 1);
    CHECK_THROWS(lip_profile(absval(), 0, {Rational(1, 8), Rational(1, 2)}));
  }

  TEST_CASE("growth against a set") {
    OracleSpec unit = OracleSpec::finite(IntervalSet::single(Interval(0, 1)));
    GrowthReport flat = growth_check(PLFunction::constant(1), unit, {{0, 1}, {-3, 5}}, 4);
    CHECK(flat.violations == 0);
    GrowthReport eq = growth_check(id01(), unit, {{0, 1}}, 4);
    CHECK(eq.violations == 0);
    CHECK(eq.rows[0].rise == 1);
    CHECK(eq.rows[0].measure.upper == 1);
    GrowthReport bad = growth_check(PLFunction({{1, 0}, {2, 1}}), unit, {{1, 2}}, 4);
    CHECK(bad.violations == 1);
  }

  TEST_CASE("sup norm of differences") {
    CHECK(sup_norm_diff(ramp(), ramp()) == 0);
    CHECK(sup_norm_diff(id01(), PLFunction({{0, 0}, {1, 0}})) == 1);
    CHECK(sup_norm_diff(PLFunction({{0, 0}, {2, 2}}), PLFunction({{0, 0}, {1, 1}, {2, 0}})) == 2);
    std::mt19937_64 rng(31);
    for (int t = 0; t < 30; ++t) {
      PLFunction f = random_pl(rng), g = random_pl(rng);
      Rational best = 0;
      for (int i = -200; i <= 200; ++i) best = max(best, abs(f.eval(ratio(i, 16)) - g.eval(ratio(i, 16))));
      CHECK(sup_norm_diff(f, g) == best);
    }
  }

  TEST_CASE("combinators") {
    PLFunction m = pointwise_max(id01(), PLFunction({{0, 1}, {1, 0}}));
    CHECK(m.eval(Rational(1, 2)) == Rational(1, 2));
    CHECK(m.eval(0) == 1);
    PLFunction n = pointwise_min(id01(), PLFunction({{0, 1}, {1, 0}}));
    CHECK(n.eval(Rational(1, 2)) == Rational(1, 2));
    CHECK(n.eval(0) == 0);
    CHECK(add(id01(), affine(id01(), -1, 3)).eval(Rational(1, 3)) == 3);
  }
}
