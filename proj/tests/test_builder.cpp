#include <doctest.h>

#include "lipset/builder.hpp"

using namespace lipset;

namespace {

IntervalSet unit() { return IntervalSet::single(Interval(0, 1)); }
OracleSpec unit_oracle() { return OracleSpec::finite(unit()); }
OracleSpec quarter() { return OracleSpec::cantor(AlphaRule::geometric(1, Rational(1, 4)), Interval(0, 1)); }

BuildKnobs knobs(unsigned long k_max) {
  BuildKnobs k;
  k.k_max = k_max;
  return k;
}

const std::vector<BuilderState>& unit_stages() {
  static const auto states = build(unit_oracle(), Interval(-1, 2), 4, knobs(3));
  return states;
}

}  // namespace

TEST_SUITE("builder") {
  TEST_CASE("refinement of a null set is empty") {
    SuruBudget b;
    SuruResult r = suru({Interval(0, 1)}, OracleSpec::finite(IntervalSet{}), Rational(1, 10), b);
    CHECK(r.h.empty());
  }

  TEST_CASE("refinement of a full interval is itself") {
    SuruBudget b;
    SuruResult r = suru({Interval(0, 1)}, unit_oracle(), Rational(1, 10), b);
    CHECK(r.h == unit());
    CHECK(!r.partial);
    CHECK(r.tolerance == 0);
  }

  TEST_CASE("refinement of a Cantor set passes its endpoint audits") {
    SuruBudget b;
    b.depth = 10;
    const Rational eps(1, 10);
    SuruResult r = suru({Interval(-1, 2)}, quarter(), eps, b);
    REQUIRE(!r.h.empty());
    Interval w(-1, 2);
    for (const auto& iv : r.h.parts()) CHECK(w.contains(iv));
    for (const auto& c : r.trace) {
      CHECK(c.epsilon_used == eps);
      CHECK(c.density_margin > 0);
    }
    CHECK(bounds(quarter(), w, 10).lower - r.h.measure() <= r.tolerance);
  }

  TEST_CASE("stage 0") {
    BuilderState s = init_stage0(unit_oracle(), Interval(-2, 3), 8);
    CHECK(s.D == std::vector<Rational>{0});
    CHECK(s.G == IntervalSet::single(Interval(-2, 3)));
    for (int i = -20; i <= 30; ++i) CHECK(s.f.eval(ratio(i, 10)) == 0);

    OracleSpec two = OracleSpec::finite(IntervalSet::normalize({Interval(0, 1), Interval(2, 3)}));
    CHECK(init_stage0(two, Interval(-1, 4), 8).D == std::vector<Rational>{0, 2});
  }

  TEST_CASE("allocation along a gap") {
    auto v = allocation(0, Rational(1, 4), {Rational(1, 8), Rational(3, 8)});
    REQUIRE(v.size() == 4);
    CHECK(v[0] == 0);
    CHECK(v[1] == Rational(1, 16));
    CHECK(v[2] == Rational(1, 16));
    CHECK(v[3] == Rational(1, 4));
  }

  TEST_CASE("refinement sequence with no missing measure") {
    IntervalSet full = IntervalSet::single(Interval(-1, 2));
    auto seq = refinement_sequence(0, 1, 2, 1, 2, Rational(1, 1000000), full);
    REQUIRE(seq.size() == 3);
    CHECK(seq[0] == 1);
    CHECK(seq[1] == Rational(2, 3));
    CHECK(seq[2] == Rational(4, 9));
    auto right = refinement_sequence(1, 0, 2, 1, 2, Rational(1, 1000000), full);
    CHECK(right[1] == Rational(1, 3));
    CHECK(right[2] == Rational(5, 9));
  }

  TEST_CASE("zigzag is flat for n = 1") {
    auto z = zigzag({1, Rational(2, 3), Rational(4, 9)}, Rational(1, 5), 1);
    for (const auto& v : z) CHECK(v == Rational(1, 5));
    auto z2 = zigzag({1, Rational(2, 3), Rational(4, 9)}, 0, 2);
    REQUIRE(z2.size() == 3);
    CHECK(z2[0] == 0);
    for (std::size_t k = 1; k < z2.size(); ++k) {
      CHECK(abs(z2[k] - z2[k - 1]) <= Rational(1, 2) * Rational(1, 3));
    }
  }

  TEST_CASE("stages partition the window") {
    for (const auto& s : unit_stages()) {
      CHECK(s.G.intersect(s.F).measure() == 0);
      CHECK(s.G.intersect(s.Z).measure() == 0);
      CHECK(s.F.intersect(s.Z).measure() == 0);
      CHECK(s.G.unite(s.F).unite(s.Z) == IntervalSet::single(s.window));
      for (const auto& d : s.D) CHECK(s.window.contains(d));
    }
  }

  TEST_CASE("stage f_n is 1-Lipschitz with steps bounded by E") {
    for (std::size_t n = 1; n < unit_stages().size(); ++n) {
      const PLFunction& f = unit_stages()[n].f;
      CHECK(f.max_abs_slope() <= 1);
      for (std::size_t i = 1; i < f.size(); ++i) {
        const auto& p = f.points()[i - 1];
        const auto& q = f.points()[i];
        CHECK(abs(q.y - p.y) <= unit().measure_in(Interval(p.x, q.x)));
      }
    }
  }

  TEST_CASE("conditions on [0,1]") {
    VerifySamples vs;
    VerifyReport rep = verify_conditions(unit_stages(), unit_oracle(), vs, 8);
    for (const char* name : {"B", "C", "D", "E", "F", "G", "Cauchy"}) {
      INFO(name);
      CHECK(rep.get(name).pass);
    }
    for (std::size_t n = 1; n < rep.cauchy.size(); ++n) {
      for (std::size_t m = 1; m <= n; ++m) CHECK(rep.cauchy[n][m] * m <= 1);
    }
  }

  TEST_CASE("stage 0 against itself") {
    std::vector<BuilderState> one{init_stage0(unit_oracle(), Interval(-1, 2), 8)};
    VerifyReport rep = verify_conditions(one, unit_oracle(), VerifySamples{}, 8);
    CHECK(rep.get("F").pass);
    CHECK(rep.get("G").pass);
  }

  TEST_CASE("limit bounds") {
    std::vector<BuilderState> one{init_stage0(unit_oracle(), Interval(-1, 2), 8)};
    LimitResult l0 = limit_function(one);
    CHECK(l0.error_bound == 1);
    CHECK(l0.f.eval(Rational(1, 2)) == 0);
    LimitResult l4 = limit_function(unit_stages());
    CHECK(l4.error_bound == Rational(1, 4));
    CHECK(l4.f == unit_stages().back().f);
  }

  TEST_CASE("Cantor stages keep conditions C, F and G") {
    auto states = build(quarter(), Interval(-1, 2), 2, [] {
      BuildKnobs k;
      k.k_max = 1;
      k.depth = 8;
      return k;
    }());
    VerifySamples vs;
    vs.points = 60;
    VerifyReport rep = verify_conditions(states, quarter(), vs, 8);
    CHECK(rep.get("C").pass);
    CHECK(rep.get("F").pass);
    CHECK(rep.get("G").pass);
    CHECK(rep.get("Cauchy").pass);
  }
}
