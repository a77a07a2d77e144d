#include <functional>

#include <doctest.h>

#include "lipset/json_io.hpp"

using namespace lipset;

namespace {

CantorSpec quarter() { return CantorSpec{AlphaRule::geometric(1, Rational(1, 4)), Interval(0, 1)}; }

std::string error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("json_io") {
  TEST_CASE("rationals") {
    CHECK(to_json(Rational(-3, 4)) == Json("-3/4"));
    CHECK(rational_from_json(Json("6/8")) == Rational(3, 4));
    CHECK(rational_from_json(Json(2)) == 2);
    CHECK_THROWS_AS(rational_from_json(Json(0.5)), ParseError);
  }

  TEST_CASE("round trips") {
    IntervalSet s = IntervalSet::normalize({Interval(0, Rational(1, 3)), Interval(2, Rational(7, 2))});
    CHECK(interval_set_from_json(parse_json(to_json(s).dump())) == s);

    AlphaRule a = AlphaRule::parse("1/2,1/3;geom:1,1/4");
    CHECK(alpha_rule_from_json(to_json(a)) == a);
    CHECK(alpha_rule_from_json(to_json(AlphaRule::parse("1/4"))) == AlphaRule::parse("1/4"));

    CantorSpec c = quarter();
    c.require_below_third = true;
    CHECK(cantor_spec_from_json(to_json(c)) == c);

    OracleSpec o = OracleSpec::unite({OracleSpec::finite(s), OracleSpec::cantor(quarter())});
    CHECK(oracle_spec_from_json(parse_json(to_json(o).dump(2))) == o);

    PLFunction f({{0, 0}, {Rational(1, 2), Rational(1, 3)}, {1, 0}});
    CHECK(pl_function_from_json(to_json(f)) == f);

    auto packed = pack(3, GapPolicy::LeftmostFirst, 6).first;
    CHECK(packed_spec_from_json(to_json(packed)) == packed);

    CertificateSeq seq;
    seq.first = 2;
    seq.gammas = {Rational(1, 2), Rational(3, 4)};
    seq.deltas = {Rational(1, 4), Rational(1, 8)};
    CertificateSeq back = certificate_seq_from_json(to_json(seq));
    CHECK(back.first == 2);
    CHECK(back.gammas == seq.gammas);
    CHECK(back.deltas == seq.deltas);
  }

  TEST_CASE("stage dumps round trip") {
    BuildKnobs k;
    k.k_max = 2;
    auto states = build(OracleSpec::finite(IntervalSet::single(Interval(0, 1))), Interval(-1, 2), 2, k);
    for (const auto& s : states) {
      Json j = to_json(s);
      for (const char* key : {"n", "window", "G_n", "F_n", "Z_n", "D_n", "f_n", "envelopes"}) CHECK(j.contains(key));
      BuilderState back = builder_state_from_json(parse_json(j.dump()));
      CHECK(back.n == s.n);
      CHECK(back.G == s.G);
      CHECK(back.F == s.F);
      CHECK(back.Z == s.Z);
      CHECK(back.D == s.D);
      CHECK(back.f == s.f);
      CHECK(back.lower_env == s.lower_env);
      CHECK(back.upper_env == s.upper_env);
      CHECK(back.e_stand_in == s.e_stand_in);
      CHECK(to_json(back).dump() == j.dump());
    }
    BuilderState next = build_stage(builder_state_from_json(to_json(states[1])), k);
    CHECK(next.f == states[2].f);
  }

  TEST_CASE("errors name their location") {
    CHECK(error_of([] { parse_json("{\"a\": [1, 2"); }).find("byte") != std::string::npos);
    std::string where = error_of([] { interval_set_from_json(parse_json(R"([["0","1"],["2","x"]])")); });
    CHECK(where.find("/1/1") != std::string::npos);
    std::string bad_alpha = error_of([] { oracle_spec_from_json(parse_json(R"({"cantor": {"alpha": 3}})")); });
    CHECK(bad_alpha.find("/cantor/alpha") != std::string::npos);
    CHECK_THROWS_AS(interval_set_from_json(parse_json(R"([["1","0"]])")), ParseError);
    CHECK_THROWS_AS(load_json_file("/nonexistent/file.json"), ParseError);
  }

  TEST_CASE("csv writers") {
    std::vector<ProfileRow> rows{{0, Rational(1, 2), Side::Right, MeasureBounds{1, 1}}};
    std::string p = csv_profile(rows);
    CHECK(p.rfind("x,r,side,lower,upper", 0) == 0);
    CHECK(p.find("\n0/1,1/2,right,1/1,1/1,") != std::string::npos);

    std::string g = csv_gap_report({GapRow{Interval(Rational(3, 8), Rational(5, 8)), 0}});
    CHECK(g.rfind("gap_lo,gap_hi,ratio_upper", 0) == 0);
    CHECK(g.find("\n3/8,5/8,0/1,") != std::string::npos);

    std::string c = csv_params({params(quarter(), 1, 10)});
    CHECK(c.rfind("n,d_n,", 0) == 0);
    CHECK(c.find("\n1,3/8,3/4,") != std::string::npos);
  }

  TEST_CASE("emitted text is deterministic") {
    auto a = to_json(pack(2, GapPolicy::WidestFirst, 6).first).dump();
    auto b = to_json(pack(2, GapPolicy::WidestFirst, 6).first).dump();
    CHECK(a == b);
  }
}
