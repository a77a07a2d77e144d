#include "lipset/json_io.hpp"

#include <fstream>
#include <sstream>

namespace lipset {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError((where.empty() ? std::string("/") : where) + ": " + what);
}

std::string child(const std::string& where, const std::string& key) { return where + "/" + key; }
std::string child(const std::string& where, std::size_t i) { return where + "/" + std::to_string(i); }

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

const Json& array(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
  return j;
}

unsigned long count_from_json(const Json& j, const std::string& where) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    fail(where, "expected a non-negative integer");
  }
  return j.get<unsigned long>();
}

bool bool_from_json(const Json& j, const std::string& where) {
  if (!j.is_boolean()) fail(where, "expected a boolean");
  return j.get<bool>();
}

template <class T, class F>
std::vector<T> list_from_json(const Json& j, const std::string& where, F item) {
  std::vector<T> out;
  std::size_t i = 0;
  for (const auto& e : array(j, where)) {
    out.push_back(item(e, child(where, i)));
    ++i;
  }
  return out;
}

Json rationals(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const auto& r : v) a.push_back(to_json(r));
  return a;
}

std::vector<Rational> rationals_from_json(const Json& j, const std::string& where) {
  return list_from_json<Rational>(j, where, [](const Json& e, const std::string& w) { return rational_from_json(e, w); });
}

const char* to_string(ComponentCase c) { return c == ComponentCase::Steep ? "steep" : "flat"; }

Json verdict_list(const std::vector<Verdict>& v) {
  Json a = Json::array();
  for (auto x : v) a.push_back(to_string(x));
  return a;
}

std::string approx(const Rational& r) { return format_decimal(r, 12); }

}  // namespace

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("byte " + std::to_string(e.byte) + ": malformed JSON");
  }
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_json(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void save_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(path + ": cannot write");
  out << text;
  if (!out) throw Error(path + ": write failed");
}

Json to_json(const Rational& r) { return format_rational(r); }

Json to_json(const Interval& iv) { return Json::array({to_json(iv.lo), to_json(iv.hi)}); }

Json to_json(const IntervalSet& s) {
  Json a = Json::array();
  for (const auto& p : s.parts()) a.push_back(to_json(p));
  return a;
}

Json to_json(const MeasureBounds& b) { return Json{{"lower", to_json(b.lower)}, {"upper", to_json(b.upper)}}; }

Json to_json(const AlphaRule& a) {
  Json j;
  j["list"] = rationals(a.prefix());
  if (a.tail()) {
    j["tail"] = Json{{"c", to_json(a.tail()->c)}, {"q", to_json(a.tail()->q)}};
  } else {
    j["tail"] = nullptr;
  }
  return j;
}

Json to_json(const CantorSpec& s) {
  Json j{{"alpha", to_json(s.alpha)}, {"placement", to_json(s.base)}};
  if (s.require_below_third) j["require_below_third"] = true;
  return j;
}

Json to_json(const OracleSpec& o) {
  return std::visit(
      [](const auto& n) -> Json {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, FiniteOracle>) {
          return Json{{"finite", to_json(n.set)}};
        } else if constexpr (std::is_same_v<T, CantorOracle>) {
          return Json{{"cantor", to_json(n.spec)}};
        } else {
          Json a = Json::array();
          for (const auto& m : n.members) a.push_back(to_json(m));
          return Json{{"union", a}};
        }
      },
      o.node);
}

Json to_json(const PLFunction& f) {
  Json a = Json::array();
  for (const auto& p : f.points()) a.push_back(Json::array({to_json(p.x), to_json(p.y)}));
  return a;
}

Json to_json(const PackedSpec& p) {
  Json sets = Json::array();
  for (std::size_t i = 0; i < p.count; ++i) {
    const auto& pl = p.placements[i];
    sets.push_back(Json{{"spec", to_json(p.specs[i])},
                        {"placement",
                         Json{{"gap", to_json(pl.gap)},
                              {"placed", to_json(pl.placed)},
                              {"scale", to_json(pl.scale)},
                              {"shift", to_json(pl.shift)}}}});
  }
  return Json{{"count", p.count}, {"policy", to_string(p.policy)}, {"depth", p.depth}, {"sets", sets}};
}

Json to_json(const CertificateSeq& c) {
  return Json{{"first", c.first}, {"gammas", rationals(c.gammas)}, {"deltas", rationals(c.deltas)}};
}

Json to_json(const BuilderState& s) {
  Json traces = Json::array();
  for (const auto& t : s.traces) {
    Json comps = Json::array();
    for (const auto& c : t.components) {
      comps.push_back(Json{{"component", to_json(c.component)},
                           {"case", to_string(c.kind)},
                           {"measure", to_json(c.measure)},
                           {"f_left", to_json(c.f_left)},
                           {"f_right", to_json(c.f_right)},
                           {"a_seq", rationals(c.a_seq)},
                           {"b_seq", rationals(c.b_seq)},
                           {"l_prime", c.l_prime},
                           {"left_sliver", to_json(c.left_sliver)},
                           {"right_sliver", to_json(c.right_sliver)},
                           {"truncated", c.truncated}});
    }
    traces.push_back(Json{{"gap", to_json(t.gap)},
                          {"f_a", to_json(t.f_a)},
                          {"f_b", to_json(t.f_b)},
                          {"k_star", t.k_star},
                          {"components", comps}});
  }
  Json notes = Json::array();
  for (const auto& n : s.notes) notes.push_back(n);
  return Json{{"n", s.n},
              {"window", to_json(s.window)},
              {"G_n", to_json(s.G)},
              {"F_n", to_json(s.F)},
              {"Z_n", to_json(s.Z)},
              {"D_n", rationals(s.D)},
              {"f_n", to_json(s.f)},
              {"envelopes", Json{{"lower", to_json(s.lower_env)}, {"upper", to_json(s.upper_env)}}},
              {"e_stand_in", to_json(s.e_stand_in)},
              {"partial", s.partial},
              {"notes", notes},
              {"traces", traces}};
}

Json to_json(const CantorParams& p) {
  return Json{{"n", p.n},
              {"d_n", to_json(p.d_n)},
              {"stage_measure", to_json(p.stage_measure)},
              {"beta_n", to_json(p.beta_n)},
              {"gamma_n", to_json(p.gamma_n)},
              {"delta_n", to_json(p.delta_n)},
              {"next_length_above_third", p.next_length_above_third},
              {"radius_range_valid", p.radius_range_valid}};
}

Json to_json(const EgdVerdict& v) {
  Json j{{"status", to_string(v.status)}};
  j["witness_r"] = v.witness_r ? to_json(*v.witness_r) : Json(nullptr);
  j["witness_value"] = v.witness_value ? to_json(*v.witness_value) : Json(nullptr);
  j["stable_radius"] = v.stable_radius ? to_json(*v.stable_radius) : Json(nullptr);
  return j;
}

Json to_json(const CertificateReport& r) {
  Json pts = Json::array();
  for (const auto& p : r.points) {
    Json mem = Json::array();
    for (const auto& v : p.membership) mem.push_back(to_json(v));
    pts.push_back(Json{{"x", to_json(p.x)}, {"membership", mem}, {"udt", verdict_list(p.udt)}, {"sudt", verdict_list(p.sudt)}});
  }
  return Json{{"first_n", r.first_n},
              {"k_range", r.k_range},
              {"members", r.count(Verdict::Member)},
              {"nonmembers", r.count(Verdict::Nonmember)},
              {"unknown", r.count(Verdict::Unknown)},
              {"sudt_without_udt", r.sudt_without_udt()},
              {"points", pts}};
}

Json to_json(const VerifyReport& r) {
  Json conds = Json::array();
  for (const auto& c : r.conditions) {
    conds.push_back(Json{{"name", c.name},
                         {"pass", c.pass},
                         {"checked", c.checked},
                         {"violations", c.violations},
                         {"detail", c.detail}});
  }
  Json cauchy = Json::array();
  for (const auto& row : r.cauchy) cauchy.push_back(rationals(row));
  return Json{{"conditions", conds}, {"cauchy", cauchy}};
}

Json to_json(const GrowthReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back(Json{{"x", to_json(row.x)},
                        {"y", to_json(row.y)},
                        {"rise", to_json(row.rise)},
                        {"measure", to_json(row.measure)},
                        {"ok", row.ok}});
  }
  return Json{{"violations", r.violations}, {"rows", rows}};
}

Json to_json(const OnesidedHit& h) {
  return Json{{"x", to_json(h.x)},
              {"h_left", to_json(h.h_left)},
              {"h_right", to_json(h.h_right)},
              {"left", to_json(h.left)},
              {"right", to_json(h.right)}};
}

Rational rational_from_json(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) fail(where, "expected a rational string such as \"3/4\"");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const ParseError& e) {
    fail(where, e.what());
  }
}

Interval interval_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) fail(where, "expected [lo, hi]");
  Rational lo = rational_from_json(j[0], child(where, 0));
  Rational hi = rational_from_json(j[1], child(where, 1));
  if (hi < lo) fail(where, "interval with lo > hi");
  return Interval(lo, hi);
}

IntervalSet interval_set_from_json(const Json& j, const std::string& where) {
  auto parts = list_from_json<Interval>(j, where, [](const Json& e, const std::string& w) { return interval_from_json(e, w); });
  return IntervalSet::normalize(parts);
}

AlphaRule alpha_rule_from_json(const Json& j, const std::string& where) {
  std::vector<Rational> prefix;
  if (j.contains("list")) prefix = rationals_from_json(j["list"], child(where, "list"));
  std::optional<AlphaRule::Tail> tail;
  if (j.contains("tail") && !j["tail"].is_null()) {
    const auto& t = j["tail"];
    std::string w = child(where, "tail");
    tail = AlphaRule::Tail{rational_from_json(field(t, "c", w), child(w, "c")),
                           rational_from_json(field(t, "q", w), child(w, "q"))};
  }
  if (!j.is_object()) fail(where, "expected an object");
  try {
    return AlphaRule(std::move(prefix), std::move(tail));
  } catch (const std::exception& e) {
    fail(where, e.what());
  }
}

CantorSpec cantor_spec_from_json(const Json& j, const std::string& where) {
  CantorSpec s;
  s.alpha = alpha_rule_from_json(field(j, "alpha", where), child(where, "alpha"));
  if (j.contains("placement")) s.base = interval_from_json(j["placement"], child(where, "placement"));
  if (j.contains("require_below_third")) {
    s.require_below_third = bool_from_json(j["require_below_third"], child(where, "require_below_third"));
  }
  if (!(s.base.lo < s.base.hi)) fail(child(where, "placement"), "placement must have positive length");
  return s;
}

OracleSpec oracle_spec_from_json(const Json& j, const std::string& where) {
  if (!j.is_object() || j.size() != 1) fail(where, "expected exactly one of \"finite\", \"cantor\", \"union\"");
  if (j.contains("finite")) return OracleSpec::finite(interval_set_from_json(j["finite"], child(where, "finite")));
  if (j.contains("cantor")) return OracleSpec::cantor(cantor_spec_from_json(j["cantor"], child(where, "cantor")));
  if (j.contains("union")) {
    std::string w = child(where, "union");
    auto members = list_from_json<OracleSpec>(j["union"], w, [](const Json& e, const std::string& ww) {
      return oracle_spec_from_json(e, ww);
    });
    return OracleSpec::unite(std::move(members));
  }
  fail(where, "unknown oracle kind '" + j.begin().key() + "'");
}

PLFunction pl_function_from_json(const Json& j, const std::string& where) {
  auto pts = list_from_json<PLFunction::Point>(j, where, [](const Json& e, const std::string& w) {
    if (!e.is_array() || e.size() != 2) fail(w, "expected [x, y]");
    return PLFunction::Point{rational_from_json(e[0], child(w, 0)), rational_from_json(e[1], child(w, 1))};
  });
  try {
    return PLFunction(std::move(pts));
  } catch (const std::exception& e) {
    fail(where, e.what());
  }
}

PackedSpec packed_spec_from_json(const Json& j, const std::string& where) {
  PackedSpec p;
  p.count = count_from_json(field(j, "count", where), child(where, "count"));
  const Json& pol = field(j, "policy", where);
  if (!pol.is_string()) fail(child(where, "policy"), "expected a string");
  try {
    p.policy = parse_gap_policy(pol.get<std::string>());
  } catch (const ParseError& e) {
    fail(child(where, "policy"), e.what());
  }
  p.depth = count_from_json(field(j, "depth", where), child(where, "depth"));
  std::string ws = child(where, "sets");
  std::size_t i = 0;
  for (const auto& e : array(field(j, "sets", where), ws)) {
    std::string w = child(ws, i++);
    p.specs.push_back(cantor_spec_from_json(field(e, "spec", w), child(w, "spec")));
    const Json& pl = field(e, "placement", w);
    std::string wp = child(w, "placement");
    p.placements.push_back({interval_from_json(field(pl, "gap", wp), child(wp, "gap")),
                            interval_from_json(field(pl, "placed", wp), child(wp, "placed")),
                            rational_from_json(field(pl, "scale", wp), child(wp, "scale")),
                            rational_from_json(field(pl, "shift", wp), child(wp, "shift"))});
  }
  if (p.specs.size() != p.count) fail(ws, "count does not match the number of sets");
  return p;
}

CertificateSeq certificate_seq_from_json(const Json& j, const std::string& where) {
  CertificateSeq c;
  if (j.contains("first")) c.first = count_from_json(j["first"], child(where, "first"));
  c.gammas = rationals_from_json(field(j, "gammas", where), child(where, "gammas"));
  c.deltas = rationals_from_json(field(j, "deltas", where), child(where, "deltas"));
  try {
    c.validate();
  } catch (const std::exception& e) {
    fail(where, e.what());
  }
  return c;
}

BuilderState builder_state_from_json(const Json& j, const std::string& where) {
  BuilderState s;
  s.n = count_from_json(field(j, "n", where), child(where, "n"));
  s.window = interval_from_json(field(j, "window", where), child(where, "window"));
  s.G = interval_set_from_json(field(j, "G_n", where), child(where, "G_n"));
  s.F = interval_set_from_json(field(j, "F_n", where), child(where, "F_n"));
  s.Z = interval_set_from_json(field(j, "Z_n", where), child(where, "Z_n"));
  s.D = rationals_from_json(field(j, "D_n", where), child(where, "D_n"));
  s.f = pl_function_from_json(field(j, "f_n", where), child(where, "f_n"));
  const Json& env = field(j, "envelopes", where);
  std::string we = child(where, "envelopes");
  s.lower_env = pl_function_from_json(field(env, "lower", we), child(we, "lower"));
  s.upper_env = pl_function_from_json(field(env, "upper", we), child(we, "upper"));
  s.e_stand_in = interval_set_from_json(field(j, "e_stand_in", where), child(where, "e_stand_in"));
  s.partial = bool_from_json(field(j, "partial", where), child(where, "partial"));
  for (const auto& n : array(field(j, "notes", where), child(where, "notes"))) s.notes.push_back(n.get<std::string>());
  std::string wt = child(where, "traces");
  std::size_t i = 0;
  for (const auto& t : array(field(j, "traces", where), wt)) {
    std::string w = child(wt, i++);
    GapTrace g;
    g.gap = interval_from_json(field(t, "gap", w), child(w, "gap"));
    g.f_a = rational_from_json(field(t, "f_a", w), child(w, "f_a"));
    g.f_b = rational_from_json(field(t, "f_b", w), child(w, "f_b"));
    g.k_star = count_from_json(field(t, "k_star", w), child(w, "k_star"));
    std::string wc = child(w, "components");
    std::size_t k = 0;
    for (const auto& c : array(field(t, "components", w), wc)) {
      std::string w2 = child(wc, k++);
      ComponentTrace ct;
      ct.component = interval_from_json(field(c, "component", w2), child(w2, "component"));
      const Json& kind = field(c, "case", w2);
      if (kind == "steep") {
        ct.kind = ComponentCase::Steep;
      } else if (kind == "flat") {
        ct.kind = ComponentCase::Flat;
      } else {
        fail(child(w2, "case"), "expected \"steep\" or \"flat\"");
      }
      ct.measure = rational_from_json(field(c, "measure", w2), child(w2, "measure"));
      ct.f_left = rational_from_json(field(c, "f_left", w2), child(w2, "f_left"));
      ct.f_right = rational_from_json(field(c, "f_right", w2), child(w2, "f_right"));
      ct.a_seq = rationals_from_json(field(c, "a_seq", w2), child(w2, "a_seq"));
      ct.b_seq = rationals_from_json(field(c, "b_seq", w2), child(w2, "b_seq"));
      ct.l_prime = count_from_json(field(c, "l_prime", w2), child(w2, "l_prime"));
      ct.left_sliver = rational_from_json(field(c, "left_sliver", w2), child(w2, "left_sliver"));
      ct.right_sliver = rational_from_json(field(c, "right_sliver", w2), child(w2, "right_sliver"));
      ct.truncated = bool_from_json(field(c, "truncated", w2), child(w2, "truncated"));
      g.components.push_back(std::move(ct));
    }
    s.traces.push_back(std::move(g));
  }
  return s;
}

std::string csv_profile(const std::vector<ProfileRow>& rows) {
  std::ostringstream out;
  out << "x,r,side,lower,upper,lower_approx,upper_approx\n";
  for (const auto& row : rows) {
    out << format_rational(row.x) << ',' << format_rational(row.r) << ',' << to_string(row.side) << ','
        << format_rational(row.density.lower) << ',' << format_rational(row.density.upper) << ','
        << approx(row.density.lower) << ',' << approx(row.density.upper) << '\n';
  }
  return out.str();
}

std::string csv_gap_report(const std::vector<GapRow>& rows) {
  std::ostringstream out;
  out << "gap_lo,gap_hi,ratio_upper,ratio_upper_approx\n";
  for (const auto& row : rows) {
    out << format_rational(row.gap.lo) << ',' << format_rational(row.gap.hi) << ',' << format_rational(row.ratio_upper)
        << ',' << approx(row.ratio_upper) << '\n';
  }
  return out.str();
}

std::string csv_params(const std::vector<CantorParams>& rows) {
  std::ostringstream out;
  out << "n,d_n,stage_measure,beta_lower,beta_upper,gamma_lower,gamma_upper,delta_n,d_n_approx,beta_lower_approx\n";
  for (const auto& p : rows) {
    out << p.n << ',' << format_rational(p.d_n) << ',' << format_rational(p.stage_measure) << ','
        << format_rational(p.beta_n.lower) << ',' << format_rational(p.beta_n.upper) << ','
        << format_rational(p.gamma_n.lower) << ',' << format_rational(p.gamma_n.upper) << ','
        << format_rational(p.delta_n) << ',' << approx(p.d_n) << ',' << approx(p.beta_n.lower) << '\n';
  }
  return out.str();
}

std::string csv_conditions(const VerifyReport& r) {
  std::ostringstream out;
  out << "condition,pass,checked,violations\n";
  for (const auto& c : r.conditions) {
    out << c.name << ',' << (c.pass ? "true" : "false") << ',' << c.checked << ',' << c.violations << '\n';
  }
  return out.str();
}

}  // namespace lipset
