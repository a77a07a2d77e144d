#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "lipset/acceptance.hpp"
#include "lipset/builder.hpp"
#include "lipset/density.hpp"
#include "lipset/json_io.hpp"
#include "lipset/packing.hpp"

using namespace lipset;

namespace {

constexpr unsigned long kDefaultDepth = 16;

/// Raised where the outcome is a failed verification rather than an error.
struct VerificationFailed {};
/// Output was written but a budget cut the computation short.
struct PartialResult {
  std::string what;
};

void check_partial(const std::vector<BuilderState>& states) {
  for (const auto& s : states) {
    if (s.partial) throw PartialResult{"stage " + std::to_string(s.n) + " hit the refinement or component budget"};
  }
}

struct Config {
  unsigned long depth = kDefaultDepth;
  unsigned long budget_k = 2;
  unsigned long budget_l = 1;
  std::string window;
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 42;
  std::string command;
};

Config cfg;

Rational rat(const std::string& s) { return parse_rational(s); }

Interval parse_interval(const std::string& text, const char* what) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw ParseError(std::string(what) + " expects lo:hi");
  Rational lo = rat(text.substr(0, colon)), hi = rat(text.substr(colon + 1));
  if (!(lo < hi)) throw ParseError(std::string(what) + " needs lo < hi");
  return Interval(lo, hi);
}

Interval window_or(const Interval& fallback) { return cfg.window.empty() ? fallback : parse_interval(cfg.window, "--window"); }

Json meta() { return Json{{"command", cfg.command}, {"seed", cfg.seed}, {"depth", cfg.depth}}; }

/// Accepts both a bare document and one wrapped as {"meta", "result"}.
Json load(const std::string& path) {
  Json j = load_json_file(path);
  if (j.is_object() && j.contains("meta") && j.contains("result")) return j["result"];
  return j;
}

void write_text(const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(cfg.out);
  if (!f) throw CLI::ValidationError("--out", "cannot write " + cfg.out);
  f << text;
  if (!text.empty() && text.back() != '\n') f << '\n';
}

void emit(const Json& result) { write_text(Json{{"meta", meta()}, {"result", result}}.dump(2)); }

struct OracleArgs {
  std::string file;
  std::string alpha;
  std::string placement = "0:1";

  void add(CLI::App* sub) {
    sub->add_option("--oracle", file, "OracleSpec or IntervalSet JSON file");
    sub->add_option("--alpha", alpha, "Cantor rule, e.g. geom:1,1/4 or 1/4,1/16;geom:1,1/4");
    sub->add_option("--placement", placement, "Cantor placement lo:hi");
  }

  OracleSpec get() const {
    if (!file.empty()) {
      Json j = load(file);
      return j.is_array() ? OracleSpec::finite(interval_set_from_json(j, file)) : oracle_spec_from_json(j, file);
    }
    if (!alpha.empty()) return OracleSpec::cantor(AlphaRule::parse(alpha), parse_interval(placement, "--placement"));
    throw CLI::RequiredError("--oracle or --alpha");
  }

  CantorSpec cantor() const {
    if (!alpha.empty()) return CantorSpec{AlphaRule::parse(alpha), parse_interval(placement, "--placement")};
    OracleSpec o = get();
    if (const auto* c = std::get_if<CantorOracle>(&o.node)) return c->spec;
    throw CLI::ValidationError("--oracle", "expected a cantor spec");
  }
};

std::vector<Rational> rats(const std::vector<std::string>& v) {
  std::vector<Rational> out;
  for (const auto& s : v) out.push_back(rat(s));
  return out;
}

Side parse_side(const std::string& s) {
  if (s == "left") return Side::Left;
  if (s == "right") return Side::Right;
  throw ParseError("side must be left or right");
}

BuildKnobs knobs() {
  BuildKnobs k;
  k.k_max = cfg.budget_k;
  k.l_max = cfg.budget_l;
  k.depth = cfg.depth;
  return k;
}

std::function<void()> action;

void add_set(CLI::App& app) {
  auto* set = app.add_subcommand("set", "interval-set algebra");
  set->require_subcommand(1);
  static std::string in, in2, op;
  auto* measure = set->add_subcommand("measure", "Lebesgue measure of a set or bounds for an oracle");
  measure->add_option("--in", in, "IntervalSet or OracleSpec JSON")->required();
  measure->callback([] {
    action = [] {
      Json j = load(in);
      if (j.is_array()) {
        write_text(interval_set_from_json(j).measure().get_str());
      } else {
        OracleSpec o = oracle_spec_from_json(j);
        emit(to_json(bounds(o, o.hull(), cfg.depth)));
      }
    };
  });
  auto* combine_cmd = set->add_subcommand("op", "union / intersection / difference / symdiff of two sets");
  combine_cmd->add_option("--op", op, "union|intersection|difference|symdiff")->required();
  combine_cmd->add_option("--in", in, "first IntervalSet JSON")->required();
  combine_cmd->add_option("--in2", in2, "second IntervalSet JSON")->required();
  combine_cmd->callback([] {
    action = [] {
      IntervalSet a = interval_set_from_json(load(in), in), b = interval_set_from_json(load(in2), in2);
      if (op == "union") {
        emit(to_json(a.unite(b)));
      } else if (op == "intersection") {
        emit(to_json(a.intersect(b)));
      } else if (op == "difference") {
        emit(to_json(a.subtract(b)));
      } else if (op == "symdiff") {
        emit(to_json(symdiff_measure(a, b)));
      } else {
        throw CLI::ValidationError("--op", "unknown operation " + op);
      }
    };
  });
  auto* gaps = set->add_subcommand("gaps", "bounded complementary intervals");
  gaps->add_option("--in", in, "IntervalSet JSON")->required();
  gaps->callback([] {
    action = [] {
      Json a = Json::array();
      for (const auto& g : interval_set_from_json(load(in)).gaps()) a.push_back(to_json(g));
      emit(a);
    };
  });
}

void add_cantor(CLI::App& app) {
  auto* cantor = app.add_subcommand("cantor", "fat Cantor sets and packings");
  cantor->require_subcommand(1);
  static OracleArgs oa;
  static unsigned long n = 1, count = 4;
  static std::string policy = "widest-gap-first";

  auto* p = cantor->add_subcommand("params", "d_n, stage measure, beta_n, gamma_n, delta_n");
  oa.add(p);
  p->add_option("--n", n, "level")->required();
  p->callback([] {
    action = [] {
      CantorParams row = params(oa.cantor(), n, std::max(cfg.depth, n));
      if (cfg.format == "csv") {
        write_text(csv_params({row}));
      } else {
        emit(to_json(row));
      }
    };
  });
  auto* st = cantor->add_subcommand("stage", "intervals of stage n");
  oa.add(st);
  st->add_option("--n", n, "level")->required();
  st->callback([] { action = [] { emit(to_json(stage(oa.cantor(), n))); }; });

  auto* pk = cantor->add_subcommand("pack", "pack E_1..E_N into gaps");
  pk->add_option("--count", count, "number of sets N");
  pk->add_option("--policy", policy, "widest-gap-first|leftmost-gap-first");
  pk->callback([] {
    action = [] {
      auto [packed, oracle] = pack(count, parse_gap_policy(policy), cfg.depth);
      emit(Json{{"packing", to_json(packed)}, {"oracle", to_json(oracle)}});
    };
  });

  static std::string packed_file;
  auto* gr = cantor->add_subcommand("gap-report", "ratio bounds over the gaps of the first n sets");
  gr->add_option("--packed", packed_file, "PackedSpec JSON (default: pack --count)");
  gr->add_option("--count", count, "number of sets N when packing here");
  gr->add_option("--policy", policy, "gap policy when packing here");
  gr->add_option("--n", n, "use the gaps of E_1..E_n")->required();
  gr->callback([] {
    action = [] {
      PackedSpec packed;
      if (!packed_file.empty()) {
        Json j = load(packed_file);
        packed = packed_spec_from_json(j.contains("packing") ? j["packing"] : j);
      } else {
        packed = pack(count, parse_gap_policy(policy), cfg.depth).first;
      }
      auto rows = gap_report(packed, n, cfg.depth);
      if (cfg.format == "csv") {
        write_text(csv_gap_report(rows));
      } else {
        Json a = Json::array();
        for (const auto& r : rows) a.push_back(Json{{"gap", to_json(r.gap)}, {"ratio_upper", to_json(r.ratio_upper)}});
        emit(a);
      }
    };
  });
}

void add_density(CLI::App& app) {
  auto* den = app.add_subcommand("density", "one-sided densities and E^{gamma,delta}");
  den->require_subcommand(1);
  static OracleArgs oa;
  static std::string x, gamma, delta, side = "both", resolution = "1/64", points_file, seq_file, j_interval,
                                      alpha_threshold = "1/2", threshold = "99/100";
  static std::vector<std::string> xs, rs;
  static std::vector<unsigned long> ks;
  static unsigned long level = 12, scales = 48;
  static unsigned max_level = 16;

  auto* sd = den->add_subcommand("side", "side density bounds as a CSV profile");
  oa.add(sd);
  sd->add_option("--x", x, "point")->required();
  sd->add_option("--r", rs, "radii")->required();
  sd->add_option("--side", side, "left|right|both");
  sd->callback([] {
    action = [] {
      OracleSpec e = oa.get();
      std::vector<ProfileRow> rows;
      Rational px = rat(x);
      for (const auto& r : rats(rs)) {
        for (Side s : {Side::Left, Side::Right}) {
          if (side != "both" && parse_side(side) != s) continue;
          rows.push_back({px, r, s, side_density(e, px, r, s, cfg.depth)});
        }
      }
      write_text(csv_profile(rows));
    };
  });

  auto* eg = den->add_subcommand("egd", "membership of x in E^{gamma,delta}");
  oa.add(eg);
  eg->add_option("--x", x, "point")->required();
  eg->add_option("--gamma", gamma, "gamma")->required();
  eg->add_option("--delta", delta, "delta")->required();
  eg->callback([] {
    action = [] { emit(to_json(egd_member(oa.get(), rat(x), rat(gamma), rat(delta), cfg.depth))); };
  });

  auto* rg = den->add_subcommand("region", "inner/outer approximation of E^{gamma,delta} in a window");
  oa.add(rg);
  rg->add_option("--gamma", gamma, "gamma")->required();
  rg->add_option("--delta", delta, "delta")->required();
  rg->add_option("--resolution", resolution, "open-measure fraction allowed");
  rg->callback([] {
    action = [] {
      OracleSpec o = oa.get();
      IntervalSet e = o.is_finite() ? std::get<FiniteOracle>(o.node).set : realize(o, cfg.depth);
      Interval w = window_or(e.hull());
      EgdRegion reg = egd_region(e, rat(gamma), rat(delta), w, rat(resolution));
      emit(Json{{"window", to_json(w)},
                {"inner", to_json(reg.inner)},
                {"outer", to_json(reg.outer)},
                {"cells_tested", reg.cells_tested},
                {"exact_set", o.is_finite()}});
    };
  });

  auto* ce = den->add_subcommand("certificate", "UDT/SUDT certificate check");
  oa.add(ce);
  ce->add_option("--seq", seq_file, "CertificateSeq JSON")->required();
  ce->add_option("--x", xs, "points");
  ce->add_option("--points", points_file, "JSON array of points");
  ce->add_option("--k", ks, "indices k to check")->required();
  ce->callback([] {
    action = [] {
      std::vector<Rational> pts = rats(xs);
      if (!points_file.empty()) {
        for (const auto& p : load(points_file)) pts.push_back(rational_from_json(p));
      }
      CertificateReport rep = certificate_check(pts, oa.get(), certificate_seq_from_json(load(seq_file)), ks, cfg.depth);
      emit(to_json(rep));
      if (rep.sudt_without_udt() != 0) throw VerificationFailed{};
    };
  });

  auto* wn = den->add_subcommand("wnd", "subinterval with certified low relative measure");
  oa.add(wn);
  wn->add_option("--j", j_interval, "search interval lo:hi")->required();
  wn->add_option("--threshold", alpha_threshold, "relative measure bound");
  wn->add_option("--max-level", max_level, "bisection levels before giving up");
  wn->callback([] {
    action = [] {
      Interval i = wnd_witness(oa.get(), parse_interval(j_interval, "--j"), rat(alpha_threshold), cfg.depth, max_level);
      emit(to_json(i));
    };
  });

  auto* os = den->add_subcommand("onesided-scan", "points failing both one-sided densities at finite scales");
  oa.add(os);
  os->add_option("--level", level, "candidate stage level");
  os->add_option("--scales", scales, "number of dyadic scales");
  os->add_option("--threshold", threshold, "density threshold");
  os->callback([] {
    action = [] {
      CantorSpec spec = oa.cantor();
      auto sc = dyadic_scales(scales);
      std::reverse(sc.begin(), sc.end());
      auto hits = onesided_failure_scan(OracleSpec::cantor(spec), alternating_candidates(spec, level, 2), sc,
                                        rat(threshold), cfg.depth);
      Json a = Json::array();
      for (const auto& h : hits) a.push_back(to_json(h));
      emit(a);
      if (hits.empty()) throw VerificationFailed{};
    };
  });
}

void add_pl(CLI::App& app) {
  auto* pl = app.add_subcommand("pl", "piecewise-linear functions");
  pl->require_subcommand(1);
  static std::string f_file, g_file, x, r;
  static std::vector<std::string> rs;
  static OracleArgs oa;
  static std::size_t pairs = 100;
  auto f = [] { return pl_function_from_json(load(f_file), f_file); };

  auto* ev = pl->add_subcommand("eval", "f(x)");
  ev->add_option("--f", f_file, "PL function JSON")->required();
  ev->add_option("--x", x, "point")->required();
  ev->callback([f] { action = [f] { emit(to_json(f().eval(rat(x)))); }; });

  auto* m = pl->add_subcommand("mf", "M_f(x, r)");
  m->add_option("--f", f_file, "PL function JSON")->required();
  m->add_option("--x", x, "point")->required();
  m->add_option("--r", r, "radius")->required();
  m->callback([f] {
    action = [f] {
      PLFunction fn = f();
      emit(Json{{"mf", to_json(mf(fn, rat(x), rat(r)))}, {"argmax", to_json(mf_argmax(fn, rat(x), rat(r)))}});
    };
  });

  auto* lp = pl->add_subcommand("lip", "Lip f(x) = lip f(x) and its radius");
  lp->add_option("--f", f_file, "PL function JSON")->required();
  lp->add_option("--x", x, "point")->required();
  lp->callback([f] {
    action = [f] {
      PLFunction fn = f();
      emit(Json{{"lip", to_json(lip_pl(fn, rat(x)))}, {"radius", to_json(lip_radius(fn, rat(x)))}});
    };
  });

  auto* pr = pl->add_subcommand("profile", "M_f(x, r) over decreasing radii");
  pr->add_option("--f", f_file, "PL function JSON")->required();
  pr->add_option("--x", x, "point")->required();
  pr->add_option("--r", rs, "radii, strictly decreasing")->required();
  pr->callback([f] {
    action = [f] {
      Json a = Json::array();
      for (const auto& [rr, v] : lip_profile(f(), rat(x), rats(rs))) a.push_back(Json::array({to_json(rr), to_json(v)}));
      emit(a);
    };
  });

  auto* nm = pl->add_subcommand("norm", "sup |f - g|");
  nm->add_option("--f", f_file, "PL function JSON")->required();
  nm->add_option("--g", g_file, "PL function JSON")->required();
  nm->callback([f] {
    action = [f] { emit(to_json(sup_norm_diff(f(), pl_function_from_json(load(g_file), g_file)))); };
  });

  auto* gr = pl->add_subcommand("growth", "|f(x) - f(y)| <= |[x,y] ∩ E| on random pairs");
  gr->add_option("--f", f_file, "PL function JSON")->required();
  oa.add(gr);
  gr->add_option("--pairs", pairs, "number of random pairs");
  gr->callback([f] {
    action = [f] {
      PLFunction fn = f();
      Interval w = window_or(Interval(fn.points().front().x, fn.points().back().x == fn.points().front().x
                                                                 ? Rational(fn.points().front().x + 1)
                                                                 : fn.points().back().x));
      std::mt19937_64 rng(cfg.seed);
      std::vector<std::pair<Rational, Rational>> ps;
      for (std::size_t i = 0; i < pairs; ++i) {
        Rational a = w.lo + w.length() * Rational(static_cast<unsigned long>(rng() >> 40)) * dyadic(24);
        Rational b = w.lo + w.length() * Rational(static_cast<unsigned long>(rng() >> 40)) * dyadic(24);
        if (b < a) std::swap(a, b);
        ps.emplace_back(a, b);
      }
      GrowthReport rep = growth_check(fn, oa.get(), ps, cfg.depth);
      emit(to_json(rep));
      if (rep.violations != 0) throw VerificationFailed{};
    };
  });
}

void add_build(CLI::App& app) {
  auto* b = app.add_subcommand("build", "staged construction of f_n");
  b->require_subcommand(1);
  static OracleArgs oa;
  static std::string state_file;
  static unsigned long n = 4, samples = 200;
  auto window = [] {
    if (cfg.window.empty()) throw CLI::RequiredError("--window");
    return parse_interval(cfg.window, "--window");
  };

  auto* in = b->add_subcommand("init", "stage 0 dump");
  oa.add(in);
  in->callback([window] { action = [window] { emit(to_json(init_stage0(oa.get(), window(), cfg.depth))); }; });

  auto* st = b->add_subcommand("stage", "next stage from a stage dump");
  st->add_option("--state", state_file, "stage dump JSON")->required();
  st->callback([] {
    action = [] {
      BuilderState s = build_stage(builder_state_from_json(load(state_file), state_file), knobs());
      emit(to_json(s));
      check_partial({s});
    };
  });

  auto* vf = b->add_subcommand("verify", "build stages 0..n and check the conditions");
  oa.add(vf);
  vf->add_option("--n", n, "last stage");
  vf->add_option("--samples", samples, "sampled points per stage");
  vf->callback([window] {
    action = [window] {
      OracleSpec e = oa.get();
      auto states = build(e, window(), n, knobs());
      VerifySamples vs;
      vs.points = samples;
      vs.seed = cfg.seed;
      VerifyReport rep = verify_conditions(states, e, vs, cfg.depth);
      if (cfg.format == "csv") {
        write_text(csv_conditions(rep));
      } else {
        emit(to_json(rep));
      }
      if (!rep.all_pass()) throw VerificationFailed{};
      check_partial(states);
    };
  });

  auto* lm = b->add_subcommand("limit", "last stage function with its uniform error bound");
  oa.add(lm);
  lm->add_option("--n", n, "last stage");
  lm->callback([window] {
    action = [window] {
      auto states = build(oa.get(), window(), n, knobs());
      LimitResult lr = limit_function(states);
      emit(Json{{"f", to_json(lr.f)}, {"error_bound", to_json(lr.error_bound)}, {"partial", states.back().partial}});
      check_partial(states);
    };
  });
}

void add_check(CLI::App& app) {
  auto* c = app.add_subcommand("check", "run the acceptance battery");
  static std::string suite = "acceptance";
  static std::vector<int> only;
  c->add_option("--suite", suite, "suite name")->check(CLI::IsMember({"acceptance"}));
  c->add_option("--only", only, "criterion ids");
  c->callback([] {
    action = [] {
      acceptance::Options opts;
      opts.seed = cfg.seed;
      opts.only = only;
      bool ok = true;
      std::string text;
      for (const auto& r : acceptance::run(opts)) {
        text += acceptance::format_line(r) + "\n";
        ok = ok && r.pass;
      }
      write_text(text);
      if (!ok) throw VerificationFailed{};
    };
  });
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* env = std::getenv("LIPSETLAB_DEFAULT_DEPTH")) {
    try {
      cfg.depth = std::stoul(env);
    } catch (const std::exception&) {
      std::cerr << "LIPSETLAB_DEFAULT_DEPTH must be a positive integer\n";
      return 2;
    }
  }
  CLI::App app{"lipsetlab: exact experiments on sets of density, Cantor sets and Lipschitz constructions"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--depth", cfg.depth, "oracle truncation depth")->check(CLI::PositiveNumber);
  app.add_option("--budget-k", cfg.budget_k, "refinement steps per component end")->check(CLI::PositiveNumber);
  app.add_option("--budget-l", cfg.budget_l, "refinement level bound")->check(CLI::PositiveNumber);
  app.add_option("--window", cfg.window, "window lo:hi");
  app.add_option("--out", cfg.out, "output path (default stdout)");
  app.add_option("--format", cfg.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", cfg.seed, "seed for randomized suites");
  add_set(app);
  add_cantor(app);
  add_density(app);
  add_pl(app);
  add_build(app);
  add_check(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  for (auto* sub = app.get_subcommands().front(); sub; sub = sub->get_subcommands().empty() ? nullptr : sub->get_subcommands().front()) {
    cfg.command += (cfg.command.empty() ? "" : " ") + sub->get_name();
  }
  try {
    action();
  } catch (const VerificationFailed&) {
    return 1;
  } catch (const PartialResult& e) {
    std::cerr << "partial: " << e.what << "\n";
    return 1;
  } catch (const ResourceError& e) {
    std::cerr << "partial: " << e.what() << "\n";
    return 1;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
