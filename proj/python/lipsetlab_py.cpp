#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lipset/acceptance.hpp"
#include "lipset/builder.hpp"
#include "lipset/density.hpp"
#include "lipset/json_io.hpp"
#include "lipset/packing.hpp"

namespace py = pybind11;
using namespace lipset;

// Rationals cross the boundary as fractions.Fraction; ints and "p/q"
// strings are accepted on input.
namespace pybind11::detail {
template <>
struct type_caster<lipset::Rational> {
  PYBIND11_TYPE_CASTER(lipset::Rational, const_name("fractions.Fraction"));

  bool load(handle src, bool) {
    if (!src || PyFloat_Check(src.ptr())) return false;
    if (!PyLong_Check(src.ptr()) && !PyUnicode_Check(src.ptr()) &&
        !py::isinstance(src, py::module_::import("fractions").attr("Fraction"))) {
      return false;
    }
    value = lipset::parse_rational(py::str(src).cast<std::string>());
    return true;
  }

  static handle cast(const lipset::Rational& r, return_value_policy, handle) {
    return py::module_::import("fractions").attr("Fraction")(r.get_str()).release();
  }
};
}  // namespace pybind11::detail

namespace {

Json from_py(const py::handle& obj) {
  return parse_json(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

py::object to_py(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

using Pair = std::pair<Rational, Rational>;

IntervalSet to_set(const std::vector<Pair>& parts) {
  std::vector<Interval> raw;
  for (const auto& [lo, hi] : parts) raw.emplace_back(lo, hi);
  return IntervalSet::normalize(raw);
}

std::vector<Pair> from_set(const IntervalSet& s) {
  std::vector<Pair> out;
  for (const auto& iv : s.parts()) out.emplace_back(iv.lo, iv.hi);
  return out;
}

Interval to_interval(const Pair& p) { return Interval(p.first, p.second); }

/// An oracle given as an OracleSpec document or as a list of intervals.
OracleSpec to_oracle(const py::handle& obj) {
  if (py::isinstance<py::list>(obj) || py::isinstance<py::tuple>(obj)) {
    return OracleSpec::finite(to_set(obj.cast<std::vector<Pair>>()));
  }
  return oracle_spec_from_json(from_py(obj));
}

PLFunction to_pl(const std::vector<Pair>& pts) {
  std::vector<PLFunction::Point> v;
  for (const auto& [x, y] : pts) v.push_back({x, y});
  return PLFunction(std::move(v));
}

std::vector<Pair> from_pl(const PLFunction& f) {
  std::vector<Pair> out;
  for (const auto& p : f.points()) out.emplace_back(p.x, p.y);
  return out;
}

CantorSpec to_cantor(const std::string& alpha, const Pair& base) { return CantorSpec{AlphaRule::parse(alpha), to_interval(base)}; }

std::vector<BuilderState> run_build(const py::handle& e, const Pair& window, unsigned long n, unsigned long k_max,
                                    unsigned long depth) {
  BuildKnobs k;
  k.k_max = k_max;
  k.depth = depth;
  return build(to_oracle(e), to_interval(window), n, k);
}

}  // namespace

PYBIND11_MODULE(_lipsetlab, m) {
  m.doc() = "Exact interval sets, fat Cantor sets, one-sided densities and staged Lipschitz constructions";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_RuntimeError);
  py::register_exception<NotFoundError>(m, "NotFoundError", PyExc_LookupError);

  m.def("normalize", [](const std::vector<Pair>& parts) { return from_set(to_set(parts)); });
  m.def("union", [](const std::vector<Pair>& a, const std::vector<Pair>& b) { return from_set(to_set(a).unite(to_set(b))); });
  m.def("intersection",
        [](const std::vector<Pair>& a, const std::vector<Pair>& b) { return from_set(to_set(a).intersect(to_set(b))); });
  m.def("difference",
        [](const std::vector<Pair>& a, const std::vector<Pair>& b) { return from_set(to_set(a).subtract(to_set(b))); });
  m.def("symdiff_measure",
        [](const std::vector<Pair>& a, const std::vector<Pair>& b) { return symdiff_measure(to_set(a), to_set(b)); });
  m.def("measure", [](const std::vector<Pair>& a) { return to_set(a).measure(); });
  m.def(
      "measure_in", [](const std::vector<Pair>& a, const Pair& w) { return to_set(a).measure_in(to_interval(w)); },
      py::arg("s"), py::arg("window"));
  m.def("gaps", [](const std::vector<Pair>& a) {
    std::vector<Pair> out;
    for (const auto& g : to_set(a).gaps()) out.emplace_back(g.lo, g.hi);
    return out;
  });
  m.def("complement_in", [](const std::vector<Pair>& a, const Pair& w) { return from_set(to_set(a).complement_in(to_interval(w))); });

  m.def(
      "bounds",
      [](const py::object& e, const Pair& w, unsigned long depth) {
        MeasureBounds b = bounds(to_oracle(e), to_interval(w), depth);
        return Pair{b.lower, b.upper};
      },
      py::arg("oracle"), py::arg("window"), py::arg("depth") = 16);
  m.def(
      "realize", [](const py::object& e, unsigned long depth) { return from_set(realize(to_oracle(e), depth)); },
      py::arg("oracle"), py::arg("depth") = 16);

  m.def(
      "cantor_stage",
      [](const std::string& alpha, unsigned long n, const Pair& base) { return from_set(stage(to_cantor(alpha, base), n)); },
      py::arg("alpha"), py::arg("n"), py::arg("base") = Pair{0, 1});
  m.def(
      "cantor_params",
      [](const std::string& alpha, unsigned long n, unsigned long tail_depth, const Pair& base) {
        return to_py(to_json(params(to_cantor(alpha, base), n, tail_depth)));
      },
      py::arg("alpha"), py::arg("n"), py::arg("tail_depth") = 20, py::arg("base") = Pair{0, 1});
  m.def(
      "cantor_oracle",
      [](const std::string& alpha, const Pair& base) { return to_py(to_json(OracleSpec::cantor(to_cantor(alpha, base)))); },
      py::arg("alpha"), py::arg("base") = Pair{0, 1});
  m.def(
      "pack",
      [](unsigned long count, const std::string& policy, unsigned long depth) {
        auto [packed, oracle] = pack(count, parse_gap_policy(policy), depth);
        return py::make_tuple(to_py(to_json(packed)), to_py(to_json(oracle)));
      },
      py::arg("count"), py::arg("policy") = "widest-gap-first", py::arg("depth") = 8);

  m.def(
      "side_density",
      [](const py::object& e, const Rational& x, const Rational& r, const std::string& side, unsigned long depth) {
        Side s = side == "left" ? Side::Left : side == "right" ? Side::Right : throw ParseError("side must be left or right");
        MeasureBounds b = side_density(to_oracle(e), x, r, s, depth);
        return Pair{b.lower, b.upper};
      },
      py::arg("oracle"), py::arg("x"), py::arg("r"), py::arg("side"), py::arg("depth") = 16);
  m.def(
      "egd_member",
      [](const py::object& e, const Rational& x, const Rational& gamma, const Rational& delta, unsigned long depth) {
        return to_py(to_json(egd_member(to_oracle(e), x, gamma, delta, depth)));
      },
      py::arg("oracle"), py::arg("x"), py::arg("gamma"), py::arg("delta"), py::arg("depth") = 16);
  m.def(
      "certificate_check",
      [](const std::vector<Rational>& points, const py::object& e, const py::object& seq,
         const std::vector<unsigned long>& ks, unsigned long depth) {
        return to_py(to_json(certificate_check(points, to_oracle(e), certificate_seq_from_json(from_py(seq)), ks, depth)));
      },
      py::arg("points"), py::arg("oracle"), py::arg("seq"), py::arg("k_range"), py::arg("depth") = 16);
  m.def(
      "wnd_witness",
      [](const py::object& e, const Pair& j, const Rational& alpha, unsigned long depth, unsigned max_level) {
        Interval i = wnd_witness(to_oracle(e), to_interval(j), alpha, depth, max_level);
        return Pair{i.lo, i.hi};
      },
      py::arg("oracle"), py::arg("j"), py::arg("alpha"), py::arg("depth") = 16, py::arg("max_level") = 16);

  m.def("pl_eval", [](const std::vector<Pair>& f, const Rational& x) { return to_pl(f).eval(x); });
  m.def("mf", [](const std::vector<Pair>& f, const Rational& x, const Rational& r) { return mf(to_pl(f), x, r); });
  m.def("lip", [](const std::vector<Pair>& f, const Rational& x) { return lip_pl(to_pl(f), x); });
  m.def("sup_norm_diff",
        [](const std::vector<Pair>& f, const std::vector<Pair>& g) { return sup_norm_diff(to_pl(f), to_pl(g)); });

  m.def(
      "build",
      [](const py::object& e, const Pair& window, unsigned long n, unsigned long k_max, unsigned long depth) {
        py::list out;
        for (const auto& s : run_build(e, window, n, k_max, depth)) out.append(to_py(to_json(s)));
        return out;
      },
      py::arg("oracle"), py::arg("window"), py::arg("n"), py::arg("k_max") = 2, py::arg("depth") = 12);
  m.def(
      "verify",
      [](const py::object& e, const Pair& window, unsigned long n, unsigned long k_max, unsigned long depth,
         std::size_t samples, std::uint64_t seed) {
        VerifySamples vs;
        vs.points = samples;
        vs.seed = seed;
        auto states = run_build(e, window, n, k_max, depth);
        return to_py(to_json(verify_conditions(states, to_oracle(e), vs, depth)));
      },
      py::arg("oracle"), py::arg("window"), py::arg("n"), py::arg("k_max") = 2, py::arg("depth") = 12,
      py::arg("samples") = 200, py::arg("seed") = 1);
  m.def(
      "limit",
      [](const py::object& e, const Pair& window, unsigned long n, unsigned long k_max, unsigned long depth) {
        LimitResult lr = limit_function(run_build(e, window, n, k_max, depth));
        return py::make_tuple(from_pl(lr.f), lr.error_bound);
      },
      py::arg("oracle"), py::arg("window"), py::arg("n"), py::arg("k_max") = 2, py::arg("depth") = 12);

  m.def(
      "run_acceptance",
      [](const std::vector<int>& only, std::uint64_t seed) {
        acceptance::Options opts;
        opts.only = only;
        opts.seed = seed;
        std::vector<acceptance::CriterionResult> rs;
        {
          py::gil_scoped_release release;
          rs = acceptance::run(opts);
        }
        py::list out;
        for (const auto& r : rs) {
          py::dict d;
          d["id"] = r.id;
          d["name"] = r.name;
          d["pass"] = r.pass;
          d["seconds"] = r.seconds;
          d["detail"] = r.detail;
          out.append(d);
        }
        return out;
      },
      py::arg("only") = std::vector<int>{}, py::arg("seed") = 42);
}
