#include "lipset/builder.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

namespace lipset {

namespace {

Rational steepness(unsigned long n) { return Rational(1) - Rational(1, n); }

Rational floor_int(const Rational& x) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return Rational(q);
}

struct GridPoint {
  Rational x;
  Rational f;
  Rational lo;
  Rational hi;
};

/// Uniform sample (by measure) of `count` points of s, 32-bit resolution.
std::vector<Rational> sample_in(const IntervalSet& s, std::size_t count, std::mt19937_64& rng) {
  std::vector<Rational> out;
  if (s.empty() || count == 0) return out;
  std::vector<Rational> prefix{0};
  for (const auto& part : s.parts()) prefix.push_back(prefix.back() + part.length());
  const Rational total = prefix.back();
  const Rational scale = dyadic(32);
  for (std::size_t i = 0; i < count; ++i) {
    Rational t = total * Rational(static_cast<unsigned long>(rng() >> 32)) * scale;
    auto it = std::upper_bound(prefix.begin(), prefix.end(), t);
    std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(it - prefix.begin()) - 1, s.size() - 1);
    out.push_back(s.parts()[k].lo + (t - prefix[k]));
  }
  return out;
}

Rational deficiency(const OracleSpec& h, const Interval& side, unsigned long depth) {
  return (side.length() - bounds(h, side, depth).lower) / side.length();
}

}  // namespace

SuruResult suru(const std::vector<Interval>& u, const OracleSpec& h_tilde, const Rational& epsilon,
                const SuruBudget& budget) {
  if (epsilon <= 0) throw std::invalid_argument("suru needs epsilon > 0");
  SuruResult res;
  std::vector<Interval> candidates;
  Rational covered_upper = 0;
  for (const auto& piece : u) {
    if (piece.length() <= 0) continue;
    covered_upper += measure_upper(h_tilde, piece, budget.depth);
    IntervalSet inside = realize_in(h_tilde, piece, budget.depth);
    for (const auto& part : inside.parts()) candidates.push_back(part);
  }
  if (candidates.size() > budget.max_components) {
    std::vector<std::size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return candidates[a].length() > candidates[b].length(); });
    order.resize(budget.max_components);
    std::sort(order.begin(), order.end());
    std::vector<Interval> kept;
    for (auto i : order) kept.push_back(candidates[i]);
    res.notes.push_back("component budget reached: kept " + std::to_string(kept.size()) + " of " +
                        std::to_string(candidates.size()));
    res.partial = true;
    candidates = std::move(kept);
  }
  Rational kept_lower = 0;
  std::vector<Interval> kept;
  for (const auto& c : candidates) {
    const Rational len = c.length();
    std::vector<Rational> scales;
    for (unsigned j = 1; j <= budget.audit_levels; ++j) scales.push_back(len * dyadic(j));
    for (int i = 1; i < 8; ++i) scales.push_back(len * ratio(i, 8));
    Rational worst = 0;
    for (const auto& r : scales) {
      worst = max(worst, deficiency(h_tilde, Interval(c.lo, c.lo + r), budget.depth));
      worst = max(worst, deficiency(h_tilde, Interval(c.hi - r, c.hi), budget.depth));
    }
    if (worst >= epsilon) {
      res.partial = true;
      res.notes.push_back("dropped component [" + format_rational(c.lo) + ", " + format_rational(c.hi) +
                          "]: endpoint deficiency " + format_rational(worst));
      continue;
    }
    kept_lower += bounds(h_tilde, c, budget.depth).lower;
    kept.push_back(c);
    res.trace.push_back({c, epsilon, epsilon - worst});
  }
  res.h = IntervalSet::from_sorted(std::move(kept));
  res.tolerance = max(Rational(0), covered_upper - kept_lower);
  return res;
}

std::size_t BuilderState::component_count() const {
  std::size_t n = 0;
  for (const auto& t : traces) n += t.components.size();
  return n;
}

std::vector<Rational> allocation(const Rational& f_a, const Rational& f_b, const std::vector<Rational>& measures) {
  Rational total = 0;
  for (const auto& m : measures) {
    if (m <= 0) throw std::invalid_argument("allocation needs positive measures");
    total += m;
  }
  if (measures.empty()) {
    if (f_a != f_b) throw std::invalid_argument("allocation of a nonzero rise needs a component");
    return {};
  }
  std::vector<Rational> out;
  const Rational rise = f_b - f_a;
  Rational cur = f_a;
  for (const auto& m : measures) {
    out.push_back(cur);
    cur += rise * m / total;
    out.push_back(cur);
  }
  return out;
}

std::vector<Rational> refinement_sequence(const Rational& end, const Rational& start, unsigned long n,
                                          unsigned long l_prime, unsigned long k_max, const Rational& tolerance,
                                          const IntervalSet& e) {
  if (n == 0) throw std::invalid_argument("refinement starts at stage 1");
  if (start == end) throw std::invalid_argument("refinement needs start != end");
  const bool leftwards = end < start;
  const Rational nl(n + l_prime);
  std::vector<Rational> seq{start};
  for (unsigned long k = 1; k <= k_max; ++k) {
    const Rational& prev = seq.back();
    Rational len = abs(prev - end);
    if (len < tolerance) break;
    Interval span = leftwards ? Interval(end, prev) : Interval(prev, end);
    Rational missing = len - e.measure_in(span);
    Rational step = min(len / nl, len / Rational(k) + 4 * nl * missing);
    seq.push_back(leftwards ? Rational(prev - step) : Rational(prev + step));
  }
  return seq;
}

std::vector<Rational> zigzag(const std::vector<Rational>& seq, const Rational& f_end, unsigned long n) {
  std::vector<Rational> vals;
  if (seq.empty()) return vals;
  const Rational s = steepness(n);
  vals.push_back(f_end);
  for (std::size_t k = 1; k < seq.size(); ++k) {
    Rational step = s * abs(seq[k] - seq[k - 1]);
    vals.push_back(vals.back() <= f_end ? Rational(vals.back() + step) : Rational(vals.back() - step));
  }
  return vals;
}

BuilderState init_stage0(const OracleSpec& e, const Interval& window, unsigned long depth) {
  if (!(window.lo < window.hi)) throw std::invalid_argument("window must have positive length");
  if (measure_upper(e, window, depth) == 0) throw Error("the set is null in the window");
  BuilderState s;
  s.n = 0;
  s.window = window;
  s.e_stand_in = realize_in(e, window, depth);
  s.G = IntervalSet::single(window);
  const Rational w = window.length();
  for (Rational z = floor_int(window.lo) + 1; z < window.hi; z += 1) {
    if (z <= window.lo) continue;
    if (s.D.size() > (std::size_t{1} << 20)) throw ResourceError("window holds too many integer points");
    MeasureBounds b = bounds(e, Interval(z, z + 1), depth);
    if (b.lower > 0) {
      s.D.push_back(z);
    } else if (b.upper > 0) {
      s.notes.push_back("integer " + format_rational(z) + " skipped: measure of [z, z+1] not certified positive");
    }
  }
  s.f = PLFunction({{window.lo, 0}, {window.hi, 0}});
  s.lower_env = PLFunction({{window.lo, -w}, {window.hi, -w}});
  s.upper_env = PLFunction({{window.lo, w}, {window.hi, w}});
  return s;
}

BuilderState build_stage(const BuilderState& prev, const BuildKnobs& knobs) {
  const unsigned long n = prev.n + 1;
  const IntervalSet& ep = prev.e_stand_in;
  const OracleSpec h_tilde = OracleSpec::finite(ep);
  const Rational eps(1, 4 * (n + knobs.l_max) * (n + knobs.l_max));
  SuruBudget sb;
  sb.depth = knobs.depth;
  sb.max_components = knobs.max_components;

  BuilderState s;
  s.n = n;
  s.window = prev.window;
  s.e_stand_in = ep;
  s.notes = {};

  std::vector<GridPoint> grid;
  grid.reserve(prev.f.size() * 4);
  for (const auto& p : prev.f.points()) grid.push_back({p.x, p.y, p.y, p.y});

  std::vector<Interval> cores, slivers;
  std::size_t total_components = 0;

  for (const auto& gap : prev.G.split_at(prev.D)) {
    GapTrace gt;
    gt.gap = gap;
    gt.f_a = prev.f.eval(gap.lo);
    gt.f_b = prev.f.eval(gap.hi);
    const Rational rise = gt.f_b - gt.f_a;

    std::vector<Rational> cuts;
    for (Rational z = floor_int(gap.lo * n) + 1; z < gap.hi * n; z += 1) cuts.push_back(z / n);
    cuts.push_back(gap.midpoint());
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<Interval> pieces;
    Rational lo = gap.lo;
    for (const auto& c : cuts) {
      if (c <= lo || c >= gap.hi) continue;
      pieces.emplace_back(lo, c);
      lo = c;
    }
    pieces.emplace_back(lo, gap.hi);

    SuruResult sr = suru(pieces, h_tilde, eps, sb);
    if (sr.partial) {
      s.partial = true;
      for (auto& note : sr.notes) s.notes.push_back(std::move(note));
    }
    std::vector<Interval> comps;
    std::vector<Rational> measures;
    for (const auto& t : sr.trace) {
      comps.push_back(t.component);
      measures.push_back(ep.measure_in(t.component));
    }
    total_components += comps.size();
    if (total_components > knobs.max_components) {
      throw ResourceError("stage " + std::to_string(n) + " exceeds " + std::to_string(knobs.max_components) +
                          " components");
    }

    std::vector<bool> steep(comps.size(), false);
    if (rise != 0) {
      std::vector<std::size_t> order(comps.size());
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return measures[a] > measures[b]; });
      Rational acc = 0;
      for (auto i : order) {
        steep[i] = true;
        ++gt.k_star;
        acc += measures[i];
        if (acc > abs(rise)) break;
      }
      if (!(acc > abs(rise))) {
        throw Error("interval [" + format_rational(gap.lo) + ", " + format_rational(gap.hi) +
                    "] has too little measure for its rise");
      }
    }
    std::vector<Rational> steep_measures;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      if (steep[i]) steep_measures.push_back(measures[i]);
    }
    const auto alloc = allocation(gt.f_a, gt.f_b, steep_measures);

    Rational level = gt.f_a;
    std::size_t next_alloc = 0;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      const Interval& c = comps[i];
      ComponentTrace t;
      t.component = c;
      t.measure = measures[i];
      Rational a0, b0;
      if (steep[i]) {
        t.kind = ComponentCase::Steep;
        t.f_left = alloc[next_alloc];
        t.f_right = alloc[next_alloc + 1];
        next_alloc += 2;
        Rational r = abs(t.f_right - t.f_left);
        Rational slack = c.length() - r;
        Rational len = r + min(slack / 4, r / (2 * n));
        Rational kappa = (c.length() - len) / 2;
        a0 = c.lo + kappa;
        b0 = c.hi - kappa;
        level = t.f_right;
      } else {
        t.kind = ComponentCase::Flat;
        t.f_left = t.f_right = level;
        a0 = b0 = c.midpoint();
      }
      const Rational tol = knobs.tolerance * c.length();
      t.a_seq = refinement_sequence(c.lo, a0, n, t.l_prime, knobs.k_max, tol, ep);
      t.b_seq = refinement_sequence(c.hi, b0, n, t.l_prime, knobs.k_max, tol, ep);
      const auto fa_seq = zigzag(t.a_seq, t.f_left, n);
      const auto fb_seq = zigzag(t.b_seq, t.f_right, n);
      t.left_sliver = t.a_seq.back() - c.lo;
      t.right_sliver = c.hi - t.b_seq.back();
      t.truncated = t.left_sliver >= tol || t.right_sliver >= tol;
      if (t.truncated) s.partial = true;
      slivers.emplace_back(c.lo, t.a_seq.back());
      slivers.emplace_back(t.b_seq.back(), c.hi);
      cores.emplace_back(t.a_seq.back(), t.b_seq.back());

      std::vector<std::pair<Rational, Rational>> ds;
      for (std::size_t k = t.a_seq.size(); k-- > 0;) ds.emplace_back(t.a_seq[k], fa_seq[k]);
      for (std::size_t k = (t.kind == ComponentCase::Flat ? 1 : 0); k < t.b_seq.size(); ++k) {
        ds.emplace_back(t.b_seq[k], fb_seq[k]);
      }
      grid.push_back({c.lo, t.f_left, t.f_left, t.f_left});
      for (std::size_t j = 0; j < ds.size(); ++j) {
        Rational fmin = ds[j].second, fmax = ds[j].second, spread = 0;
        if (j > 0) {
          fmin = min(fmin, ds[j - 1].second);
          fmax = max(fmax, ds[j - 1].second);
          spread = max(spread, Rational(ds[j].first - ds[j - 1].first));
        }
        if (j + 1 < ds.size()) {
          fmin = min(fmin, ds[j + 1].second);
          fmax = max(fmax, ds[j + 1].second);
          spread = max(spread, Rational(ds[j + 1].first - ds[j].first));
        }
        if (ds.size() == 1) spread = max(Rational(ds[j].first - c.lo), Rational(c.hi - ds[j].first));
        grid.push_back({ds[j].first, ds[j].second, fmin - spread, fmax + spread});
        s.D.push_back(ds[j].first);
      }
      grid.push_back({c.hi, t.f_right, t.f_right, t.f_right});
      gt.components.push_back(std::move(t));
    }
    s.traces.push_back(std::move(gt));
  }

  std::stable_sort(grid.begin(), grid.end(), [](const GridPoint& a, const GridPoint& b) { return a.x < b.x; });
  std::vector<PLFunction::Point> fp, lp, up;
  for (const auto& g : grid) {
    if (!fp.empty() && fp.back().x == g.x) {
      if (fp.back().y != g.f) throw Error("inconsistent stage values at " + format_rational(g.x));
      continue;
    }
    fp.push_back({g.x, g.f});
    lp.push_back({g.x, g.lo});
    up.push_back({g.x, g.hi});
  }
  s.f = PLFunction(std::move(fp));
  s.lower_env = PLFunction(std::move(lp));
  s.upper_env = PLFunction(std::move(up));
  std::sort(s.D.begin(), s.D.end());
  s.G = IntervalSet::from_sorted(std::move(cores));
  s.Z = prev.Z.unite(IntervalSet::normalize(slivers));
  s.F = IntervalSet::single(s.window).subtract(s.G.unite(s.Z));
  return s;
}

std::vector<BuilderState> build(const OracleSpec& e, const Interval& window, unsigned long n_max,
                                const BuildKnobs& knobs) {
  std::vector<BuilderState> states;
  states.push_back(init_stage0(e, window, knobs.depth));
  for (unsigned long n = 1; n <= n_max; ++n) states.push_back(build_stage(states.back(), knobs));
  return states;
}

const ConditionResult& VerifyReport::get(const std::string& name) const {
  for (const auto& c : conditions) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("no condition " + name);
}

bool VerifyReport::all_pass() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const ConditionResult& c) { return c.pass; });
}

namespace {

void record(ConditionResult& c, bool ok, const std::string& what) {
  ++c.checked;
  if (ok) return;
  ++c.violations;
  c.pass = false;
  if (c.detail.empty()) c.detail = what;
}

std::vector<Rational> merged_breaks(const std::vector<const PLFunction*>& fs) {
  std::vector<Rational> xs;
  for (auto* f : fs) {
    for (const auto& p : f->points()) xs.push_back(p.x);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

std::string at(unsigned long n, const Rational& x) {
  return "stage " + std::to_string(n) + " at x=" + format_rational(x);
}

}  // namespace

VerifyReport verify_conditions(const std::vector<BuilderState>& states, const OracleSpec& e,
                               const VerifySamples& samples, unsigned long depth) {
  VerifyReport rep;
  ConditionResult ca, cb, cc, cd, ce, cf, cg, cauchy;
  ca.name = "A";
  cb.name = "B";
  cc.name = "C";
  cd.name = "D";
  ce.name = "E";
  cf.name = "F";
  cg.name = "G";
  cauchy.name = "Cauchy";
  std::mt19937_64 rng(samples.seed);

  for (const auto& s : states) {
    const unsigned long n = s.n;
    record(cc, s.f.max_abs_slope() <= 1, "slope above 1 at stage " + std::to_string(n));
    if (n == 0) continue;

    Rational inside_lower = 0, core_excess = 0;
    for (const auto& core : s.G.parts()) {
      Rational lo = bounds(e, core, depth).lower;
      inside_lower += lo;
      core_excess += core.length() - lo;
    }
    Rational missing = measure_upper(e, s.window, depth) - inside_lower;
    record(ca, missing <= samples.a_tolerance,
           "stage " + std::to_string(n) + ": |E \\ G_n| <= " + format_rational(missing));
    record(cb, core_excess * 4 * n * n <= s.G.measure(),
           "stage " + std::to_string(n) + ": |G_n \\ E| <= " + format_rational(core_excess));

    for (const auto& x : sample_in(s.F, samples.points, rng)) {
      record(cd, s.lower_env.eval(x) == s.f.eval(x) && s.upper_env.eval(x) == s.f.eval(x), at(n, x));
    }
    std::size_t stride = std::max<std::size_t>(1, s.component_count() / std::max<std::size_t>(1, samples.points));
    std::size_t idx = 0;
    for (const auto& gt : s.traces) {
      for (const auto& t : gt.components) {
        if (idx++ % stride != 0) continue;
        Rational bound = Rational(8) / Rational(n + t.l_prime - 1);
        for (const auto* env : {&s.lower_env, &s.upper_env}) {
          for (std::size_t k = 2; k + 1 < t.a_seq.size(); ++k) {
            const Rational& y = t.a_seq[k];
            Rational q = abs(env->eval(y) - env->eval(t.component.lo)) / (y - t.component.lo);
            record(cd, q < bound, "envelope quotient " + format_rational(q) + " " + at(n, y));
          }
          for (std::size_t k = 2; k + 1 < t.b_seq.size(); ++k) {
            const Rational& y = t.b_seq[k];
            Rational q = abs(env->eval(t.component.hi) - env->eval(y)) / (t.component.hi - y);
            record(cd, q < bound, "envelope quotient " + format_rational(q) + " " + at(n, y));
          }
        }
      }
    }

    const Rational mesh(1, n);
    const Rational steep = steepness(n);
    for (const auto& x : sample_in(s.G, samples.points, rng)) {
      auto pair_ok = [&](std::size_t i) {
        if (i + 1 >= s.D.size()) return false;
        const Rational& d1 = s.D[i];
        const Rational& d2 = s.D[i + 1];
        if (!(d1 <= x && x <= d2)) return false;
        Rational len = d2 - d1;
        return len <= mesh && abs(s.f.eval(d2) - s.f.eval(d1)) >= steep * len &&
               s.G.part_index(d1) == s.G.part_index(d2);
      };
      auto it = std::upper_bound(s.D.begin(), s.D.end(), x);
      std::size_t i = static_cast<std::size_t>(it - s.D.begin());
      bool ok = (i >= 1 && pair_ok(i - 1)) || (i >= 2 && pair_ok(i - 2));
      record(ce, ok, at(n, x));
    }
  }

  rep.cauchy.resize(states.size());
  for (std::size_t j = 0; j < states.size(); ++j) {
    const auto& sn = states[j];
    record(cg, true, "");
    for (const auto& x : merged_breaks({&sn.f, &sn.lower_env, &sn.upper_env})) {
      record(cg, sn.lower_env.eval(x) <= sn.f.eval(x) && sn.f.eval(x) <= sn.upper_env.eval(x), at(sn.n, x));
    }
    for (std::size_t i = 0; i <= j; ++i) {
      const auto& sm = states[i];
      rep.cauchy[j].push_back(sup_norm_diff(sn.f, sm.f));
      if (i == j) continue;
      for (const auto& p : sm.f.points()) {
        record(cf, sn.f.eval(p.x) == p.y, "stage " + std::to_string(sn.n) + " vs " + at(sm.n, p.x));
      }
      for (const auto& d : sm.D) {
        record(cf, sn.f.eval(d) == sm.f.eval(d), "stage " + std::to_string(sn.n) + " vs " + at(sm.n, d));
      }
      for (const auto& x : merged_breaks({&sn.lower_env, &sn.upper_env, &sm.lower_env, &sm.upper_env})) {
        bool ok = sm.lower_env.eval(x) <= sn.lower_env.eval(x) && sn.upper_env.eval(x) <= sm.upper_env.eval(x);
        record(cg, ok, "stage " + std::to_string(sn.n) + " vs " + at(sm.n, x));
      }
      if (sm.n >= 1) {
        record(cauchy, rep.cauchy[j][i] * sm.n <= 1,
               "||f_" + std::to_string(sn.n) + " - f_" + std::to_string(sm.n) +
                   "|| = " + format_rational(rep.cauchy[j][i]));
      }
    }
  }
  rep.conditions = {ca, cb, cc, cd, ce, cf, cg, cauchy};
  return rep;
}

LimitResult limit_function(const std::vector<BuilderState>& states) {
  if (states.empty()) throw std::invalid_argument("limit_function needs at least one stage");
  const auto& last = states.back();
  // Vacuous at stage 0.
  if (last.n == 0) return {last.f, 1};
  return {last.f, Rational(1, last.n)};
}

}  // namespace lipset
