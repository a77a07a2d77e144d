#include "lipset/density.hpp"

#include <algorithm>
#include <set>

#include "parallel.hpp"

namespace lipset {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Member: return "member";
    case Verdict::Nonmember: return "nonmember";
    case Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

const char* to_string(Side s) { return s == Side::Left ? "left" : "right"; }

namespace {

Interval side_window(const Rational& x, const Rational& r, Side side) {
  return side == Side::Left ? Interval(x - r, x) : Interval(x, x + r);
}

// Sweep of a (clipped) set outward from x.
PLFunction sweep(const IntervalSet& s, const Rational& x, Side side, const Rational& r_max) {
  std::vector<PLFunction::Point> pts{{0, 0}};
  Rational acc = 0;
  auto push = [&](Rational r) {
    if (r <= pts.back().x) return;
    pts.push_back({std::move(r), acc});
  };
  const auto& parts = s.parts();
  if (side == Side::Right) {
    for (const auto& p : parts) {
      if (p.hi <= x) continue;
      Rational a = max(p.lo, x) - x;
      Rational b = min(p.hi - x, r_max);
      if (a >= r_max) break;
      push(a);
      acc += b - a;
      push(b);
    }
  } else {
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
      if (it->lo >= x) continue;
      Rational a = x - min(it->hi, x);
      Rational b = min(x - it->lo, r_max);
      if (a >= r_max) break;
      push(a);
      acc += b - a;
      push(b);
    }
  }
  push(r_max);
  return PLFunction(std::move(pts));
}

unsigned long profile_depth(const CantorSpec& spec, const Rational& r_max, unsigned long depth) {
  constexpr unsigned long kExtraLevels = 9;
  CantorGeometry geo(spec, depth);
  unsigned long k = 0;
  while (k < depth && geo.d(k) > r_max) ++k;
  return std::min(depth, k + kExtraLevels);
}

EgdVerdict decide(const PLFunction& low_l, const PLFunction& low_r, const PLFunction& up_l,
                  const PLFunction& up_r, const std::vector<ScaleCertificate>& certs, const Rational& gamma,
                  const Rational& delta) {
  EgdVerdict v;
  Rational floor = 0;
  for (const auto& c : certs) {
    if (c.ratio_lower >= gamma) floor = max(floor, min(c.r_floor, delta));
  }
  if (floor > 0) {
    if (floor == delta) {
      v.status = Verdict::Member;
      return v;
    }
    RatioMin m = inf_max_ratio(low_l, low_r, floor, delta);
    if (m.value >= gamma) {
      v.status = Verdict::Member;
      v.witness_r = m.r;
      v.witness_value = m.value;
      return v;
    }
  }
  RatioMin u = inf_max_ratio(up_l, up_r, 0, delta);
  if (u.value < gamma) {
    v.status = Verdict::Nonmember;
    v.stable_radius = (gamma - u.value) * u.r;
    v.witness_r = std::move(u.r);
    v.witness_value = std::move(u.value);
  }
  return v;
}

}  // namespace

MeasureBounds side_density(const OracleSpec& e, const Rational& x, const Rational& r, Side side,
                           unsigned long depth) {
  if (r <= 0) throw std::invalid_argument("side_density needs r > 0");
  MeasureBounds b = bounds(e, side_window(x, r, side), depth);
  return {b.lower / r, b.upper / r};
}

RatioMin inf_max_ratio(const PLFunction& a, const PLFunction& b, const Rational& lo, const Rational& hi) {
  if (lo < 0 || !(lo < hi)) throw std::invalid_argument("inf_max_ratio needs 0 <= lo < hi");
  if (lo == 0 && (a.eval(0) != 0 || b.eval(0) != 0)) {
    throw std::invalid_argument("inf_max_ratio from 0 needs functions vanishing at 0");
  }
  std::vector<Rational> xs;
  for (const auto& p : a.points()) {
    if (lo < p.x && p.x < hi) xs.push_back(p.x);
  }
  for (const auto& p : b.points()) {
    if (lo < p.x && p.x < hi) xs.push_back(p.x);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  xs.push_back(hi);

  RatioMin best{0, 0};
  bool have = false;
  auto consider = [&](const Rational& r, const Rational& fa, const Rational& fb) {
    Rational v = max(fa, fb) / r;
    if (!have || v < best.value) {
      best = {std::move(v), r};
      have = true;
    }
  };

  // On (0, xs[0]] both ratios are constant, so r = xs[0] stands for it.
  Rational prev_r = lo;
  Rational prev_a = a.eval(lo), prev_b = b.eval(lo);
  if (lo > 0) consider(lo, prev_a, prev_b);
  for (const auto& r : xs) {
    Rational fa = a.eval(r), fb = b.eval(r);
    if (prev_r > 0) {
      Rational d0 = prev_a - prev_b, d1 = fa - fb;
      if (sgn(d0) * sgn(d1) < 0) {
        Rational t = prev_r + d0 / (d0 - d1) * (r - prev_r);
        consider(t, a.eval(t), b.eval(t));
      }
    }
    consider(r, fa, fb);
    prev_r = r;
    prev_a = std::move(fa);
    prev_b = std::move(fb);
  }
  // Candidates were visited left to right; ties keep the smallest r.
  return best;
}

PLFunction side_measure(const IntervalSet& e, const Rational& x, Side side, const Rational& r_max) {
  if (r_max <= 0) throw std::invalid_argument("side_measure needs r_max > 0");
  return sweep(e, x, side, r_max);
}

PLFunction side_measure_lower(const OracleSpec& e, const Rational& x, Side side, const Rational& r_max,
                              unsigned long depth) {
  return std::visit(
      [&](const auto& n) -> PLFunction {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, FiniteOracle>) {
          return side_measure(n.set, x, side, r_max);
        } else if constexpr (std::is_same_v<T, CantorOracle>) {
          unsigned long d = profile_depth(n.spec, r_max, depth);
          IntervalSet s = realize_in(e, side_window(x, r_max, side), d);
          PLFunction p = sweep(s, x, side, r_max);
          // Every full stage interval loses at most d_D * tail of its measure
          // and the window cuts at most two stage intervals.
          Rational tail = n.spec.alpha.tail_sum(d);
          CantorGeometry geo(n.spec, d);
          return affine(p, 1 - tail, -2 * geo.d(d) * tail);
        } else {
          if (n.members.empty()) return PLFunction({{0, 0}, {r_max, 0}});
          PLFunction out = side_measure_lower(n.members.front(), x, side, r_max, depth);
          for (std::size_t i = 1; i < n.members.size(); ++i) {
            out = pointwise_max(out, side_measure_lower(n.members[i], x, side, r_max, depth));
          }
          return out;
        }
      },
      e.node);
}

PLFunction side_measure_upper(const OracleSpec& e, const Rational& x, Side side, const Rational& r_max,
                              unsigned long depth) {
  return std::visit(
      [&](const auto& n) -> PLFunction {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, FiniteOracle>) {
          return side_measure(n.set, x, side, r_max);
        } else if constexpr (std::is_same_v<T, CantorOracle>) {
          unsigned long d = profile_depth(n.spec, r_max, depth);
          return sweep(realize_in(e, side_window(x, r_max, side), d), x, side, r_max);
        } else {
          if (n.members.empty()) return PLFunction({{0, 0}, {r_max, 0}});
          PLFunction out = side_measure_upper(n.members.front(), x, side, r_max, depth);
          for (std::size_t i = 1; i < n.members.size(); ++i) {
            out = add(out, side_measure_upper(n.members[i], x, side, r_max, depth));
          }
          return out;
        }
      },
      e.node);
}

EgdVerdict egd_member(const IntervalSet& e, const Rational& x, const Rational& gamma, const Rational& delta) {
  if (delta <= 0) throw std::invalid_argument("egd_member needs delta > 0");
  PLFunction l = side_measure(e, x, Side::Left, delta);
  PLFunction r = side_measure(e, x, Side::Right, delta);
  RatioMin m = inf_max_ratio(l, r, 0, delta);
  EgdVerdict v;
  v.status = m.value >= gamma ? Verdict::Member : Verdict::Nonmember;
  if (v.status == Verdict::Nonmember) v.stable_radius = (gamma - m.value) * m.r;
  v.witness_r = std::move(m.r);
  v.witness_value = std::move(m.value);
  return v;
}

EgdVerdict egd_member(const OracleSpec& e, const Rational& x, const Rational& gamma, const Rational& delta,
                      unsigned long depth) {
  if (delta <= 0) throw std::invalid_argument("egd_member needs delta > 0");
  if (const auto* f = std::get_if<FiniteOracle>(&e.node)) return egd_member(f->set, x, gamma, delta);
  auto certs = small_scale_certificates(e, x, Side::Left, depth);
  auto right = small_scale_certificates(e, x, Side::Right, depth);
  certs.insert(certs.end(), right.begin(), right.end());
  return decide(side_measure_lower(e, x, Side::Left, delta, depth), side_measure_lower(e, x, Side::Right, delta, depth),
                side_measure_upper(e, x, Side::Left, delta, depth), side_measure_upper(e, x, Side::Right, delta, depth),
                certs, gamma, delta);
}

namespace {

enum class CellState { In, Out, Open };

PLFunction identity_up_to(const Rational& r_max) { return PLFunction({{0, 0}, {r_max, r_max}}); }

CellState classify(const IntervalSet& e, const Interval& cell, const Rational& gamma, const Rational& delta) {
  const Rational& u = cell.lo;
  const Rational& v = cell.hi;
  auto idx = e.part_index(cell.midpoint());
  if (idx >= 0 && e.parts()[idx].contains(cell)) {
    const Interval& part = e.parts()[idx];
    PLFunction id = identity_up_to(delta);
    // Right side: (x, x+r) ⊇ (x, min(x+r, q)) ∪ (q, u+r) for every x in the cell.
    PLFunction far_r = pointwise_max(affine(side_measure(e, u, Side::Right, delta), 1, u - part.hi),
                                     PLFunction::constant(0));
    PLFunction low_r = add(pointwise_min(id, PLFunction::constant(part.hi - v)), far_r);
    PLFunction far_l = pointwise_max(affine(side_measure(e, v, Side::Left, delta), 1, part.lo - v),
                                     PLFunction::constant(0));
    PLFunction low_l = add(pointwise_min(id, PLFunction::constant(u - part.lo)), far_l);
    if (inf_max_ratio(low_l, low_r, 0, delta).value >= gamma) return CellState::In;
    return CellState::Open;
  }
  if (e.measure_in(cell) == 0) {
    PLFunction up_r = side_measure(e, v, Side::Right, delta);
    PLFunction up_l = side_measure(e, u, Side::Left, delta);
    if (inf_max_ratio(up_l, up_r, 0, delta).value < gamma) return CellState::Out;
  }
  return CellState::Open;
}

}  // namespace

EgdRegion egd_region(const IntervalSet& e, const Rational& gamma, const Rational& delta, const Interval& window,
                     const Rational& resolution) {
  if (resolution <= 0) throw std::invalid_argument("egd_region needs resolution > 0");
  if (delta <= 0) throw std::invalid_argument("egd_region needs delta > 0");
  EgdRegion out;
  if (window.length() == 0) return out;
  std::vector<Rational> cuts;
  for (const auto& p : e.endpoints()) {
    if (window.lo < p && p < window.hi) cuts.push_back(p);
  }
  std::vector<Interval> open = IntervalSet::single(window).split_at(cuts);
  std::vector<Interval> inner;
  Rational target = resolution * window.length();
  constexpr int kMaxLevels = 200;
  for (int level = 0;; ++level) {
    std::vector<Interval> next;
    Rational open_measure = 0;
    for (const auto& c : open) {
      ++out.cells_tested;
      switch (classify(e, c, gamma, delta)) {
        case CellState::In: inner.push_back(c); break;
        case CellState::Out: break;
        case CellState::Open:
          next.push_back(c);
          open_measure += c.length();
          break;
      }
    }
    if (open_measure <= target) {
      open = std::move(next);
      break;
    }
    if (level == kMaxLevels) throw ResourceError("egd_region did not reach the requested resolution");
    open.clear();
    for (const auto& c : next) {
      Rational m = c.midpoint();
      open.emplace_back(c.lo, m);
      open.emplace_back(m, c.hi);
    }
  }
  out.inner = IntervalSet::normalize(inner);
  std::vector<Interval> all = inner;
  all.insert(all.end(), open.begin(), open.end());
  out.outer = IntervalSet::normalize(all);
  return out;
}

void CertificateSeq::validate() const {
  if (gammas.size() != deltas.size()) throw std::invalid_argument("certificate gammas and deltas differ in length");
  if (gammas.empty()) throw std::invalid_argument("certificate sequence is empty");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (deltas[i] <= 0) throw std::invalid_argument("certificate deltas must be positive");
    if (i > 0 && !(gammas[i - 1] < gammas[i])) throw std::invalid_argument("certificate gammas must increase");
    if (i > 0 && !(deltas[i] < deltas[i - 1])) throw std::invalid_argument("certificate deltas must decrease");
  }
}

std::size_t CertificateReport::count(Verdict v) const {
  std::size_t total = 0;
  for (const auto& p : points) {
    for (const auto& m : p.membership) total += m.status == v;
  }
  return total;
}

std::size_t CertificateReport::sudt_without_udt() const {
  std::size_t total = 0;
  for (const auto& p : points) {
    for (std::size_t i = 0; i < p.sudt.size(); ++i) {
      total += p.sudt[i] == Verdict::Member && p.udt[i] != Verdict::Member;
    }
  }
  return total;
}

CertificateReport certificate_check(const std::vector<Rational>& points, const OracleSpec& e,
                                    const CertificateSeq& c, const std::vector<unsigned long>& k_range,
                                    unsigned long depth) {
  c.validate();
  CertificateReport rep;
  rep.k_range = k_range;
  rep.first_n = c.first;
  rep.points.resize(points.size());
  const Rational& delta_max = c.deltas.front();
  detail::parallel_for(points.size(), [&](std::size_t i) {
    const Rational& x = points[i];
    PointCertificate pc;
    pc.x = x;
    if (const auto* f = std::get_if<FiniteOracle>(&e.node)) {
      for (std::size_t j = 0; j < c.gammas.size(); ++j) {
        pc.membership.push_back(egd_member(f->set, x, c.gammas[j], c.deltas[j]));
      }
    } else {
      auto certs = small_scale_certificates(e, x, Side::Left, depth);
      auto right = small_scale_certificates(e, x, Side::Right, depth);
      certs.insert(certs.end(), right.begin(), right.end());
      PLFunction low_l = side_measure_lower(e, x, Side::Left, delta_max, depth);
      PLFunction low_r = side_measure_lower(e, x, Side::Right, delta_max, depth);
      PLFunction up_l = side_measure_upper(e, x, Side::Left, delta_max, depth);
      PLFunction up_r = side_measure_upper(e, x, Side::Right, delta_max, depth);
      for (std::size_t j = 0; j < c.gammas.size(); ++j) {
        pc.membership.push_back(decide(low_l, low_r, up_l, up_r, certs, c.gammas[j], c.deltas[j]));
      }
    }
    for (unsigned long k : k_range) {
      std::size_t from = k > c.first ? k - c.first : 0;
      if (from >= pc.membership.size()) {
        pc.udt.push_back(Verdict::Unknown);
        pc.sudt.push_back(Verdict::Unknown);
        continue;
      }
      bool any_in = false, all_in = true, any_out = false, all_out = true;
      for (std::size_t j = from; j < pc.membership.size(); ++j) {
        Verdict s = pc.membership[j].status;
        any_in = any_in || s == Verdict::Member;
        all_in = all_in && s == Verdict::Member;
        any_out = any_out || s == Verdict::Nonmember;
        all_out = all_out && s == Verdict::Nonmember;
      }
      pc.udt.push_back(any_in ? Verdict::Member : all_out ? Verdict::Nonmember : Verdict::Unknown);
      pc.sudt.push_back(all_in ? Verdict::Member : any_out ? Verdict::Nonmember : Verdict::Unknown);
    }
    rep.points[i] = std::move(pc);
  });
  return rep;
}

Interval wnd_witness(const OracleSpec& e, const Interval& j, const Rational& alpha, unsigned long depth,
                     unsigned max_level) {
  if (alpha <= 0 || alpha >= 1) throw std::invalid_argument("wnd_witness needs alpha in (0, 1)");
  if (j.length() == 0) throw std::invalid_argument("wnd_witness needs a nondegenerate interval");
  std::vector<Interval> level{j};
  for (unsigned l = 0; l <= max_level; ++l) {
    for (const auto& i : level) {
      if (bounds(e, i, depth).upper < alpha * i.length()) return i;
    }
    if (l == max_level) break;
    std::vector<Interval> next;
    next.reserve(2 * level.size());
    for (const auto& i : level) {
      Rational m = i.midpoint();
      next.emplace_back(i.lo, m);
      next.emplace_back(m, i.hi);
    }
    level = std::move(next);
  }
  throw NotFoundError("no subinterval with |I ∩ E| < " + format_rational(alpha) + "|I| found in [" +
                      format_rational(j.lo) + ", " + format_rational(j.hi) + "] down to 2^-" +
                      std::to_string(max_level) + " of its length at depth " + std::to_string(depth));
}

std::vector<OnesidedHit> onesided_failure_scan(const OracleSpec& e, const std::vector<Rational>& candidates,
                                               const std::vector<Rational>& scales, const Rational& threshold,
                                               unsigned long depth) {
  if (threshold <= 0 || threshold >= 1) throw std::invalid_argument("threshold must lie in (0, 1)");
  std::vector<std::optional<OnesidedHit>> found(candidates.size());
  detail::parallel_for(candidates.size(), [&](std::size_t i) {
    const Rational& x = candidates[i];
    std::optional<std::pair<Rational, MeasureBounds>> left, right;
    for (const auto& h : scales) {
      if (!left) {
        MeasureBounds b = side_density(e, x, h, Side::Left, depth);
        if (b.upper < threshold) left.emplace(h, b);
      }
      if (!right) {
        MeasureBounds b = side_density(e, x, h, Side::Right, depth);
        if (b.upper < threshold) right.emplace(h, b);
      }
      if (left && right) break;
    }
    if (left && right) found[i] = OnesidedHit{x, left->first, right->first, left->second, right->second};
  });
  std::vector<OnesidedHit> out;
  for (auto& f : found) {
    if (f) out.push_back(std::move(*f));
  }
  return out;
}

std::vector<Rational> alternating_candidates(const CantorSpec& spec, unsigned long level, unsigned max_switches) {
  CantorGeometry geo(spec, level);
  std::set<Rational> pts;
  std::vector<bool> addr(level);
  // Enumerate addresses by their switch positions.
  auto emit = [&] {
    Rational lo = spec.base.lo;
    for (unsigned long k = 0; k < level; ++k) {
      if (addr[k]) lo += geo.child_shift(k);
    }
    pts.insert(lo);
    pts.insert(lo + geo.d(level));
  };
  auto rec = [&](auto&& self, unsigned long pos, bool side, unsigned switches) -> void {
    if (pos == level) {
      emit();
      return;
    }
    addr[pos] = side;
    self(self, pos + 1, side, switches);
    if (pos > 0 && switches < max_switches) {
      addr[pos] = !side;
      self(self, pos + 1, !side, switches + 1);
    }
  };
  if (level == 0) {
    emit();
  } else {
    rec(rec, 0, false, 0);
    rec(rec, 0, true, 0);
  }
  return {pts.begin(), pts.end()};
}

std::vector<Rational> dyadic_scales(unsigned long k) {
  std::vector<Rational> out;
  for (unsigned long j = 1; j <= k; ++j) out.push_back(dyadic(j));
  return out;
}

}  // namespace lipset
