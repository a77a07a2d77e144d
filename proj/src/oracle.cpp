#include "lipset/oracle.hpp"

#include <algorithm>
#include <mutex>

namespace lipset {

namespace {

/// Per-spec numeric tables d_k, tail_sum(k), tail_sup(k) up to some depth.
struct CantorTables {
  std::vector<Rational> d;
  std::vector<Rational> tail;
  std::vector<Rational> sup;
  std::vector<Rational> count;  // 2^k

  unsigned long depth() const { return static_cast<unsigned long>(tail.size() - 1); }
};

std::shared_ptr<const CantorTables> build_tables(const CantorSpec& spec, unsigned long depth) {
  auto t = std::make_shared<CantorTables>();
  CantorGeometry geo(spec, depth);
  for (unsigned long k = 0; k <= depth + 1; ++k) t->d.push_back(geo.d(k));
  Rational two_k = 1;
  for (unsigned long k = 0; k <= depth; ++k) {
    t->tail.push_back(spec.alpha.tail_sum(k));
    t->sup.push_back(spec.alpha.tail_sup(k));
    t->count.push_back(two_k);
    two_k *= 2;
  }
  return t;
}

// Memo for repeated queries against the same spec; observationally pure.
class TableCache {
 public:
  std::shared_ptr<const CantorTables> get(const CantorSpec& spec, unsigned long depth) {
    std::lock_guard lock(mu_);
    for (auto& e : entries_) {
      if (e.spec == spec && e.tables->depth() >= depth) return e.tables;
    }
    auto tables = build_tables(spec, std::max(depth, 24ul));
    entries_.insert(entries_.begin(), Entry{spec, tables});
    if (entries_.size() > 32) entries_.pop_back();
    return tables;
  }

 private:
  struct Entry {
    CantorSpec spec;
    std::shared_ptr<const CantorTables> tables;
  };
  std::mutex mu_;
  std::vector<Entry> entries_;
};

TableCache& table_cache() {
  static TableCache cache;
  return cache;
}

struct CantorWalk {
  const CantorTables& t;
  unsigned long depth;
  const Interval& window;
  Rational full_count = 0;
  Rational partial_upper = 0;
  Rational partial_lower = 0;
  Rational slack;  // d_depth * tail(depth) = upper bound on |I \ E| for a stage interval I

  void visit(unsigned long k, const Rational& lo) {
    Rational hi = lo + t.d[k];
    if (hi <= window.lo || lo >= window.hi) return;
    if (window.lo <= lo && hi <= window.hi) {
      full_count += t.count[depth - k];
      return;
    }
    if (k == depth) {
      Rational o = overlap(Interval(lo, hi), window);
      partial_upper += o;
      Rational lower = o - slack;
      if (lower > 0) partial_lower += lower;
      return;
    }
    visit(k + 1, lo);
    visit(k + 1, lo + t.d[k] - t.d[k + 1]);
  }
};

MeasureBounds cantor_bounds(const CantorSpec& spec, const Interval& window, unsigned long depth) {
  auto tables = table_cache().get(spec, depth);
  const Rational& dd = tables->d[depth];
  CantorWalk walk{*tables, depth, window, 0, 0, 0, dd * tables->tail[depth]};
  walk.visit(0, spec.base.lo);
  Rational beta_lower = 1 - tables->tail[depth];
  if (beta_lower < 0) beta_lower = 0;
  Rational full = walk.full_count * dd;
  return {full * beta_lower + walk.partial_lower, full + walk.partial_upper};
}

void cantor_collect(const CantorTables& t, unsigned long depth, const Interval& window,
                    unsigned long k, const Rational& lo, std::vector<Interval>& out) {
  Rational hi = lo + t.d[k];
  if (hi <= window.lo || lo >= window.hi) return;
  if (k == depth) {
    out.emplace_back(max(lo, window.lo), min(hi, window.hi));
    return;
  }
  cantor_collect(t, depth, window, k + 1, lo, out);
  cantor_collect(t, depth, window, k + 1, lo + t.d[k] - t.d[k + 1], out);
}

std::vector<ScaleCertificate> cantor_certificates(const CantorSpec& spec, const Rational& x, Side side,
                                                  unsigned long depth) {
  std::vector<ScaleCertificate> out;
  auto tables = table_cache().get(spec, depth);
  const auto& t = *tables;
  Rational lo = spec.base.lo;
  for (unsigned long k = 0; k <= depth; ++k) {
    Rational hi = lo + t.d[k];
    if (x < lo || x > hi) return out;
    bool left_end = (x == lo);
    bool right_end = (x == hi);
    if ((side == Side::Right && left_end) || (side == Side::Left && right_end)) {
      // x stays an endpoint on this side at every level m >= k. For r in
      // [d_{m+1}, d_m] the side window lies in I_m, so the deficiency is at
      // most (1 - beta_m) d_m / d_{m+1} <= tail(M) * 2 / (1 - sup(M)).
      for (unsigned long m = k; m <= depth; ++m) {
        Rational bound = 1 - t.tail[m] * 2 / (1 - t.sup[m]);
        if (bound < 0) bound = 0;
        out.push_back({t.d[m], bound});
      }
      return out;
    }
    if (k == depth) return out;
    Rational left_hi = lo + t.d[k + 1];
    Rational right_lo = lo + t.d[k] - t.d[k + 1];
    if (x <= left_hi) {
      // stay in the left child
    } else if (x >= right_lo) {
      lo = right_lo;
    } else {
      return out;
    }
  }
  return out;
}

}  // namespace

Interval OracleSpec::hull() const {
  return std::visit(
      [](const auto& n) -> Interval {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, FiniteOracle>) {
          return n.set.hull();
        } else if constexpr (std::is_same_v<T, CantorOracle>) {
          return n.spec.base;
        } else {
          bool first = true;
          Interval h(0, 0);
          for (const auto& m : n.members) {
            Interval mh = m.hull();
            if (mh.length() == 0 && m.is_finite()) continue;
            if (first) {
              h = mh;
              first = false;
            } else {
              h = Interval(min(h.lo, mh.lo), max(h.hi, mh.hi));
            }
          }
          return h;
        }
      },
      node);
}

MeasureBounds bounds(const OracleSpec& o, const Interval& window, unsigned long depth) {
  return std::visit(
      [&](const auto& n) -> MeasureBounds {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, FiniteOracle>) {
          Rational m = n.set.measure_in(window);
          return {m, m};
        } else if constexpr (std::is_same_v<T, CantorOracle>) {
          return cantor_bounds(n.spec, window, depth);
        } else {
          Rational lower = 0, upper = 0, best_single = 0;
          std::vector<Interval> hulls;
          for (const auto& m : n.members) {
            MeasureBounds b = bounds(m, window, depth);
            lower += b.lower;
            upper += b.upper;
            best_single = max(best_single, b.lower);
            hulls.push_back(m.hull());
          }
          // Bonferroni: |∪A_i| >= Σ|A_i| - Σ_{i<j} |A_i ∩ A_j|, with the
          // pairwise overlaps bounded through outer approximations.
          constexpr unsigned long kOverlapDepthCap = 14;
          unsigned long od = std::min(depth, kOverlapDepthCap);
          for (std::size_t i = 0; i < n.members.size(); ++i) {
            for (std::size_t j = i + 1; j < n.members.size(); ++j) {
              if (overlap(hulls[i], hulls[j]) == 0) continue;
              Interval wi(max(window.lo, max(hulls[i].lo, hulls[j].lo)),
                          max(max(window.lo, max(hulls[i].lo, hulls[j].lo)),
                              min(window.hi, min(hulls[i].hi, hulls[j].hi))));
              if (wi.length() == 0) continue;
              lower -= realize_in(n.members[i], wi, od).intersect(realize_in(n.members[j], wi, od)).measure();
            }
          }
          lower = max(lower, best_single);
          upper = min(upper, window.length());
          return {lower, upper};
        }
      },
      o.node);
}

Rational measure_upper(const OracleSpec& o, const Interval& window, unsigned long depth) {
  if (const auto* u = std::get_if<UnionOracle>(&o.node)) {
    Rational total = 0;
    for (const auto& m : u->members) total += measure_upper(m, window, depth);
    return min(total, window.length());
  }
  return bounds(o, window, depth).upper;
}

IntervalSet realize(const OracleSpec& o, unsigned long depth) {
  return std::visit(
      [&](const auto& n) -> IntervalSet {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, FiniteOracle>) {
          return n.set;
        } else if constexpr (std::is_same_v<T, CantorOracle>) {
          return stage(n.spec, depth);
        } else {
          IntervalSet out;
          for (const auto& m : n.members) out = out.unite(realize(m, depth));
          return out;
        }
      },
      o.node);
}

IntervalSet realize_in(const OracleSpec& o, const Interval& window, unsigned long depth) {
  return std::visit(
      [&](const auto& n) -> IntervalSet {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, FiniteOracle>) {
          return n.set.clip(window);
        } else if constexpr (std::is_same_v<T, CantorOracle>) {
          auto tables = table_cache().get(n.spec, depth);
          std::vector<Interval> parts;
          cantor_collect(*tables, depth, window, 0, n.spec.base.lo, parts);
          return IntervalSet::from_sorted(std::move(parts));
        } else {
          IntervalSet out;
          for (const auto& m : n.members) out = out.unite(realize_in(m, window, depth));
          return out;
        }
      },
      o.node);
}

std::vector<ScaleCertificate> small_scale_certificates(const OracleSpec& o, const Rational& x,
                                                       Side side, unsigned long depth) {
  return std::visit(
      [&](const auto& n) -> std::vector<ScaleCertificate> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, FiniteOracle>) {
          const auto& parts = n.set.parts();
          if (parts.empty()) return {ScaleCertificate{1, 0}};
          if (side == Side::Right) {
            auto it = std::upper_bound(parts.begin(), parts.end(), x,
                                       [](const Rational& v, const Interval& p) { return v < p.hi; });
            if (it == parts.end()) return {ScaleCertificate{1, 0}};
            if (it->lo <= x) return {ScaleCertificate{it->hi - x, 1}};
            return {ScaleCertificate{it->lo - x, 0}};
          }
          auto it = std::lower_bound(parts.begin(), parts.end(), x,
                                     [](const Interval& p, const Rational& v) { return p.lo < v; });
          if (it == parts.begin()) return {ScaleCertificate{1, 0}};
          --it;
          if (x <= it->hi) return {ScaleCertificate{x - it->lo, 1}};
          return {ScaleCertificate{x - it->hi, 0}};
        } else if constexpr (std::is_same_v<T, CantorOracle>) {
          return cantor_certificates(n.spec, x, side, depth);
        } else {
          std::vector<ScaleCertificate> out;
          for (const auto& m : n.members) {
            auto part = small_scale_certificates(m, x, side, depth);
            out.insert(out.end(), part.begin(), part.end());
          }
          return out;
        }
      },
      o.node);
}

Rational truncation_gap(const OracleSpec& o, unsigned long depth) {
  return bounds(o, o.hull(), depth).width();
}

}  // namespace lipset
