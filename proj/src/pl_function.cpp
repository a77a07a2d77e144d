#include "lipset/pl_function.hpp"

#include <algorithm>

namespace lipset {

PLFunction::PLFunction(std::vector<Point> pts) : pts_(std::move(pts)) {
  if (pts_.empty()) throw std::invalid_argument("PL function needs at least one breakpoint");
  for (std::size_t i = 1; i < pts_.size(); ++i) {
    if (!(pts_[i - 1].x < pts_[i].x)) {
      throw std::invalid_argument("PL breakpoints must be strictly increasing in x (at " +
                                  format_rational(pts_[i].x) + ")");
    }
  }
}

Rational PLFunction::eval(const Rational& x) const {
  if (x <= pts_.front().x) return pts_.front().y;
  if (x >= pts_.back().x) return pts_.back().y;
  auto it = std::upper_bound(pts_.begin(), pts_.end(), x,
                             [](const Rational& v, const Point& p) { return v < p.x; });
  const Point& b = *it;
  const Point& a = *(it - 1);
  if (x == a.x) return a.y;
  return a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x);
}

Rational PLFunction::slope_left(const Rational& x) const {
  if (x <= pts_.front().x || x > pts_.back().x) return 0;
  auto it = std::lower_bound(pts_.begin(), pts_.end(), x,
                             [](const Point& p, const Rational& v) { return p.x < v; });
  const Point& b = *it;
  const Point& a = *(it - 1);
  return (b.y - a.y) / (b.x - a.x);
}

Rational PLFunction::slope_right(const Rational& x) const {
  if (x < pts_.front().x || x >= pts_.back().x) return 0;
  auto it = std::upper_bound(pts_.begin(), pts_.end(), x,
                             [](const Rational& v, const Point& p) { return v < p.x; });
  const Point& b = *it;
  const Point& a = *(it - 1);
  return (b.y - a.y) / (b.x - a.x);
}

Rational PLFunction::max_abs_slope() const {
  Rational best = 0;
  for (std::size_t i = 1; i < pts_.size(); ++i) {
    Rational s = abs(Rational((pts_[i].y - pts_[i - 1].y) / (pts_[i].x - pts_[i - 1].x)));
    if (s > best) best = s;
  }
  return best;
}

std::vector<Rational> PLFunction::breaks_in(const Rational& lo, const Rational& hi) const {
  std::vector<Rational> out;
  auto it = std::lower_bound(pts_.begin(), pts_.end(), lo,
                             [](const Point& p, const Rational& v) { return p.x < v; });
  for (; it != pts_.end() && it->x <= hi; ++it) out.push_back(it->x);
  return out;
}

PLFunction simplify(const PLFunction& f) {
  const auto& p = f.points();
  if (p.size() <= 2) return f;
  std::vector<PLFunction::Point> out{p.front()};
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    const auto& a = out.back();
    const auto& b = p[i];
    const auto& c = p[i + 1];
    if ((b.y - a.y) * (c.x - b.x) != (c.y - b.y) * (b.x - a.x)) out.push_back(b);
  }
  out.push_back(p.back());
  return PLFunction(std::move(out));
}

namespace {

std::vector<Rational> merged_breaks(const PLFunction& f, const PLFunction& g) {
  std::vector<Rational> xs;
  xs.reserve(f.size() + g.size());
  for (const auto& p : f.points()) xs.push_back(p.x);
  for (const auto& p : g.points()) xs.push_back(p.x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

template <class Pick>
PLFunction pointwise(const PLFunction& f, const PLFunction& g, Pick pick) {
  auto xs = merged_breaks(f, g);
  std::vector<PLFunction::Point> out;
  out.reserve(2 * xs.size());
  Rational prev_d;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Rational fy = f.eval(xs[i]);
    Rational gy = g.eval(xs[i]);
    Rational d = fy - gy;
    if (i > 0 && sgn(d) * sgn(prev_d) < 0) {
      // Both affine on [xs[i-1], xs[i]]; the difference crosses zero inside.
      Rational t = prev_d / (prev_d - d);
      Rational x = xs[i - 1] + t * (xs[i] - xs[i - 1]);
      out.push_back({x, f.eval(x)});
    }
    out.push_back({xs[i], pick(fy, gy)});
    prev_d = std::move(d);
  }
  return simplify(PLFunction(std::move(out)));
}

}  // namespace

PLFunction pointwise_max(const PLFunction& f, const PLFunction& g) {
  return pointwise(f, g, [](const Rational& a, const Rational& b) { return max(a, b); });
}

PLFunction pointwise_min(const PLFunction& f, const PLFunction& g) {
  return pointwise(f, g, [](const Rational& a, const Rational& b) { return min(a, b); });
}

PLFunction affine(const PLFunction& f, const Rational& a, const Rational& b) {
  std::vector<PLFunction::Point> out;
  out.reserve(f.size());
  for (const auto& p : f.points()) out.push_back({p.x, a * p.y + b});
  return PLFunction(std::move(out));
}

PLFunction add(const PLFunction& f, const PLFunction& g) {
  auto xs = merged_breaks(f, g);
  std::vector<PLFunction::Point> out;
  out.reserve(xs.size());
  for (auto& x : xs) {
    Rational y = f.eval(x) + g.eval(x);
    out.push_back({std::move(x), std::move(y)});
  }
  return PLFunction(std::move(out));
}

Rational mf_argmax(const PLFunction& f, const Rational& x, const Rational& r) {
  if (r <= 0) throw std::invalid_argument("mf needs r > 0");
  Rational fx = f.eval(x);
  Rational lo = x - r, hi = x + r;
  Rational best_y = lo;
  Rational best = abs(Rational(f.eval(lo) - fx));
  auto consider = [&](const Rational& y) {
    Rational v = abs(Rational(f.eval(y) - fx));
    if (v > best) {
      best = std::move(v);
      best_y = y;
    }
  };
  for (const auto& b : f.breaks_in(lo, hi)) consider(b);
  consider(hi);
  return best_y;
}

Rational mf(const PLFunction& f, const Rational& x, const Rational& r) {
  Rational y = mf_argmax(f, x, r);
  return abs(Rational(f.eval(y) - f.eval(x))) / r;
}

Rational lip_pl(const PLFunction& f, const Rational& x) {
  return max(abs(f.slope_left(x)), abs(f.slope_right(x)));
}

Rational lip_radius(const PLFunction& f, const Rational& x) {
  const auto& p = f.points();
  Rational best = -1;
  for (const auto& q : p) {
    if (q.x == x) continue;
    Rational d = abs(Rational(q.x - x));
    if (best < 0 || d < best) best = std::move(d);
  }
  return best < 0 ? Rational(0) : best;
}

std::vector<std::pair<Rational, Rational>> lip_profile(const PLFunction& f, const Rational& x,
                                                       const std::vector<Rational>& r_list) {
  std::vector<std::pair<Rational, Rational>> out;
  out.reserve(r_list.size());
  for (std::size_t i = 0; i < r_list.size(); ++i) {
    if (r_list[i] <= 0) throw std::invalid_argument("profile scales must be positive");
    if (i > 0 && !(r_list[i] < r_list[i - 1])) {
      throw std::invalid_argument("profile scales must be strictly decreasing");
    }
    out.emplace_back(r_list[i], mf(f, x, r_list[i]));
  }
  return out;
}

GrowthReport growth_check(const PLFunction& f, const OracleSpec& e,
                          const std::vector<std::pair<Rational, Rational>>& pairs, unsigned long depth) {
  GrowthReport rep;
  for (const auto& [x, y] : pairs) {
    if (!(x < y)) throw std::invalid_argument("growth_check pairs need x < y");
    GrowthRow row{x, y, abs(Rational(f.eval(x) - f.eval(y))), bounds(e, Interval(x, y), depth)};
    row.ok = row.rise <= row.measure.upper;
    if (!row.ok) ++rep.violations;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

Rational sup_norm_diff(const PLFunction& f, const PLFunction& g) {
  Rational best = 0;
  for (const auto& x : merged_breaks(f, g)) {
    Rational d = abs(Rational(f.eval(x) - g.eval(x)));
    if (d > best) best = std::move(d);
  }
  return best;
}

}  // namespace lipset
