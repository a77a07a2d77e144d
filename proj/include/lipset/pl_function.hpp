#pragma once

#include <utility>
#include <vector>

#include "lipset/oracle.hpp"

namespace lipset {

/// Piecewise-linear function through sorted breakpoints, constant beyond
/// the first and last breakpoint.
class PLFunction {
 public:
  struct Point {
    Rational x;
    Rational y;
    friend bool operator==(const Point&, const Point&) = default;
  };

  PLFunction() : pts_{{0, 0}} {}
  explicit PLFunction(std::vector<Point> pts);
  static PLFunction constant(Rational c) { return PLFunction({{0, std::move(c)}}); }

  const std::vector<Point>& points() const { return pts_; }
  std::size_t size() const { return pts_.size(); }

  Rational eval(const Rational& x) const;
  /// Slope of the segment ending at x, or of the extension (0).
  Rational slope_left(const Rational& x) const;
  /// Slope of the segment starting at x.
  Rational slope_right(const Rational& x) const;
  Rational max_abs_slope() const;
  /// Breakpoint x values in [lo, hi].
  std::vector<Rational> breaks_in(const Rational& lo, const Rational& hi) const;

  friend bool operator==(const PLFunction&, const PLFunction&) = default;

 private:
  std::vector<Point> pts_;
};

/// Drops interior breakpoints where the function does not bend.
PLFunction simplify(const PLFunction& f);
PLFunction pointwise_max(const PLFunction& f, const PLFunction& g);
PLFunction pointwise_min(const PLFunction& f, const PLFunction& g);
/// a * f + b.
PLFunction affine(const PLFunction& f, const Rational& a, const Rational& b);
PLFunction add(const PLFunction& f, const PLFunction& g);

/// M_f(x, r) = sup{|f(x) - f(y)| : |x - y| <= r} / r.
Rational mf(const PLFunction& f, const Rational& x, const Rational& r);
/// The y attaining the sup in mf (leftmost on ties).
Rational mf_argmax(const PLFunction& f, const Rational& x, const Rational& r);

/// Lip f(x) = lip f(x) = max of the adjacent slope magnitudes.
Rational lip_pl(const PLFunction& f, const Rational& x);

/// Distance from x to the nearest breakpoint other than x itself; below
/// it M_f(x, r) = lip_pl(f, x). Returns 0 for a single-breakpoint function
/// (any r works).
Rational lip_radius(const PLFunction& f, const Rational& x);

std::vector<std::pair<Rational, Rational>> lip_profile(const PLFunction& f, const Rational& x,
                                                       const std::vector<Rational>& r_list);

struct GrowthRow {
  Rational x;
  Rational y;
  Rational rise;         // |f(x) - f(y)|
  MeasureBounds measure; // bounds on |[x, y] ∩ E|
  bool ok = true;        // rise <= measure.upper
};

struct GrowthReport {
  std::vector<GrowthRow> rows;
  std::size_t violations = 0;
};

GrowthReport growth_check(const PLFunction& f, const OracleSpec& e,
                          const std::vector<std::pair<Rational, Rational>>& pairs, unsigned long depth);

Rational sup_norm_diff(const PLFunction& f, const PLFunction& g);

}  // namespace lipset
