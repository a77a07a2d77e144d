#pragma once

#include <span>
#include <vector>

#include "lipset/rational.hpp"

namespace lipset {

/// Closed interval [lo, hi] with rational endpoints. Lebesgue measure does
/// not see endpoints, so the same value also stands for (lo, hi).
struct Interval {
  Rational lo;
  Rational hi;

  Interval() = default;
  Interval(Rational lo_, Rational hi_);

  Rational length() const { return hi - lo; }
  Rational midpoint() const { return (lo + hi) / 2; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  bool contains(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Length of the overlap of two intervals (zero when disjoint).
Rational overlap(const Interval& a, const Interval& b);

/// Normalized finite union of disjoint closed intervals of positive length,
/// sorted by left endpoint with strict gaps between consecutive parts.
class IntervalSet {
 public:
  IntervalSet() = default;

  /// Canonical merged and sorted form of a raw list. Touching or overlapping
  /// intervals merge; degenerate intervals are dropped.
  static IntervalSet normalize(std::span<const Interval> raw);
  static IntervalSet normalize(std::initializer_list<Interval> raw);
  static IntervalSet single(const Interval& iv);
  /// Linear-time construction from intervals already sorted by left
  /// endpoint; touching neighbours are merged. Throws if unsorted.
  static IntervalSet from_sorted(std::vector<Interval> sorted);

  const std::vector<Interval>& parts() const { return parts_; }
  std::size_t size() const { return parts_.size(); }
  bool empty() const { return parts_.empty(); }

  Rational measure() const;
  /// |S ∩ window|.
  Rational measure_in(const Interval& window) const;
  /// Membership in the closed representation.
  bool contains(const Rational& x) const;
  /// Index of the part containing x, or -1.
  std::ptrdiff_t part_index(const Rational& x) const;
  bool contains(const IntervalSet& other) const;

  /// Sorted list of all endpoints.
  std::vector<Rational> endpoints() const;
  /// Bounded complementary intervals between consecutive parts.
  std::vector<Interval> gaps() const;
  /// window \ S as an interval set.
  IntervalSet complement_in(const Interval& window) const;
  Interval hull() const;

  IntervalSet unite(const IntervalSet& other) const;
  IntervalSet intersect(const IntervalSet& other) const;
  IntervalSet subtract(const IntervalSet& other) const;
  IntervalSet clip(const Interval& window) const;
  /// Splits parts at the given points (only points strictly inside a part
  /// matter). The result is no longer normalized, hence a plain list.
  std::vector<Interval> split_at(std::span<const Rational> points) const;

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  explicit IntervalSet(std::vector<Interval> parts) : parts_(std::move(parts)) {}
  std::vector<Interval> parts_;
};

enum class SetOp { Union, Intersection, Difference };

IntervalSet combine(SetOp op, const IntervalSet& s, const IntervalSet& t);

/// |S △ T|.
Rational symdiff_measure(const IntervalSet& s, const IntervalSet& t);

}  // namespace lipset
