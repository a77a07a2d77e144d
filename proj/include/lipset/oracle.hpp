#pragma once

#include <memory>
#include <variant>
#include <vector>

#include "lipset/cantor.hpp"

namespace lipset {

enum class Side { Left, Right };

struct OracleSpec;

struct FiniteOracle {
  IntervalSet set;
  friend bool operator==(const FiniteOracle&, const FiniteOracle&) = default;
};

/// Fat Cantor set whose construction starts from spec.base (the placement).
struct CantorOracle {
  CantorSpec spec;
  friend bool operator==(const CantorOracle&, const CantorOracle&) = default;
};

struct UnionOracle {
  std::vector<OracleSpec> members;
  friend bool operator==(const UnionOracle&, const UnionOracle&);
};

/// Description of a set, possibly defined by an infinite construction.
/// Queries take the truncation depth as a parameter, so a spec is an
/// immutable value.
struct OracleSpec {
  std::variant<FiniteOracle, CantorOracle, UnionOracle> node;

  static OracleSpec finite(IntervalSet s) { return {FiniteOracle{std::move(s)}}; }
  static OracleSpec cantor(CantorSpec spec) { return {CantorOracle{std::move(spec)}}; }
  static OracleSpec cantor(AlphaRule alpha, Interval placement) {
    return {CantorOracle{CantorSpec{std::move(alpha), std::move(placement)}}};
  }
  static OracleSpec unite(std::vector<OracleSpec> members) { return {UnionOracle{std::move(members)}}; }

  bool is_finite() const { return std::holds_alternative<FiniteOracle>(node); }
  /// Some interval known to contain the set.
  Interval hull() const;

  friend bool operator==(const OracleSpec&, const OracleSpec&) = default;
};

inline bool operator==(const UnionOracle& a, const UnionOracle& b) { return a.members == b.members; }

/// Certified bounds on |E ∩ window| at truncation `depth`.
MeasureBounds bounds(const OracleSpec& o, const Interval& window, unsigned long depth);

/// bounds(o, window, depth).upper without the work needed for the lower
/// bound of a union.
Rational measure_upper(const OracleSpec& o, const Interval& window, unsigned long depth);

/// Outer approximation of E at `depth`; nested in depth.
IntervalSet realize(const OracleSpec& o, unsigned long depth);

/// realize(o, depth) ∩ window, computed without materializing the parts of
/// the approximation that miss the window.
IntervalSet realize_in(const OracleSpec& o, const Interval& window, unsigned long depth);

/// For every r in (0, r_floor]: |side(x, r) ∩ E| / r >= ratio_lower, where
/// side(x, r) is (x - r, x) or (x, x + r).
struct ScaleCertificate {
  Rational r_floor;
  Rational ratio_lower;
};

/// Structural small-scale density certificates. Finite sets give an exact
/// one; a Cantor set gives one per level when x is an endpoint of its
/// construction intervals (such points stay in E at every depth).
std::vector<ScaleCertificate> small_scale_certificates(const OracleSpec& o, const Rational& x,
                                                       Side side, unsigned long depth);

/// Upper bound on Σ_{k > depth} alpha_k style truncation error of bounds()
/// over the whole set, i.e. upper - lower for window = hull.
Rational truncation_gap(const OracleSpec& o, unsigned long depth);

}  // namespace lipset
