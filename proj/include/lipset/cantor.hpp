#pragma once

#include <optional>
#include <vector>

#include "lipset/interval_set.hpp"

namespace lipset {

/// Two-sided certified bounds for an exactly defined but not exactly
/// computable quantity.
struct MeasureBounds {
  Rational lower;
  Rational upper;

  Rational width() const { return upper - lower; }
  bool contains(const Rational& v) const { return lower <= v && v <= upper; }
  friend bool operator==(const MeasureBounds&, const MeasureBounds&) = default;
};

/// Removal proportions alpha_1, alpha_2, ... given as an explicit prefix
/// followed by a geometric tail alpha_k = c * q^k (k beyond the prefix).
/// Without a tail every alpha beyond the prefix is zero.
class AlphaRule {
 public:
  struct Tail {
    Rational c;
    Rational q;
  };

  AlphaRule() = default;
  AlphaRule(std::vector<Rational> prefix, std::optional<Tail> tail);

  static AlphaRule geometric(Rational c, Rational q) { return AlphaRule({}, Tail{std::move(c), std::move(q)}); }
  /// "geom:c,q" or a comma separated prefix list, optionally followed by
  /// ";geom:c,q".
  static AlphaRule parse(std::string_view text);

  /// alpha_k for k >= 1.
  Rational alpha(unsigned long k) const;
  /// Exact sum of alpha_k over k > depth.
  Rational tail_sum(unsigned long depth) const;
  /// Supremum of alpha_k over k > depth.
  Rational tail_sup(unsigned long depth) const;

  const std::vector<Rational>& prefix() const { return prefix_; }
  const std::optional<Tail>& tail() const { return tail_; }

  friend bool operator==(const AlphaRule& a, const AlphaRule& b);

 private:
  std::vector<Rational> prefix_;
  std::optional<Tail> tail_;
};

/// E ~ (alpha_n) built by repeated removal of centered open middle intervals,
/// starting from `base`.
struct CantorSpec {
  AlphaRule alpha;
  Interval base{0, 1};
  /// When set, construction rejects alpha_n >= 1/3.
  bool require_below_third = false;

  friend bool operator==(const CantorSpec&, const CantorSpec&) = default;
};

/// Default cap on the number of intervals stage() may materialize.
inline constexpr std::size_t kDefaultStageBudget = std::size_t{1} << 22;

/// Per-level interval lengths d_0 = |base|, 2 d_n = (1 - alpha_n) d_{n-1}.
class CantorGeometry {
 public:
  CantorGeometry(const CantorSpec& spec, unsigned long depth);

  const CantorSpec& spec() const { return spec_; }
  unsigned long depth() const { return depth_; }
  const Rational& d(unsigned long k) const { return d_.at(k); }
  /// Offset between the left endpoints of the two children of a level-k
  /// interval, i.e. d_k - d_{k+1}.
  Rational child_shift(unsigned long k) const { return d_.at(k) - d_.at(k + 1); }
  /// Lower bound on beta_depth = prod_{k > depth} (1 - alpha_k).
  Rational beta_lower() const { return beta_lower_; }

 private:
  CantorSpec spec_;
  unsigned long depth_;
  std::vector<Rational> d_;
  Rational beta_lower_;
};

/// E_n: 2^n closed intervals of length d_n.
IntervalSet stage(const CantorSpec& spec, unsigned long n,
                  std::size_t budget = kDefaultStageBudget);

/// Quantities used by the SUDT certificate of the fat Cantor set.
struct CantorParams {
  unsigned long n = 0;
  Rational d_n;
  Rational stage_measure;
  MeasureBounds beta_n;
  MeasureBounds gamma_n;
  Rational delta_n;
  /// d_{n+1} > d_n / 3.
  bool next_length_above_third = false;
  /// alpha_{n+1} < 1/3, which keeps r_n inside [d_n/2, d_n] one level down.
  bool radius_range_valid = false;
};

/// beta_n upper = prod_{k=n+1}^{tail_depth} (1 - alpha_k), lower = upper * (1 - sum_{k > tail_depth} alpha_k);
/// gamma_n = 1 - 12 (1 - beta_n); delta_n = d_n / 2.
CantorParams params(const CantorSpec& spec, unsigned long n, unsigned long tail_depth);

}  // namespace lipset
