#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lipset/oracle.hpp"
#include "lipset/pl_function.hpp"

namespace lipset {

struct SuruBudget {
  std::size_t max_components = std::size_t{1} << 20;
  unsigned long depth = 16;
  /// Dyadic fractions (b - a) 2^-j, j = 1..audit_levels, are audited at
  /// both ends of every component, together with (b - a) i / 8.
  unsigned audit_levels = 12;
};

struct SuruComponent {
  Interval component;
  Rational epsilon_used;
  /// epsilon minus the largest audited endpoint deficiency.
  Rational density_margin;
};

struct SuruResult {
  IntervalSet h;
  std::vector<SuruComponent> trace;
  /// Certified upper bound on |H~ \ H|.
  Rational tolerance;
  bool partial = false;
  std::vector<std::string> notes;
};

/// Open refinement H ⊆ U of H~ whose component endpoints are (audited)
/// one-sided density points: deficiency < epsilon at every audited r.
/// U is given by its open components.
SuruResult suru(const std::vector<Interval>& u, const OracleSpec& h_tilde, const Rational& epsilon,
                const SuruBudget& budget);

struct BuildKnobs {
  unsigned long l_max = 1;
  unsigned long k_max = 2;
  unsigned long depth = 12;
  /// Refinement stops early once |a'_k - a'| drops below this fraction of
  /// the component length.
  Rational tolerance{1, 1000};
  std::size_t max_components = std::size_t{1} << 20;
};

enum class ComponentCase { Steep, Flat };

struct ComponentTrace {
  Interval component;
  ComponentCase kind = ComponentCase::Flat;
  Rational measure;   // |I' ∩ E|
  Rational f_left;    // f_n(a')
  Rational f_right;   // f_n(b')
  std::vector<Rational> a_seq;  // a'_0 > a'_1 > ... > a'_K
  std::vector<Rational> b_seq;  // b'_0 < b'_1 < ... < b'_K
  unsigned long l_prime = 1;
  /// Lengths of the untreated ends (a', a'_K) and (b'_K, b').
  Rational left_sliver;
  Rational right_sliver;
  bool truncated = false;
};

struct GapTrace {
  Interval gap;
  Rational f_a;
  Rational f_b;
  std::size_t k_star = 0;
  std::vector<ComponentTrace> components;
};

/// Stage n of the construction. The window splits into G (the treated
/// cores), Z (frozen ends of components left by the truncated
/// refinement, from all stages so far) and F = window \ (G ∪ Z).
struct BuilderState {
  unsigned long n = 0;
  Interval window;
  IntervalSet G;
  IntervalSet F;
  IntervalSet Z;
  std::vector<Rational> D;
  PLFunction f;
  PLFunction lower_env;
  PLFunction upper_env;
  std::vector<GapTrace> traces;
  /// Finite stand-in for E used by every stage.
  IntervalSet e_stand_in;
  bool partial = false;
  std::vector<std::string> notes;

  std::size_t component_count() const;
};

BuilderState init_stage0(const OracleSpec& e, const Interval& window, unsigned long depth);
/// Stage prev.n + 1, built on prev.e_stand_in.
BuilderState build_stage(const BuilderState& prev, const BuildKnobs& knobs);
/// Stages 0..n_max.
std::vector<BuilderState> build(const OracleSpec& e, const Interval& window, unsigned long n_max,
                                const BuildKnobs& knobs);

/// f(a_i), f(b_i) for consecutive components with the given |I_i ∩ E|:
/// returns {f(a_1), f(b_1), f(a_2), f(b_2), ...}.
std::vector<Rational> allocation(const Rational& f_a, const Rational& f_b, const std::vector<Rational>& measures);

/// a'_0, a'_1, ..., a'_K towards `end` (a' when end < start, b' when end >
/// start), with missing(t) = |(end, t) \ E| for the current point t.
std::vector<Rational> refinement_sequence(const Rational& end, const Rational& start, unsigned long n,
                                          unsigned long l_prime, unsigned long k_max, const Rational& tolerance,
                                          const IntervalSet& e);

/// f_n values along a refinement sequence starting from f(a'_0) = f(a').
std::vector<Rational> zigzag(const std::vector<Rational>& seq, const Rational& f_end, unsigned long n);

struct ConditionResult {
  std::string name;
  bool pass = true;
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::string detail;
};

struct VerifySamples {
  std::size_t points = 200;
  std::size_t pairs = 100;
  std::uint64_t seed = 1;
  /// Allowed |E \ G_n| for condition (A).
  Rational a_tolerance{1, 100};
};

struct VerifyReport {
  std::vector<ConditionResult> conditions;
  /// cauchy[n][m] = ||f_n - f_m|| for m <= n, stages indexed from 0.
  std::vector<std::vector<Rational>> cauchy;

  const ConditionResult& get(const std::string& name) const;
  bool all_pass() const;
};

VerifyReport verify_conditions(const std::vector<BuilderState>& states, const OracleSpec& e,
                               const VerifySamples& samples, unsigned long depth);

struct LimitResult {
  PLFunction f;
  Rational error_bound;
};

LimitResult limit_function(const std::vector<BuilderState>& states);

}  // namespace lipset
