#pragma once

#include <optional>
#include <vector>

#include "lipset/oracle.hpp"
#include "lipset/pl_function.hpp"

namespace lipset {

enum class Verdict { Member, Nonmember, Unknown };

const char* to_string(Verdict v);
const char* to_string(Side s);

/// Bounds on |(x - r, x) ∩ E| / r or |(x, x + r) ∩ E| / r.
MeasureBounds side_density(const OracleSpec& e, const Rational& x, const Rational& r, Side side,
                           unsigned long depth);

/// Membership of x in E^{gamma,delta}. The reported witness is the smallest
/// r in (0, delta] attaining the infimum of the max one-sided ratio (the
/// infimum is always attained: the ratio is constant near 0).
struct EgdVerdict {
  Verdict status = Verdict::Unknown;
  std::optional<Rational> witness_r;
  std::optional<Rational> witness_value;
  /// For nonmembers: every x' with |x' - x| < radius is a nonmember too.
  std::optional<Rational> stable_radius;
};

EgdVerdict egd_member(const IntervalSet& e, const Rational& x, const Rational& gamma, const Rational& delta);

/// Three-valued membership for oracle-backed E at a truncation depth.
EgdVerdict egd_member(const OracleSpec& e, const Rational& x, const Rational& gamma, const Rational& delta,
                      unsigned long depth);

struct RatioMin {
  Rational value;
  Rational r;
};

/// min over r in [lo, hi] of max(a(r), b(r)) / r for PL functions a, b of r.
/// With lo = 0 both functions must vanish at 0 and the range is (0, hi].
RatioMin inf_max_ratio(const PLFunction& a, const PLFunction& b, const Rational& lo, const Rational& hi);

/// r -> |side(x, r) ∩ E| on [0, r_max], exact for a finite set.
PLFunction side_measure(const IntervalSet& e, const Rational& x, Side side, const Rational& r_max);

/// PL lower / upper bounds on r -> |side(x, r) ∩ E| over [0, r_max].
PLFunction side_measure_lower(const OracleSpec& e, const Rational& x, Side side, const Rational& r_max,
                              unsigned long depth);
PLFunction side_measure_upper(const OracleSpec& e, const Rational& x, Side side, const Rational& r_max,
                              unsigned long depth);

struct EgdRegion {
  IntervalSet inner;
  IntervalSet outer;
  std::size_t cells_tested = 0;
};

/// inner ⊆ E^{gamma,delta} ∩ window ⊆ outer, |outer \ inner| <= resolution * |window|.
EgdRegion egd_region(const IntervalSet& e, const Rational& gamma, const Rational& delta, const Interval& window,
                     const Rational& resolution);

/// gammas[i], deltas[i] belong to index n = first + i.
struct CertificateSeq {
  std::vector<Rational> gammas;
  std::vector<Rational> deltas;
  unsigned long first = 1;

  /// Throws unless gammas strictly increase, deltas strictly decrease and
  /// the lengths match.
  void validate() const;
  unsigned long last() const { return first + gammas.size() - 1; }
};

struct PointCertificate {
  Rational x;
  std::vector<EgdVerdict> membership;  // per n, aligned with the sequence
  std::vector<Verdict> udt;            // per entry of k_range
  std::vector<Verdict> sudt;
};

struct CertificateReport {
  std::vector<unsigned long> k_range;
  unsigned long first_n = 1;
  std::vector<PointCertificate> points;

  std::size_t count(Verdict v) const;  // over all membership verdicts
  /// Points and k where SUDT passed but UDT did not.
  std::size_t sudt_without_udt() const;
};

CertificateReport certificate_check(const std::vector<Rational>& points, const OracleSpec& e,
                                    const CertificateSeq& c, const std::vector<unsigned long>& k_range,
                                    unsigned long depth);

class NotFoundError : public Error {
 public:
  using Error::Error;
};

/// I ⊆ J with certified |I ∩ E| < alpha |I|, by breadth-first bisection.
/// Throws NotFoundError after max_level halvings.
Interval wnd_witness(const OracleSpec& e, const Interval& j, const Rational& alpha, unsigned long depth,
                     unsigned max_level = 16);

struct OnesidedHit {
  Rational x;
  Rational h_left;
  Rational h_right;
  MeasureBounds left;
  MeasureBounds right;
};

std::vector<OnesidedHit> onesided_failure_scan(const OracleSpec& e, const std::vector<Rational>& candidates,
                                               const std::vector<Rational>& scales, const Rational& threshold,
                                               unsigned long depth);

/// Endpoints of stage-`level` intervals whose addresses (L/R choices from
/// the root) switch side at most `max_switches` times.
std::vector<Rational> alternating_candidates(const CantorSpec& spec, unsigned long level, unsigned max_switches = 2);

/// 2^-1, 2^-2, ..., 2^-k.
std::vector<Rational> dyadic_scales(unsigned long k);

}  // namespace lipset
