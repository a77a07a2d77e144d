#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lipset/oracle.hpp"

namespace lipset {

/// Image of [0, 1] under x -> shift + scale * x, centered in a host gap.
struct Placement {
  Interval gap;
  Interval placed;
  Rational scale;
  Rational shift;
  friend bool operator==(const Placement&, const Placement&) = default;
};

enum class GapPolicy { WidestFirst, LeftmostFirst };

const char* to_string(GapPolicy p);
GapPolicy parse_gap_policy(std::string_view name);

struct PackedSpec {
  unsigned long count = 0;
  /// Rule of E_n^* on [0, 1], for n = 1..count.
  std::vector<CantorSpec> specs;
  /// placements[0] is the identity on [0, 1].
  std::vector<Placement> placements;
  GapPolicy policy = GapPolicy::WidestFirst;
  unsigned long depth = 0;

  CantorSpec placed_spec(std::size_t i) const;
  OracleSpec member(std::size_t i) const { return OracleSpec::cantor(placed_spec(i)); }
  /// Union of the first n placed sets.
  OracleSpec prefix(std::size_t n) const;

  friend bool operator==(const PackedSpec&, const PackedSpec&) = default;
};

/// E_n^* ~ (1 - 2^-n, 4^-2, 4^-3, ...): measure in [11/12, 1] * 2^-n.
CantorSpec packing_rule(unsigned long n);

/// Hosts E_m (m >= 2) in a gap of the depth-truncated union of E_1..E_{m-1},
/// occupying the middle third of the gap.
std::pair<PackedSpec, OracleSpec> pack(unsigned long count, GapPolicy policy, unsigned long depth);

struct GapRow {
  Interval gap;
  Rational ratio_upper;
};

/// Upper bounds on |E ∩ (a, b)| / (b - a) over the gaps (a, b) of the
/// depth-truncated union of E_1..E_n, E being the full packing.
std::vector<GapRow> gap_report(const PackedSpec& p, unsigned long n, unsigned long depth);

}  // namespace lipset
