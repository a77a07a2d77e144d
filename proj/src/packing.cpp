#include "lipset/packing.hpp"

#include "parallel.hpp"

namespace lipset {

const char* to_string(GapPolicy p) {
  return p == GapPolicy::WidestFirst ? "widest-gap-first" : "leftmost-gap-first";
}

GapPolicy parse_gap_policy(std::string_view name) {
  if (name == "widest-gap-first" || name == "widest") return GapPolicy::WidestFirst;
  if (name == "leftmost-gap-first" || name == "leftmost") return GapPolicy::LeftmostFirst;
  throw ParseError("unknown gap policy '" + std::string(name) + "'");
}

CantorSpec PackedSpec::placed_spec(std::size_t i) const {
  CantorSpec s = specs.at(i);
  s.base = placements.at(i).placed;
  return s;
}

OracleSpec PackedSpec::prefix(std::size_t n) const {
  std::vector<OracleSpec> members;
  for (std::size_t i = 0; i < n; ++i) members.push_back(member(i));
  return OracleSpec::unite(std::move(members));
}

CantorSpec packing_rule(unsigned long n) {
  if (n == 0) throw std::invalid_argument("packing sets are indexed from 1");
  return CantorSpec{AlphaRule({1 - dyadic(n)}, AlphaRule::Tail{1, Rational(1, 4)}), Interval(0, 1)};
}

std::pair<PackedSpec, OracleSpec> pack(unsigned long count, GapPolicy policy, unsigned long depth) {
  if (count == 0) throw std::invalid_argument("pack needs at least one set");
  PackedSpec p;
  p.count = count;
  p.policy = policy;
  p.depth = depth;
  p.specs.push_back(packing_rule(1));
  p.placements.push_back({Interval(0, 1), Interval(0, 1), 1, 0});
  IntervalSet occupied = stage(p.placed_spec(0), depth);
  for (unsigned long m = 2; m <= count; ++m) {
    auto gaps = occupied.gaps();
    if (gaps.empty()) {
      throw ResourceError("no gap left for set " + std::to_string(m) + " at depth " + std::to_string(depth));
    }
    std::size_t pick = 0;
    if (policy == GapPolicy::WidestFirst) {
      for (std::size_t i = 1; i < gaps.size(); ++i) {
        if (gaps[i].length() > gaps[pick].length()) pick = i;
      }
    }
    const Interval& g = gaps[pick];
    Rational scale = g.length() / 3;
    Rational shift = g.lo + scale;
    Placement pl{g, Interval(shift, shift + scale), scale, shift};
    p.specs.push_back(packing_rule(m));
    p.placements.push_back(pl);
    occupied = occupied.unite(stage(p.placed_spec(m - 1), depth));
  }
  OracleSpec o = p.prefix(count);
  return {std::move(p), std::move(o)};
}

std::vector<GapRow> gap_report(const PackedSpec& p, unsigned long n, unsigned long depth) {
  if (n == 0 || n > p.count) throw std::invalid_argument("gap_report needs 1 <= n <= count");
  IntervalSet uni;
  for (std::size_t i = 0; i < n; ++i) uni = uni.unite(stage(p.placed_spec(i), depth));
  auto gaps = uni.gaps();
  OracleSpec all = p.prefix(p.count);
  std::vector<GapRow> rows(gaps.size());
  detail::parallel_for(gaps.size(), [&](std::size_t i) {
    rows[i] = {gaps[i], measure_upper(all, gaps[i], depth) / gaps[i].length()};
  });
  return rows;
}

}  // namespace lipset
