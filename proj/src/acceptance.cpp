#include "lipset/acceptance.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <sstream>

#include "lipset/builder.hpp"
#include "lipset/density.hpp"
#include "lipset/json_io.hpp"
#include "lipset/packing.hpp"

namespace lipset::acceptance {

namespace {

// Pinned limits and tolerances.
constexpr double kLimit1 = 5, kLimit2 = 60, kLimit3 = 1, kLimit4 = 60, kLimit5 = 60, kLimit7 = 5, kLimit8 = 120,
                 kLimit9 = 30, kLimit10 = 30, kLimit11 = 120;
constexpr unsigned long kStageMax = 20;
constexpr unsigned long kCertDepth = 20;
constexpr unsigned long kCertLevel = 8;
constexpr unsigned long kCertFirst = 4, kCertLast = 7;
constexpr unsigned long kPackCount = 4, kPackDepth = 12;
constexpr std::size_t kEgdInstances = 500;
constexpr unsigned kEgdGridBits = 16;
constexpr std::size_t kIntervalPoints = 100;
constexpr unsigned long kIntervalSeqLength = 20;
constexpr unsigned long kBuildStages = 4;
constexpr unsigned long kBuildDepth = 12;
constexpr std::size_t kBuildSamples = 200;
constexpr std::size_t kGrowthPairs = 100;
constexpr std::size_t kMfInstances = 1000, kLipInstances = 200;
constexpr unsigned kMfGridSteps = 256;
constexpr unsigned long kScanLevel = 12, kScanScales = 48;
const Rational kPackRatio(1, 2);
const Rational kScanThreshold(99, 100);

CantorSpec quarter_spec() { return CantorSpec{AlphaRule::geometric(1, Rational(1, 4)), Interval(0, 1)}; }

struct Shared {
  std::uint64_t seed;
  std::optional<CertificateReport> cert_report;
  std::optional<CertificateReport> interval_report;
  std::optional<std::vector<BuilderState>> unit_build;
  std::optional<std::vector<BuilderState>> cantor_build;
  std::optional<OracleSpec> cantor_stage;
};

Rational random_dyadic(std::mt19937_64& rng, const Rational& lo, const Rational& hi, unsigned bits) {
  unsigned long u = rng() >> (64 - bits);
  return lo + (hi - lo) * Rational(u) * dyadic(bits);
}

CriterionResult named(int id, std::string name) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  return r;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// 1
CriterionResult exact_measures(Shared&) {
  CriterionResult r = named(1, "exact Cantor stage measures, n = 1..20");
  const CantorSpec spec = quarter_spec();
  Rational expected = 1;
  std::size_t bad = 0;
  for (unsigned long n = 1; n <= kStageMax; ++n) {
    expected *= 1 - dyadic(2 * n);
    if (stage(spec, n).measure() != expected) ++bad;
  }
  bool third = stage(spec, 3).measure() == Rational(2835, 4096);
  r.pass = bad == 0 && third;
  r.detail = "mismatches=" + std::to_string(bad) + " stage3=" + format_rational(stage(spec, 3).measure());
  return r;
}

CertificateReport cantor_certificates() {
  const CantorSpec spec = quarter_spec();
  std::vector<Rational> points;
  const IntervalSet level = stage(spec, kCertLevel);
  for (const auto& p : level.parts()) points.push_back(p.lo);
  CertificateSeq seq;
  seq.first = kCertFirst;
  for (unsigned long n = kCertFirst; n <= kCertLast; ++n) {
    CantorParams p = params(spec, n, kCertDepth);
    seq.gammas.push_back(p.gamma_n.upper);
    seq.deltas.push_back(p.delta_n);
  }
  std::vector<unsigned long> ks;
  for (unsigned long k = kCertFirst; k <= kCertLast; ++k) ks.push_back(k);
  return certificate_check(points, OracleSpec::cantor(spec), seq, ks, kCertDepth);
}

// 2
CriterionResult cantor_battery(Shared& sh) {
  CriterionResult r = named(2, "certified membership of stage-8 left endpoints, n = 4..7, depth 20");
  sh.cert_report = cantor_certificates();
  const auto& rep = *sh.cert_report;
  std::size_t total = rep.points.size() * (kCertLast - kCertFirst + 1);
  std::size_t members = rep.count(Verdict::Member);
  r.pass = rep.points.size() == (std::size_t{1} << kCertLevel) && members == total;
  r.detail = "member=" + std::to_string(members) + "/" + std::to_string(total) +
             " nonmember=" + std::to_string(rep.count(Verdict::Nonmember)) +
             " unknown=" + std::to_string(rep.count(Verdict::Unknown));
  return r;
}

// 3
CriterionResult third_ratio(Shared&) {
  CriterionResult r = named(3, "d_{n+1} > d_n/3 for n = 0..19");
  CantorGeometry geo(quarter_spec(), kStageMax);
  std::size_t bad = 0;
  for (unsigned long n = 0; n < kStageMax; ++n) {
    if (!(3 * geo.d(n + 1) > geo.d(n))) ++bad;
  }
  r.pass = bad == 0;
  r.detail = "violations=" + std::to_string(bad);
  return r;
}

// 4
CriterionResult packing_gaps(Shared&) {
  CriterionResult r = named(4, "N=4 packing gap ratios < 1/2 at depth 12");
  auto [packed, oracle] = pack(kPackCount, GapPolicy::WidestFirst, kPackDepth);
  std::size_t gaps = 0, bad = 0;
  Rational worst = 0;
  for (unsigned long n = 1; n <= kPackCount; ++n) {
    for (const auto& row : gap_report(packed, n, kPackDepth)) {
      ++gaps;
      worst = max(worst, row.ratio_upper);
      if (!(row.ratio_upper < kPackRatio)) ++bad;
    }
  }
  r.pass = gaps > 0 && bad == 0;
  r.detail = "gaps=" + std::to_string(gaps) + " exceptions=" + std::to_string(bad) + " worst~" + format_decimal(worst, 6);
  return r;
}

// 5
CriterionResult egd_exactness(Shared& sh) {
  CriterionResult r = named(5, "egd_member vs 2^-16 grid on 500 finite instances, closedness");
  std::mt19937_64 rng(sh.seed ^ 0x5eed0005u);
  const long unit = 1L << kEgdGridBits;
  std::size_t contradictions = 0, members = 0, nonmembers = 0, closed_checked = 0, closed_bad = 0;
  for (std::size_t inst = 0; inst < kEgdInstances; ++inst) {
    // E: up to six parts with endpoints on the 2^-8 lattice of [0, 1].
    std::vector<long> ends;
    std::size_t parts = 1 + rng() % 6;
    for (std::size_t i = 0; i < 2 * parts; ++i) ends.push_back(static_cast<long>(rng() % 257) * 256);
    std::sort(ends.begin(), ends.end());
    std::vector<Interval> raw;
    std::vector<std::pair<long, long>> iparts;
    for (std::size_t i = 0; i + 1 < ends.size(); i += 2) {
      if (ends[i] < ends[i + 1]) {
        raw.emplace_back(ratio(ends[i], unit), ratio(ends[i + 1], unit));
        iparts.emplace_back(ends[i], ends[i + 1]);
      }
    }
    IntervalSet e = IntervalSet::normalize(raw);
    long xi = static_cast<long>(rng() % 1025) * 64;
    long gi = 1 + static_cast<long>(rng() % 255);
    long di = 1 + static_cast<long>(rng() % 64);
    Rational x = ratio(xi, unit), gamma = ratio(gi, 256), delta = ratio(di * 256, unit);
    EgdVerdict v = egd_member(e, x, gamma, delta);

    auto meas = [&](long lo, long hi) {
      long m = 0;
      for (auto [a, b] : iparts) m += std::max(0L, std::min(b, hi) - std::max(a, lo));
      return m;
    };
    // Grid minimum of max(left, right) / r as a fraction best_num / best_den.
    long best_num = 1, best_den = 0;
    for (long i = 1; i <= di * 256; ++i) {
      long m = std::max(meas(xi - i, xi), meas(xi, xi + i));
      if (best_den == 0 || m * best_den < best_num * i) {
        best_num = m;
        best_den = i;
      }
    }
    bool grid_member = best_num * 256 >= gi * best_den;
    Rational grid_min = ratio(best_num, best_den);
    bool ok = true;
    if (v.status == Verdict::Member) {
      ++members;
      ok = grid_member && v.witness_value && *v.witness_value <= grid_min;
    } else if (v.status == Verdict::Nonmember) {
      ++nonmembers;
      ok = v.witness_r && v.witness_value && *v.witness_r > 0 && *v.witness_r <= delta && *v.witness_value < gamma &&
           *v.witness_value <= grid_min;
      if (ok) {
        const Rational& w = *v.witness_r;
        Rational at = max(e.measure_in(Interval(x - w, x)), e.measure_in(Interval(x, x + w))) / w;
        ok = at == *v.witness_value;
      }
      if (ok && v.stable_radius && *v.stable_radius > 0) {
        const Rational& rho = *v.stable_radius;
        for (const Rational& xp : {Rational(x + rho / 2), Rational(x - rho / 2), Rational(x + rho / 3)}) {
          ++closed_checked;
          if (egd_member(e, xp, gamma, delta).status != Verdict::Nonmember) ++closed_bad;
        }
      } else if (ok) {
        ok = false;
      }
    } else {
      ok = false;
    }
    if (!grid_member && v.status != Verdict::Nonmember) ok = false;
    if (!ok) ++contradictions;
  }
  r.pass = contradictions == 0 && closed_bad == 0 && members > 0 && nonmembers > 0;
  r.detail = "member=" + std::to_string(members) + " nonmember=" + std::to_string(nonmembers) +
             " contradictions=" + std::to_string(contradictions) + " closedness=" +
             std::to_string(closed_checked - closed_bad) + "/" + std::to_string(closed_checked);
  return r;
}

CertificateReport interval_certificates(std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x5eed0007u);
  std::vector<Rational> points;
  for (std::size_t i = 0; i < kIntervalPoints; ++i) {
    points.push_back(Rational(static_cast<unsigned long>(rng() >> 32) + 1, (1UL << 32) + 1));
  }
  CertificateSeq seq;
  seq.first = 1;
  for (unsigned long n = 1; n <= kIntervalSeqLength; ++n) {
    seq.gammas.push_back(1 - dyadic(n));
    seq.deltas.push_back(dyadic(n));
  }
  return certificate_check(points, OracleSpec::finite(IntervalSet::single(Interval(0, 1))), seq, {1}, 0);
}

// 7
CriterionResult interval_sudt(Shared& sh) {
  CriterionResult r = named(7, "E = [0,1]: 100 interior points pass SUDT from k = 1");
  sh.interval_report = interval_certificates(sh.seed);
  std::size_t pass = 0;
  for (const auto& p : sh.interval_report->points) {
    if (p.sudt.at(0) == Verdict::Member) ++pass;
  }
  r.pass = pass == kIntervalPoints;
  r.detail = "sudt_pass=" + std::to_string(pass) + "/" + std::to_string(kIntervalPoints);
  return r;
}

// 6
CriterionResult sudt_implies_udt(Shared& sh) {
  CriterionResult r = named(6, "SUDT pass implies UDT pass on the runs of 2 and 7");
  if (!sh.cert_report) sh.cert_report = cantor_certificates();
  if (!sh.interval_report) sh.interval_report = interval_certificates(sh.seed);
  std::size_t bad = sh.cert_report->sudt_without_udt() + sh.interval_report->sudt_without_udt();
  std::size_t sudt = 0;
  for (const auto* rep : {&*sh.cert_report, &*sh.interval_report}) {
    for (const auto& p : rep->points) {
      for (auto v : p.sudt) sudt += v == Verdict::Member;
    }
  }
  r.pass = bad == 0 && sudt > 0;
  r.detail = "sudt_pass=" + std::to_string(sudt) + " exceptions=" + std::to_string(bad);
  return r;
}

const OracleSpec& cantor_stage(Shared& sh) {
  if (!sh.cantor_stage) sh.cantor_stage = OracleSpec::finite(stage(quarter_spec(), 8));
  return *sh.cantor_stage;
}

const OracleSpec& unit_set() {
  static const OracleSpec e = OracleSpec::finite(IntervalSet::single(Interval(0, 1)));
  return e;
}

void ensure_builds(Shared& sh) {
  const Interval window(-1, 2);
  if (!sh.unit_build) {
    BuildKnobs k;
    k.k_max = 3;
    k.depth = kBuildDepth;
    sh.unit_build = build(unit_set(), window, kBuildStages, k);
  }
  if (!sh.cantor_build) {
    BuildKnobs k;
    k.k_max = 1;
    k.depth = kBuildDepth;
    sh.cantor_build = build(cantor_stage(sh), window, kBuildStages, k);
  }
}

// 8
CriterionResult builder_conditions(Shared& sh) {
  CriterionResult r = named(8, "builder conditions C, E, F, G and Cauchy, n = 1..4");
  ensure_builds(sh);
  VerifySamples vs;
  vs.points = kBuildSamples;
  vs.seed = sh.seed;
  bool ok = true;
  std::ostringstream detail;
  for (auto [name, states, e] : {std::tuple{"unit", &*sh.unit_build, &unit_set()},
                                 std::tuple{"cantor8", &*sh.cantor_build, &cantor_stage(sh)}}) {
    VerifyReport rep = verify_conditions(*states, *e, vs, kBuildDepth);
    detail << name << ":";
    for (const char* c : {"C", "E", "F", "G", "Cauchy"}) {
      const auto& cr = rep.get(c);
      ok = ok && cr.pass && cr.checked > 0;
      detail << ' ' << c << '=' << (cr.pass ? "ok" : "FAIL") << '(' << cr.checked << ')';
    }
    detail << ' ';
  }
  r.pass = ok;
  r.detail = detail.str();
  return r;
}

// 9
CriterionResult growth(Shared& sh) {
  CriterionResult r = named(9, "|f_n(x) - f_n(y)| <= |[x,y] ∩ E| on builder outputs");
  ensure_builds(sh);
  std::mt19937_64 rng(sh.seed ^ 0x5eed0009u);
  std::size_t rows = 0, bad = 0;
  for (auto [states, e] : {std::pair{&*sh.unit_build, &unit_set()}, std::pair{&*sh.cantor_build, &cantor_stage(sh)}}) {
    for (const auto& s : *states) {
      if (s.n == 0) continue;
      std::vector<std::pair<Rational, Rational>> pairs;
      for (std::size_t i = 0; i < kGrowthPairs; ++i) {
        Rational a = random_dyadic(rng, s.window.lo, s.window.hi, 24);
        Rational b = random_dyadic(rng, s.window.lo, s.window.hi, 24);
        if (b < a) std::swap(a, b);
        pairs.emplace_back(a, b);
      }
      GrowthReport g = growth_check(s.f, *e, pairs, kBuildDepth);
      rows += g.rows.size();
      bad += g.violations;
    }
  }
  r.pass = bad == 0 && rows == 2 * kBuildStages * kGrowthPairs;
  r.detail = "pairs=" + std::to_string(rows) + " violations=" + std::to_string(bad);
  return r;
}

PLFunction random_pl(std::mt19937_64& rng) {
  std::size_t k = 2 + rng() % 11;
  std::vector<long> xs;
  while (xs.size() < k) {
    long v = static_cast<long>(rng() % 1025) - 512;
    if (std::find(xs.begin(), xs.end(), v) == xs.end()) xs.push_back(v);
  }
  std::sort(xs.begin(), xs.end());
  std::vector<PLFunction::Point> pts;
  for (long v : xs) pts.push_back({ratio(v, 256), ratio(static_cast<long>(rng() % 257) - 128, 64)});
  return PLFunction(std::move(pts));
}

// 10
CriterionResult mf_oracle(Shared& sh) {
  CriterionResult r = named(10, "mf vs grid sup on 1000 instances, lip_pl = mf below lip_radius on 200");
  std::mt19937_64 rng(sh.seed ^ 0x5eed000au);
  std::size_t bad_mf = 0, bad_lip = 0;
  for (std::size_t i = 0; i < kMfInstances; ++i) {
    PLFunction f = random_pl(rng);
    Rational x = random_dyadic(rng, -3, 3, 12);
    Rational rad = random_dyadic(rng, 0, 2, 10);
    if (rad == 0) rad = dyadic(10);
    Rational step = 2 * rad / kMfGridSteps;
    Rational fx = f.eval(x), grid = 0;
    for (unsigned j = 0; j <= kMfGridSteps; ++j) grid = max(grid, abs(f.eval(x - rad + step * j) - fx));
    Rational exact = mf(f, x, rad) * rad;
    if (!(exact >= grid && exact - grid <= f.max_abs_slope() * step)) ++bad_mf;
  }
  for (std::size_t i = 0; i < kLipInstances; ++i) {
    PLFunction f = random_pl(rng);
    Rational x = random_dyadic(rng, -3, 3, 12);
    Rational rho = lip_radius(f, x);
    if (rho == 0) rho = 1;
    Rational lip = lip_pl(f, x);
    for (const Rational& rr : {Rational(rho / 2), Rational(rho / 3), Rational(rho / 1000)}) {
      if (mf(f, x, rr) != lip) ++bad_lip;
    }
  }
  r.pass = bad_mf == 0 && bad_lip == 0;
  r.detail = "mf_violations=" + std::to_string(bad_mf) + " lip_violations=" + std::to_string(bad_lip);
  return r;
}

// 11
CriterionResult onesided(Shared&) {
  CriterionResult r = named(11, "one-sided density failure at depth 12, threshold 99/100");
  const CantorSpec spec = quarter_spec();
  auto cands = alternating_candidates(spec, kScanLevel, 2);
  // Smallest failing scale first.
  auto scales = dyadic_scales(kScanScales);
  std::reverse(scales.begin(), scales.end());
  auto hits = onesided_failure_scan(OracleSpec::cantor(spec), cands, scales, kScanThreshold, kScanLevel);
  // Hits at the ends of the hull or at scales above d_1 are trivial.
  const Rational d1 = CantorGeometry(spec, 1).d(1);
  std::vector<OnesidedHit> inner;
  for (auto& h : hits) {
    if (spec.base.lo < h.x && h.x < spec.base.hi && h.h_left <= d1 && h.h_right <= d1) inner.push_back(std::move(h));
  }
  r.pass = !inner.empty();
  r.detail = "candidates=" + std::to_string(cands.size()) + " hits=" + std::to_string(hits.size()) +
             " inner_hits=" + std::to_string(inner.size());
  if (!inner.empty()) {
    const auto& h = inner.front();
    r.detail += " first x=" + format_rational(h.x) + " h_left=" + format_rational(h.h_left) +
                " h_right=" + format_rational(h.h_right) + " left_upper~" + format_decimal(h.left.upper, 4) +
                " right_upper~" + format_decimal(h.right.upper, 4);
  }
  return r;
}

struct Entry {
  int id;
  double limit;
  std::function<CriterionResult(Shared&)> run;
};

}  // namespace

std::vector<CriterionResult> run(const Options& opts) {
  const std::vector<Entry> entries = {
      {1, kLimit1, exact_measures},    {2, kLimit2, cantor_battery},      {3, kLimit3, third_ratio},
      {4, kLimit4, packing_gaps},      {5, kLimit5, egd_exactness},       {6, 0, sudt_implies_udt},
      {7, kLimit7, interval_sudt},     {8, kLimit8, builder_conditions},  {9, kLimit9, growth},
      {10, kLimit10, mf_oracle},       {11, kLimit11, onesided},
  };
  Shared sh{opts.seed, {}, {}, {}, {}, {}};
  // 6 reads the reports of 2 and 7, so it runs after them.
  std::vector<int> order = {1, 2, 3, 4, 5, 7, 6, 8, 9, 10, 11};
  std::vector<CriterionResult> out;
  for (int id : order) {
    if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), id) == opts.only.end()) continue;
    const Entry& e = entries[id - 1];
    auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = e.run(sh);
    } catch (const std::exception& ex) {
      r = named(id, "criterion " + std::to_string(id));
      r.detail = std::string("error: ") + ex.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.limit_seconds = e.limit;
    if (e.limit > 0 && r.seconds >= e.limit) {
      r.pass = false;
      r.detail += " (over time limit)";
    }
    out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return out;
}

std::string format_line(const CriterionResult& r) {
  std::ostringstream out;
  out << (r.pass ? "PASS" : "FAIL") << "  " << (r.id < 10 ? " " : "") << r.id << "  " << r.name << "  ("
      << fmt("%.2f", r.seconds) << " s";
  if (r.limit_seconds > 0) out << " / " << fmt("%.0f", r.limit_seconds) << " s";
  out << ")  " << r.detail;
  return out.str();
}

}  // namespace lipset::acceptance
