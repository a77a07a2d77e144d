#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lipset/builder.hpp"
#include "lipset/density.hpp"
#include "lipset/packing.hpp"

namespace lipset {

/// Insertion-ordered, so emitted field order is stable.
using Json = nlohmann::ordered_json;

/// Parse errors name the offending location as a JSON pointer.
Json parse_json(std::string_view text);
Json load_json_file(const std::string& path);
void save_text_file(const std::string& path, const std::string& text);

Json to_json(const Rational& r);
Json to_json(const Interval& iv);
Json to_json(const IntervalSet& s);
Json to_json(const MeasureBounds& b);
Json to_json(const AlphaRule& a);
Json to_json(const CantorSpec& s);
Json to_json(const OracleSpec& o);
Json to_json(const PLFunction& f);
Json to_json(const PackedSpec& p);
Json to_json(const CertificateSeq& c);
Json to_json(const BuilderState& s);
Json to_json(const CantorParams& p);
Json to_json(const EgdVerdict& v);
Json to_json(const CertificateReport& r);
Json to_json(const VerifyReport& r);
Json to_json(const GrowthReport& r);
Json to_json(const OnesidedHit& h);

Rational rational_from_json(const Json& j, const std::string& where = "");
Interval interval_from_json(const Json& j, const std::string& where = "");
IntervalSet interval_set_from_json(const Json& j, const std::string& where = "");
AlphaRule alpha_rule_from_json(const Json& j, const std::string& where = "");
CantorSpec cantor_spec_from_json(const Json& j, const std::string& where = "");
OracleSpec oracle_spec_from_json(const Json& j, const std::string& where = "");
PLFunction pl_function_from_json(const Json& j, const std::string& where = "");
PackedSpec packed_spec_from_json(const Json& j, const std::string& where = "");
CertificateSeq certificate_seq_from_json(const Json& j, const std::string& where = "");
BuilderState builder_state_from_json(const Json& j, const std::string& where = "");

/// CSV writers. Exact columns hold "p/q"; columns ending in _approx are
/// decimal renderings for plotting only.
struct ProfileRow {
  Rational x;
  Rational r;
  Side side;
  MeasureBounds density;
};

std::string csv_profile(const std::vector<ProfileRow>& rows);
std::string csv_gap_report(const std::vector<GapRow>& rows);
std::string csv_params(const std::vector<CantorParams>& rows);
std::string csv_conditions(const VerifyReport& r);

}  // namespace lipset
