#pragma once

// JSON / CSV serialization.  Output is byte-stable: object keys sorted, floats
// printed with 12 significant digits, NaN and infinities as null, rationals
// as "p/q" strings.

#include <string>

#include <json.hpp>

#include "sumlab/bounds.hpp"
#include "sumlab/energy.hpp"
#include "sumlab/extract.hpp"
#include "sumlab/generators.hpp"
#include "sumlab/gridset.hpp"
#include "sumlab/incidence.hpp"

namespace sumlab {

using Json = nlohmann::json;

std::string dump_stable(const Json& j, int indent = 2);
std::string format_real(double v);

Json to_json(const Rational& r);
Json to_json(const DiscretizedSet& x);
Json to_json(const GridSet& x);
Json to_json(const FrostmanProfile& p);
Json to_json(const EnergyReport& r);
Json to_json(const RatioSet& r);
Json to_json(const BsgReport& r);
Json to_json(const StructuralVerification& v);
Json to_json(const StructuralDecomposition& d);
Json to_json(const TripleSearchResult& r);
Json to_json(const BuildDResult& r);
Json to_json(const DenseGapReport& r);
Json to_json(const PipelineTrace& t);
Json to_json(const IncidenceReport& r);
Json to_json(const EnergyIncidence& r);
Json to_json(const BoundParams& p);
Json to_json(const BoundSet& b);
Json to_json(const EpsilonRange& e);
Json gamma_thresholds_json(const BoundParams& p);
Json to_json(const Theorem110& t);
Json to_json(const PlunneckeReport& r);
Json to_json(const RuzsaReport& r);
Json to_json(const FamilySpec& s);

// Header `c_index,energy`; c_index is the grid index of c.
std::string energy_csv(const EnergyReport& r);
std::string incidence_csv(const IncidenceReport& r);

// Writes text to path, or to stdout when path is empty or "-".
void emit_text(const std::string& text, const std::string& path);
inline void emit_report(const Json& j, const std::string& path) { emit_text(dump_stable(j) + "\n", path); }

}  // namespace sumlab
