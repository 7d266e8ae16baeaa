#pragma once

#include <json.hpp>
#include <string>

#include "gmsnp/duality.hpp"
#include "gmsnp/homomorphism.hpp"
#include "gmsnp/patterns.hpp"
#include "gmsnp/structure.hpp"
#include "gmsnp/verdict.hpp"

namespace gmsnp::io {

using nlohmann::json;

/// {"signature":[{"name","arity","symmetric"}], "vertices":[...], "relations":{"E":[[...]]}}
/// Symmetric relations are written in one orientation and closed on reading.
json to_json(const Signature& signature);
json to_json(const Structure& s);
Signature signature_from_json(const json& j);
Structure structure_from_json(const json& j);

/// {"signature":..., "palette":{"vertex":[...], "E":[...]}, "patterns":[{structure fields,
/// "vertex_colors":{"x":"r"}, "tuple_colors":{"E":[[["x","y"],"u"]]}}]}.
/// Colour maps may be omitted for a scope whose palette has a single colour.
json to_json(const PatternSet& f);
PatternSet pattern_set_from_json(const json& j);

json to_json(const Verdict& v);
Verdict verdict_from_json(const json& j);
json to_json(const FactorReport& r);
FactorReport report_from_json(const json& j);

/// {"source vertex": "target vertex", ...}
json witness_to_json(const Structure& from, const Structure& to, const HomWitness& map);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);
std::string read_text_file(const std::string& path);

}  // namespace gmsnp::io
