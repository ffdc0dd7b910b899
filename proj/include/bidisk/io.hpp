#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "bidisk/blaschke1d.hpp"
#include "bidisk/clark.hpp"
#include "bidisk/koszul.hpp"
#include "bidisk/modelspace.hpp"
#include "bidisk/rif.hpp"

namespace bidisk {

using json = nlohmann::json;

inline constexpr const char* kToolVersion = "0.3.1";

std::uint64_t fnv1a64(const std::string& s);
std::string hexHash(std::uint64_t h);

// Parsers throw FormatError on anything malformed.
json toJson(cplx z);
cplx complexFromJson(const json& j);

json toJson(const BiPoly& p);
BiPoly biPolyFromJson(const json& j);

json toJson(const Rif& phi);
Rif rifFromJson(const json& j, const RifOptions& opt = {});
// Accepts inline JSON text or a path to a JSON file.
json loadJsonSource(const std::string& source);

json toJson(const BlaschkeProduct& b);
BlaschkeProduct blaschkeFromJson(const json& j);

json toJson(const ClarkMeasureQuad& mu);
json toJson(const TruncatedOperator& op);

// Angles in (-pi, pi].
std::string levelSetCsv(const LevelSetBranches& ls, const std::string& header);
std::string scanCsv(const SpectrumScan& s, const std::string& header);
json scanMetadata(const SpectrumScan& s);

// Prefixes each line of text with "# ".
std::string commentBlock(const std::string& text);

}  // namespace bidisk
