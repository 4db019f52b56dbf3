#pragma once
// JSON documents for the library's value types. Readers validate through the
// regular constructors, so malformed documents raise InvalidInput.
#include "json.hpp"
#include "gibbsent/gibbs.hpp"
#include "gibbsent/markov_tree.hpp"
#include "gibbsent/order.hpp"
#include "gibbsent/shift.hpp"
#include "gibbsent/sofic.hpp"

namespace gibbsent {

using Json = nlohmann::ordered_json;

// Throws InvalidInput if `doc` is not an object or has a key outside `allowed`.
void require_keys(const Json& doc, std::initializer_list<const char*> allowed, const char* what);

Json to_json(const Alphabet& a);
Alphabet alphabet_from_json(const Json& doc);

// {"alphabets": [[...], ...], "terms": [{"support": [...], "table": [...]}]}
Json to_json(const GibbsStructure& G);
GibbsStructure structure_from_json(const Json& doc);

// {"m": 2, "n": 5, "perms": [[...], [...]]}
Json to_json(const SoficMap& sigma);
SoficMap sofic_from_json(const Json& doc);

// {"alphabet": [...], "rho": [...], "matrices": [[row-major], ...]}
Json to_json(const MarkovTreeSpec& spec);
MarkovTreeSpec markov_from_json(const Json& doc);

// {"m": 2, "alphabet": [...], "terms": [{"window": ["e", "s1"], "table": [...]}]}
Json to_json(const ShiftPotential& phi);
ShiftPotential potential_from_json(const Json& doc);

// Rows keyed by vertex; vertex names are supplied by the caller (words for shift reports).
Json to_json(const DobrushinReport& report, const std::vector<std::string>& names);

}  // namespace gibbsent
