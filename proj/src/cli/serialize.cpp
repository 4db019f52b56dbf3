#include "gibbsent/serialize.hpp"

#include <string>

namespace gibbsent {

void require_keys(const Json& doc, std::initializer_list<const char*> allowed, const char* what) {
  if (!doc.is_object()) throw InvalidInput(std::string(what) + " must be an object");
  for (const auto& [key, value] : doc.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw InvalidInput("unknown key '" + key + "' in " + what);
  }
}

namespace {

template <class T>
T read(const Json& doc, const char* key, const char* what) {
  if (!doc.contains(key)) throw InvalidInput(std::string(what) + " is missing '" + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InvalidInput(std::string(what) + ": '" + key + "' has the wrong type");
  }
}

}  // namespace

Json to_json(const Alphabet& a) { return Json(a.symbols()); }

Alphabet alphabet_from_json(const Json& doc) {
  if (!doc.is_array()) throw InvalidInput("alphabet must be an array of labels");
  std::vector<std::string> symbols;
  for (const auto& s : doc) symbols.push_back(s.is_string() ? s.get<std::string>() : s.dump());
  return Alphabet(std::move(symbols));
}

Json to_json(const GibbsStructure& G) {
  Json doc;
  doc["alphabets"] = Json::array();
  for (const auto& a : G.alphabets()) doc["alphabets"].push_back(to_json(a));
  doc["terms"] = Json::array();
  for (const auto& t : G.terms()) doc["terms"].push_back({{"support", t.support}, {"table", t.table}});
  return doc;
}

GibbsStructure structure_from_json(const Json& doc) {
  require_keys(doc, {"alphabets", "terms"}, "structure");
  std::vector<Alphabet> alphabets;
  if (!doc.contains("alphabets") || !doc["alphabets"].is_array()) throw InvalidInput("structure needs 'alphabets'");
  for (const auto& a : doc["alphabets"]) alphabets.push_back(alphabet_from_json(a));
  std::vector<EnergyTerm> terms;
  if (doc.contains("terms")) {
    for (const auto& t : doc["terms"]) {
      require_keys(t, {"support", "table"}, "energy term");
      terms.push_back({read<std::vector<int>>(t, "support", "energy term"), read<std::vector<double>>(t, "table", "energy term")});
    }
  }
  return GibbsStructure(std::move(alphabets), std::move(terms));
}

Json to_json(const SoficMap& sigma) {
  return {{"m", sigma.rank()}, {"n", sigma.n()}, {"perms", sigma.perms()}};
}

SoficMap sofic_from_json(const Json& doc) {
  require_keys(doc, {"m", "n", "perms"}, "sofic map");
  const int m = read<int>(doc, "m", "sofic map");
  auto perms = read<std::vector<std::vector<int>>>(doc, "perms", "sofic map");
  if (static_cast<int>(perms.size()) != m) throw InvalidInput("sofic map: m differs from the number of permutations");
  return SoficMap(read<int>(doc, "n", "sofic map"), std::move(perms));
}

Json to_json(const MarkovTreeSpec& spec) {
  return {{"alphabet", to_json(spec.alphabet())}, {"rho", spec.rho()}, {"matrices", spec.transitions()}};
}

MarkovTreeSpec markov_from_json(const Json& doc) {
  require_keys(doc, {"alphabet", "rho", "matrices"}, "markov spec");
  if (!doc.contains("alphabet")) throw InvalidInput("markov spec is missing 'alphabet'");
  return MarkovTreeSpec(alphabet_from_json(doc["alphabet"]), read<std::vector<double>>(doc, "rho", "markov spec"),
                        read<std::vector<std::vector<double>>>(doc, "matrices", "markov spec"));
}

Json to_json(const ShiftPotential& phi) {
  Json terms = Json::array();
  for (const auto& t : phi.terms) {
    Json window = Json::array();
    for (const auto& g : t.window) window.push_back(g.str());
    terms.push_back({{"window", window}, {"table", t.table}});
  }
  return {{"m", phi.m}, {"alphabet", to_json(phi.alphabet)}, {"terms", terms}};
}

ShiftPotential potential_from_json(const Json& doc) {
  require_keys(doc, {"m", "alphabet", "terms"}, "potential");
  ShiftPotential phi;
  phi.m = read<int>(doc, "m", "potential");
  if (!doc.contains("alphabet")) throw InvalidInput("potential is missing 'alphabet'");
  phi.alphabet = alphabet_from_json(doc["alphabet"]);
  if (!doc.contains("terms") || !doc["terms"].is_array()) throw InvalidInput("potential needs 'terms'");
  for (const auto& t : doc["terms"]) {
    require_keys(t, {"window", "table"}, "potential term");
    std::vector<GroupWord> words;
    for (const auto& s : read<std::vector<std::string>>(t, "window", "potential term")) words.push_back(GroupWord::parse(s));
    phi.terms.push_back({FiniteWindow(std::move(words)), read<std::vector<double>>(t, "table", "potential term")});
  }
  phi.validate();
  return phi;
}

Json to_json(const DobrushinReport& report, const std::vector<std::string>& names) {
  Json rows = Json::array();
  for (std::size_t v = 0; v < report.rows.size(); ++v) {
    Json entries = Json::array();
    for (const auto& e : report.rows[v])
      entries.push_back({{"u", names.at(static_cast<std::size_t>(e.u))}, {"b", e.b}});
    rows.push_back({{"b_row", report.b_row[v]}, {"entries", entries}});
  }
  return {{"b_star", report.b_star}, {"rows", rows}};
}

}  // namespace gibbsent
