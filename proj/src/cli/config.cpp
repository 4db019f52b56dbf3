#include <algorithm>
#include <cmath>
#include <sstream>

#include "gibbsent/cli.hpp"

namespace gibbsent::cli {

namespace {

template <class T>
T get(const Json& doc, const char* key) {
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(std::string("'") + key + "' has the wrong type");
  }
}

void check(bool ok, const std::string& message) {
  if (!ok) throw ParseError(message);
}

BetaGrid parse_grid(const Json& doc) {
  BetaGrid g;
  if (doc.is_string()) {
    // start:stop:step
    std::string text = doc.get<std::string>();
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string piece;
    while (std::getline(ss, piece, ':')) {
      try {
        std::size_t used = 0;
        parts.push_back(std::stod(piece, &used));
        check(used == piece.size(), "bad beta grid '" + text + "'");
      } catch (const std::logic_error&) {
        throw ParseError("bad beta grid '" + text + "'");
      }
    }
    check(parts.size() == 3, "beta grid needs start:stop:step");
    g = {parts[0], parts[1], parts[2]};
  } else {
    require_keys(doc, {"start", "stop", "step"}, "beta_grid");
    g = {get<double>(doc, "start"), get<double>(doc, "stop"), get<double>(doc, "step")};
  }
  check(std::isfinite(g.start) && std::isfinite(g.stop) && g.step > 0 && g.start <= g.stop, "beta grid needs start <= stop and step > 0");
  check((g.stop - g.start) / g.step < 1e5, "beta grid has too many points");
  return g;
}

TiParams parse_ti(const Json& doc, TiParams ti) {
  require_keys(doc, {"grid", "burn_in", "sweeps", "batches", "replicas"}, "ti");
  if (doc.contains("grid")) ti.grid = get<int>(doc, "grid");
  if (doc.contains("burn_in")) ti.burn_in = get<int>(doc, "burn_in");
  if (doc.contains("sweeps")) ti.sweeps = get<int>(doc, "sweeps");
  if (doc.contains("batches")) ti.batches = get<int>(doc, "batches");
  if (doc.contains("replicas")) ti.replicas = get<int>(doc, "replicas");
  try {
    ti.validate();
  } catch (const InvalidInput& e) {
    throw ParseError(e.what());
  }
  return ti;
}

Params parse_params(const Json& doc) {
  Params p;
  require_keys(doc, {"sizes", "seeds", "radius", "samples", "tol", "r_max", "beta_grid", "m", "method", "mode", "n",
                     "sweeps", "ti", "exact_budget", "budget", "units", "threads"},
               "params");
  if (doc.contains("sizes")) p.sizes = get<std::vector<int>>(doc, "sizes");
  if (doc.contains("seeds")) p.seeds = get<std::vector<std::uint64_t>>(doc, "seeds");
  if (doc.contains("radius")) p.radius = get<int>(doc, "radius");
  if (doc.contains("samples")) p.samples = get<int>(doc, "samples");
  if (doc.contains("tol")) p.tol = get<double>(doc, "tol");
  if (doc.contains("r_max")) p.r_max = get<int>(doc, "r_max");
  if (doc.contains("beta_grid")) p.beta_grid = parse_grid(doc["beta_grid"]);
  if (doc.contains("m")) p.m = get<int>(doc, "m");
  if (doc.contains("method")) p.method = get<std::string>(doc, "method");
  if (doc.contains("mode")) p.mode = get<std::string>(doc, "mode");
  if (doc.contains("n")) p.n = get<int>(doc, "n");
  if (doc.contains("sweeps")) p.sweeps = get<int>(doc, "sweeps");
  if (doc.contains("ti")) p.ti = parse_ti(doc["ti"], p.ti);
  if (doc.contains("exact_budget")) p.exact_budget = get<unsigned long long>(doc, "exact_budget");
  if (doc.contains("budget")) p.budget = get<unsigned long long>(doc, "budget");
  if (doc.contains("units")) p.units = get<std::string>(doc, "units");
  if (doc.contains("threads")) p.threads = get<int>(doc, "threads");

  check(!p.sizes.empty(), "sizes must not be empty");
  for (int n : p.sizes) check(n >= 1 && n <= 10000000, "sizes must lie in [1, 1e7]");
  check(p.radius >= 0 && p.radius <= 4, "radius must lie in [0, 4]");
  check(p.samples >= 2 && p.samples <= 10000000, "samples must lie in [2, 1e7]");
  check(p.tol > 0 && p.tol < 1, "tol must lie in (0, 1)");
  check(p.r_max >= 1 && p.r_max <= 1000000, "r_max must lie in [1, 1e6]");
  check(p.m >= 1 && p.m <= 8, "m must lie in [1, 8]");
  check(p.method == "exact" || p.method == "ti", "method must be exact or ti");
  check(p.mode == "markov" || p.mode == "ball", "mode must be markov or ball");
  check(p.n >= 1 && p.n <= 10000000, "n must lie in [1, 1e7]");
  check(p.sweeps >= 1 && p.sweeps <= 10000000, "sweeps must lie in [1, 1e7]");
  check(p.exact_budget >= 1 && p.budget >= 1, "budgets must be positive");
  check(p.units == "nats" || p.units == "bits", "units must be nats or bits");
  check(p.threads >= 0 && p.threads <= 4096, "threads must lie in [0, 4096]");
  return p;
}

Model parse_model(const Json& doc) {
  check(doc.is_object() && doc.size() == 1, "model must have exactly one of ising, potential, markov, structure");
  Model m;
  const std::string kind = doc.begin().key();
  const Json& body = doc.begin().value();
  m.kind = kind;
  if (kind == "ising") {
    require_keys(body, {"beta", "m"}, "ising model");
    check(body.contains("beta"), "ising model needs beta");
    m.beta = get<double>(body, "beta");
    if (body.contains("m")) m.m = get<int>(body, "m");
    check(std::isfinite(m.beta) && std::abs(m.beta) <= 50, "beta must lie in [-50, 50]");
    check(m.m >= 1 && m.m <= 8, "m must lie in [1, 8]");
    return m;
  }
  m.document = body;
  try {
    if (kind == "potential") {
      m.m = potential_from_json(body).m;
    } else if (kind == "markov") {
      m.m = markov_from_json(body).m();
    } else if (kind == "structure") {
      structure_from_json(body);
    } else {
      throw ParseError("unknown model kind '" + kind + "'");
    }
  } catch (const InvalidInput& e) {
    throw ParseError(std::string("model: ") + e.what());
  }
  return m;
}

}  // namespace

std::vector<double> BetaGrid::values() const {
  std::vector<double> out;
  const auto count = static_cast<long long>(std::floor((stop - start) / step + 1e-9));
  for (long long j = 0; j <= count; ++j) out.push_back(start + static_cast<double>(j) * step);
  return out;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{
      "check-dobrushin", "check-attractive", "uniqueness",    "exact-gibbs",     "sample-glauber",
      "entropy",         "sofic-entropy",    "seward-bound",  "f-invariant",     "phase-criterion",
      "ising-scan",      "sofic-gen",        "selftest"};
  return names;
}

RunConfig parse_config_checked(const Json& doc);

RunConfig parse_config(const Json& doc) {
  try {
    return parse_config_checked(doc);
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed configuration: ") + e.what());
  }
}

RunConfig parse_config_checked(const Json& doc) {
  try {
    require_keys(doc, {"command", "model", "seed", "out", "params"}, "config");
  } catch (const InvalidInput& e) {
    throw ParseError(e.what());
  }
  RunConfig c;
  check(doc.contains("command"), "config needs a command");
  c.command = get<std::string>(doc, "command");
  const auto& names = command_names();
  check(std::find(names.begin(), names.end(), c.command) != names.end(), "unknown command '" + c.command + "'");
  try {
    if (doc.contains("model") && !doc["model"].is_null()) c.model = parse_model(doc["model"]);
    if (doc.contains("params")) c.params = parse_params(doc["params"]);
  } catch (const InvalidInput& e) {
    throw ParseError(e.what());
  }
  if (doc.contains("seed") && !doc["seed"].is_null()) c.seed = get<std::uint64_t>(doc, "seed");
  if (doc.contains("out")) c.out = get<std::string>(doc, "out");
  return c;
}

Json to_json(const RunConfig& c) {
  Json doc;
  doc["command"] = c.command;
  if (c.model) {
    if (c.model->kind == "ising")
      doc["model"] = {{"ising", {{"beta", c.model->beta}, {"m", c.model->m}}}};
    else
      doc["model"] = {{c.model->kind, c.model->document}};
  } else {
    doc["model"] = nullptr;
  }
  doc["seed"] = c.seed ? Json(*c.seed) : Json(nullptr);
  doc["out"] = c.out;
  const Params& p = c.params;
  doc["params"] = {{"sizes", p.sizes},
                   {"seeds", p.seeds},
                   {"radius", p.radius},
                   {"samples", p.samples},
                   {"tol", p.tol},
                   {"r_max", p.r_max},
                   {"beta_grid", {{"start", p.beta_grid.start}, {"stop", p.beta_grid.stop}, {"step", p.beta_grid.step}}},
                   {"m", p.m},
                   {"method", p.method},
                   {"mode", p.mode},
                   {"n", p.n},
                   {"sweeps", p.sweeps},
                   {"ti",
                    {{"grid", p.ti.grid},
                     {"burn_in", p.ti.burn_in},
                     {"sweeps", p.ti.sweeps},
                     {"batches", p.ti.batches},
                     {"replicas", p.ti.replicas}}},
                   {"exact_budget", p.exact_budget},
                   {"budget", p.budget},
                   {"units", p.units},
                   {"threads", p.threads}};
  return doc;
}

}  // namespace gibbsent::cli
