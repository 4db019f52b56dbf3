#include <fstream>
#include <ostream>

#include "CLI11.hpp"
#include "gibbsent/cli.hpp"

namespace gibbsent::cli {

namespace {

Json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open " + path);
  try {
    return Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

// "beta=0.3 m=2" tokens into an ising model object.
Json ising_overlay(const std::vector<std::string>& tokens) {
  Json model = Json::object();
  for (const auto& t : tokens) {
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ParseError("--ising expects key=value, got '" + t + "'");
    const std::string key = t.substr(0, eq);
    const std::string value = t.substr(eq + 1);
    try {
      if (key == "beta")
        model["beta"] = std::stod(value);
      else if (key == "m")
        model["m"] = std::stoi(value);
      else
        throw ParseError("--ising key '" + key + "' is not beta or m");
    } catch (const std::logic_error&) {
      throw ParseError("--ising value for '" + key + "' is not a number: " + value);
    }
  }
  return {{"ising", model}};
}

}  // namespace

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gibbs measures, sofic entropy and free-group invariants"};
  std::string command, config_path, beta_grid, out_path, method, mode, units;
  std::string potential_path, markov_path, structure_path;
  std::vector<std::string> ising;
  std::uint64_t seed = 0;
  std::vector<int> sizes;
  std::vector<std::uint64_t> seeds;
  int m = 0, radius = 0, samples = 0, r_max = 0, n = 0, sweeps = 0, threads = 0;
  double tol = 0.0;
  TiParams ti;
  bool bits = false;

  app.add_option("command", command, "Command to run")->required();
  app.add_option("--config", config_path, "JSON configuration file; flags override it");
  app.add_option("--ising", ising, "Ising model, e.g. beta=0.3 m=2")->expected(1, 2);
  app.add_option("--potential", potential_path, "Shift potential JSON file");
  app.add_option("--markov", markov_path, "Tree-indexed Markov JSON file");
  app.add_option("--structure", structure_path, "Finite Gibbs structure JSON file");
  auto* seed_opt = app.add_option("--seed", seed, "Master seed");
  auto* out_opt = app.add_option("--out", out_path, "CSV output path");
  auto* m_opt = app.add_option("--m", m, "Free group rank for ising-scan and sofic-gen");
  auto* grid_opt = app.add_option("--beta-grid", beta_grid, "start:stop:step");
  auto* sizes_opt = app.add_option("--sizes", sizes, "Sofic sizes")->delimiter(',');
  auto* seeds_opt = app.add_option("--seeds", seeds, "Sofic seeds")->delimiter(',');
  auto* radius_opt = app.add_option("--radius", radius, "Window radius");
  auto* samples_opt = app.add_option("--samples", samples, "Monte Carlo orderings");
  auto* tol_opt = app.add_option("--tol", tol, "Uniqueness tolerance");
  auto* rmax_opt = app.add_option("--r-max", r_max, "Largest recursion radius");
  auto* method_opt = app.add_option("--method", method, "exact or ti");
  auto* mode_opt = app.add_option("--mode", mode, "markov or ball");
  auto* n_opt = app.add_option("--n", n, "Sofic size for single-structure commands");
  auto* sweeps_opt = app.add_option("--sweeps", sweeps, "Glauber sweeps");
  auto* grid_ti = app.add_option("--ti-grid", ti.grid, "Integration grid points (odd)");
  auto* burn_ti = app.add_option("--ti-burn-in", ti.burn_in, "Burn-in sweeps per grid point");
  auto* sweeps_ti = app.add_option("--ti-sweeps", ti.sweeps, "Measured sweeps per grid point");
  auto* batches_ti = app.add_option("--ti-batches", ti.batches, "Batches for the error estimate");
  auto* replicas_ti = app.add_option("--ti-replicas", ti.replicas, "Independent chains");
  auto* threads_opt = app.add_option("--threads", threads, "OpenMP threads (0: runtime default)");
  auto* units_opt = app.add_option("--units", units, "nats or bits");
  app.add_flag("--bits", bits, "Same as --units bits");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  }

  RunConfig config;
  try {
    Json doc = config_path.empty() ? Json::object() : read_json_file(config_path);
    if (!doc.is_object()) throw ParseError("configuration must be a JSON object");
    doc["command"] = command;
    if (!ising.empty()) doc["model"] = ising_overlay(ising);
    if (!potential_path.empty()) doc["model"] = {{"potential", read_json_file(potential_path)}};
    if (!markov_path.empty()) doc["model"] = {{"markov", read_json_file(markov_path)}};
    if (!structure_path.empty()) doc["model"] = {{"structure", read_json_file(structure_path)}};
    if (*seed_opt) doc["seed"] = seed;
    if (*out_opt) doc["out"] = out_path;
    if (!doc.contains("params")) doc["params"] = Json::object();
    Json& p = doc["params"];
    if (*m_opt) p["m"] = m;
    if (*grid_opt) p["beta_grid"] = beta_grid;
    if (*sizes_opt) p["sizes"] = sizes;
    if (*seeds_opt) p["seeds"] = seeds;
    if (*radius_opt) p["radius"] = radius;
    if (*samples_opt) p["samples"] = samples;
    if (*tol_opt) p["tol"] = tol;
    if (*rmax_opt) p["r_max"] = r_max;
    if (*method_opt) p["method"] = method;
    if (*mode_opt) p["mode"] = mode;
    if (*n_opt) p["n"] = n;
    if (*sweeps_opt) p["sweeps"] = sweeps;
    if (*threads_opt) p["threads"] = threads;
    if (*units_opt) p["units"] = units;
    if (bits) p["units"] = "bits";
    const std::pair<CLI::Option*, std::pair<const char*, int>> ti_flags[] = {
        {grid_ti, {"grid", ti.grid}},       {burn_ti, {"burn_in", ti.burn_in}},
        {sweeps_ti, {"sweeps", ti.sweeps}}, {batches_ti, {"batches", ti.batches}},
        {replicas_ti, {"replicas", ti.replicas}}};
    for (const auto& [opt, kv] : ti_flags)
      if (*opt) p["ti"][kv.first] = kv.second;
    config = parse_config(doc);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  }
  return run(config, out, err);
}

}  // namespace gibbsent::cli
