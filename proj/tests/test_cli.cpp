#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "gibbsent/cli.hpp"

using namespace gibbsent;
using namespace gibbsent::cli;

namespace {

struct Result {
  int status;
  std::string out;
  std::string err;
  Json record() const { return Json::parse(out); }
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "gibbsent-cli");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int status = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::string scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "gibbsent_cli_test";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

Json minimal(const std::string& command) { return {{"command", command}}; }

}  // namespace

TEST_CASE("numbers use twelve significant digits") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1e-20) == "1e-20");
  CHECK(format_number(123456789012345.0) == "1.23456789012e+14");
}

TEST_CASE("csv fields are quoted only when needed") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\", then") == "\"say \"\"hi\"\", then\"");
}

TEST_CASE("atomic writes replace the target and leave no temporary") {
  const std::string path = scratch("atomic.txt");
  write_atomic(path, "first\n");
  write_atomic(path, "second\n");
  CHECK(slurp(path) == "second\n");
  CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
}

TEST_CASE("beta grid expansion") {
  const BetaGrid g{0.0, 0.2, 0.05};
  const auto v = g.values();
  REQUIRE(v.size() == 5);
  CHECK(v.back() == doctest::Approx(0.2));
  CHECK(BetaGrid{0.3, 0.3, 1.0}.values().size() == 1);
}

TEST_CASE("config defaults and round trip") {
  const RunConfig c = parse_config(minimal("sofic-entropy"));
  CHECK(c.params.sizes == std::vector<int>{1000});
  CHECK(c.params.r_max == 5000);
  CHECK(c.params.units == "nats");
  CHECK_FALSE(c.seed.has_value());

  Json doc = {{"command", "ising-scan"},
              {"model", {{"ising", {{"beta", 0.25}, {"m", 3}}}}},
              {"seed", 17},
              {"out", "x.csv"},
              {"params", {{"beta_grid", "0:1:0.25"}, {"sizes", {100, 200}}, {"ti", {{"grid", 7}}}}}};
  const RunConfig d = parse_config(doc);
  CHECK(d.model->m == 3);
  CHECK(d.params.beta_grid.values().size() == 5);
  CHECK(d.params.ti.grid == 7);
  CHECK(to_json(parse_config(to_json(d))) == to_json(d));
}

TEST_CASE("config rejects unknown keys and bad values") {
  CHECK_THROWS_AS(parse_config({{"command", "uniqueness"}, {"colour", 1}}), ParseError);
  CHECK_THROWS_AS(parse_config({{"command", "uniqueness"}, {"params", {{"radiuss", 1}}}}), ParseError);
  CHECK_THROWS_AS(parse_config({{"command", "entropy"}, {"params", {{"ti", {{"grids", 3}}}}}}), ParseError);
  CHECK_THROWS_AS(parse_config({{"command", "entropy"}, {"params", {{"ti", {{"grid", 4}}}}}}), ParseError);
  CHECK_THROWS_AS(parse_config(minimal("nonsense")), ParseError);
  CHECK_THROWS_AS(parse_config({{"command", "entropy"}, {"params", {{"method", "guess"}}}}), ParseError);
  CHECK_THROWS_AS(parse_config({{"command", "entropy"}, {"params", {{"radius", "two"}}}}), ParseError);
  CHECK_THROWS_AS(parse_config({{"command", "entropy"}, {"params", {{"beta_grid", "1:0:0.1"}}}}), ParseError);
  CHECK_THROWS_AS(parse_config({{"command", "uniqueness"}, {"model", {{"ising", {{"m", 2}}}}}}), ParseError);
  // A non-stochastic matrix fails validation inside the model reader.
  Json bad = {{"alphabet", {"a", "b"}}, {"rho", {0.5, 0.5}}, {"matrices", {{0.9, 0.2, 0.1, 0.8}}}};
  CHECK_THROWS_AS(parse_config({{"command", "f-invariant"}, {"model", {{"markov", bad}}}}), ParseError);
}

TEST_CASE("serialization round trips") {
  const GibbsStructure G({Alphabet::ising(), Alphabet::indexed(3)}, {{{1, 0}, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6}}});
  CHECK(structure_from_json(to_json(G)) == G);

  const SoficMap sigma = random_sofic(2, 9, 3);
  const SoficMap back = sofic_from_json(to_json(sigma));
  for (int i = 1; i <= 2; ++i)
    for (int v = 0; v < 9; ++v) CHECK(back.apply_letter(i, v) == sigma.apply_letter(i, v));

  const MarkovTreeSpec spec = ising_spec(0.4, 2);
  const MarkovTreeSpec spec2 = markov_from_json(to_json(spec));
  CHECK(spec2.rho() == spec.rho());
  CHECK(spec2.transitions() == spec.transitions());

  const ShiftPotential phi = ising_potential(0.3, 2);
  const ShiftPotential phi2 = potential_from_json(to_json(phi));
  REQUIRE(phi2.terms.size() == phi.terms.size());
  for (std::size_t t = 0; t < phi.terms.size(); ++t) {
    CHECK(phi2.terms[t].window == phi.terms[t].window);
    CHECK(phi2.terms[t].table == phi.terms[t].table);
  }
  CHECK_THROWS_AS(potential_from_json({{"m", 2}, {"alphabet", {"a"}}, {"terms", Json::array()}, {"extra", 0}}),
                  InvalidInput);
}

TEST_CASE("f-invariant example at zero coupling") {
  const Result r = invoke({"f-invariant", "--ising", "beta=0", "m=3"});
  REQUIRE(r.status == kOk);
  CHECK(r.record()["value"].get<double>() == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(format_number(r.record()["value"].get<double>()).substr(0, 8) == "0.693147");

  const Result bits = invoke({"f-invariant", "--ising", "beta=0", "m=3", "--units", "bits"});
  CHECK(bits.record()["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("exit statuses") {
  CHECK(invoke({"sofic-entropy", "--ising", "beta=0.1", "m=2"}).status == kParseError);  // no seed
  CHECK(invoke({"uniqueness", "--bogus-flag"}).status == kParseError);
  CHECK(invoke({"not-a-command"}).status == kParseError);
  CHECK(invoke({"uniqueness"}).status == kParseError);  // no model
  CHECK(invoke({"f-invariant", "--ising", "beta=0.1", "m=2", "--mode", "ball", "--radius", "3"}).status == kSizeError);
  CHECK(invoke({"exact-gibbs", "--ising", "beta=0.1", "m=2", "--n", "40", "--seed", "1"}).status == kSizeError);
  const Result undecided = invoke({"uniqueness", "--ising", "beta=0.34", "m=2", "--r-max", "20"});
  CHECK(undecided.status == kUndecided);
  CHECK(undecided.record()["verdict"] == "undecided");
  CHECK(invoke({"uniqueness", "--ising", "beta=0.2", "m=2"}).record()["verdict"] == "unique");
}

TEST_CASE("csv output, sidecar config and determinism") {
  const std::string path = scratch("sofic.csv");
  const std::vector<std::string> args = {"sofic-entropy", "--ising", "beta=0.2", "m=2", "--sizes", "60",
                                         "--seed", "11", "--ti-sweeps", "40", "--ti-grid", "5", "--out", path};
  REQUIRE(invoke(args).status == kOk);
  const std::string first = slurp(path);
  CHECK(first.find('\r') == std::string::npos);
  CHECK(first.rfind("n,sofic_seed,value,stderr,method,seed,regime\n", 0) == 0);
  CHECK(std::count(first.begin(), first.end(), '\n') == 4);
  const RunConfig side = parse_config(Json::parse(slurp(path + ".config.json")));
  CHECK(side.seed == 11u);
  CHECK(side.params.sizes == std::vector<int>{60});
  REQUIRE(invoke(args).status == kOk);
  CHECK(slurp(path) == first);
}

TEST_CASE("flags override the configuration file") {
  const std::string cfg = scratch("cfg.json");
  std::ofstream(cfg) << R"({"command": "uniqueness", "model": {"ising": {"beta": 0.6, "m": 2}}, "params": {"r_max": 20}})";
  const Result from_file = invoke({"f-invariant", "--config", cfg});
  REQUIRE(from_file.status == kOk);
  CHECK(from_file.record()["value"].get<double>() == doctest::Approx(std::log(2.0) - 2 * std::log(2.0) +
                                                                     2 * (-(1 / (1 + std::exp(1.2))) * std::log(1 / (1 + std::exp(1.2))) -
                                                                          (1 - 1 / (1 + std::exp(1.2))) * std::log(1 - 1 / (1 + std::exp(1.2))))));
  const Result overridden = invoke({"f-invariant", "--config", cfg, "--ising", "beta=0", "m=2"});
  CHECK(overridden.record()["value"].get<double>() == doctest::Approx(std::log(2.0)));
  CHECK(overridden.record()["params"]["r_max"] == 20);
}

TEST_CASE("selftest passes") {
  std::ostringstream out;
  CHECK(selftest(out) == kOk);
  CHECK(out.str().find("FAIL") == std::string::npos);
}
