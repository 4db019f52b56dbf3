#pragma once
// Command-line surface: configuration, command dispatch and result emission.
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gibbsent/entropy.hpp"
#include "gibbsent/serialize.hpp"

namespace gibbsent::cli {

enum ExitStatus : int { kOk = 0, kFailure = 1, kParseError = 2, kSizeError = 3, kUndecided = 4 };

class ParseError : public std::invalid_argument {
 public:
  explicit ParseError(const std::string& what) : std::invalid_argument(what) {}
};

struct BetaGrid {
  double start = 0.0;
  double stop = 2.0;
  double step = 0.05;
  std::vector<double> values() const;
};

struct Params {
  std::vector<int> sizes{1000};
  std::vector<std::uint64_t> seeds;  // empty: three seeds derived from the master seed
  int radius = 2;
  int samples = 2000;
  double tol = 1e-6;
  int r_max = 5000;
  BetaGrid beta_grid;
  int m = 2;  // ising-scan rank
  std::string method = "exact";  // entropy: exact | ti
  std::string mode = "markov";   // f-invariant: markov | ball
  int n = 100;                   // sofic size for single-structure commands
  int sweeps = 100;              // sample-glauber
  TiParams ti;
  unsigned long long exact_budget = 1ULL << 20;
  unsigned long long budget = kDefaultBudget;
  std::string units = "nats";
  int threads = 0;  // 0: OpenMP default
};

struct Model {
  std::string kind;  // ising | potential | markov | structure
  double beta = 0.0;
  int m = 2;
  Json document;  // potential, markov or structure document
};

struct RunConfig {
  std::string command;
  std::optional<Model> model;
  std::optional<std::uint64_t> seed;
  std::string out;  // empty: stdout only
  Params params;
};

const std::vector<std::string>& command_names();

// Validates ranges and rejects unknown keys; throws ParseError.
RunConfig parse_config(const Json& doc);
// Fully resolved document, defaults filled in; parse_config(to_json(c)) == c.
Json to_json(const RunConfig& config);

// Executes one command. The structured record goes to `out`, diagnostics to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// argv-level entry point: `gibbsent <command> [--config file] [flags]`.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

// Oracle suite behind the selftest command; one line per check.
int selftest(std::ostream& out);

// CSV helpers, exposed for tests.
std::string format_number(double x);
std::string csv_field(const std::string& s);
// Writes `content` to path.tmp and renames it over `path`.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace gibbsent::cli
