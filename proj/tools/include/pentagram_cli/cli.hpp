#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pentagram/io.hpp"
#include "pentagram/polygon.hpp"

namespace pentagram::cli {

using io::json;

inline constexpr const char* kSchema = "pentagram-report/1";

// Everything needed to rerun a command. Serialized into every report.
struct RunConfig {
  std::string command;
  int n = 0;
  std::string mode = "rational";
  std::uint64_t seed = 1;
  long iterations = 0;
  std::string out;
  double tol = 1e-9;
  json params = json::object();

  void validate() const;
  json to_json() const;
};

// Bad flags or input files. Maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- gen

// kind: uconvex | spiral | random | convex | closed4 | closed5.
json generate(const std::string& kind, const RunConfig& cfg);

ABCoords<Rational> closed_quadrilateral();
ABCoords<Rational> closed_pentagon(const Rational& x, const Rational& y);

// ---- orbit

struct OrbitSummary {
  long iterations_done = 0;
  double max_relative_drift = 0.0;
  double sup_log_coord = 0.0;
  std::optional<long> singular_iteration;
  std::optional<int> singular_index;
  // Smallest p <= 12 with T^p(P) equal to P up to relabeling, if any.
  std::optional<int> period;
  std::vector<std::string> columns;

  json to_json() const;
};

std::vector<std::string> orbit_columns(int n);

// Iterates the map in float corner coordinates, writing one CSV row every
// `every` iterations when csv is given.
OrbitSummary run_orbit(const CornerCoords<double>& start, long iterations, std::ostream* csv = nullptr,
                       long every = 1);

// ---- reports

json invariants_report(const io::AnyPolygon& p);
json poisson_report(int n, int trials, std::uint64_t seed, bool mutate = false);

// suite: all | poisson | invariants | closed | boussinesq. "passed" is true
// iff every check passed.
json verify(const std::string& suite, int n_min, int n_max, std::uint64_t seed, bool mutate = false);

json conic_experiment(int n, int samples, std::uint64_t seed);

// Parses argv-style arguments and runs one subcommand. Returns the exit code:
// 0 success, 1 verification or computation failure, 2 usage or IO error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pentagram::cli
