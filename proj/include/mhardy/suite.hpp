#pragma once

// Config-driven runner: parses a suite file, runs every entry through the
// matching verifier or sharpness estimator, and assembles the report.
//
// Config layout (JSON):
//   { "seed": 1, "admissibility": "corollary", "quadrature": {...},
//     "runs": [ { "theorem_id": "radial_hardy", "geometry": {...}, ... } ] }
// Unknown keys anywhere are a ConfigError. Per-run failures (admissibility,
// domain, realness) are recorded in the report and never abort the suite.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mhardy/sharpness.hpp"
#include "mhardy/verifiers.hpp"

namespace mhardy {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kReportVersion = "mhardy-report/1";
inline constexpr const char* kSweepVersion = "mhardy-sweep/1";

/// One run, already validated against the schema.
struct RunSpec {
  std::string name;
  std::string theorem_id;
  Json raw;  // the run object as written (echoed into the report)
  GrushinGeometry geom{2, 1, 1.0};
  WeightExponents exps;
  double beta = 0.0;
  double alpha = 0.0;  // grushin_ibp
  SuperweightParams sw;
  Json psi = Json::object();
  Json kappa = Json::object();
  Json potentials = Json::object();
  Json function = Json::object();
  int n = 1;
  double R_Omega = 0.0;
  double R = 0.0;
  double Q = 2.0;
  double p = 2.0;
  double theta = 0.0;
  QuadratureSpec quadrature;
  std::uint64_t seed = 0;
  std::optional<Admissibility> admissibility;
  std::vector<double> schedule;
  std::optional<TrialBase> family;
  bool oracle_check = false;
};

struct SuiteConfig {
  std::uint64_t seed = 0;
  std::optional<Admissibility> admissibility;
  std::vector<RunSpec> runs;
};

/// Throws ConfigError with a path to the offending entry.
SuiteConfig parse_suite_config(const Json& j);
SuiteConfig load_suite_config(const std::string& path);

struct SuiteOptions {
  /// Overrides every admissibility choice in the config when set.
  std::optional<Admissibility> admissibility;
  /// Adds wall-clock seconds per run (breaks byte-identical reports).
  bool timings = false;
};

struct SuiteOutcome {
  Json report;
  bool ok = true;  // every margin / identity within tolerance, no run errors
};

/// Every theorem and identity id accepted in a run.
std::vector<std::string> theorem_ids();
bool is_identity_id(const std::string& id);

/// Builds the test function of a run (`ky` y axes); `seed` drives the
/// random family.
TestFunction build_function(const Json& spec, int ky, const GrushinGeometry& geom,
                            const WeightExponents& exps, std::uint64_t seed);

/// Executes one run; errors are returned as data.
Json execute_run(const RunSpec& run, Admissibility adm, bool* ok);

SuiteOutcome run_suite(const SuiteConfig& config, const SuiteOptions& options = {});

struct SweepTable {
  std::string file_name;
  std::string csv;
};

struct SweepOutcome {
  Json combined;
  std::vector<SweepTable> tables;
  bool ok = true;  // no run errors
};

SweepOutcome sweep_sharpness(const SuiteConfig& config,
                             const SuiteOptions& options = {});

/// CSV with header theorem_id,epsilon,quotient,sharp_constant,gap; gap per
/// row is (quotient - sharp) / sharp (absolute when sharp = 0).
std::string sweep_csv(const SharpnessResult& r);

/// Static listing of ids, constants and admissibility conditions.
std::string list_theorems();

Json to_json(const InequalityReport& r);
Json to_json(const IdentityReport& r);
Json to_json(const SharpnessResult& r);

}  // namespace mhardy
