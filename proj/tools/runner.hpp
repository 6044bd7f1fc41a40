#pragma once

// Batch front end: experiment configs, execution, artifact writing and
// bundle aggregation. Shared by the qslab binary and the test suites.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace qslab::cli {

enum class Experiment { Model, Certify, TimeTravel, AltReality, AltLaws, Ergodicity, SpaceGraph, Decohere, Coherent,
                        FactorFamily };

const char* to_string(Experiment e);
Experiment experiment_from_string(const std::string& name);

/// File system failures while reading or writing artifacts.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exit codes.
inline constexpr int kExitPass = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitMismatch = 2;

struct Tolerances {
  double kind = 1e-9;
  double cluster = 1e-8;
  double ergodicity = 1e-6;
};

struct RunConfig {
  std::string name;  // label inside bundles
  Experiment experiment = Experiment::Model;
  std::optional<nlohmann::json> model;  // {"model": ..., "params": ...}; defaults to Ising n=3
  std::uint64_t seed = 7;
  std::string witness = "time:1";
  std::string state = "random";      // random | eigen:<k> | basis:<k>
  std::string structure = "basis";   // basis | occupation | tps
  double time = 1.0;
  int samples = 20;                  // (psi0, t) pairs, seeds, or family pairs
  int bound = 10;                    // ergodicity coefficient bound
  std::optional<std::string> expect; // verdict override; "any" accepts everything
  Tolerances tol;
  std::string output;                // path prefix; empty writes nothing
  std::set<std::string> formats{"json"};
  bool full = false;                 // include matrices in JSON
};

/// Validates and converts a JSON run description. Relative model paths are
/// resolved against base_dir. Throws qslab::ArgumentError on schema errors.
RunConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);

/// Loads a model document from disk (ArgumentError on I/O or parse errors).
nlohmann::json read_json_file(const std::filesystem::path& path);

struct RunResult {
  int exit_code = kExitPass;
  std::string verdict;
  std::string expected;
  std::string error;                            // non-empty iff exit_code == kExitError
  nlohmann::json report;                        // envelope + result
  std::map<std::string, std::string> artifacts; // extension -> file content
};

/// Runs one experiment. Never throws: errors become exit code 1.
/// Writes artifacts (atomically) when config.output is set.
RunResult run(const RunConfig& config);

struct BundleResult {
  int exit_code = kExitPass;
  nlohmann::json summary;
  std::vector<RunResult> runs;
};

/// Runs every config (up to `jobs` concurrently; results keep input order)
/// and aggregates verdicts. Exit code is the worst child: error > mismatch > pass.
BundleResult report_bundle(const std::vector<RunConfig>& configs, const std::string& bundle_name = "bundle",
                           int jobs = 1, const std::string& output = "");

/// Current UTC time, ISO 8601. The only non-deterministic field in any artifact.
std::string timestamp_now();

/// Removes every "timestamp" key recursively.
nlohmann::json strip_timestamps(nlohmann::json j);

/// Writes to path.tmp then renames over path. Throws IoError.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Canonical JSON text used for every artifact.
std::string dump(const nlohmann::json& j);

}  // namespace qslab::cli
