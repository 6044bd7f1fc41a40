// qslab command-line front end.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qslab/errors.hpp"
#include "runner.hpp"

namespace {

using qslab::cli::Experiment;
using qslab::cli::RunConfig;

struct Flags {
  std::string model;
  std::string seed;
  std::string witness;
  std::string state;
  std::string structure;
  double time = 1.0;
  int samples = 0;
  int bound = 10;
  std::string expect;
  std::string output;
  std::vector<std::string> formats;
  bool full = false;
  bool quiet = false;
  double tol_kind = 0.0;
  double tol_ergodicity = 0.0;
};

void add_run_options(CLI::App* sub, Flags& f, Experiment e) {
  sub->add_option("--model", f.model, "Model JSON file {\"model\": name, \"params\": {...}}")->check(CLI::ExistingFile);
  sub->add_option("--seed", f.seed, "RNG seed (default: $QSLAB_SEED or 7)");
  sub->add_option("--expect", f.expect, "Expected verdict, or 'any'");
  sub->add_option("--output", f.output, "Artifact path prefix");
  sub->add_option("--formats", f.formats, "Artifact formats: json, dot, csv")
      ->check(CLI::IsMember({"json", "dot", "csv"}))
      ->delimiter(',');
  sub->add_flag("--full", f.full, "Include matrices in JSON output");
  sub->add_flag("--quiet,-q", f.quiet, "Do not print the report");
  sub->add_option("--tol", f.tol_kind, "Kind-condition tolerance")->check(CLI::PositiveNumber);
  if (e == Experiment::Certify) {
    sub->add_option("--witness", f.witness, "time:<t> | commutant:<seed> | commutant-offorbit:<seed> | phase:<theta>");
    sub->add_option("--structure", f.structure, "basis | occupation | tps");
  }
  if (e == Experiment::Certify || e == Experiment::AltReality)
    sub->add_option("--state", f.state, "random | eigen:<k> | basis:<k>");
  if (e == Experiment::SpaceGraph) sub->add_option("--time", f.time, "Evolution time of the sampled state");
  if (e == Experiment::TimeTravel || e == Experiment::AltLaws || e == Experiment::FactorFamily)
    sub->add_option("--samples", f.samples, "Number of samples")->check(CLI::PositiveNumber);
  if (e == Experiment::Ergodicity) {
    sub->add_option("--bound", f.bound, "Coefficient bound")->check(CLI::PositiveNumber);
    sub->add_option("--ergodicity-tol", f.tol_ergodicity, "Relation tolerance")->check(CLI::PositiveNumber);
  }
}

RunConfig to_config(Experiment e, const Flags& f) {
  nlohmann::json j = {{"experiment", qslab::cli::to_string(e)}};
  if (!f.witness.empty()) j["witness"] = f.witness;
  if (!f.state.empty()) j["state"] = f.state;
  if (!f.structure.empty()) j["structure"] = f.structure;
  if (e == Experiment::SpaceGraph) j["time"] = f.time;
  if (f.samples > 0) j["samples"] = f.samples;
  if (e == Experiment::Ergodicity) j["bound"] = f.bound;
  if (!f.expect.empty()) j["expect"] = f.expect;
  if (!f.formats.empty()) j["formats"] = f.formats;
  if (f.full) j["full"] = true;
  nlohmann::json tol = nlohmann::json::object();
  if (f.tol_kind > 0.0) tol["kind"] = f.tol_kind;
  if (f.tol_ergodicity > 0.0) tol["ergodicity"] = f.tol_ergodicity;
  if (!tol.empty()) j["tolerances"] = tol;
  RunConfig c = qslab::cli::config_from_json(j, ".");
  if (!f.seed.empty()) {
    if (f.seed.find_first_not_of("0123456789") != std::string::npos)
      throw qslab::ArgumentError("--seed must be a non-negative integer");
    c.seed = std::stoull(f.seed);
  }
  if (!f.model.empty()) c.model = qslab::cli::read_json_file(f.model);
  c.output = f.output;
  if (f.formats.empty() && !f.output.empty()) c.formats = {"json", "dot", "csv"};
  return c;
}

int run_bundle(const std::string& file, int jobs, const std::string& output, bool quiet) {
  const nlohmann::json doc = qslab::cli::read_json_file(file);
  if (!doc.is_object() || !doc.contains("runs") || !doc.at("runs").is_array())
    throw qslab::ArgumentError("bundle: expected an object with a 'runs' array");
  std::vector<RunConfig> configs;
  const auto base = std::filesystem::path(file).parent_path();
  for (const auto& entry : doc.at("runs")) configs.push_back(qslab::cli::config_from_json(entry, base));
  const auto b = qslab::cli::report_bundle(configs, doc.value("name", std::string("bundle")), jobs, output);
  if (!quiet) std::cout << qslab::cli::dump(b.summary);
  for (const auto& r : b.runs)
    if (!r.error.empty()) std::cerr << "qslab: " << r.report.value("name", "") << ": " << r.error << "\n";
  return b.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qslab: preferred-structure non-uniqueness laboratory"};
  app.require_subcommand(1);

  struct Sub {
    Experiment e;
    const char* help;
  };
  const Sub subs[] = {
      {Experiment::Model, "Build a model and report its spectrum, commutant and locality"},
      {Experiment::Certify, "Certify a rival structure of the same kind"},
      {Experiment::TimeTravel, "Passive time travel check"},
      {Experiment::AltReality, "Rival basis from an off-orbit commutant witness"},
      {Experiment::AltLaws, "Locality degree of conjugated Hamiltonians"},
      {Experiment::Ergodicity, "Degeneracy and integer-relation search"},
      {Experiment::SpaceGraph, "Mutual-information space graph"},
      {Experiment::Decohere, "Spin-bath decoherence trace against the closed form"},
      {Experiment::Coherent, "Coherent frame and its commutant rival"},
      {Experiment::FactorFamily, "Family of factorizations making a state separable"},
  };
  Flags flags;
  std::vector<std::pair<CLI::App*, Experiment>> commands;
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(qslab::cli::to_string(s.e), s.help);
    add_run_options(sub, flags, s.e);
    commands.emplace_back(sub, s.e);
  }
  std::string bundle_file;
  std::string bundle_output;
  int jobs = 1;
  bool bundle_quiet = false;
  CLI::App* bundle = app.add_subcommand("bundle", "Run a bundle of experiments and aggregate verdicts");
  bundle->add_option("file", bundle_file, "Bundle JSON")->required()->check(CLI::ExistingFile);
  bundle->add_option("--output", bundle_output, "Output directory");
  bundle->add_option("--jobs,-j", jobs, "Concurrent runs")->check(CLI::PositiveNumber);
  bundle->add_flag("--quiet,-q", bundle_quiet, "Do not print the summary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qslab::cli::kExitError;
  }

  try {
    if (bundle->parsed()) return run_bundle(bundle_file, jobs, bundle_output, bundle_quiet);
    for (const auto& [sub, e] : commands) {
      if (!sub->parsed()) continue;
      const auto result = qslab::cli::run(to_config(e, flags));
      if (!flags.quiet) std::cout << qslab::cli::dump(result.report);
      if (!result.error.empty()) std::cerr << "qslab: " << result.error << "\n";
      else if (result.exit_code == qslab::cli::kExitMismatch)
        std::cerr << "qslab: verdict " << result.verdict << " does not match expected " << result.expected << "\n";
      return result.exit_code;
    }
  } catch (const std::exception& e) {
    std::cerr << "qslab: " << e.what() << "\n";
    return qslab::cli::kExitError;
  }
  return qslab::cli::kExitError;
}
