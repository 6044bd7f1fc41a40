// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "qslab/commutant.hpp"
#include "qslab/decoherence.hpp"
#include "qslab/espace.hpp"
#include "qslab/json_io.hpp"
#include "qslab/relevance.hpp"
#include "runner.hpp"

using namespace qslab;
using nlohmann::json;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const fs::path kData = QSLAB_DATA_DIR;

std::vector<cli::RunConfig> bundle_configs(std::string* name = nullptr) {
  const fs::path file = kData / "bundles" / "demos.json";
  const json doc = cli::read_json_file(file);
  if (name) *name = doc.value("name", std::string("bundle"));
  std::vector<cli::RunConfig> out;
  for (const auto& entry : doc.at("runs")) out.push_back(cli::config_from_json(entry, file.parent_path()));
  return out;
}

const cli::BundleResult& demo_bundle() {
  static const cli::BundleResult b = [] {
    std::string name;
    const auto configs = bundle_configs(&name);
    return cli::report_bundle(configs, name, 4);
  }();
  return b;
}

const cli::RunResult* find_run(const std::string& name) {
  for (const auto& r : demo_bundle().runs)
    if (r.report.value("name", "") == name) return &r;
  return nullptr;
}

// ---------------------------------------------------------------- 1

Outcome kind_invariance() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  int failures = 0;
  for (const auto& named : fixtures::all_kinds()) {
    const int dim = named.structure.dim();
    for (int seed = 0; seed < 100; ++seed) {
      const UnitaryOp u = haar_unitary(dim, 5000 + seed);
      KStructure moved = named.structure;
      for (auto& op : moved.ops) op = conjugate(op, u);
      if (moved.frame) moved.frame = moved.frame->transformed(u);
      const ConditionReport rep = check_kind(moved);
      for (const auto& r : rep.results) {
        worst = std::max(worst, r.residual);
        if (!(r.residual < 1e-9)) ++failures;
      }
    }
  }
  const double secs = seconds_since(t0);
  return {failures == 0 && secs < 60.0,
          fmt("6 kinds x 100 conjugations, worst residual %.3g, %.2f s", worst, secs)};
}

// ---------------------------------------------------------------- 2

Outcome rival_mechanism() {
  double worst = 0.0;
  int checks = 0;
  const std::vector<fixtures::NamedModel> models = {{"ising3", build_ising_chain(3, 1.0, 1.0, false)},
                                                    {"nrqm-2-3", fixtures::nrqm_2_3()}};
  for (const auto& m : models) {
    const HermitianOp& h = m.model.hamiltonian;
    const int dim = h.dim();
    const KStructure s = computational_basis_structure(dim);
    const CommutantBasis cb = commutant_basis(h);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> uni(-5.0, 5.0);
    for (int cls = 0; cls < 3; ++cls) {
      for (int i = 0; i < 50; ++i) {
        UnitaryOp w = UnitaryOp::identity(dim);
        if (cls == 0) w = evolve(h, uni(rng));
        if (cls == 1) w = *sample_commutant_unitary(cb, 700 + i, false).unitary;
        if (cls == 2) w = UnitaryOp::phase(dim, uni(rng));
        const Ket psi = random_ket(dim, 9000 + 97 * cls + i);
        const KStructure rival = rival_structure(h, s, w);
        const InvariantOptions opts{true};
        const RealVector lhs = structure_invariant(rival, psi, opts);
        const RealVector rhs = structure_invariant(s, w.adjoint().apply(psi), opts);
        worst = std::max(worst, max_abs_gap(lhs, rhs));
        ++checks;
      }
    }
  }
  return {worst < 1e-11, fmt("%d witnesses (time, commutant, phase), worst gap %.3g", checks, worst)};
}

// ---------------------------------------------------------------- 3

Outcome certificate_controls() {
  struct Control {
    const char* run;
    const char* verdict;
    bool needs_gap;
  };
  const Control controls[] = {{"certify-time", "DistinctStructures", true},
                              {"certify-offorbit", "DistinctStructures", true},
                              {"certify-phase", "EquivalentUnderGP", false},
                              {"certify-eigenstate", "EquivalentUnderGP", false}};
  bool ok = true;
  std::ostringstream detail;
  for (const auto& c : controls) {
    const cli::RunResult* r = find_run(c.run);
    if (!r) {
      ok = false;
      detail << c.run << " missing; ";
      continue;
    }
    const double gap = r->report.at("result").value("gap", -1.0);
    const bool hit = r->verdict == c.verdict && (!c.needs_gap || gap > 1e-3);
    ok = ok && hit;
    detail << c.run << "=" << r->verdict << fmt("(%.3g) ", gap);
  }
  return {ok, detail.str()};
}

// ---------------------------------------------------------------- 4

Outcome passive_time_travel_suite() {
  double worst = 0.0;
  int pairs = 0;
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> uni(-5.0, 5.0);
  for (const auto& m : fixtures::model_suite()) {
    const int dim = m.model.hamiltonian.dim();
    const KStructure basis = computational_basis_structure(dim);
    for (int i = 0; i < 20; ++i) {
      const Ket psi0 = random_ket(dim, rng);
      const TimeTravelResult r = passive_time_travel(m.model.hamiltonian, basis, psi0, uni(rng));
      worst = std::max(worst, r.residual);
      ++pairs;
    }
  }
  return {worst < 1e-11, fmt("%d pairs over 5 models, worst residual %.3g", pairs, worst)};
}

// ---------------------------------------------------------------- 5

Outcome commutant_dimension() {
  const double d123[] = {1, 2, 3}, d112[] = {1, 1, 2}, d111[] = {1, 1, 1};
  const std::vector<std::pair<std::string, HermitianOp>> cases = {
      {"diag(1,2,3)", HermitianOp::diagonal(d123)},
      {"diag(1,1,2)", HermitianOp::diagonal(d112)},
      {"I3", HermitianOp::diagonal(d111)},
      {"ising2", build_ising_chain(2, 1.0, 1.0, false).hamiltonian},
      {"zurek2", build_zurek(ZurekSpec{{1.0, 0.7}, 1.0}).hamiltonian},
  };
  bool ok = true;
  std::ostringstream detail;
  for (const auto& [name, h] : cases) {
    const CommutantBasis cb = commutant_basis(h);
    const int brute = oracle::commutant_nullity(h.matrix());
    const bool hit = cb.dim_total == brute && static_cast<int>(cb.generators.size()) == brute;
    ok = ok && hit;
    detail << name << " " << cb.dim_total << "/" << brute << " ";
  }
  return {ok, detail.str()};
}

// ---------------------------------------------------------------- 6

Outcome ergodicity_verdicts() {
  const double d012[] = {0, 1, 2}, d112[] = {1, 1, 2}, d01r2[] = {0, 1, std::numbers::sqrt2};
  const auto a = ergodicity_report(HermitianOp::diagonal(d012), 10, 1e-6);
  const auto b = ergodicity_report(HermitianOp::diagonal(d112), 10, 1e-6);
  const auto c = ergodicity_report(HermitianOp::diagonal(d01r2), 10, 1e-6);
  const std::vector<int> k{1, -2, 1};
  const bool has_k = std::find(a.relations_found.begin(), a.relations_found.end(), k) != a.relations_found.end();
  const bool ok = a.verdict == ErgodicityVerdict::NotErgodicRationalRelation && has_k &&
                  b.verdict == ErgodicityVerdict::NotErgodicDegenerate &&
                  c.verdict == ErgodicityVerdict::ErgodicAtBound;
  return {ok, fmt("%s (k=(1,-2,1) %s), %s, %s", to_string(a.verdict), has_k ? "found" : "missing",
                  to_string(b.verdict), to_string(c.verdict))};
}

// ---------------------------------------------------------------- 7

Outcome zurek_oracle() {
  double worst = 0.0;
  const double a = 0.6, b = 0.8;
  const std::vector<std::vector<double>> couplings = {{1.0}, {1.0, 0.7}, {1.0, 0.7, 0.45, 0.3}};
  for (const auto& g : couplings) {
    const ZurekSpec spec{g, 1.0};
    std::vector<double> times(200);
    for (int i = 0; i < 200; ++i) times[i] = 2.0 * std::numbers::pi * i / 199.0;
    const DecoherenceTrace tr = decoherence_trace(spec, zurek_initial_state(spec, a, b), times);
    for (int i = 0; i < 200; ++i)
      worst = std::max(worst, std::abs(tr.offdiag[i] - oracle::zurek_plus(a, b, g, times[i], spec.hbar)));
  }
  return {worst < 1e-10, fmt("N in {1,2,4}, 200 points each, worst deviation %.3g", worst)};
}

// ---------------------------------------------------------------- 8

Outcome locality_and_spectra() {
  const Model m = build_ising_chain(3, 1.0, 1.0, false);
  int rises = 0;
  int d0 = -1;
  double worst_spec = 0.0;
  for (int seed = 0; seed < 100; ++seed) {
    const AlternativeLaws r = alternative_laws(m.hamiltonian, m.tps, 1000 + seed);
    d0 = r.d_original;
    worst_spec = std::max(worst_spec, r.spectrum_gap);
    if (r.d_conjugated == 3) ++rises;
  }
  return {d0 == 2 && worst_spec < 1e-9 && rises >= 95,
          fmt("native d=%d, d rises to 3 for %d/100 seeds, worst spectrum gap %.3g", d0, rises, worst_spec)};
}

// ---------------------------------------------------------------- 9

double cell(const json& v) { return v.is_null() ? std::numeric_limits<double>::infinity() : v.get<double>(); }

bool monotone(const json& g) {
  const json& mi = g.at("mi_matrix");
  const json& dist = g.at("dist_matrix");
  const std::size_t n = mi.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l)
          if (i != j && k != l && cell(mi[i][j]) > cell(mi[k][l]) && cell(dist[i][j]) > cell(dist[k][l]))
            return false;
  return true;
}

Outcome mutual_information_values() {
  const int a[] = {0}, b[] = {1}, c[] = {2};
  Vector bell = Vector::Zero(4);
  bell(0) = bell(3) = 1.0;
  Vector ghz = Vector::Zero(8);
  ghz(0) = ghz(7) = 1.0;
  const Ket parts[] = {random_ket(2, 1), random_ket(2, 2), random_ket(2, 3)};
  const double i_bell = mutual_information(Ket::normalized(bell), Tps::qubits(2), a, b);
  const double i_ghz = mutual_information(Ket::normalized(ghz), Tps::qubits(3), a, c);
  const double i_prod = mutual_information(tensor_product(parts), Tps::qubits(3), a, b);
  const double ln2 = std::log(2.0);
  bool ok = std::abs(i_bell - 2 * ln2) < 1e-10 && std::abs(i_ghz - ln2) < 1e-10 && std::abs(i_prod) < 1e-10;

  int graphs = 0;
  for (const auto& r : demo_bundle().runs) {
    if (r.report.value("experiment", "") != "spacegraph" || !r.report.contains("result")) continue;
    ++graphs;
    ok = ok && monotone(r.report.at("result"));
  }
  for (const auto& m : fixtures::model_suite()) {
    if (m.model.tps.factor_count() < 2) continue;
    const Ket psi = evolve(m.model.hamiltonian, 0.7).apply(random_ket(m.model.tps.total_dim(), 77));
    ok = ok && monotone(to_json(space_graph(m.model.hamiltonian, m.model.tps, psi)));
    ++graphs;
  }
  ok = ok && graphs > 0;
  return {ok, fmt("Bell %.12f, GHZ pair %.12f, product %.3g, %d graphs monotone-checked", i_bell, i_ghz, i_prod,
                  graphs)};
}

// ---------------------------------------------------------------- 10

std::map<std::string, std::string> read_tree(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (e.path().extension() == ".json") text = cli::dump(cli::strip_timestamps(json::parse(text)));
    out[fs::relative(e.path(), dir).string()] = text;
  }
  return out;
}

Outcome determinism(Clock::time_point suite_start) {
  const fs::path root = fs::temp_directory_path() / fmt("qslab-acceptance-%lld",
                                                        static_cast<long long>(Clock::now().time_since_epoch().count()));
  std::string name;
  const auto configs = bundle_configs(&name);
  const auto r1 = cli::report_bundle(configs, name, 4, (root / "a").string());
  const auto r2 = cli::report_bundle(configs, name, 1, (root / "b").string());
  const auto t1 = read_tree(root / "a");
  const auto t2 = read_tree(root / "b");
  fs::remove_all(root);
  const bool same = !t1.empty() && t1 == t2;
  const double secs = seconds_since(suite_start);
  const bool ok = same && r1.exit_code == cli::kExitPass && r2.exit_code == cli::kExitPass && secs < 300.0;
  return {ok, fmt("%zu artifacts %s, bundle exit %d/%d, suite wall-clock %.1f s", t1.size(),
                  same ? "identical" : "DIFFER", r1.exit_code, r2.exit_code, secs)};
}

}  // namespace

int main() {
  const auto start = Clock::now();
  struct Criterion {
    const char* description;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria = {
      {"kind invariance under conjugation", kind_invariance},
      {"rival structure sees the transported state", rival_mechanism},
      {"non-uniqueness certificate controls", certificate_controls},
      {"passive time travel", passive_time_travel_suite},
      {"commutant dimension equals brute-force nullity", commutant_dimension},
      {"ergodicity verdicts", ergodicity_verdicts},
      {"spin-bath decoherence oracle", zurek_oracle},
      {"locality rises while the spectrum is kept", locality_and_spectra},
      {"mutual information values and distance monotonicity", mutual_information_values},
      {"bundle determinism and runtime", [start] { return determinism(start); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << (i + 1) << "] " << criteria[i].description << ": "
              << o.detail << "\n";
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
