#include "runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <numbers>
#include <sstream>
#include <thread>

#include "qslab/commutant.hpp"
#include "qslab/decoherence.hpp"
#include "qslab/errors.hpp"
#include "qslab/espace.hpp"
#include "qslab/json_io.hpp"
#include "qslab/kstruct.hpp"
#include "qslab/models.hpp"
#include "qslab/random.hpp"
#include "qslab/relevance.hpp"

namespace qslab::cli {

using nlohmann::json;

namespace {

constexpr std::pair<Experiment, const char*> kNames[] = {
    {Experiment::Model, "model"},           {Experiment::Certify, "certify"},
    {Experiment::TimeTravel, "timetravel"}, {Experiment::AltReality, "altreality"},
    {Experiment::AltLaws, "altlaws"},       {Experiment::Ergodicity, "ergodicity"},
    {Experiment::SpaceGraph, "spacegraph"}, {Experiment::Decohere, "decohere"},
    {Experiment::Coherent, "coherent"},     {Experiment::FactorFamily, "factorfamily"},
};

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json reals(const RealVector& v) {
  json a = json::array();
  for (double x : v) a.push_back(finite_or_null(x));
  return a;
}

double parse_number(const std::string& text, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v))
    throw ArgumentError(what + ": '" + text + "' is not a finite number");
  return v;
}

std::uint64_t parse_seed(const std::string& text, const std::string& what) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
    throw ArgumentError(what + ": '" + text + "' is not a non-negative integer");
  return std::stoull(text);
}

json default_model(Experiment e) {
  switch (e) {
    case Experiment::Decohere:
      return {{"model", "zurek"}, {"params", {{"couplings", {1.0, 0.7}}}}};
    case Experiment::FactorFamily:
      return {{"model", "zurek"}, {"params", {{"couplings", {1.0}}}}};
    case Experiment::Coherent:
      return {{"model", "ising_chain"}, {"params", {{"n", 4}}}};
    default:
      return {{"model", "ising_chain"}, {"params", {{"n", 3}}}};
  }
}

std::string default_expectation(Experiment e) {
  switch (e) {
    case Experiment::Certify:
    case Experiment::AltReality:
    case Experiment::Coherent:
      return "DistinctStructures";
    case Experiment::TimeTravel:
      return "ResidualBelowBound";
    case Experiment::AltLaws:
      return "LocalityChanged";
    case Experiment::SpaceGraph:
      return "DistanceMonotone";
    case Experiment::Decohere:
      return "OracleMatch";
    case Experiment::FactorFamily:
      return "SeparableFamily";
    case Experiment::Model:
    case Experiment::Ergodicity:
      return "any";
  }
  return "any";
}

struct ParsedWitness {
  UnitaryOp unitary;
  WitnessClass cls;
  CommutantSample sample;
  bool available = true;
};

ParsedWitness parse_witness(const std::string& text, const LoadedModel& m) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  const HermitianOp& h = m.model.hamiltonian;
  ParsedWitness w{UnitaryOp::identity(h.dim()), {}, {}, true};
  if (kind == "identity" && colon == std::string::npos) {
    w.cls.kind = WitnessKind::Identity;
  } else if (kind == "time") {
    w.cls = {WitnessKind::TimeEvolution, parse_number(arg, "witness time"), 0};
    w.unitary = time_evolution(h, w.cls.parameter, 0.0, m.hbar);
  } else if (kind == "phase") {
    w.cls = {WitnessKind::GlobalPhase, parse_number(arg, "witness phase"), 0};
    w.unitary = UnitaryOp::phase(h.dim(), w.cls.parameter);
  } else if (kind == "commutant" || kind == "commutant-offorbit") {
    const bool off = kind == "commutant-offorbit";
    w.cls = {off ? WitnessKind::CommutantOffOrbit : WitnessKind::CommutantGeneric, 0.0,
             parse_seed(arg, "witness seed")};
    w.sample = sample_commutant_unitary(commutant_basis(h), w.cls.seed, off);
    w.available = w.sample.available;
    if (w.available) w.unitary = *w.sample.unitary;
  } else {
    throw ArgumentError("witness: expected time:<t>, commutant:<seed>, commutant-offorbit:<seed>, phase:<theta> or "
                        "identity, got '" + text + "'");
  }
  return w;
}

Ket eigenvector(const HermitianOp& h, int k) {
  if (k < 0 || k >= h.dim()) throw ArgumentError("state: eigenvector index out of range");
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
  Vector v = es.eigenvectors().col(k);
  Eigen::Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  v *= std::abs(v(arg)) / v(arg);
  return Ket::normalized(v);
}

Ket parse_state(const std::string& text, const HermitianOp& h, std::uint64_t seed) {
  if (text == "random") return random_ket(h.dim(), seed);
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  if (colon != std::string::npos) {
    const int k = static_cast<int>(parse_seed(text.substr(colon + 1), "state index"));
    if (kind == "eigen") return eigenvector(h, k);
    if (kind == "basis") {
      if (k >= h.dim()) throw ArgumentError("state: basis index out of range");
      return Ket::basis(h.dim(), k);
    }
  }
  throw ArgumentError("state: expected random, eigen:<k> or basis:<k>, got '" + text + "'");
}

KStructure build_structure(const std::string& name, const LoadedModel& m, std::uint64_t seed, double tol) {
  KStructure s;
  if (name == "basis") {
    s = computational_basis_structure(m.model.hamiltonian.dim());
  } else if (name == "occupation") {
    s = occupation_structure(m.model.tps);
  } else if (name == "tps") {
    s = make_tps_structure(m.model.tps, 1, seed);
  } else {
    throw ArgumentError("structure: expected basis, occupation or tps, got '" + name + "'");
  }
  s.kind.tolerance = tol;
  return s;
}

json model_summary(const LoadedModel& m) {
  return {{"id", m.id},
          {"kind", m.kind},
          {"dim", m.model.hamiltonian.dim()},
          {"factor_dims", m.model.tps.factor_dims()},
          {"hbar", m.hbar}};
}

struct Outcome {
  std::string verdict;
  json result;
  json metrics;
  std::map<std::string, std::string> extra;  // non-JSON artifacts
};

Outcome run_model(const RunConfig& c, const LoadedModel& m) {
  const SpectralDecomp sd = spectral_decompose(m.model.hamiltonian, c.tol.cluster);
  const CommutantBasis cb = commutant_basis(m.model.hamiltonian, c.tol.cluster);
  const int d = locality_degree(m.model.hamiltonian, m.model.tps);
  Outcome o;
  o.verdict = "Built";
  o.result = {{"eigenvalues", reals(sd.eigenvalues)},
              {"multiplicities", sd.multiplicities},
              {"commutant_dim", cb.dim_total},
              {"locality_degree", d}};
  if (c.full) o.result["hamiltonian"] = matrix_to_json(m.model.hamiltonian.matrix());
  o.metrics = {{"commutant_dim", cb.dim_total}, {"locality_degree", d}};
  return o;
}

Outcome run_certify(const RunConfig& c, const LoadedModel& m) {
  const HermitianOp& h = m.model.hamiltonian;
  const KStructure s = build_structure(c.structure, m, c.seed, c.tol.kind);
  const Ket psi = parse_state(c.state, h, c.seed);
  const ParsedWitness w = parse_witness(c.witness, m);
  Outcome o;
  if (!w.available) {
    o.verdict = to_string(Verdict::NotApplicable);
    o.result = {{"model", m.id},
                {"witness_class", w.cls.to_string()},
                {"verdict", o.verdict},
                {"note", "commutant is spanned by the time orbit"}};
    o.metrics = {{"gap", nullptr}};
    return o;
  }
  const Certificate cert = certify_nonuniqueness(h, s, psi, w.unitary, w.cls, m.id);
  o.verdict = to_string(cert.verdict);
  o.result = to_json(cert, c.full);
  o.result["structure"] = c.structure;
  o.result["state"] = c.state;
  if (w.cls.kind == WitnessKind::CommutantOffOrbit) o.result["orbit_distance"] = w.sample.orbit_distance;
  o.metrics = {{"gap", finite_or_null(cert.max_invariant_gap)}};
  return o;
}

Outcome run_timetravel(const RunConfig& c, const LoadedModel& m) {
  const HermitianOp& h = m.model.hamiltonian;
  const KStructure basis = computational_basis_structure(h.dim());
  Rng rng(c.seed);
  std::uniform_real_distribution<double> tdist(-5.0, 5.0);
  double worst = 0.0;
  json pairs = json::array();
  for (int i = 0; i < c.samples; ++i) {
    const Ket psi0 = random_ket(h.dim(), rng);
    const double t = tdist(rng);
    const TimeTravelResult r = passive_time_travel(h, basis, psi0, t, m.hbar);
    worst = std::max(worst, r.residual);
    pairs.push_back({{"t", t}, {"residual", r.residual}});
  }
  Outcome o;
  const double bound = 1e-11;
  o.verdict = worst < bound ? "ResidualBelowBound" : "ResidualExceeded";
  o.result = {{"pairs", pairs}, {"max_residual", worst}, {"bound", bound}};
  o.metrics = {{"max_residual", worst}};
  return o;
}

Outcome run_altreality(const RunConfig& c, const LoadedModel& m) {
  const HermitianOp& h = m.model.hamiltonian;
  KStructure basis = computational_basis_structure(h.dim());
  basis.kind.tolerance = c.tol.kind;
  const Ket psi0 = parse_state(c.state, h, c.seed);
  const AlternativeRealityResult r = alternative_reality(h, basis, psi0, c.seed, m.id);
  Outcome o;
  o.verdict = r.hamiltonian_distinguishes ? "HamiltonianDistinguishes" : to_string(r.certificate.verdict);
  o.result = to_json(r.certificate, c.full);
  o.result["hamiltonian_distinguishes"] = r.hamiltonian_distinguishes;
  o.result["hamiltonian_gaps"] = reals(r.hamiltonian_gaps);
  o.result["orbit_distance"] = r.sample.orbit_distance;
  o.metrics = {{"gap", finite_or_null(r.certificate.max_invariant_gap)},
               {"hamiltonian_distinguishes", r.hamiltonian_distinguishes}};
  return o;
}

Outcome run_altlaws(const RunConfig& c, const LoadedModel& m) {
  int rises = 0;
  double worst_spectrum = 0.0;
  int d_original = 0;
  json degrees = json::array();
  for (int i = 0; i < c.samples; ++i) {
    const AlternativeLaws r = alternative_laws(m.model.hamiltonian, m.model.tps, c.seed + static_cast<std::uint64_t>(i));
    d_original = r.d_original;
    worst_spectrum = std::max(worst_spectrum, r.spectrum_gap);
    if (r.d_conjugated > r.d_original) ++rises;
    degrees.push_back(r.d_conjugated);
  }
  const double spectrum_tol = 1e-9;
  Outcome o;
  if (worst_spectrum >= spectrum_tol) {
    o.verdict = "SpectrumMismatch";
  } else {
    o.verdict = 100 * rises >= 95 * c.samples ? "LocalityChanged" : "LocalityPreserved";
  }
  o.result = {{"d_original", d_original},
              {"d_conjugated", degrees},
              {"rises", rises},
              {"samples", c.samples},
              {"max_spectrum_gap", worst_spectrum},
              {"spectrum_tolerance", spectrum_tol}};
  o.metrics = {{"rises", rises}, {"max_spectrum_gap", worst_spectrum}};
  return o;
}

Outcome run_ergodicity(const RunConfig& c, const LoadedModel& m) {
  const ErgodicityReport r = ergodicity_report(m.model.hamiltonian, c.bound, c.tol.ergodicity, c.tol.cluster);
  Outcome o;
  o.verdict = to_string(r.verdict);
  o.result = to_json(r);
  o.metrics = {{"relations", static_cast<int>(r.relations_found.size())}};
  return o;
}

Outcome run_spacegraph(const RunConfig& c, const LoadedModel& m) {
  const HermitianOp& h = m.model.hamiltonian;
  const Ket psi = evolve(h, c.time, m.hbar).apply(random_ket(h.dim(), c.seed));
  const SpaceGraph g = space_graph(h, m.model.tps, psi);
  const SpaceGraph ig = interaction_graph(h, m.model.tps);
  Outcome o;
  o.verdict = g.distance_monotone() ? "DistanceMonotone" : "NotMonotone";
  o.result = to_json(g);
  json iedges = json::array();
  for (const auto& e : ig.edges) iedges.push_back({{"a", e.a}, {"b", e.b}, {"weight", e.weight}});
  o.result["interaction_edges"] = iedges;
  o.result["time"] = c.time;
  o.metrics = {{"i_max", g.i_max}, {"edges", static_cast<int>(g.edges.size())}};
  o.extra["dot"] = to_dot(g);
  return o;
}

Outcome run_decohere(const RunConfig& c, const LoadedModel& m) {
  if (!m.zurek) throw ArgumentError("decohere: model must be 'zurek'");
  const ZurekSpec& spec = *m.zurek;
  const Ket psi0 = zurek_initial_state(spec, 0.6, 0.8);
  const int points = 200;
  RealVector times(points);
  const double t_end = 2.0 * std::numbers::pi;
  for (int i = 0; i < points; ++i) times[i] = t_end * i / (points - 1);
  const DecoherenceTrace tr = decoherence_trace(spec, psi0, times);
  const double t_dec = decohered_time(spec);
  const PointerReport pr = pointer_dependence(spec, psi0, c.seed, t_dec);
  const double bound = 1e-10;
  Outcome o;
  o.verdict = tr.max_dev < bound ? "OracleMatch" : "OracleMismatch";
  o.result = to_json(tr);
  o.result["bound"] = bound;
  o.result["pointer"] = {{"time", pr.time},
                         {"offdiag_canonical", pr.offdiag_canonical},
                         {"offdiag_rival", pr.offdiag_rival},
                         {"gap", pr.gap}};
  o.metrics = {{"max_dev", tr.max_dev}, {"pointer_gap", pr.gap}};
  o.extra["csv"] = to_csv(tr);
  return o;
}

Outcome run_coherent(const RunConfig& c, const LoadedModel& m) {
  const HermitianOp& h = m.model.hamiltonian;
  const auto family = coherent_family(h.dim(), m.hbar);
  const FrameCheck fc = frame_check(family);
  const CommutantSample s = sample_commutant_unitary(commutant_basis(h, c.tol.cluster), c.seed, false);
  const auto rival = rival_coherent_family(family, *s.unitary);

  double gram_dev = 0.0;
  double profile_gap = 0.0;
  for (std::size_t a = 0; a < family.size(); ++a) {
    for (std::size_t b = a; b < family.size(); ++b)
      gram_dev = std::max(gram_dev, std::abs(inner(family[a].ket, family[b].ket) - inner(rival[a].ket, rival[b].ket)));
    for (int x = 0; x < h.dim(); ++x)
      profile_gap = std::max(profile_gap, std::abs(std::norm(family[a].ket[x]) - std::norm(rival[a].ket[x])));
  }
  KStructure frame = coherent_frame_structure(family);
  frame.kind.tolerance = c.tol.kind;
  const KStructure rival_frame = rival_structure(h, frame, *s.unitary);
  const ConditionReport rival_check = check_kind(rival_frame);

  Outcome o;
  const bool frame_ok = fc.residual < 0.05 && gram_dev < 1e-12 && rival_check.all_passed();
  o.verdict = frame_ok ? to_string(classify_gap(profile_gap, c.tol.kind)) : "FrameFailure";
  o.result = {{"sites", h.dim()},
              {"members", static_cast<int>(family.size())},
              {"frame_constant", fc.c},
              {"frame_residual", fc.residual},
              {"gram_deviation", gram_dev},
              {"profile_gap", profile_gap},
              {"rival_kind_check", to_json(rival_check)},
              {"witness_class", WitnessClass{WitnessKind::CommutantGeneric, 0.0, c.seed}.to_string()}};
  o.metrics = {{"gap", profile_gap}, {"frame_residual", fc.residual}};
  return o;
}

Outcome run_factorfamily(const RunConfig& c, const LoadedModel& m) {
  const HermitianOp& h = m.model.hamiltonian;
  if (h.dim() != 4) throw ArgumentError("factorfamily: model must have dimension 4");
  const Ket psi = random_ket(4, c.seed);
  const auto family = separable_factorization_family(psi, c.seed + 1, 2 * c.samples);
  Vector bell(4);
  bell << 1.0, 0.0, 0.0, 1.0;
  const Ket refs[] = {Ket::normalized(bell), random_ket(4, c.seed + 2)};

  double worst_separability = 0.0;
  std::vector<RealVector> inv;
  for (const Tps& t : family) {
    const RealVector sc = schmidt_coefficients(psi, t);
    worst_separability = std::max(worst_separability, 1.0 - sc.front());
    inv.push_back(canonical_tps_invariants(t, refs, h));
  }
  int distinct = 0;
  double min_gap = kInfiniteDistance;
  for (int p = 0; p < c.samples; ++p) {
    const double g = max_abs_gap(inv[2 * p], inv[2 * p + 1]);
    min_gap = std::min(min_gap, g);
    if (g > 1e-3) ++distinct;
  }
  const bool separable = worst_separability < 1e-10;
  Outcome o;
  o.verdict = separable && 10 * distinct >= 9 * c.samples ? "SeparableFamily" : "Inconclusive";
  o.result = {{"members", static_cast<int>(family.size())},
              {"pairs", c.samples},
              {"distinct_pairs", distinct},
              {"min_pair_gap", finite_or_null(min_gap)},
              {"max_schmidt_deficit", worst_separability}};
  o.metrics = {{"distinct_pairs", distinct}, {"max_schmidt_deficit", worst_separability}};
  return o;
}

Outcome dispatch(const RunConfig& c, const LoadedModel& m) {
  switch (c.experiment) {
    case Experiment::Model: return run_model(c, m);
    case Experiment::Certify: return run_certify(c, m);
    case Experiment::TimeTravel: return run_timetravel(c, m);
    case Experiment::AltReality: return run_altreality(c, m);
    case Experiment::AltLaws: return run_altlaws(c, m);
    case Experiment::Ergodicity: return run_ergodicity(c, m);
    case Experiment::SpaceGraph: return run_spacegraph(c, m);
    case Experiment::Decohere: return run_decohere(c, m);
    case Experiment::Coherent: return run_coherent(c, m);
    case Experiment::FactorFamily: return run_factorfamily(c, m);
  }
  throw ArgumentError("unknown experiment");
}

void write_artifacts(const std::string& prefix, const std::set<std::string>& formats,
                     const std::map<std::string, std::string>& artifacts) {
  const std::filesystem::path base(prefix);
  if (base.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(base.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + base.parent_path().string() + "': " + ec.message());
  }
  for (const auto& [ext, content] : artifacts)
    if (formats.count(ext)) write_atomic(prefix + "." + ext, content);
}

const json& expect_type(const json& j, const char* key, bool ok, const char* type) {
  if (!ok) throw ArgumentError(std::string("config: '") + key + "' must be " + type);
  return j;
}

}  // namespace

const char* to_string(Experiment e) {
  for (const auto& [k, name] : kNames)
    if (k == e) return name;
  return "?";
}

Experiment experiment_from_string(const std::string& name) {
  for (const auto& [k, n] : kNames)
    if (name == n) return k;
  throw ArgumentError("config: unknown experiment '" + name + "'");
}

std::string timestamp_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json strip_timestamps(json j) {
  if (j.is_object()) {
    j.erase("timestamp");
    for (auto& [k, v] : j.items()) v = strip_timestamps(v);
  } else if (j.is_array()) {
    for (auto& v : j) v = strip_timestamps(v);
  }
  return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out << content;
    if (!out.flush()) throw IoError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot read '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ArgumentError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

RunConfig config_from_json(const json& j, const std::filesystem::path& base_dir) {
  static const std::set<std::string> known{"name", "experiment", "model", "seed", "witness", "state", "structure",
                                           "time", "samples", "bound", "expect", "tolerances", "formats", "full"};
  if (!j.is_object()) throw ArgumentError("config: run entry must be an object");
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw ArgumentError("config: unknown key '" + k + "'");
  if (!j.contains("experiment") || !j.at("experiment").is_string())
    throw ArgumentError("config: 'experiment' is required and must be a string");

  RunConfig c;
  c.experiment = experiment_from_string(j.at("experiment").get<std::string>());
  if (const char* env = std::getenv("QSLAB_SEED")) c.seed = parse_seed(env, "QSLAB_SEED");
  c.name = j.value("name", std::string(to_string(c.experiment)));
  if (j.contains("model")) {
    const json& m = j.at("model");
    if (m.is_string()) {
      const std::filesystem::path p(m.get<std::string>());
      c.model = read_json_file(p.is_absolute() ? p : base_dir / p);
    } else if (m.is_object()) {
      c.model = m;
    } else {
      throw ArgumentError("config: 'model' must be an object or a file path");
    }
  }
  auto str = [&](const char* key, std::string& dst) {
    if (j.contains(key)) dst = expect_type(j, key, j.at(key).is_string(), "a string").at(key).get<std::string>();
  };
  auto integer = [&](const char* key, int& dst, int lo) {
    if (!j.contains(key)) return;
    expect_type(j, key, j.at(key).is_number_integer() && j.at(key).get<long long>() >= lo, "an integer in range");
    dst = j.at(key).get<int>();
  };
  str("witness", c.witness);
  str("state", c.state);
  str("structure", c.structure);
  if (j.contains("seed")) {
    const json& seed = j.at("seed");
    expect_type(j, "seed", seed.is_number_unsigned() || (seed.is_number_integer() && seed.get<long long>() >= 0),
                "a non-negative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("time")) c.time = expect_type(j, "time", j.at("time").is_number(), "a number").at("time").get<double>();
  integer("samples", c.samples, 1);
  integer("bound", c.bound, 1);
  if (j.contains("expect")) {
    std::string e;
    str("expect", e);
    c.expect = e;
  }
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    if (!t.is_object()) throw ArgumentError("config: 'tolerances' must be an object");
    for (const auto& [k, v] : t.items()) {
      if (!v.is_number() || v.get<double>() <= 0.0) throw ArgumentError("config: tolerance '" + k + "' must be > 0");
      if (k == "kind") c.tol.kind = v.get<double>();
      else if (k == "cluster") c.tol.cluster = v.get<double>();
      else if (k == "ergodicity") c.tol.ergodicity = v.get<double>();
      else throw ArgumentError("config: unknown tolerance '" + k + "'");
    }
  }
  if (j.contains("formats")) {
    const json& f = j.at("formats");
    if (!f.is_array()) throw ArgumentError("config: 'formats' must be an array");
    c.formats.clear();
    for (const auto& v : f) {
      if (!v.is_string()) throw ArgumentError("config: formats must be strings");
      const std::string s = v.get<std::string>();
      if (s != "json" && s != "dot" && s != "csv") throw ArgumentError("config: unknown format '" + s + "'");
      c.formats.insert(s);
    }
  }
  if (j.contains("full")) c.full = expect_type(j, "full", j.at("full").is_boolean(), "a boolean").at("full").get<bool>();
  return c;
}

RunResult run(const RunConfig& config) {
  RunResult r;
  r.expected = config.expect.value_or(default_expectation(config.experiment));
  json envelope = {{"experiment", to_string(config.experiment)},
                   {"name", config.name},
                   {"seed", config.seed},
                   {"expected", r.expected}};
  try {
    const LoadedModel m = load_model(config.model.value_or(default_model(config.experiment)));
    Outcome o = dispatch(config, m);
    r.verdict = o.verdict;
    const bool pass = r.expected == "any" || r.expected == r.verdict;
    r.exit_code = pass ? kExitPass : kExitMismatch;
    envelope["model"] = model_summary(m);
    envelope["verdict"] = r.verdict;
    envelope["pass"] = pass;
    envelope["metrics"] = o.metrics;
    envelope["result"] = std::move(o.result);
    envelope["timestamp"] = timestamp_now();
    r.report = envelope;
    r.artifacts = std::move(o.extra);
    r.artifacts["json"] = dump(r.report);
    if (!config.output.empty()) write_artifacts(config.output, config.formats, r.artifacts);
  } catch (const CapacityError& e) {
    r.error = std::string("capacity error: ") + e.what();
  } catch (const KindError& e) {
    r.error = std::string("kind check failed: ") + e.what();
  } catch (const ArgumentError& e) {
    r.error = std::string("invalid input: ") + e.what();
  } catch (const ConsistencyError& e) {
    r.error = std::string("internal consistency failure: ") + e.what();
  } catch (const IoError& e) {
    r.error = std::string("I/O error: ") + e.what();
  } catch (const std::exception& e) {
    r.error = std::string("error: ") + e.what();
  }
  if (!r.error.empty()) {
    r.exit_code = kExitError;
    r.verdict = "Error";
    envelope["verdict"] = r.verdict;
    envelope["pass"] = false;
    envelope["error"] = r.error;
    r.report = envelope;
  }
  return r;
}

namespace {

int severity(int code) { return code == kExitError ? 2 : code == kExitMismatch ? 1 : 0; }

}  // namespace

BundleResult report_bundle(const std::vector<RunConfig>& configs, const std::string& bundle_name, int jobs,
                           const std::string& output) {
  BundleResult b;
  b.runs.resize(configs.size());
  std::vector<RunConfig> prepared = configs;
  std::set<std::string> names;
  for (auto& c : prepared) {
    if (!names.insert(c.name).second) throw ArgumentError("bundle: duplicate run name '" + c.name + "'");
    if (!output.empty()) c.output = (std::filesystem::path(output) / c.name).string();
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < prepared.size(); i = next++) b.runs[i] = run(prepared[i]);
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(prepared.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  json runs = json::array();
  int counts[3] = {0, 0, 0};
  for (std::size_t i = 0; i < prepared.size(); ++i) {
    const RunResult& r = b.runs[i];
    json entry = {{"name", prepared[i].name},
                  {"experiment", to_string(prepared[i].experiment)},
                  {"verdict", r.verdict},
                  {"expected", r.expected},
                  {"exit", r.exit_code},
                  {"metrics", r.report.value("metrics", json::object())}};
    if (!r.error.empty()) entry["error"] = r.error;
    runs.push_back(std::move(entry));
    ++counts[severity(r.exit_code)];
    if (severity(r.exit_code) > severity(b.exit_code)) b.exit_code = r.exit_code;
  }
  b.summary = {{"bundle", bundle_name},
               {"runs", std::move(runs)},
               {"counts", {{"pass", counts[0]}, {"mismatch", counts[1]}, {"error", counts[2]}}},
               {"exit", b.exit_code},
               {"timestamp", timestamp_now()}};
  if (!output.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(output, ec);
    if (ec) throw IoError("cannot create directory '" + output + "': " + ec.message());
    write_atomic(std::filesystem::path(output) / "summary.json", dump(b.summary));
  }
  return b;
}

}  // namespace qslab::cli
