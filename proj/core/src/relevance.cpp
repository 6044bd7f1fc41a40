#include "qslab/relevance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qslab/errors.hpp"
#include "qslab/espace.hpp"
#include "qslab/random.hpp"

namespace qslab {

Distinguishability distinguishes(const HermitianOp& a, const Ket& psi, const Ket& psi2, double tol,
                                 double cluster_tol) {
  if (a.dim() != psi.dim() || a.dim() != psi2.dim()) throw ArgumentError("distinguishes: dimension mismatch");
  const SpectralDecomp sd = spectral_decompose(a, cluster_tol);
  Distinguishability out;
  for (const auto& p : sd.projectors) {
    const double w1 = (p.matrix() * psi.amplitudes()).squaredNorm();
    const double w2 = (p.matrix() * psi2.amplitudes()).squaredNorm();
    const double gap = std::abs(w1 - w2);
    out.gaps.push_back(gap);
    if (gap > tol) out.distinguishes = true;
  }
  return out;
}

RealVector structure_invariant(const KStructure& s, const Ket& psi, const InvariantOptions& opts) {
  if (s.dim() != psi.dim()) throw ArgumentError("structure_invariant: dimension mismatch");
  RealVector out;
  out.reserve(s.ops.size());
  for (const auto& a : s.ops) out.push_back(expectation(a, psi).real());
  std::sort(out.begin(), out.end());
  if (opts.pairwise_moments) {
    std::vector<Vector> images;
    for (const auto& a : s.ops) images.push_back(a.matrix() * psi.amplitudes());
    RealVector moments;
    for (std::size_t i = 0; i < images.size(); ++i)
      for (std::size_t j = i; j < images.size(); ++j) moments.push_back(images[i].dot(images[j]).real());
    std::sort(moments.begin(), moments.end());
    out.insert(out.end(), moments.begin(), moments.end());
  }
  return out;
}

double max_abs_gap(const RealVector& a, const RealVector& b) {
  if (a.size() != b.size()) throw ArgumentError("max_abs_gap: length mismatch");
  double g = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) g = std::max(g, std::abs(a[i] - b[i]));
  return g;
}

namespace {

void require_commutes(const HermitianOp& h, const UnitaryOp& w, const char* what) {
  if (h.dim() != w.dim()) throw ArgumentError(std::string(what) + ": dimension mismatch");
  if (commutator(h.matrix(), w.matrix()).norm() >= 1e-8)
    throw ArgumentError(std::string(what) + ": witness does not commute with the Hamiltonian");
}

}  // namespace

KStructure rival_structure(const HermitianOp& h, const KStructure& s, const UnitaryOp& witness) {
  require_commutes(h, witness, "rival_structure");
  return transform_structure(s, witness);
}

KStructure rival_structure(const HermitianOp& h, const StructureBuilder& builder, const Ket& psi,
                           const UnitaryOp& witness) {
  require_commutes(h, witness, "rival_structure");
  const Ket transported = witness.adjoint().apply(psi);
  KStructure base = builder(transported);
  base.state_dependent = true;
  base.state_hash = state_hash(transported);
  return transform_structure(base, witness);
}

std::string WitnessClass::to_string() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case WitnessKind::TimeEvolution:
      os << "time:" << parameter;
      break;
    case WitnessKind::CommutantGeneric:
      os << "commutant:" << seed;
      break;
    case WitnessKind::CommutantOffOrbit:
      os << "commutant-offorbit:" << seed;
      break;
    case WitnessKind::GlobalPhase:
      os << "phase:" << parameter;
      break;
    case WitnessKind::Identity:
      os << "identity";
      break;
  }
  return os.str();
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::DistinctStructures:
      return "DistinctStructures";
    case Verdict::EquivalentUnderGP:
      return "EquivalentUnderGP";
    case Verdict::Inconclusive:
      return "Inconclusive";
    case Verdict::NotApplicable:
      return "NotApplicable";
  }
  return "?";
}

Verdict classify_gap(double gap, double tol) {
  if (gap > 10.0 * tol) return Verdict::DistinctStructures;
  if (gap <= tol) return Verdict::EquivalentUnderGP;
  return Verdict::Inconclusive;
}

Certificate certify_nonuniqueness(const HermitianOp& h, const KStructure& s, const Ket& psi, const UnitaryOp& witness,
                                  const WitnessClass& witness_class, const std::string& model_id) {
  require_commutes(h, witness, "certify_nonuniqueness");
  if (psi.dim() != h.dim()) throw ArgumentError("certify_nonuniqueness: state dimension mismatch");
  Certificate c;
  c.model_id = model_id;
  c.structure_kind = s.kind.conditions;
  c.witness = witness;
  c.witness_class = witness_class;
  c.tolerance = s.kind.tolerance;
  c.kind_check_original = check_kind(s);
  if (!c.kind_check_original.all_passed())
    throw ArgumentError("certify_nonuniqueness: structure does not pass its kind check");

  const KStructure rival = rival_structure(h, s, witness);
  c.kind_check_rival = check_kind(rival);
  c.invariant_original = structure_invariant(s, psi);
  c.invariant_rival = structure_invariant(rival, psi);
  c.max_invariant_gap = max_abs_gap(c.invariant_original, c.invariant_rival);
  if (!c.kind_check_rival.all_passed()) {
    c.verdict = Verdict::NotApplicable;
    c.note = "rival structure failed its kind check";
  } else {
    c.verdict = classify_gap(c.max_invariant_gap, c.tolerance);
  }
  return c;
}

TimeTravelResult passive_time_travel(const HermitianOp& h, const KStructure& basis, const Ket& psi0, double t,
                                     double hbar) {
  const int d = h.dim();
  if (basis.dim() != d || psi0.dim() != d) throw ArgumentError("passive_time_travel: dimension mismatch");
  if (static_cast<int>(basis.size()) != d) throw ArgumentError("passive_time_travel: basis must have dim elements");
  KStructure pvm = basis;
  pvm.kind.conditions = {{ConditionTag::Projector}, {ConditionTag::PairwiseOrthogonal},
                         {ConditionTag::ResolutionOfIdentity}, {ConditionTag::UnitTrace}};
  if (!check_kind(pvm).all_passed()) throw ArgumentError("passive_time_travel: basis is not a rank-1 PVM");

  const std::vector<Ket> e = basis_vectors(basis);

  // Route 1: transport the basis by U and read psi0 in it.
  const UnitaryOp u = evolve(h, t, hbar);
  const KStructure rival = transform_structure(basis, u);
  TimeTravelResult out;
  double residual = 0.0;
  for (int a = 0; a < d; ++a) {
    const Vector f = u.matrix() * e[a].amplitudes();
    out.rival_components.push_back(f.dot(psi0.amplitudes()));
    residual = std::max(residual, (f * f.adjoint() - rival.ops[a].matrix()).cwiseAbs().maxCoeff());
  }

  // Route 2: evolve the state backwards and read it in the original basis.
  const Ket back = evolve(h, -t, hbar).apply(psi0);
  for (int a = 0; a < d; ++a) out.transported_components.push_back(inner(e[a], back));

  for (int a = 0; a < d; ++a)
    residual = std::max(residual, std::abs(out.rival_components[a] - out.transported_components[a]));
  out.residual = residual;
  return out;
}

AlternativeRealityResult alternative_reality(const HermitianOp& h, const KStructure& basis, const Ket& psi0,
                                             const UnitaryOp& witness, const std::string& model_id) {
  AlternativeRealityResult out;
  out.certificate = certify_nonuniqueness(h, basis, psi0, witness, {WitnessKind::CommutantOffOrbit}, model_id);
  const Ket alt = witness.adjoint().apply(psi0);
  const Distinguishability dist = distinguishes(h, psi0, alt, 1e-9);
  out.hamiltonian_distinguishes = dist.distinguishes;
  out.hamiltonian_gaps = dist.gaps;
  return out;
}

AlternativeRealityResult alternative_reality(const HermitianOp& h, const KStructure& basis, const Ket& psi0,
                                             std::uint64_t seed, const std::string& model_id) {
  const CommutantBasis cb = commutant_basis(h);
  CommutantSample sample = sample_commutant_unitary(cb, seed, true);
  if (!sample.available) {
    AlternativeRealityResult out;
    out.certificate.model_id = model_id;
    out.certificate.structure_kind = basis.kind.conditions;
    out.certificate.witness_class = {WitnessKind::CommutantOffOrbit, 0.0, seed};
    out.certificate.tolerance = basis.kind.tolerance;
    out.certificate.kind_check_original = check_kind(basis);
    out.certificate.verdict = Verdict::NotApplicable;
    out.certificate.note = "commutant has no samples off the time orbit";
    out.sample = std::move(sample);
    return out;
  }
  AlternativeRealityResult out = alternative_reality(h, basis, psi0, *sample.unitary, model_id);
  out.certificate.witness_class = {WitnessKind::CommutantOffOrbit, 0.0, seed};
  out.sample = std::move(sample);
  return out;
}

AlternativeLaws alternative_laws(const HermitianOp& h, const Tps& tps, const UnitaryOp& v) {
  if (h.dim() != tps.total_dim() || v.dim() != h.dim()) throw ArgumentError("alternative_laws: dimension mismatch");
  const HermitianOp conj = conjugate(h, v);
  AlternativeLaws out;
  out.d_original = locality_degree(h, tps);
  out.d_conjugated = locality_degree(conj, tps);
  out.spectrum_gap = max_abs_gap(eigenvalues(h), eigenvalues(conj));
  return out;
}

AlternativeLaws alternative_laws(const HermitianOp& h, const Tps& tps, std::uint64_t seed) {
  return alternative_laws(h, tps, haar_unitary(h.dim(), seed));
}

}  // namespace qslab
