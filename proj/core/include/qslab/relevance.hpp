#pragma once

// Distinguishability, invariant profiles, and the rival-structure
// construction behind the non-uniqueness certificates.
//
// Convention: a witness S transports a structure as S[s] = S s S^dagger.
// The rival structure then sees |psi> exactly as the original sees
// S^{-1}|psi>:  I(S[s], psi) = I(s, S^{-1} psi).

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qslab/commutant.hpp"
#include "qslab/hilbert.hpp"
#include "qslab/kstruct.hpp"

namespace qslab {

struct Distinguishability {
  bool distinguishes = false;
  RealVector gaps;  // |p_i - p'_i| per clustered eigenspace, ascending eigenvalue order
};

/// Compares eigenspace projection weights of psi and psi2 under a.
Distinguishability distinguishes(const HermitianOp& a, const Ket& psi, const Ket& psi2, double tol = 1e-9,
                                 double cluster_tol = kClusterTol);

struct InvariantOptions {
  /// Append the sorted symmetrized second moments Re<psi|A_a A_b|psi>, a <= b.
  bool pairwise_moments = false;
};

/// Sorted expectation values <psi|A_a|psi>.
RealVector structure_invariant(const KStructure& s, const Ket& psi, const InvariantOptions& opts = {});

/// Largest absolute entrywise difference of two equal-length vectors.
double max_abs_gap(const RealVector& a, const RealVector& b);

/// Rival of a state-independent structure: witness[s]. Throws ArgumentError
/// unless ||[witness, h]||_F < 1e-8.
KStructure rival_structure(const HermitianOp& h, const KStructure& s, const UnitaryOp& witness);

/// State-dependent form: witness[builder(witness^{-1} psi)].
using StructureBuilder = std::function<KStructure(const Ket&)>;
KStructure rival_structure(const HermitianOp& h, const StructureBuilder& builder, const Ket& psi,
                           const UnitaryOp& witness);

enum class WitnessKind { TimeEvolution, CommutantGeneric, CommutantOffOrbit, GlobalPhase, Identity };

struct WitnessClass {
  WitnessKind kind = WitnessKind::Identity;
  double parameter = 0.0;   // t for time evolution, theta for phase
  std::uint64_t seed = 0;   // for commutant samples

  /// "time:1", "commutant:7", "commutant-offorbit:7", "phase:0.3", "identity".
  std::string to_string() const;
};

enum class Verdict { DistinctStructures, EquivalentUnderGP, Inconclusive, NotApplicable };

const char* to_string(Verdict v);

struct Certificate {
  std::string model_id;
  std::vector<Condition> structure_kind;
  std::optional<UnitaryOp> witness;
  WitnessClass witness_class;
  ConditionReport kind_check_original;
  ConditionReport kind_check_rival;
  RealVector invariant_original;
  RealVector invariant_rival;
  double max_invariant_gap = 0.0;
  double tolerance = 0.0;
  Verdict verdict = Verdict::NotApplicable;
  std::string note;
};

/// Verdict from a gap: Distinct above 10 tol, Equivalent at or below tol,
/// Inconclusive in between.
Verdict classify_gap(double gap, double tol);

Certificate certify_nonuniqueness(const HermitianOp& h, const KStructure& s, const Ket& psi, const UnitaryOp& witness,
                                  const WitnessClass& witness_class = {}, const std::string& model_id = "");

struct TimeTravelResult {
  double residual = 0.0;
  std::vector<cplx> rival_components;        // <U e_a | psi0>
  std::vector<cplx> transported_components;  // <e_a | U^{-1} psi0>
};

/// Components of psi0 in the basis transported by U = evolve(h, t) against
/// components of evolve(h, -t) psi0 in the original basis.
TimeTravelResult passive_time_travel(const HermitianOp& h, const KStructure& basis, const Ket& psi0, double t,
                                     double hbar = 1.0);

struct AlternativeRealityResult {
  Certificate certificate;
  bool hamiltonian_distinguishes = false;  // must be false
  RealVector hamiltonian_gaps;
  CommutantSample sample;
};

/// Witness sampled off the time orbit of h (seeded).
AlternativeRealityResult alternative_reality(const HermitianOp& h, const KStructure& basis, const Ket& psi0,
                                             std::uint64_t seed, const std::string& model_id = "");

/// Same, with the witness supplied by the caller.
AlternativeRealityResult alternative_reality(const HermitianOp& h, const KStructure& basis, const Ket& psi0,
                                             const UnitaryOp& witness, const std::string& model_id = "");

struct AlternativeLaws {
  int d_original = 0;
  int d_conjugated = 0;
  double spectrum_gap = 0.0;
};

/// Locality degree of h and of V h V^dagger (V seeded Haar-like) in the same tps.
AlternativeLaws alternative_laws(const HermitianOp& h, const Tps& tps, std::uint64_t seed);
AlternativeLaws alternative_laws(const HermitianOp& h, const Tps& tps, const UnitaryOp& v);

}  // namespace qslab
