#pragma once

// K-structures: labeled families of Hermitian operators together with the
// unitarily invariant conditions ("kind") they must satisfy.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qslab/errors.hpp"
#include "qslab/hilbert.hpp"

namespace qslab {

enum class ConditionTag {
  Projector,             // A^2 = A
  PairwiseOrthogonal,    // A_a A_b = 0 for a != b
  ResolutionOfIdentity,  // sum_a A_a = I
  PositiveSemidefinite,  // A_a >= 0
  UnitTrace,             // tr A_a = 1
  MutualCommutation,     // [A_a, A_b] = 0 across distinct groups
  DLocal,                // every A_a is d-local in the structure's TPS frame
};

const char* to_string(ConditionTag tag);
ConditionTag condition_tag_from_string(const std::string& name);

struct Condition {
  ConditionTag tag;
  int locality = 0;  // d, only meaningful for DLocal

  bool operator==(const Condition&) const = default;
  std::string name() const;  // "DLocal(2)" for parametrized tags
};

struct KindSpec {
  std::vector<Condition> conditions;
  double tolerance = 1e-9;

  bool has(ConditionTag tag) const;
};

struct ConditionResult {
  Condition condition;
  double residual = 0.0;  // operator-norm residual; for PSD the amount below zero
  bool passed = false;
};

struct ConditionReport {
  std::vector<ConditionResult> results;
  double tolerance = 0.0;

  bool all_passed() const;
  const ConditionResult* find(ConditionTag tag) const;
};

struct KStructure {
  std::vector<std::string> labels;
  std::vector<HermitianOp> ops;
  KindSpec kind;
  bool state_dependent = false;
  std::optional<std::uint64_t> state_hash;
  /// MutualCommutation is required only between operators of different
  /// groups; empty means every operator is its own group.
  std::vector<int> groups;
  /// TPS the structure refers to (DLocal, occupation, TPS structures). It is
  /// transformed together with the operators.
  std::optional<Tps> frame;

  int dim() const;
  std::size_t size() const { return ops.size(); }
};

ConditionReport check_kind(const KStructure& s);

/// Construction-time kind failure; carries the failing report.
class KindError : public ArgumentError {
 public:
  KindError(const std::string& what, ConditionReport report)
      : ArgumentError(what), report_(std::move(report)) {}
  const ConditionReport& report() const { return report_; }

 private:
  ConditionReport report_;
};

/// Conjugates every operator (and the frame) by u. Throws ConsistencyError if
/// a passing structure stops passing.
KStructure transform_structure(const KStructure& s, const UnitaryOp& u);

/// Rank-1 projectors onto an orthonormal basis (count must equal dim).
KStructure make_basis_structure(std::span<const Ket> vectors);
KStructure computational_basis_structure(int dim);

/// Vectors recovered from a rank-1 projector structure, phase-fixed so the
/// largest-magnitude component is real and positive.
std::vector<Ket> basis_vectors(const KStructure& s);

/// Throws ArgumentError (message lists failing residuals) on condition failure.
KStructure make_povm_structure(std::span<const HermitianOp> effects);
KStructure make_pvm_structure(std::span<const HermitianOp> effects);

/// ops_per_factor seeded random Hermitian operators per factor, embedded and
/// pushed through tps.iso; kind {MutualCommutation, DLocal(1)}.
KStructure make_tps_structure(const Tps& tps, int ops_per_factor, std::uint64_t seed);

/// Hard-core occupation numbers n_x = (I - sz_x) / 2, one per qubit factor.
KStructure occupation_structure(const Tps& tps);

/// Per factor and per reference state the sorted reduced-density spectrum,
/// followed by the sorted interaction-weight profile of h in tps.
RealVector canonical_tps_invariants(const Tps& tps, std::span<const Ket> reference_states, const HermitianOp& h);

/// Hash of a state used to tag state-dependent structures.
std::uint64_t state_hash(const Ket& psi);

}  // namespace qslab
