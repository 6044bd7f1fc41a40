#pragma once

// Emergent-space tooling: product-operator expansion relative to a TPS,
// d-locality, interaction graphs, entropies, mutual-information distances
// and lattice coherent-state families.

#include <limits>
#include <string>
#include <vector>

#include "qslab/hilbert.hpp"
#include "qslab/kstruct.hpp"

namespace qslab {

/// Trace-orthogonal Hermitian basis of a d-dimensional factor, normalized so
/// tr(B_i B_j) = d delta_ij. Index 0 is the identity. Pauli I, X, Y, Z for
/// d = 2; identity plus generalized Gell-Mann matrices otherwise.
struct LocalBasis {
  std::vector<Matrix> ops;
  std::vector<std::string> labels;
};

LocalBasis local_operator_basis(int d);

struct ProductTerm {
  cplx coefficient;
  std::vector<int> factor_ops;  // index into the factor's LocalBasis, 0 = identity

  int weight() const;  // number of non-identity factors
};

struct ProductExpansion {
  std::vector<ProductTerm> terms;  // nonzero terms in lexicographic index order
  Tps tps;

  /// Label string such as "X.I.Z".
  std::string term_label(const ProductTerm& t) const;
  /// Sum of terms mapped back through tps.iso.
  HermitianOp resum() const;
};

ProductExpansion pauli_expand(const HermitianOp& h, const Tps& tps);

inline constexpr double kCoeffFloor = 1e-10;

int locality_degree(const HermitianOp& h, const Tps& tps, double coeff_floor = kCoeffFloor);

struct GraphEdge {
  int a = 0;
  int b = 0;
  double weight = 0.0;

  bool operator==(const GraphEdge&) const = default;
};

struct SpaceGraph {
  int vertices = 0;
  std::vector<GraphEdge> edges;       // a < b, sorted
  std::vector<RealVector> mi_matrix;  // empty when built from interactions only
  std::vector<RealVector> dist_matrix;
  double i_max = 0.0;
  double mi_floor = 0.0;

  /// dist nonincreasing in mi over all off-diagonal pairs.
  bool distance_monotone() const;
};

SpaceGraph interaction_graph(const HermitianOp& h, const Tps& tps, double coeff_floor = kCoeffFloor);

/// -sum lambda ln lambda (nats) over eigenvalues > 1e-12.
double vn_entropy(const HermitianOp& rho);

/// I(R1:R2) = S_R1 + S_R2 - S_R1R2 for |psi><psi| in tps.
double mutual_information(const Ket& psi, const Tps& tps, std::span<const int> r1, std::span<const int> r2);

inline constexpr double kMiFloor = 1e-8;
inline constexpr double kInfiniteDistance = std::numeric_limits<double>::infinity();

/// Interaction edges plus pairwise single-factor mutual informations and the
/// distances d = -ln(I / I_max) (infinite below mi_floor, 0 on the diagonal).
SpaceGraph space_graph(const HermitianOp& h, const Tps& tps, const Ket& psi, double mi_floor = kMiFloor);

struct CoherentState {
  int q = 0;
  int k = 0;  // momentum index, p = 2 pi hbar k / L
  Ket ket;
};

/// L^2 discretized squeezed coherent states on a ring of L sites, ordered
/// by (q, k).
std::vector<CoherentState> coherent_family(int sites, double hbar = 1.0);

/// witness |q,p> for every member.
std::vector<CoherentState> rival_coherent_family(const std::vector<CoherentState>& family, const UnitaryOp& witness);

/// Sum_{q,p} |q,p><q,p|.
HermitianOp frame_operator(const std::vector<CoherentState>& family);

/// || (d / L^2) F - c I ||_2 with c the mean diagonal of (d / L^2) F.
struct FrameCheck {
  double c = 0.0;
  double residual = 0.0;
};
FrameCheck frame_check(const std::vector<CoherentState>& family);

/// Exact POVM F^{-1/2} |q,p><q,p| F^{-1/2}; kind {PositiveSemidefinite, ResolutionOfIdentity}.
KStructure coherent_frame_structure(const std::vector<CoherentState>& family);

}  // namespace qslab
