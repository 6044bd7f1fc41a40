#pragma once

// Operators commuting with a Hamiltonian: the commutant algebra, sampled
// commutant unitaries (symmetry witnesses), and time-orbit diagnostics.

#include <cstdint>
#include <optional>
#include <vector>

#include "qslab/hilbert.hpp"

namespace qslab {

/// Hermitian basis of the real vector space {X = X^dagger : [X, H] = 0}.
struct CommutantBasis {
  int dim_total = 0;  // sum of m_i^2 over clustered eigenspaces
  std::vector<HermitianOp> generators;
  SpectralDecomp source_spectrum;
};

CommutantBasis commutant_basis(const HermitianOp& h, double cluster_tol = kClusterTol);

/// Parameters of the grid used to decide "off the time orbit".
struct TimeOrbitGrid {
  double t_max = 100.0;
  int points = 100000;
  double threshold = 1e-3;
  int max_attempts = 64;
};

struct CommutantSample {
  std::optional<UnitaryOp> unitary;  // empty when not available
  bool available = true;
  double orbit_distance = 0.0;       // distance to the time-orbit grid (0 if not computed)
  int attempts = 0;
};

/// exp(-i G) for G a seeded Gaussian combination of the basis generators.
/// With exclude_time_orbit, resamples until the phase-invariant distance to
/// {evolve(H, t)} on the grid exceeds grid.threshold; reports unavailability
/// instead of falling back.
CommutantSample sample_commutant_unitary(const CommutantBasis& cb, std::uint64_t seed,
                                         bool exclude_time_orbit, const TimeOrbitGrid& grid = {});

/// U_{t,t0} = exp(-i h (t - t0) / hbar).
UnitaryOp time_evolution(const HermitianOp& h, double t, double t0, double hbar = 1.0);

enum class ErgodicityVerdict { NotErgodicDegenerate, NotErgodicRationalRelation, ErgodicAtBound };

const char* to_string(ErgodicityVerdict v);

struct ErgodicityReport {
  bool degenerate = false;
  double min_gap = 0.0;
  RealVector eigenvalues;                      // distinct clustered eigenvalues searched
  std::vector<std::vector<int>> relations_found;
  int coefficient_bound = 0;
  double tolerance = 0.0;
  ErgodicityVerdict verdict = ErgodicityVerdict::ErgodicAtBound;
};

inline constexpr int kErgodicityMaxDim = 8;
inline constexpr double kErgodicityMaxCandidates = 5e8;

/// Exhaustive integer-relation search among the distinct eigenvalues:
/// all nonzero k with sum(k) = 0, max|k_i| <= bound and |sum k_i lambda_i| < tol.
/// Verdict priority: degenerate > rational relation > ergodic at bound.
ErgodicityReport ergodicity_report(const HermitianOp& h, int coefficient_bound, double tolerance,
                                   double cluster_tol = kClusterTol);

struct OrbitFit {
  double t_best = 0.0;
  double distance = 0.0;
};

/// Phase-invariant distance min_phi ||e^{i phi} U - T||_F.
double phase_invariant_distance(const UnitaryOp& u, const UnitaryOp& target);

/// Scans t over a uniform grid of `steps` points on [-t_max, t_max] (hbar = 1).
OrbitFit orbit_approximation(const HermitianOp& h, const UnitaryOp& target, double t_max, long long steps);

}  // namespace qslab
