#pragma once

// Hamiltonian builders for the demonstration suite.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qslab/hilbert.hpp"

namespace qslab {

enum class PotentialKind { CoulombRegularized, Harmonic, Contact };

struct Potential {
  PotentialKind kind = PotentialKind::Contact;
  double strength = 0.0;

  /// Pair energy at integer ring distance d.
  double operator()(int d) const;
};

/// Distinguishable particles hopping on a periodic 1-D ring.
struct NrqmLatticeSpec {
  int particles = 1;
  int sites = 2;
  std::vector<double> masses{1.0};
  double hbar = 1.0;
  Potential potential;
};

/// Spin-1/2 system coupled through sigma_z (x) sigma_z to N environment spins.
struct ZurekSpec {
  std::vector<double> couplings{1.0};
  double hbar = 1.0;

  int env_count() const { return static_cast<int>(couplings.size()); }
};

struct Model {
  HermitianOp hamiltonian;
  Tps tps;
};

/// Minimal-image distance on a ring of L sites.
int ring_distance(int a, int b, int sites);

Model build_nrqm_lattice(const NrqmLatticeSpec& spec);
Model build_ising_chain(int n, double coupling, double field, bool periodic);
Model build_zurek(const ZurekSpec& spec);
HermitianOp build_random_spectrum(std::span<const double> eigenvalues, std::uint64_t seed);

/// Kinetic part of the NRQM lattice model alone (for the symmetry checks).
HermitianOp nrqm_kinetic(const NrqmLatticeSpec& spec);
/// Potential part alone; diagonal in the position basis.
HermitianOp nrqm_potential(const NrqmLatticeSpec& spec);

/// A model built from a JSON document {"model": name, "params": {...}}.
struct LoadedModel {
  std::string id;
  std::string kind;
  Model model;
  std::optional<ZurekSpec> zurek;  // set for "zurek" models
  double hbar = 1.0;
};

/// Known names: nrqm_lattice, ising_chain, zurek, random_spectrum, diagonal.
/// Throws ArgumentError on schema violations, CapacityError on size limits.
LoadedModel load_model(const nlohmann::json& doc);

}  // namespace qslab
