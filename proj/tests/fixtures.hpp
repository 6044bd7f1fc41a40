#pragma once

// Structures and models shared by the unit and acceptance tests.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "qslab/espace.hpp"
#include "qslab/hilbert.hpp"
#include "qslab/kstruct.hpp"
#include "qslab/models.hpp"
#include "qslab/random.hpp"

namespace fixtures {

inline qslab::KStructure trine_povm() {
  std::vector<qslab::HermitianOp> effects;
  for (int k = 0; k < 3; ++k) {
    const double th = 2.0 * std::numbers::pi * k / 3.0;
    qslab::Vector v(2);
    v << std::cos(th / 2.0), std::sin(th / 2.0);
    effects.push_back(qslab::HermitianOp::projector(qslab::Ket::normalized(v)) * (2.0 / 3.0));
  }
  return qslab::make_povm_structure(effects);
}

inline qslab::KStructure random_basis(int dim, std::uint64_t seed) {
  const qslab::UnitaryOp u = qslab::haar_unitary(dim, seed);
  std::vector<qslab::Ket> kets;
  for (int i = 0; i < dim; ++i) kets.push_back(qslab::Ket::normalized(u.matrix().col(i)));
  return qslab::make_basis_structure(kets);
}

/// Spectral projectors of three free spins in a field: ranks 1, 3, 3, 1.
inline qslab::KStructure spin_pvm() {
  const qslab::SpectralDecomp sd =
      qslab::spectral_decompose(qslab::build_ising_chain(3, 0.0, 1.0, false).hamiltonian);
  return qslab::make_pvm_structure(sd.projectors);
}

struct NamedStructure {
  std::string name;
  qslab::KStructure structure;
};

/// One instance of every shipped structure kind, all at dimension <= 16.
inline std::vector<NamedStructure> all_kinds() {
  return {
      {"basis", random_basis(8, 101)},
      {"pvm", spin_pvm()},
      {"trine-povm", trine_povm()},
      {"tps", qslab::make_tps_structure(qslab::Tps::canonical({2, 3, 2}), 2, 103)},
      {"occupation", qslab::occupation_structure(qslab::Tps::qubits(4))},
      {"coherent-frame", qslab::coherent_frame_structure(qslab::coherent_family(8))},
  };
}

struct NamedModel {
  std::string name;
  qslab::Model model;
};

inline qslab::Model nrqm_2_3() {
  qslab::NrqmLatticeSpec spec;
  spec.particles = 2;
  spec.sites = 3;
  spec.masses = {1.0, 2.0};
  spec.potential = {qslab::PotentialKind::CoulombRegularized, 0.5};
  return qslab::build_nrqm_lattice(spec);
}

inline std::vector<NamedModel> model_suite() {
  return {
      {"ising3", qslab::build_ising_chain(3, 1.0, 1.0, false)},
      {"ising4-periodic", qslab::build_ising_chain(4, 1.0, 0.7, true)},
      {"nrqm-2-3", nrqm_2_3()},
      {"zurek2", qslab::build_zurek(qslab::ZurekSpec{{1.0, 0.7}, 1.0})},
      {"random-spectrum", {qslab::build_random_spectrum(std::vector<double>{-1.0, 0.2, 0.9, 2.5, 3.0}, 9),
                           qslab::Tps::canonical({5})}},
  };
}

}  // namespace fixtures
