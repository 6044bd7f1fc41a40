#pragma once

// Spin-bath decoherence traces, the separable two-qubit factorization
// family, and the dependence of subsystem coherence on the chosen TPS.

#include <cstdint>
#include <optional>
#include <vector>

#include "qslab/hilbert.hpp"
#include "qslab/models.hpp"

namespace qslab {

struct DecoherenceTrace {
  RealVector times;
  RealVector offdiag;  // |rho_S(t)_01| from exact evolution
  RealVector oracle;   // closed form
  RealVector populations;  // rho_S(t)_00, conserved by the model
  double max_dev = 0.0;
};

/// Factor states of a fully product ket; throws ArgumentError when psi is
/// entangled across any factor (single-factor purity below 1 - 1e-10).
std::vector<Ket> product_factors(const Ket& psi, const Tps& tps);

/// Closed form: |a b*| * prod_k | |alpha_k|^2 e^{-2 i g_k t / hbar} + |beta_k|^2 e^{2 i g_k t / hbar} |
/// for system a|0> + b|1> and environment spins alpha_k|0> + beta_k|1>.
/// Reduces to |a b| prod |cos(2 g_k t / hbar)| for |+> environments.
double zurek_coherence_oracle(const ZurekSpec& spec, const Ket& system, std::span<const Ket> environment, double t);

DecoherenceTrace decoherence_trace(const ZurekSpec& spec, const Ket& psi0, std::span<const double> times);

/// (a|0> + b|1>) (x) |+>^N.
Ket zurek_initial_state(const ZurekSpec& spec, cplx a, cplx b);

enum class Completion { Random, Canonical };

/// 2 (x) 2 factorizations in which psi is the product |0_S 0_E>: the basis
/// (psi, b1, b2, b3) is identified with |00>, |01>, |10>, |11>.
std::vector<Tps> separable_factorization_family(const Ket& psi, std::uint64_t seed, int count,
                                                Completion completion = Completion::Random);

/// Schmidt coefficients (descending) of psi across the first factor vs the rest.
RealVector schmidt_coefficients(const Ket& psi, const Tps& tps);

struct PointerReport {
  double offdiag_canonical = 0.0;
  double offdiag_rival = 0.0;
  double gap = 0.0;
  double time = 0.0;
};

/// |rho_S(t)_01| in the canonical TPS and in the TPS whose iso is composed
/// with a sampled commutant unitary of the Zurek Hamiltonian.
PointerReport pointer_dependence(const ZurekSpec& spec, const Ket& psi0, std::uint64_t witness_seed, double t);
PointerReport pointer_dependence(const ZurekSpec& spec, const Ket& psi0, const UnitaryOp& witness, double t);

/// t = pi / (4 max_k |g_k|).
double decohered_time(const ZurekSpec& spec);

}  // namespace qslab
