#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "qslab/commutant.hpp"
#include "qslab/decoherence.hpp"
#include "qslab/errors.hpp"
#include "qslab/espace.hpp"
#include "qslab/random.hpp"

using namespace qslab;

namespace {

Ket ket(std::initializer_list<cplx> v) {
  Vector a(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (cplx x : v) a(i++) = x;
  return Ket::normalized(a);
}

Ket ghz3() {
  Vector v = Vector::Zero(8);
  v(0) = v(7) = 1.0;
  return Ket::normalized(v);
}

std::map<std::string, cplx> terms_by_label(const ProductExpansion& e) {
  std::map<std::string, cplx> out;
  for (const auto& t : e.terms) out[e.term_label(t)] = t.coefficient;
  return out;
}

std::vector<std::pair<int, int>> edge_pairs(const SpaceGraph& g) {
  std::vector<std::pair<int, int>> out;
  for (const auto& e : g.edges) out.emplace_back(e.a, e.b);
  return out;
}

UnitaryOp local_unitaries(const std::vector<int>& dims, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<UnitaryOp> us;
  for (int d : dims) us.push_back(haar_unitary(d, rng));
  return tensor_product(us);
}

}  // namespace

// ---------------------------------------------------------------- expansion

TEST(PauliExpand, HandTerms) {
  const auto zz = terms_by_label(pauli_expand(HermitianOp(oracle::pauli_string("ZZ")), Tps::qubits(2)));
  ASSERT_EQ(zz.size(), 1u);
  EXPECT_NEAR(std::abs(zz.at("Z.Z") - cplx(1.0)), 0.0, 1e-15);

  const HermitianOp xx(oracle::pauli_string("XI") + oracle::pauli_string("IX"));
  const ProductExpansion e = pauli_expand(xx, Tps::qubits(2));
  ASSERT_EQ(e.terms.size(), 2u);
  for (const auto& t : e.terms) EXPECT_EQ(t.weight(), 1);
}

TEST(PauliExpand, CoefficientsMatchTraceFormula) {
  Rng rng(83);
  const HermitianOp h = random_hermitian(8, rng);
  const auto got = terms_by_label(pauli_expand(h, Tps::qubits(3)));
  const std::string letters = "IXYZ";
  for (char a : letters)
    for (char b : letters)
      for (char c : letters) {
        const std::string s{a, b, c};
        const cplx ref = (oracle::pauli_string(s) * h.matrix()).trace() / 8.0;
        const std::string label{a, '.', b, '.', c};
        const cplx have = got.count(label) ? got.at(label) : cplx(0.0);
        EXPECT_LT(std::abs(have - ref), 1e-13) << label;
      }
}

TEST(PauliExpand, ResumsOnEveryModel) {
  Rng rng(89);
  std::vector<std::pair<HermitianOp, Tps>> cases;
  for (const auto& m : fixtures::model_suite()) cases.emplace_back(m.model.hamiltonian, m.model.tps);
  cases.emplace_back(random_hermitian(12, rng), Tps::canonical({2, 3, 2}));
  cases.emplace_back(random_hermitian(9, rng), Tps::canonical({3, 3}).transformed(haar_unitary(9, rng)));
  for (const auto& [h, tps] : cases) {
    const ProductExpansion e = pauli_expand(h, tps);
    EXPECT_LT(frobenius(e.resum().matrix() - h.matrix()) / std::max(1.0, frobenius(h.matrix())), 1e-9);
  }
}

TEST(LocalBasis, TraceOrthogonal) {
  for (int d : {2, 3, 4}) {
    const LocalBasis b = local_operator_basis(d);
    ASSERT_EQ(static_cast<int>(b.ops.size()), d * d);
    for (int i = 0; i < d * d; ++i)
      for (int j = 0; j < d * d; ++j) {
        const cplx ip = (b.ops[i].adjoint() * b.ops[j]).trace();
        EXPECT_NEAR(std::abs(ip), i == j ? static_cast<double>(d) : 0.0, 1e-13) << d << " " << i << " " << j;
      }
  }
}

TEST(LocalityDegree, HandCases) {
  EXPECT_EQ(locality_degree(build_ising_chain(4, 1, 1, false).hamiltonian, Tps::qubits(4)), 2);
  EXPECT_EQ(locality_degree(HermitianOp(oracle::pauli_string("XXX")), Tps::qubits(3)), 3);
  EXPECT_EQ(locality_degree(HermitianOp::identity(8) * 2.5, Tps::qubits(3)), 0);
}

TEST(LocalityDegree, InvariantUnderLocalUnitaries) {
  for (const auto& m : fixtures::model_suite()) {
    const UnitaryOp u = local_unitaries(m.model.tps.factor_dims(), 97);
    const HermitianOp rotated = conjugate(m.model.hamiltonian, u);
    EXPECT_EQ(locality_degree(rotated, m.model.tps), locality_degree(m.model.hamiltonian, m.model.tps)) << m.name;
  }
}

TEST(InteractionGraph, HandGraphs) {
  const SpaceGraph path = interaction_graph(build_ising_chain(4, 1, 1, false).hamiltonian, Tps::qubits(4));
  EXPECT_EQ(edge_pairs(path), (std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 3}}));

  Matrix free = Matrix::Zero(8, 8);
  for (int i = 0; i < 3; ++i) free += pauli::single(pauli::X(), i, 3);
  EXPECT_TRUE(interaction_graph(HermitianOp(free), Tps::qubits(3)).edges.empty());

  Matrix all = Matrix::Zero(16, 16);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) all += pauli::single(pauli::Z(), i, 4) * pauli::single(pauli::Z(), j, 4);
  EXPECT_EQ(interaction_graph(HermitianOp(all), Tps::qubits(4)).edges.size(), 6u);
}

TEST(InteractionGraph, EdgeSetInvariantUnderLocalUnitaries) {
  for (const auto& m : fixtures::model_suite()) {
    const UnitaryOp u = local_unitaries(m.model.tps.factor_dims(), 101);
    EXPECT_EQ(edge_pairs(interaction_graph(conjugate(m.model.hamiltonian, u), m.model.tps)),
              edge_pairs(interaction_graph(m.model.hamiltonian, m.model.tps)))
        << m.name;
  }
}

// ---------------------------------------------------------------- entropy

TEST(VnEntropy, HandValuesAndOracle) {
  EXPECT_NEAR(vn_entropy(HermitianOp::projector(random_ket(5, 1))), 0.0, 1e-12);
  EXPECT_NEAR(vn_entropy(HermitianOp::identity(2) * 0.5), std::log(2.0), 1e-15);
  Rng rng(103);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix g = gaussian_matrix(4, 4, rng);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace();
    EXPECT_NEAR(vn_entropy(HermitianOp::from_hermitian_part(rho)), oracle::entropy(rho), 1e-10);
  }
  EXPECT_THROW(vn_entropy(HermitianOp(pauli::Z())), ArgumentError);
  EXPECT_THROW(vn_entropy(HermitianOp::identity(2)), ArgumentError);
}

TEST(MutualInformation, BellGhzProduct) {
  const int a[] = {0}, b[] = {1}, c[] = {2}, bc[] = {1, 2};
  EXPECT_NEAR(mutual_information(ket({1, 0, 0, 1}), Tps::qubits(2), a, b), 2.0 * std::log(2.0), 1e-10);
  EXPECT_NEAR(mutual_information(ghz3(), Tps::qubits(3), a, b), std::log(2.0), 1e-10);
  EXPECT_NEAR(mutual_information(ghz3(), Tps::qubits(3), a, bc), 2.0 * std::log(2.0), 1e-10);
  const Ket parts[] = {random_ket(2, 1), random_ket(3, 2), random_ket(2, 3)};
  const Ket prod = tensor_product(parts);
  const Tps tps = Tps::canonical({2, 3, 2});
  EXPECT_NEAR(mutual_information(prod, tps, a, c), 0.0, 1e-10);
  EXPECT_NEAR(mutual_information(prod, tps, b, c), 0.0, 1e-10);
}

TEST(MutualInformation, NonNegativeAndRegionChecks) {
  Rng rng(107);
  const Tps tps = Tps::qubits(3);
  const int a[] = {0}, b[] = {1}, ab[] = {0, 1}, bad[] = {3};
  for (int trial = 0; trial < 20; ++trial) EXPECT_GE(mutual_information(random_ket(8, rng), tps, a, b), -1e-9);
  EXPECT_THROW(mutual_information(ghz3(), tps, ab, b), ArgumentError);
  EXPECT_THROW(mutual_information(ghz3(), tps, a, std::span<const int>{}), ArgumentError);
  EXPECT_THROW(mutual_information(ghz3(), tps, a, bad), ArgumentError);
}

TEST(SpaceGraph, ProductStateIsDisconnected) {
  const Model m = build_ising_chain(3, 1, 1, false);
  const SpaceGraph g = space_graph(m.hamiltonian, m.tps, Ket::basis(8, 5));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) EXPECT_EQ(g.dist_matrix[i][j], 0.0);
      else EXPECT_TRUE(std::isinf(g.dist_matrix[i][j]));
    }
  EXPECT_EQ(edge_pairs(g), (std::vector<std::pair<int, int>>{{0, 1}, {1, 2}}));
}

TEST(SpaceGraph, BellPairPlusSpectator) {
  const Ket parts[] = {ket({1, 0, 0, 1}), Ket::basis(2, 0)};
  const Ket psi = tensor_product(parts);
  const Model m = build_ising_chain(3, 1, 1, false);
  const SpaceGraph g = space_graph(m.hamiltonian, m.tps, psi);
  EXPECT_NEAR(g.dist_matrix[0][1], 0.0, 1e-12);
  EXPECT_TRUE(std::isinf(g.dist_matrix[0][2]));
  EXPECT_TRUE(std::isinf(g.dist_matrix[1][2]));
  EXPECT_NEAR(g.i_max, 2.0 * std::log(2.0), 1e-10);
  EXPECT_TRUE(g.distance_monotone());
}

TEST(SpaceGraph, SymmetricAndMonotone) {
  for (const auto& m : fixtures::model_suite()) {
    if (m.model.tps.factor_count() < 2) continue;
    const Ket psi = evolve(m.model.hamiltonian, 0.9).apply(random_ket(m.model.tps.total_dim(), 5));
    const SpaceGraph g = space_graph(m.model.hamiltonian, m.model.tps, psi);
    const int n = g.vertices;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        EXPECT_EQ(g.mi_matrix[i][j], g.mi_matrix[j][i]);
        EXPECT_EQ(g.dist_matrix[i][j], g.dist_matrix[j][i]);
      }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            if (i != j && k != l && g.mi_matrix[i][j] > g.mi_matrix[k][l])
              EXPECT_LE(g.dist_matrix[i][j], g.dist_matrix[k][l]) << m.name;
    EXPECT_TRUE(g.distance_monotone()) << m.name;
  }
}

TEST(SpaceGraph, RivalFactorizationChangesMutualInformation) {
  const Model m = build_ising_chain(4, 1, 0.7, false);
  const Ket psi = evolve(m.hamiltonian, 1.3).apply(random_ket(16, 12));
  const UnitaryOp w = *sample_commutant_unitary(commutant_basis(m.hamiltonian), 13, false).unitary;
  const Tps rival = m.tps.transformed(w);
  const SpaceGraph g0 = space_graph(m.hamiltonian, m.tps, psi);
  const SpaceGraph g1 = space_graph(m.hamiltonian, rival, psi);
  double gap = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) gap = std::max(gap, std::abs(g0.mi_matrix[i][j] - g1.mi_matrix[i][j]));
  EXPECT_GT(gap, 1e-3);
  EXPECT_EQ(locality_degree(m.hamiltonian, rival), locality_degree(m.hamiltonian, m.tps));
}

// ---------------------------------------------------------------- coherent states

TEST(CoherentFamily, NormalizedAndPeaked) {
  const auto family = coherent_family(8);
  ASSERT_EQ(family.size(), 64u);
  for (const auto& c : family) {
    EXPECT_NEAR(c.ket.amplitudes().norm(), 1.0, 1e-12);
    Eigen::Index arg = 0;
    c.ket.amplitudes().cwiseAbs().maxCoeff(&arg);
    EXPECT_EQ(static_cast<int>(arg), c.q);
  }
  EXPECT_THROW(coherent_family(3), ArgumentError);
}

TEST(CoherentFamily, FrameOperatorByDirectSummation) {
  const auto family = coherent_family(16, 1.0);
  Matrix f = Matrix::Zero(16, 16);
  for (const auto& c : family) f += c.ket.amplitudes() * c.ket.amplitudes().adjoint();
  f *= 16.0 / 256.0;
  const double c = f.diagonal().real().mean();
  const double residual = operator_norm(f - c * Matrix::Identity(16, 16));
  const FrameCheck fc = frame_check(family);
  EXPECT_NEAR(fc.c, c, 1e-12);
  EXPECT_NEAR(fc.residual, residual, 1e-12);
  EXPECT_LT(fc.residual, 0.05);
}

TEST(CoherentFamily, RivalPreservesOverlapsButNotProfiles) {
  const Model m = build_ising_chain(4, 1, 1, false);
  const auto family = coherent_family(16);
  const auto same = rival_coherent_family(family, UnitaryOp::identity(16));
  for (std::size_t i = 0; i < family.size(); ++i)
    EXPECT_LT((same[i].ket.amplitudes() - family[i].ket.amplitudes()).norm(), 1e-14);

  const UnitaryOp w = *sample_commutant_unitary(commutant_basis(m.hamiltonian), 41, false).unitary;
  const auto rival = rival_coherent_family(family, w);
  double gram = 0.0;
  for (std::size_t a = 0; a < family.size(); a += 7)
    for (std::size_t b = 0; b < family.size(); b += 5)
      gram = std::max(gram, std::abs(inner(family[a].ket, family[b].ket) - inner(rival[a].ket, rival[b].ket)));
  EXPECT_LT(gram, 1e-12);

  const KStructure occ = occupation_structure(m.tps);
  double gap = 0.0;
  for (std::size_t a = 0; a < family.size(); ++a)
    for (const auto& n : occ.ops)
      gap = std::max(gap, std::abs(expectation(n, family[a].ket).real() - expectation(n, rival[a].ket).real()));
  EXPECT_GT(gap, 1e-3);
}

TEST(CoherentFrameStructure, IsAPovm) {
  const KStructure s = coherent_frame_structure(coherent_family(6));
  EXPECT_TRUE(check_kind(s).all_passed());
  EXPECT_EQ(s.size(), 36u);
}

// ---------------------------------------------------------------- decoherence

TEST(Decoherence, InitialCoherenceAndSingleSpinClosedForm) {
  const ZurekSpec spec{{1.0}, 1.0};
  const Ket psi0 = zurek_initial_state(spec, 0.6, 0.8);
  std::vector<double> times;
  for (int i = 0; i < 50; ++i) times.push_back(0.07 * i);
  const DecoherenceTrace tr = decoherence_trace(spec, psi0, times);
  EXPECT_NEAR(tr.offdiag[0], 0.48, 1e-15);
  for (std::size_t i = 0; i < times.size(); ++i) {
    EXPECT_NEAR(tr.offdiag[i], 0.48 * std::abs(std::cos(2.0 * times[i])), 1e-12);
    EXPECT_LE(tr.offdiag[i], tr.offdiag[0] + 1e-15);
    EXPECT_NEAR(tr.populations[i], 0.36, 1e-10);
  }
}

TEST(Decoherence, GeneralProductEnvironmentOracle) {
  const ZurekSpec spec{{0.9, 0.4}, 1.3};
  const Ket parts[] = {ket({0.6, cplx(0, 0.8)}), ket({1.0, cplx(0.5, 0.2)}), ket({0.3, 1.0})};
  const Ket psi0 = tensor_product(parts);
  std::vector<double> times{0.0, 0.3, 1.1, 2.7, 5.0};
  const DecoherenceTrace tr = decoherence_trace(spec, psi0, times);
  EXPECT_LT(tr.max_dev, 1e-10);
  Vector ent(4);
  ent << 1, 0, 0, 1;
  const Ket parts2[] = {ket({1, 1}), Ket::normalized(ent)};
  const Ket entangled = tensor_product(parts2);
  EXPECT_THROW(decoherence_trace(spec, entangled, times), ArgumentError);
}

TEST(SeparableFamily, PsiIsAlwaysAProduct) {
  const Ket psi = random_ket(4, 9);
  for (const Tps& t : separable_factorization_family(psi, 3, 50)) {
    EXPECT_GT(schmidt_coefficients(psi, t).front(), 1.0 - 1e-10);
    EXPECT_EQ(t.factor_dims(), (std::vector<int>{2, 2}));
  }
  EXPECT_THROW(separable_factorization_family(psi, 1, 0), ArgumentError);
  EXPECT_THROW(separable_factorization_family(random_ket(3, 1), 1, 1), ArgumentError);
}

TEST(SeparableFamily, CanonicalCompletionOfZeroZero) {
  const Tps t = separable_factorization_family(Ket::basis(4, 0), 5, 1, Completion::Canonical).front();
  const Matrix& iso = t.iso().matrix();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(std::abs(iso(i, j)), i == j ? 1.0 : 0.0, 1e-14);
}

TEST(SeparableFamily, MembersAreInvariantDistinct) {
  const Ket psi = random_ket(4, 17);
  const auto family = separable_factorization_family(psi, 19, 200);
  const Ket refs[] = {ket({1, 0, 0, 1})};
  const HermitianOp h(oracle::pauli_string("ZZ"));
  int distinct = 0;
  for (int p = 0; p < 100; ++p) {
    const RealVector a = canonical_tps_invariants(family[2 * p], refs, h);
    const RealVector b = canonical_tps_invariants(family[2 * p + 1], refs, h);
    double gap = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) gap = std::max(gap, std::abs(a[i] - b[i]));
    if (gap > 1e-3) ++distinct;
  }
  EXPECT_GE(distinct, 90);
}

TEST(PointerDependence, IdentityPhaseAndGenericWitness) {
  const ZurekSpec spec{{1.0, 0.7}, 1.0};
  const Ket psi0 = zurek_initial_state(spec, 0.6, 0.8);
  const double t = decohered_time(spec);
  EXPECT_NEAR(t, std::numbers::pi / 4.0, 1e-15);
  EXPECT_EQ(pointer_dependence(spec, psi0, UnitaryOp::identity(8), t).gap, 0.0);

  const UnitaryOp w = *sample_commutant_unitary(commutant_basis(build_zurek(spec).hamiltonian), 3, false).unitary;
  const PointerReport r = pointer_dependence(spec, psi0, w, t);
  EXPECT_GT(r.gap, 1e-3);
  const UnitaryOp wp(w.matrix() * std::polar(1.0, 0.77));
  EXPECT_NEAR(pointer_dependence(spec, psi0, wp, t).gap, r.gap, 1e-12);

  // Second path: reduce the rival-frame density matrix with the index-sum oracle.
  const Matrix rho = HermitianOp::projector(evolve(build_zurek(spec).hamiltonian, t).apply(psi0)).matrix();
  const Matrix frame = w.matrix().adjoint() * rho * w.matrix();
  EXPECT_NEAR(r.offdiag_rival, std::abs(oracle::partial_trace(frame, {2, 2, 2}, {0})(0, 1)), 1e-12);
}
