#include "qslab/decoherence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qslab/commutant.hpp"
#include "qslab/errors.hpp"
#include "qslab/random.hpp"

namespace qslab {

std::vector<Ket> product_factors(const Ket& psi, const Tps& tps) {
  if (psi.dim() != tps.total_dim()) throw ArgumentError("product_factors: dimension mismatch");
  const HermitianOp rho = HermitianOp::projector(psi);
  std::vector<Ket> out;
  for (int f = 0; f < tps.factor_count(); ++f) {
    const int keep[] = {f};
    const HermitianOp red = partial_trace(rho, tps, keep);
    Eigen::SelfAdjointEigenSolver<Matrix> es(red.matrix());
    const int d = red.dim();
    if (es.eigenvalues()(d - 1) < 1.0 - 1e-10) throw ArgumentError("product_factors: state is not a product state");
    Vector v = es.eigenvectors().col(d - 1);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    v *= std::abs(v(arg)) / v(arg);
    out.push_back(Ket::normalized(v));
  }
  return out;
}

double zurek_coherence_oracle(const ZurekSpec& spec, const Ket& system, std::span<const Ket> environment, double t) {
  if (static_cast<int>(environment.size()) != spec.env_count())
    throw ArgumentError("zurek_coherence_oracle: one environment state per coupling required");
  double value = std::abs(system[0] * std::conj(system[1]));
  for (int k = 0; k < spec.env_count(); ++k) {
    const double w0 = std::norm(environment[k][0]);
    const double w1 = std::norm(environment[k][1]);
    const double phase = 2.0 * spec.couplings[k] * t / spec.hbar;
    value *= std::abs(w0 * std::polar(1.0, -phase) + w1 * std::polar(1.0, phase));
  }
  return value;
}

DecoherenceTrace decoherence_trace(const ZurekSpec& spec, const Ket& psi0, std::span<const double> times) {
  const Model model = build_zurek(spec);
  if (psi0.dim() != model.tps.total_dim()) throw ArgumentError("decoherence_trace: dimension mismatch");
  const std::vector<Ket> factors = product_factors(psi0, model.tps);
  const std::span<const Ket> env(factors.begin() + 1, factors.end());

  DecoherenceTrace tr;
  const int keep[] = {0};
  for (double t : times) {
    const Ket psi_t = evolve(model.hamiltonian, t, spec.hbar).apply(psi0);
    const HermitianOp rho_s = partial_trace(HermitianOp::projector(psi_t), model.tps, keep);
    tr.times.push_back(t);
    tr.offdiag.push_back(std::abs(rho_s.matrix()(0, 1)));
    tr.populations.push_back(rho_s.matrix()(0, 0).real());
    tr.oracle.push_back(zurek_coherence_oracle(spec, factors.front(), env, t));
    tr.max_dev = std::max(tr.max_dev, std::abs(tr.offdiag.back() - tr.oracle.back()));
  }
  return tr;
}

Ket zurek_initial_state(const ZurekSpec& spec, cplx a, cplx b) {
  Vector sys(2);
  sys << a, b;
  std::vector<Ket> parts{Ket::normalized(sys)};
  Vector plus(2);
  plus << 1.0, 1.0;
  for (int k = 0; k < spec.env_count(); ++k) parts.push_back(Ket::normalized(plus));
  return tensor_product(std::span<const Ket>(parts));
}

namespace {

// Gram-Schmidt step; returns false when the candidate is nearly dependent.
bool orthonormalize_into(Matrix& basis, int filled, Vector v) {
  for (int j = 0; j < filled; ++j) v -= basis.col(j) * basis.col(j).dot(v);
  for (int j = 0; j < filled; ++j) v -= basis.col(j) * basis.col(j).dot(v);
  const double n = v.norm();
  if (n < 1e-8) return false;
  basis.col(filled) = v / n;
  return true;
}

}  // namespace

std::vector<Tps> separable_factorization_family(const Ket& psi, std::uint64_t seed, int count,
                                                Completion completion) {
  if (count < 1) throw ArgumentError("separable_factorization_family: count must be >= 1");
  if (psi.dim() != 4) throw ArgumentError("separable_factorization_family: psi must have dimension 4");
  Rng rng(seed);
  std::vector<Tps> family;
  for (int member = 0; member < count; ++member) {
    Matrix basis = Matrix::Zero(4, 4);
    basis.col(0) = psi.amplitudes();
    int filled = 1;
    if (completion == Completion::Canonical) {
      for (int e = 0; e < 4 && filled < 4; ++e) {
        Vector v = Vector::Zero(4);
        v(e) = 1.0;
        if (orthonormalize_into(basis, filled, v)) ++filled;
      }
    } else {
      while (filled < 4) {
        const Matrix cand = gaussian_matrix(4, 1, rng);
        if (orthonormalize_into(basis, filled, cand.col(0))) ++filled;
      }
    }
    family.emplace_back(std::vector<int>{2, 2}, UnitaryOp(basis));
  }
  return family;
}

RealVector schmidt_coefficients(const Ket& psi, const Tps& tps) {
  if (psi.dim() != tps.total_dim()) throw ArgumentError("schmidt_coefficients: dimension mismatch");
  const Vector frame = tps.iso().matrix().adjoint() * psi.amplitudes();
  const int d0 = tps.factor_dims().front();
  const int rest = tps.total_dim() / d0;
  Matrix m(d0, rest);
  for (int i = 0; i < d0; ++i)
    for (int j = 0; j < rest; ++j) m(i, j) = frame(i * rest + j);
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  return RealVector(sv.data(), sv.data() + sv.size());
}

PointerReport pointer_dependence(const ZurekSpec& spec, const Ket& psi0, const UnitaryOp& witness, double t) {
  const Model model = build_zurek(spec);
  if (psi0.dim() != model.tps.total_dim() || witness.dim() != psi0.dim())
    throw ArgumentError("pointer_dependence: dimension mismatch");
  product_factors(psi0, model.tps);

  const HermitianOp rho = HermitianOp::projector(evolve(model.hamiltonian, t, spec.hbar).apply(psi0));
  const int keep[] = {0};
  const Tps rival = model.tps.transformed(witness);

  PointerReport rep;
  rep.time = t;
  rep.offdiag_canonical = std::abs(partial_trace(rho, model.tps, keep).matrix()(0, 1));
  rep.offdiag_rival = std::abs(partial_trace(rho, rival, keep).matrix()(0, 1));
  rep.gap = std::abs(rep.offdiag_canonical - rep.offdiag_rival);
  return rep;
}

PointerReport pointer_dependence(const ZurekSpec& spec, const Ket& psi0, std::uint64_t witness_seed, double t) {
  const Model model = build_zurek(spec);
  const CommutantSample s = sample_commutant_unitary(commutant_basis(model.hamiltonian), witness_seed, false);
  return pointer_dependence(spec, psi0, *s.unitary, t);
}

double decohered_time(const ZurekSpec& spec) {
  double gmax = 0.0;
  for (double g : spec.couplings) gmax = std::max(gmax, std::abs(g));
  if (gmax == 0.0) throw ArgumentError("decohered_time: all couplings are zero");
  return std::numbers::pi / (4.0 * gmax);
}

}  // namespace qslab
