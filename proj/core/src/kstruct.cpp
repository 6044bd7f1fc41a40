#include "qslab/kstruct.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>

#include "qslab/errors.hpp"
#include "qslab/espace.hpp"
#include "qslab/random.hpp"

namespace qslab {

const char* to_string(ConditionTag tag) {
  switch (tag) {
    case ConditionTag::Projector:
      return "Projector";
    case ConditionTag::PairwiseOrthogonal:
      return "PairwiseOrthogonal";
    case ConditionTag::ResolutionOfIdentity:
      return "ResolutionOfIdentity";
    case ConditionTag::PositiveSemidefinite:
      return "PositiveSemidefinite";
    case ConditionTag::UnitTrace:
      return "UnitTrace";
    case ConditionTag::MutualCommutation:
      return "MutualCommutation";
    case ConditionTag::DLocal:
      return "DLocal";
  }
  return "?";
}

ConditionTag condition_tag_from_string(const std::string& name) {
  for (auto tag : {ConditionTag::Projector, ConditionTag::PairwiseOrthogonal, ConditionTag::ResolutionOfIdentity,
                   ConditionTag::PositiveSemidefinite, ConditionTag::UnitTrace, ConditionTag::MutualCommutation,
                   ConditionTag::DLocal})
    if (name == to_string(tag)) return tag;
  throw ArgumentError("unknown condition tag '" + name + "'");
}

std::string Condition::name() const {
  if (tag == ConditionTag::DLocal) return "DLocal(" + std::to_string(locality) + ")";
  return to_string(tag);
}

bool KindSpec::has(ConditionTag tag) const {
  return std::any_of(conditions.begin(), conditions.end(), [&](const Condition& c) { return c.tag == tag; });
}

bool ConditionReport::all_passed() const {
  return std::all_of(results.begin(), results.end(), [](const ConditionResult& r) { return r.passed; });
}

const ConditionResult* ConditionReport::find(ConditionTag tag) const {
  for (const auto& r : results)
    if (r.condition.tag == tag) return &r;
  return nullptr;
}

int KStructure::dim() const { return ops.empty() ? 0 : ops.front().dim(); }

namespace {

double hermitian_norm(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double evaluate(const KStructure& s, const Condition& cond) {
  const int n = static_cast<int>(s.ops.size());
  const int d = s.dim();
  double r = 0.0;
  switch (cond.tag) {
    case ConditionTag::Projector:
      for (const auto& a : s.ops) r = std::max(r, hermitian_norm(a.matrix() * a.matrix() - a.matrix()));
      return r;
    case ConditionTag::PairwiseOrthogonal:
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) r = std::max(r, operator_norm(s.ops[i].matrix() * s.ops[j].matrix()));
      return r;
    case ConditionTag::ResolutionOfIdentity: {
      Matrix sum = -Matrix::Identity(d, d);
      for (const auto& a : s.ops) sum += a.matrix();
      return hermitian_norm(sum);
    }
    case ConditionTag::PositiveSemidefinite:
      for (const auto& a : s.ops) r = std::max(r, -eigenvalues(a).front());
      return r;
    case ConditionTag::UnitTrace:
      for (const auto& a : s.ops) r = std::max(r, std::abs(a.trace() - 1.0));
      return r;
    case ConditionTag::MutualCommutation:
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          const bool same_group = !s.groups.empty() && s.groups[i] == s.groups[j];
          if (same_group) continue;
          r = std::max(r, operator_norm(commutator(s.ops[i].matrix(), s.ops[j].matrix())));
        }
      return r;
    case ConditionTag::DLocal:
      if (!s.frame) return std::numeric_limits<double>::infinity();
      for (const auto& a : s.ops)
        for (const auto& term : pauli_expand(a, *s.frame).terms)
          if (term.weight() > cond.locality) r = std::max(r, std::abs(term.coefficient));
      return r;
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace

ConditionReport check_kind(const KStructure& s) {
  ConditionReport rep;
  rep.tolerance = s.kind.tolerance;
  for (const auto& cond : s.kind.conditions) {
    ConditionResult res{cond, 0.0, false};
    if (s.ops.empty()) {
      res.residual = std::numeric_limits<double>::infinity();
    } else {
      res.residual = evaluate(s, cond);
      // PSD passes when min eigenvalue > -tol; equalities when residual < tol.
      res.passed = res.residual < s.kind.tolerance;
    }
    rep.results.push_back(res);
  }
  return rep;
}

namespace {

std::string failure_summary(const ConditionReport& rep) {
  std::string msg;
  for (const auto& r : rep.results)
    if (!r.passed) {
      if (!msg.empty()) msg += ", ";
      msg += r.condition.name() + " residual " + std::to_string(r.residual);
    }
  return msg;
}

KStructure checked(KStructure s, const char* what) {
  ConditionReport rep = check_kind(s);
  if (!rep.all_passed()) throw KindError(std::string(what) + ": kind check failed (" + failure_summary(rep) + ")", rep);
  return s;
}

void require_same_dim(std::span<const HermitianOp> ops, const char* what) {
  if (ops.empty()) throw ArgumentError(std::string(what) + ": empty operator list");
  for (const auto& a : ops)
    if (a.dim() != ops.front().dim()) throw ArgumentError(std::string(what) + ": dimension mismatch");
}

}  // namespace

KStructure transform_structure(const KStructure& s, const UnitaryOp& u) {
  if (s.dim() != u.dim()) throw ArgumentError("transform_structure: dimension mismatch");
  KStructure out = s;
  for (auto& a : out.ops) a = conjugate(a, u);
  if (out.frame) out.frame = out.frame->transformed(u);
  if (check_kind(s).all_passed()) {
    const ConditionReport after = check_kind(out);
    if (!after.all_passed())
      throw ConsistencyError("transform_structure: kind lost under unitary conjugation (" + failure_summary(after) + ")");
  }
  return out;
}

KStructure make_basis_structure(std::span<const Ket> vectors) {
  if (vectors.empty()) throw ArgumentError("make_basis_structure: no vectors");
  const int d = vectors.front().dim();
  if (static_cast<int>(vectors.size()) != d)
    throw ArgumentError("make_basis_structure: need exactly dim vectors");
  for (int i = 0; i < d; ++i) {
    if (vectors[i].dim() != d) throw ArgumentError("make_basis_structure: dimension mismatch");
    for (int j = i + 1; j < d; ++j)
      if (std::abs(inner(vectors[i], vectors[j])) > 1e-10)
        throw ArgumentError("make_basis_structure: vectors are not orthonormal");
  }
  KStructure s;
  for (int i = 0; i < d; ++i) {
    s.labels.push_back(std::to_string(i));
    s.ops.push_back(HermitianOp::projector(vectors[i]));
  }
  s.kind.conditions = {{ConditionTag::Projector}, {ConditionTag::PairwiseOrthogonal},
                       {ConditionTag::ResolutionOfIdentity}, {ConditionTag::UnitTrace}};
  return checked(std::move(s), "make_basis_structure");
}

KStructure computational_basis_structure(int dim) {
  std::vector<Ket> kets;
  for (int i = 0; i < dim; ++i) kets.push_back(Ket::basis(dim, i));
  return make_basis_structure(kets);
}

std::vector<Ket> basis_vectors(const KStructure& s) {
  std::vector<Ket> out;
  for (const auto& p : s.ops) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(p.matrix());
    Vector v = es.eigenvectors().col(p.dim() - 1);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    v *= std::abs(v(arg)) / v(arg);
    out.push_back(Ket::normalized(v));
  }
  return out;
}

KStructure make_povm_structure(std::span<const HermitianOp> effects) {
  require_same_dim(effects, "make_povm_structure");
  KStructure s;
  for (std::size_t i = 0; i < effects.size(); ++i) {
    s.labels.push_back("E" + std::to_string(i));
    s.ops.push_back(effects[i]);
  }
  s.kind.conditions = {{ConditionTag::PositiveSemidefinite}, {ConditionTag::ResolutionOfIdentity}};
  return checked(std::move(s), "make_povm_structure");
}

KStructure make_pvm_structure(std::span<const HermitianOp> effects) {
  require_same_dim(effects, "make_pvm_structure");
  KStructure s;
  for (std::size_t i = 0; i < effects.size(); ++i) {
    s.labels.push_back("P" + std::to_string(i));
    s.ops.push_back(effects[i]);
  }
  s.kind.conditions = {{ConditionTag::PositiveSemidefinite}, {ConditionTag::ResolutionOfIdentity},
                       {ConditionTag::Projector}, {ConditionTag::PairwiseOrthogonal}};
  return checked(std::move(s), "make_pvm_structure");
}

KStructure make_tps_structure(const Tps& tps, int ops_per_factor, std::uint64_t seed) {
  if (ops_per_factor < 1) throw ArgumentError("make_tps_structure: ops_per_factor must be >= 1");
  Rng rng(seed);
  KStructure s;
  for (int f = 0; f < tps.factor_count(); ++f)
    for (int j = 0; j < ops_per_factor; ++j) {
      s.labels.push_back("f" + std::to_string(f) + "_" + std::to_string(j));
      s.ops.push_back(tps.embed(random_hermitian(tps.factor_dims()[f], rng), f));
      s.groups.push_back(f);
    }
  s.frame = tps;
  s.kind.conditions = {{ConditionTag::MutualCommutation}, {ConditionTag::DLocal, 1}};
  return checked(std::move(s), "make_tps_structure");
}

KStructure occupation_structure(const Tps& tps) {
  for (int d : tps.factor_dims())
    if (d != 2) throw ArgumentError("occupation_structure: every factor must be a qubit");
  Matrix n_local = Matrix::Zero(2, 2);
  n_local(1, 1) = 1.0;  // (I - sz) / 2
  KStructure s;
  for (int x = 0; x < tps.factor_count(); ++x) {
    s.labels.push_back("n" + std::to_string(x));
    s.ops.push_back(tps.embed(HermitianOp(n_local), x));
  }
  s.frame = tps;
  s.kind.conditions = {{ConditionTag::MutualCommutation}, {ConditionTag::PositiveSemidefinite},
                       {ConditionTag::Projector}};
  return checked(std::move(s), "occupation_structure");
}

RealVector canonical_tps_invariants(const Tps& tps, std::span<const Ket> reference_states, const HermitianOp& h) {
  if (h.dim() != tps.total_dim()) throw ArgumentError("canonical_tps_invariants: dimension mismatch");
  RealVector out;
  const int n = tps.factor_count();
  for (int f = 0; f < n; ++f)
    for (const auto& psi : reference_states) {
      if (psi.dim() != tps.total_dim()) throw ArgumentError("canonical_tps_invariants: dimension mismatch");
      RealVector spec;
      if (n == 1) {
        spec.assign(1, 1.0);
      } else {
        const int keep[] = {f};
        spec = eigenvalues(partial_trace(HermitianOp::projector(psi), tps, keep));
      }
      std::sort(spec.begin(), spec.end(), std::greater<>());
      out.insert(out.end(), spec.begin(), spec.end());
    }

  // Interaction weight per exact support set.
  RealVector weight(static_cast<std::size_t>(1) << n, 0.0);
  for (const auto& term : pauli_expand(h, tps).terms) {
    unsigned mask = 0;
    for (int f = 0; f < n; ++f)
      if (term.factor_ops[f] != 0) mask |= 1u << f;
    weight[mask] += std::norm(term.coefficient);
  }
  RealVector profile(weight.begin() + 1, weight.end());
  std::sort(profile.begin(), profile.end(), std::greater<>());
  out.insert(out.end(), profile.begin(), profile.end());
  return out;
}

std::uint64_t state_hash(const Ket& psi) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  auto mix = [&h](double x) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(x);
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  for (int i = 0; i < psi.dim(); ++i) {
    mix(psi[i].real());
    mix(psi[i].imag());
  }
  return h;
}

}  // namespace qslab
