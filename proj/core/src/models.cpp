#include "qslab/models.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "qslab/errors.hpp"
#include "qslab/random.hpp"

namespace qslab {

using nlohmann::json;

double Potential::operator()(int d) const {
  switch (kind) {
    case PotentialKind::CoulombRegularized:
      return strength / (d + 1.0);
    case PotentialKind::Harmonic:
      return strength * d * d;
    case PotentialKind::Contact:
      return d == 0 ? strength : 0.0;
  }
  return 0.0;
}

int ring_distance(int a, int b, int sites) {
  const int d = std::abs(a - b) % sites;
  return std::min(d, sites - d);
}

namespace {

void check_nrqm(const NrqmLatticeSpec& spec) {
  if (spec.particles < 1) throw ArgumentError("nrqm_lattice: particles must be >= 1");
  if (spec.sites < 2) throw ArgumentError("nrqm_lattice: sites must be >= 2");
  if (static_cast<int>(spec.masses.size()) != spec.particles)
    throw ArgumentError("nrqm_lattice: need one mass per particle");
  for (double m : spec.masses)
    if (!(m > 0.0)) throw ArgumentError("nrqm_lattice: masses must be positive");
  if (!(spec.hbar > 0.0)) throw ArgumentError("nrqm_lattice: hbar must be positive");
  long long dim = 1;
  for (int j = 0; j < spec.particles; ++j) {
    dim *= spec.sites;
    if (dim > kMaxDim)
      throw CapacityError("nrqm_lattice: sites^particles exceeds " + std::to_string(kMaxDim));
  }
}

int int_pow(int base, int exp) {
  int r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

// Digit of particle j in a configuration index (particle 0 most significant).
int position_of(int config, int particle, int particles, int sites) {
  return (config / int_pow(sites, particles - 1 - particle)) % sites;
}

}  // namespace

HermitianOp nrqm_kinetic(const NrqmLatticeSpec& spec) {
  check_nrqm(spec);
  const int L = spec.sites;
  // 2 I - S - S^dagger on the ring; spectrum 2 - 2 cos(2 pi k / L).
  Matrix lap = Matrix::Zero(L, L);
  for (int x = 0; x < L; ++x) {
    lap(x, x) += 2.0;
    lap(x, (x + 1) % L) -= 1.0;
    lap((x + 1) % L, x) -= 1.0;
  }
  const Tps tps = Tps::canonical(std::vector<int>(spec.particles, L));
  HermitianOp h = HermitianOp::zero(tps.total_dim());
  for (int j = 0; j < spec.particles; ++j) {
    const double scale = spec.hbar * spec.hbar / (2.0 * spec.masses[j]);
    h = h + tps.embed(HermitianOp(lap * scale), j);
  }
  return h;
}

HermitianOp nrqm_potential(const NrqmLatticeSpec& spec) {
  check_nrqm(spec);
  const int n = spec.particles;
  const int L = spec.sites;
  const int dim = int_pow(L, n);
  std::vector<double> diag(dim, 0.0);
  for (int c = 0; c < dim; ++c)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (j != k)
          diag[c] += spec.potential(ring_distance(position_of(c, j, n, L), position_of(c, k, n, L), L));
  return HermitianOp::diagonal(diag);
}

Model build_nrqm_lattice(const NrqmLatticeSpec& spec) {
  return Model{nrqm_kinetic(spec) + nrqm_potential(spec),
               Tps::canonical(std::vector<int>(spec.particles, spec.sites))};
}

Model build_ising_chain(int n, double coupling, double field, bool periodic) {
  if (n < 2 || n > 8) throw CapacityError("ising_chain: n must be in [2, 8]");
  const int dim = 1 << n;
  Matrix h = Matrix::Zero(dim, dim);
  const int bonds = (periodic && n > 2) ? n : n - 1;
  for (int i = 0; i < bonds; ++i) {
    const int j = (i + 1) % n;
    h -= coupling * pauli::single(pauli::Z(), i, n) * pauli::single(pauli::Z(), j, n);
  }
  for (int i = 0; i < n; ++i) h -= field * pauli::single(pauli::X(), i, n);
  return Model{HermitianOp::from_hermitian_part(h), Tps::qubits(n)};
}

Model build_zurek(const ZurekSpec& spec) {
  const int n_env = spec.env_count();
  if (n_env < 1) throw ArgumentError("zurek: need at least one environment spin");
  if (n_env + 1 > 8) throw CapacityError("zurek: N + 1 must be <= 8");
  if (!(spec.hbar > 0.0)) throw ArgumentError("zurek: hbar must be positive");
  const int n = n_env + 1;
  const int dim = 1 << n;
  // Diagonal: sz_S * sum_k g_k sz_k, with factor 0 the system spin.
  std::vector<double> diag(dim, 0.0);
  for (int c = 0; c < dim; ++c) {
    const double s_sys = ((c >> (n - 1)) & 1) ? -1.0 : 1.0;
    double env = 0.0;
    for (int k = 0; k < n_env; ++k) {
      const double s_k = ((c >> (n - 2 - k)) & 1) ? -1.0 : 1.0;
      env += spec.couplings[k] * s_k;
    }
    diag[c] = s_sys * env;
  }
  return Model{HermitianOp::diagonal(diag), Tps::qubits(n)};
}

HermitianOp build_random_spectrum(std::span<const double> eigenvalues, std::uint64_t seed) {
  const int dim = static_cast<int>(eigenvalues.size());
  if (dim < 1) throw ArgumentError("random_spectrum: empty spectrum");
  if (dim > kMaxDim) throw CapacityError("random_spectrum: dimension exceeds cap");
  const UnitaryOp v = haar_unitary(dim, seed);
  Eigen::VectorXd lam(dim);
  for (int i = 0; i < dim; ++i) lam(i) = eigenvalues[i];
  return HermitianOp::from_hermitian_part(v.matrix() * lam.cast<cplx>().asDiagonal() * v.matrix().adjoint());
}

// ---------------------------------------------------------------- JSON loading

namespace {

const json& require(const json& obj, const char* key, const std::string& ctx) {
  if (!obj.is_object() || !obj.contains(key))
    throw ArgumentError(ctx + ": missing required field '" + key + "'");
  return obj.at(key);
}

double get_number(const json& obj, const char* key, const std::string& ctx) {
  const json& v = require(obj, key, ctx);
  if (!v.is_number()) throw ArgumentError(ctx + ": field '" + key + "' must be a number");
  return v.get<double>();
}

double get_number_or(const json& obj, const char* key, double fallback, const std::string& ctx) {
  if (!obj.contains(key)) return fallback;
  return get_number(obj, key, ctx);
}

int get_int(const json& obj, const char* key, const std::string& ctx) {
  const json& v = require(obj, key, ctx);
  if (!v.is_number_integer()) throw ArgumentError(ctx + ": field '" + key + "' must be an integer");
  return v.get<int>();
}

std::vector<double> get_reals(const json& obj, const char* key, const std::string& ctx) {
  const json& v = require(obj, key, ctx);
  if (!v.is_array()) throw ArgumentError(ctx + ": field '" + key + "' must be an array");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ArgumentError(ctx + ": field '" + key + "' must contain numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

Tps default_tps(int dim) {
  if (dim >= 2 && (dim & (dim - 1)) == 0) {
    int n = 0;
    while ((1 << n) < dim) ++n;
    return Tps::qubits(n);
  }
  return Tps::canonical({dim});
}

Tps tps_from_params(const json& params, int dim, const std::string& ctx) {
  if (!params.contains("tps")) return default_tps(dim);
  std::vector<int> dims;
  for (const auto& e : params.at("tps")) {
    if (!e.is_number_integer()) throw ArgumentError(ctx + ": 'tps' must list integer factor dims");
    dims.push_back(e.get<int>());
  }
  const Tps t = Tps::canonical(dims);
  if (t.total_dim() != dim) throw ArgumentError(ctx + ": 'tps' factor dims do not match the model dimension");
  return t;
}

PotentialKind parse_potential(const std::string& name) {
  if (name == "coulomb-regularized") return PotentialKind::CoulombRegularized;
  if (name == "harmonic") return PotentialKind::Harmonic;
  if (name == "contact") return PotentialKind::Contact;
  throw ArgumentError("nrqm_lattice: unknown potential '" + name + "'");
}

}  // namespace

LoadedModel load_model(const json& doc) {
  const std::string ctx = "model";
  if (!doc.is_object()) throw ArgumentError("model: document must be a JSON object");
  const json& name_v = require(doc, "model", ctx);
  if (!name_v.is_string()) throw ArgumentError("model: 'model' must be a string");
  const std::string name = name_v.get<std::string>();
  const json params = doc.value("params", json::object());
  if (!params.is_object()) throw ArgumentError("model: 'params' must be an object");
  const std::string pctx = "model '" + name + "'";

  LoadedModel out{doc.value("id", name), name, Model{HermitianOp::zero(1), Tps::canonical({2})}, std::nullopt, 1.0};
  if (name == "ising_chain") {
    const int n = get_int(params, "n", pctx);
    const double J = get_number_or(params, "J", 1.0, pctx);
    const double h = get_number_or(params, "h", 1.0, pctx);
    const bool periodic = params.value("periodic", false);
    out.model = build_ising_chain(n, J, h, periodic);
  } else if (name == "nrqm_lattice") {
    NrqmLatticeSpec spec;
    spec.particles = get_int(params, "particles", pctx);
    spec.sites = get_int(params, "sites", pctx);
    spec.masses = params.contains("masses") ? get_reals(params, "masses", pctx)
                                            : std::vector<double>(std::max(spec.particles, 0), 1.0);
    spec.hbar = get_number_or(params, "hbar", 1.0, pctx);
    if (params.contains("potential")) {
      const json& pot = params.at("potential");
      const json& kind = require(pot, "kind", pctx + " potential");
      if (!kind.is_string()) throw ArgumentError(pctx + ": potential kind must be a string");
      spec.potential.kind = parse_potential(kind.get<std::string>());
      spec.potential.strength = get_number_or(pot, "strength", 1.0, pctx);
    }
    out.model = build_nrqm_lattice(spec);
    out.hbar = spec.hbar;
  } else if (name == "zurek") {
    ZurekSpec spec;
    spec.couplings = get_reals(params, "couplings", pctx);
    spec.hbar = get_number_or(params, "hbar", 1.0, pctx);
    out.model = build_zurek(spec);
    out.zurek = spec;
    out.hbar = spec.hbar;
  } else if (name == "random_spectrum") {
    const auto eig = get_reals(params, "eigenvalues", pctx);
    const json& seed = require(params, "seed", pctx);
    if (!seed.is_number_unsigned() && !seed.is_number_integer())
      throw ArgumentError(pctx + ": 'seed' must be an integer");
    const HermitianOp h = build_random_spectrum(eig, seed.get<std::uint64_t>());
    out.model = Model{h, tps_from_params(params, h.dim(), pctx)};
  } else if (name == "diagonal") {
    const auto entries = get_reals(params, "entries", pctx);
    if (entries.size() < 2) throw ArgumentError(pctx + ": need at least 2 entries");
    if (entries.size() > static_cast<std::size_t>(kMaxDim)) throw CapacityError(pctx + ": dimension exceeds cap");
    const HermitianOp h = HermitianOp::diagonal(entries);
    out.model = Model{h, tps_from_params(params, h.dim(), pctx)};
  } else {
    throw ArgumentError("model: unknown model name '" + name + "'");
  }
  return out;
}

}  // namespace qslab
