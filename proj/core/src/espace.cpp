#include "qslab/espace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qslab/errors.hpp"

namespace qslab {

LocalBasis local_operator_basis(int d) {
  if (d < 2) throw ArgumentError("local_operator_basis: dimension must be >= 2");
  LocalBasis b;
  b.ops.push_back(Matrix::Identity(d, d));
  b.labels.push_back("I");
  if (d == 2) {
    b.ops.push_back(pauli::X());
    b.ops.push_back(pauli::Y());
    b.ops.push_back(pauli::Z());
    b.labels.insert(b.labels.end(), {"X", "Y", "Z"});
    return b;
  }
  // Generalized Gell-Mann, rescaled from tr = 2 to tr = d.
  const double scale = std::sqrt(d / 2.0);
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      Matrix s = Matrix::Zero(d, d);
      s(j, k) = s(k, j) = scale;
      b.ops.push_back(s);
      b.labels.push_back("S" + std::to_string(j) + std::to_string(k));
      Matrix a = Matrix::Zero(d, d);
      a(j, k) = cplx(0, -scale);
      a(k, j) = cplx(0, scale);
      b.ops.push_back(a);
      b.labels.push_back("A" + std::to_string(j) + std::to_string(k));
    }
  for (int l = 1; l < d; ++l) {
    Matrix m = Matrix::Zero(d, d);
    const double c = scale * std::sqrt(2.0 / (l * (l + 1.0)));
    for (int j = 0; j < l; ++j) m(j, j) = c;
    m(l, l) = -l * c;
    b.ops.push_back(m);
    b.labels.push_back("D" + std::to_string(l));
  }
  return b;
}

int ProductTerm::weight() const {
  return static_cast<int>(std::count_if(factor_ops.begin(), factor_ops.end(), [](int i) { return i != 0; }));
}

namespace {

// Flattened tensor with one mode per factor; contracts a matrix into one mode.
std::vector<cplx> apply_mode(const std::vector<cplx>& t, const std::vector<int>& sizes, int mode, const Matrix& m) {
  long long left = 1, right = 1;
  for (int f = 0; f < mode; ++f) left *= sizes[f];
  for (std::size_t f = mode + 1; f < sizes.size(); ++f) right *= sizes[f];
  const int in = sizes[mode];
  const int out_size = static_cast<int>(m.rows());
  std::vector<cplx> out(static_cast<std::size_t>(left * out_size * right), 0.0);
  for (long long l = 0; l < left; ++l)
    for (int i = 0; i < out_size; ++i)
      for (int p = 0; p < in; ++p) {
        const cplx mip = m(i, p);
        if (mip == 0.0) continue;
        const cplx* src = &t[static_cast<std::size_t>((l * in + p) * right)];
        cplx* dst = &out[static_cast<std::size_t>((l * out_size + i) * right)];
        for (long long r = 0; r < right; ++r) dst[r] += mip * src[r];
      }
  return out;
}

// Index of entry (row, col) in the pair-mode layout p_f = r_f * d_f + c_f.
std::vector<long long> pair_layout(const std::vector<int>& dims) {
  const int n = static_cast<int>(dims.size());
  int D = 1;
  for (int d : dims) D *= d;
  std::vector<long long> idx(static_cast<std::size_t>(D) * D);
  std::vector<int> rd(n), cd(n);
  for (int r = 0; r < D; ++r) {
    int rem = r;
    for (int f = n - 1; f >= 0; --f) {
      rd[f] = rem % dims[f];
      rem /= dims[f];
    }
    for (int c = 0; c < D; ++c) {
      int remc = c;
      for (int f = n - 1; f >= 0; --f) {
        cd[f] = remc % dims[f];
        remc /= dims[f];
      }
      long long p = 0;
      for (int f = 0; f < n; ++f) p = p * dims[f] * dims[f] + rd[f] * dims[f] + cd[f];
      idx[static_cast<std::size_t>(r) * D + c] = p;
    }
  }
  return idx;
}

}  // namespace

ProductExpansion pauli_expand(const HermitianOp& h, const Tps& tps) {
  if (h.dim() != tps.total_dim()) throw ArgumentError("pauli_expand: dimension mismatch");
  const auto& dims = tps.factor_dims();
  const int n = tps.factor_count();
  const int D = tps.total_dim();
  const Matrix frame = tps.iso().matrix().adjoint() * h.matrix() * tps.iso().matrix();

  const auto layout = pair_layout(dims);
  std::vector<cplx> t(static_cast<std::size_t>(D) * D);
  for (int r = 0; r < D; ++r)
    for (int c = 0; c < D; ++c) t[layout[static_cast<std::size_t>(r) * D + c]] = frame(r, c);

  std::vector<int> sizes;
  for (int d : dims) sizes.push_back(d * d);
  for (int f = 0; f < n; ++f) {
    const int d = dims[f];
    const LocalBasis b = local_operator_basis(d);
    // coefficient_i = tr(B_i X) / d = sum_{r,c} (B_i)_{c,r} X_{r,c} / d
    Matrix m(d * d, d * d);
    for (int i = 0; i < d * d; ++i)
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) m(i, r * d + c) = b.ops[i](c, r) / static_cast<double>(d);
    t = apply_mode(t, sizes, f, m);
  }

  double cmax = 0.0;
  for (const cplx& c : t) cmax = std::max(cmax, std::abs(c));
  const double keep_floor = 1e-15 * std::max(1.0, cmax);

  ProductExpansion out{{}, tps};
  std::vector<int> digits(n);
  for (std::size_t flat = 0; flat < t.size(); ++flat) {
    if (std::abs(t[flat]) <= keep_floor) continue;
    std::size_t rem = flat;
    for (int f = n - 1; f >= 0; --f) {
      digits[f] = static_cast<int>(rem % sizes[f]);
      rem /= sizes[f];
    }
    out.terms.push_back(ProductTerm{t[flat], digits});
  }
  return out;
}

std::string ProductExpansion::term_label(const ProductTerm& t) const {
  std::string s;
  for (std::size_t f = 0; f < t.factor_ops.size(); ++f) {
    if (f) s += '.';
    s += local_operator_basis(tps.factor_dims()[f]).labels[t.factor_ops[f]];
  }
  return s;
}

HermitianOp ProductExpansion::resum() const {
  const auto& dims = tps.factor_dims();
  const int n = tps.factor_count();
  const int D = tps.total_dim();
  std::vector<int> sizes;
  for (int d : dims) sizes.push_back(d * d);

  std::vector<cplx> t(static_cast<std::size_t>(D) * D, 0.0);
  for (const auto& term : terms) {
    std::size_t flat = 0;
    for (int f = 0; f < n; ++f) flat = flat * sizes[f] + term.factor_ops[f];
    t[flat] = term.coefficient;
  }
  for (int f = 0; f < n; ++f) {
    const int d = dims[f];
    const LocalBasis b = local_operator_basis(d);
    Matrix m(d * d, d * d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c)
        for (int i = 0; i < d * d; ++i) m(r * d + c, i) = b.ops[i](r, c);
    t = apply_mode(t, sizes, f, m);
  }
  const auto layout = pair_layout(dims);
  Matrix frame(D, D);
  for (int r = 0; r < D; ++r)
    for (int c = 0; c < D; ++c) frame(r, c) = t[layout[static_cast<std::size_t>(r) * D + c]];
  return HermitianOp::from_hermitian_part(tps.iso().matrix() * frame * tps.iso().matrix().adjoint());
}

int locality_degree(const HermitianOp& h, const Tps& tps, double coeff_floor) {
  int d = 0;
  for (const auto& term : pauli_expand(h, tps).terms)
    if (std::abs(term.coefficient) > coeff_floor) d = std::max(d, term.weight());
  return d;
}

SpaceGraph interaction_graph(const HermitianOp& h, const Tps& tps, double coeff_floor) {
  const int n = tps.factor_count();
  std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
  std::vector<std::vector<bool>> present(n, std::vector<bool>(n, false));
  for (const auto& term : pauli_expand(h, tps).terms) {
    if (std::abs(term.coefficient) <= coeff_floor) continue;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (term.factor_ops[a] != 0 && term.factor_ops[b] != 0) {
          present[a][b] = true;
          w[a][b] += std::norm(term.coefficient);
        }
  }
  SpaceGraph g;
  g.vertices = n;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (present[a][b]) g.edges.push_back({a, b, w[a][b]});
  return g;
}

bool SpaceGraph::distance_monotone() const {
  const int n = static_cast<int>(mi_matrix.size());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          if (c == d) continue;
          if (mi_matrix[a][b] > mi_matrix[c][d] && dist_matrix[a][b] > dist_matrix[c][d]) return false;
        }
    }
  return true;
}

double vn_entropy(const HermitianOp& rho) {
  const RealVector ev = eigenvalues(rho);
  if (!ev.empty() && ev.front() < -1e-9)
    throw ArgumentError("vn_entropy: density operator has negative eigenvalue " + std::to_string(ev.front()));
  if (std::abs(rho.trace() - 1.0) > 1e-9) throw ArgumentError("vn_entropy: density operator trace is not 1");
  double s = 0.0;
  for (double l : ev)
    if (l > 1e-12) s -= l * std::log(l);
  return s;
}

namespace {

double region_entropy(const HermitianOp& rho, const Tps& tps, std::vector<int> region) {
  std::sort(region.begin(), region.end());
  if (static_cast<int>(region.size()) == tps.factor_count())
    return vn_entropy(conjugate(rho, tps.iso().adjoint()));
  return vn_entropy(partial_trace(rho, tps, region));
}

void check_region(std::span<const int> r, int n) {
  if (r.empty()) throw ArgumentError("mutual_information: empty region");
  for (int f : r)
    if (f < 0 || f >= n) throw ArgumentError("mutual_information: factor index out of range");
}

}  // namespace

double mutual_information(const Ket& psi, const Tps& tps, std::span<const int> r1, std::span<const int> r2) {
  if (psi.dim() != tps.total_dim()) throw ArgumentError("mutual_information: dimension mismatch");
  const int n = tps.factor_count();
  check_region(r1, n);
  check_region(r2, n);
  for (int a : r1)
    if (std::find(r2.begin(), r2.end(), a) != r2.end())
      throw ArgumentError("mutual_information: regions overlap");
  std::vector<int> a(r1.begin(), r1.end()), b(r2.begin(), r2.end());
  std::vector<int> ab = a;
  ab.insert(ab.end(), b.begin(), b.end());
  const HermitianOp rho = HermitianOp::projector(psi);
  return region_entropy(rho, tps, a) + region_entropy(rho, tps, b) - region_entropy(rho, tps, ab);
}

SpaceGraph space_graph(const HermitianOp& h, const Tps& tps, const Ket& psi, double mi_floor) {
  SpaceGraph g = interaction_graph(h, tps);
  const int n = g.vertices;
  g.mi_floor = mi_floor;
  g.mi_matrix.assign(n, RealVector(n, 0.0));
  g.dist_matrix.assign(n, RealVector(n, kInfiniteDistance));
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const int ra[] = {a};
      const int rb[] = {b};
      const double mi = mutual_information(psi, tps, ra, rb);
      g.mi_matrix[a][b] = g.mi_matrix[b][a] = mi;
      g.i_max = std::max(g.i_max, mi);
    }
  for (int a = 0; a < n; ++a) {
    g.dist_matrix[a][a] = 0.0;
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      const double mi = g.mi_matrix[a][b];
      if (mi > mi_floor) g.dist_matrix[a][b] = std::max(0.0, -std::log(mi / g.i_max));
    }
  }
  return g;
}

std::vector<CoherentState> coherent_family(int sites, double hbar) {
  if (sites < 4) throw ArgumentError("coherent_family: need at least 4 sites");
  if (sites > kMaxDim) throw CapacityError("coherent_family: sites exceed dimension cap");
  if (!(hbar > 0.0)) throw ArgumentError("coherent_family: hbar must be positive");
  const int L = sites;
  std::vector<CoherentState> family;
  family.reserve(static_cast<std::size_t>(L) * L);
  for (int q = 0; q < L; ++q)
    for (int k = 0; k < L; ++k) {
      const double p = 2.0 * std::numbers::pi * hbar * k / L;
      Vector v(L);
      for (int x = 0; x < L; ++x) {
        int dx = ((x - q) % L + L) % L;
        if (dx > L / 2) dx -= L;
        const double envelope = std::exp(-static_cast<double>(dx) * dx / (2.0 * hbar));
        v(x) = std::polar(envelope, p * (x - q / 2.0) / hbar);
      }
      family.push_back(CoherentState{q, k, Ket::normalized(v)});
    }
  return family;
}

std::vector<CoherentState> rival_coherent_family(const std::vector<CoherentState>& family, const UnitaryOp& witness) {
  std::vector<CoherentState> out;
  out.reserve(family.size());
  for (const auto& member : family) out.push_back(CoherentState{member.q, member.k, witness.apply(member.ket)});
  return out;
}

HermitianOp frame_operator(const std::vector<CoherentState>& family) {
  if (family.empty()) throw ArgumentError("frame_operator: empty family");
  const int d = family.front().ket.dim();
  Matrix f = Matrix::Zero(d, d);
  for (const auto& m : family) f += m.ket.amplitudes() * m.ket.amplitudes().adjoint();
  return HermitianOp::from_hermitian_part(f);
}

FrameCheck frame_check(const std::vector<CoherentState>& family) {
  const HermitianOp f = frame_operator(family);
  const int d = f.dim();
  const Matrix scaled = f.matrix() * (static_cast<double>(d) / static_cast<double>(family.size()));
  FrameCheck fc;
  fc.c = scaled.trace().real() / d;
  fc.residual = operator_norm(scaled - fc.c * Matrix::Identity(d, d));
  return fc;
}

KStructure coherent_frame_structure(const std::vector<CoherentState>& family) {
  const HermitianOp f = frame_operator(family);
  Eigen::SelfAdjointEigenSolver<Matrix> es(f.matrix());
  if (es.eigenvalues().minCoeff() <= 1e-12) throw ArgumentError("coherent_frame_structure: family does not span");
  const Eigen::VectorXd inv_sqrt = es.eigenvalues().cwiseSqrt().cwiseInverse();
  const Matrix f_inv_half = es.eigenvectors() * inv_sqrt.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
  std::vector<HermitianOp> effects;
  effects.reserve(family.size());
  for (const auto& m : family) {
    const Vector v = f_inv_half * m.ket.amplitudes();
    effects.push_back(HermitianOp::from_hermitian_part(v * v.adjoint()));
  }
  KStructure s = make_povm_structure(effects);
  s.labels.clear();
  for (const auto& m : family) s.labels.push_back("q" + std::to_string(m.q) + "k" + std::to_string(m.k));
  return s;
}

}  // namespace qslab
