#include "qslab/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qslab/errors.hpp"

namespace qslab {

namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw ArgumentError(std::string(what) + ": matrix must be square and non-empty");
  if (m.rows() > kMaxDim)
    throw CapacityError(std::string(what) + ": dimension " + std::to_string(m.rows()) +
                        " exceeds " + std::to_string(kMaxDim));
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

// ---------------------------------------------------------------- Ket

Ket::Ket(Vector amplitudes, double tol) : amps_(std::move(amplitudes)) {
  if (amps_.size() == 0) throw ArgumentError("Ket: empty amplitude vector");
  if (amps_.size() > kMaxDim) throw CapacityError("Ket: dimension exceeds cap");
  const double n = amps_.norm();
  if (std::abs(n - 1.0) > tol)
    throw ArgumentError("Ket: norm " + std::to_string(n) + " is not 1");
}

Ket Ket::normalized(const Vector& v) {
  const double n = v.norm();
  if (n == 0.0 || !std::isfinite(n)) throw ArgumentError("Ket::normalized: zero vector");
  return Ket(v / n);
}

Ket Ket::basis(int dim, int index) {
  if (index < 0 || index >= dim) throw ArgumentError("Ket::basis: index out of range");
  Vector v = Vector::Zero(dim);
  v(index) = 1.0;
  return Ket(std::move(v));
}

// ---------------------------------------------------------------- HermitianOp

HermitianOp::HermitianOp(const Matrix& entries, double tol) {
  require_square(entries, "HermitianOp");
  const double scale = std::max(1.0, max_abs(entries));
  const double dev = max_abs(entries - entries.adjoint());
  if (dev > tol * scale)
    throw ArgumentError("HermitianOp: not Hermitian (deviation " + std::to_string(dev) + ")");
  m_ = 0.5 * (entries + entries.adjoint());
}

HermitianOp HermitianOp::from_hermitian_part(const Matrix& entries) {
  require_square(entries, "HermitianOp");
  return HermitianOp(Trusted{}, 0.5 * (entries + entries.adjoint()));
}

HermitianOp HermitianOp::identity(int dim) {
  return HermitianOp(Trusted{}, Matrix::Identity(dim, dim));
}

HermitianOp HermitianOp::zero(int dim) { return HermitianOp(Trusted{}, Matrix::Zero(dim, dim)); }

HermitianOp HermitianOp::diagonal(std::span<const double> entries) {
  Matrix m = Matrix::Zero(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  require_square(m, "HermitianOp::diagonal");
  return HermitianOp(Trusted{}, std::move(m));
}

HermitianOp HermitianOp::projector(const Ket& k) {
  return from_hermitian_part(k.amplitudes() * k.amplitudes().adjoint());
}

HermitianOp HermitianOp::operator+(const HermitianOp& o) const {
  if (dim() != o.dim()) throw ArgumentError("HermitianOp::+: dimension mismatch");
  return HermitianOp(Trusted{}, m_ + o.m_);
}

HermitianOp HermitianOp::operator-(const HermitianOp& o) const {
  if (dim() != o.dim()) throw ArgumentError("HermitianOp::-: dimension mismatch");
  return HermitianOp(Trusted{}, m_ - o.m_);
}

HermitianOp HermitianOp::operator*(double s) const { return HermitianOp(Trusted{}, m_ * s); }

// ---------------------------------------------------------------- UnitaryOp

UnitaryOp::UnitaryOp(Matrix entries, double tol) : m_(std::move(entries)) {
  require_square(m_, "UnitaryOp");
  const double dev = max_abs(m_ * m_.adjoint() - Matrix::Identity(m_.rows(), m_.cols()));
  if (dev > tol)
    throw ArgumentError("UnitaryOp: not unitary (deviation " + std::to_string(dev) + ")");
}

UnitaryOp UnitaryOp::identity(int dim) { return UnitaryOp(Matrix::Identity(dim, dim)); }

UnitaryOp UnitaryOp::phase(int dim, double theta) {
  return UnitaryOp(Matrix::Identity(dim, dim) * std::polar(1.0, theta));
}

UnitaryOp UnitaryOp::adjoint() const { return UnitaryOp(m_.adjoint()); }

UnitaryOp UnitaryOp::operator*(const UnitaryOp& o) const {
  if (dim() != o.dim()) throw ArgumentError("UnitaryOp::*: dimension mismatch");
  return UnitaryOp(m_ * o.m_);
}

Ket UnitaryOp::apply(const Ket& k) const {
  if (dim() != k.dim()) throw ArgumentError("UnitaryOp::apply: dimension mismatch");
  return Ket::normalized(m_ * k.amplitudes());
}

// ---------------------------------------------------------------- SpectralDecomp

int SpectralDecomp::dim() const { return std::accumulate(multiplicities.begin(), multiplicities.end(), 0); }

HermitianOp SpectralDecomp::reconstruct() const {
  Matrix m = Matrix::Zero(dim(), dim());
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) m += eigenvalues[i] * projectors[i].matrix();
  return HermitianOp::from_hermitian_part(m);
}

// ---------------------------------------------------------------- Tps

Tps::Tps(std::vector<int> factor_dims, UnitaryOp iso) : dims_(std::move(factor_dims)), iso_(std::move(iso)) {
  if (dims_.empty()) throw ArgumentError("Tps: no factors");
  long long prod = 1;
  for (int d : dims_) {
    if (d < 2) throw ArgumentError("Tps: factor dimension must be >= 2");
    prod *= d;
    if (prod > kMaxDim) throw CapacityError("Tps: total dimension exceeds cap");
  }
  if (prod != iso_.dim()) throw ArgumentError("Tps: product of factor dims does not match iso");
}

Tps Tps::canonical(std::vector<int> factor_dims) {
  long long prod = 1;
  for (int d : factor_dims) {
    prod *= std::max(d, 1);
    if (prod > kMaxDim) throw CapacityError("Tps: total dimension exceeds cap");
  }
  return Tps(std::move(factor_dims), UnitaryOp::identity(static_cast<int>(prod)));
}

Tps Tps::qubits(int n) { return canonical(std::vector<int>(static_cast<std::size_t>(n), 2)); }

int Tps::total_dim() const { return iso_.dim(); }

Tps Tps::transformed(const UnitaryOp& u) const { return Tps(dims_, u * iso_); }

HermitianOp Tps::embed(const HermitianOp& local, int factor) const {
  if (factor < 0 || factor >= factor_count()) throw ArgumentError("Tps::embed: factor out of range");
  if (local.dim() != dims_[factor]) throw ArgumentError("Tps::embed: local dimension mismatch");
  Matrix m = Matrix::Identity(1, 1);
  for (int f = 0; f < factor_count(); ++f)
    m = kron(m, f == factor ? local.matrix() : Matrix::Identity(dims_[f], dims_[f]));
  return HermitianOp::from_hermitian_part(iso_.matrix() * m * iso_.matrix().adjoint());
}

// ---------------------------------------------------------------- products

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

HermitianOp tensor_product(std::span<const HermitianOp> ops) {
  if (ops.empty()) throw ArgumentError("tensor_product: empty operand list");
  Matrix m = ops.front().matrix();
  for (std::size_t i = 1; i < ops.size(); ++i) {
    if (m.rows() * ops[i].dim() > kMaxDim) throw CapacityError("tensor_product: dimension exceeds cap");
    m = kron(m, ops[i].matrix());
  }
  return HermitianOp::from_hermitian_part(m);
}

Ket tensor_product(std::span<const Ket> kets) {
  if (kets.empty()) throw ArgumentError("tensor_product: empty operand list");
  Matrix v = kets.front().amplitudes();
  for (std::size_t i = 1; i < kets.size(); ++i) {
    if (v.rows() * kets[i].dim() > kMaxDim) throw CapacityError("tensor_product: dimension exceeds cap");
    v = kron(v, kets[i].amplitudes());
  }
  return Ket::normalized(v.col(0));
}

UnitaryOp tensor_product(std::span<const UnitaryOp> ops) {
  if (ops.empty()) throw ArgumentError("tensor_product: empty operand list");
  Matrix m = ops.front().matrix();
  for (std::size_t i = 1; i < ops.size(); ++i) {
    if (m.rows() * ops[i].dim() > kMaxDim) throw CapacityError("tensor_product: dimension exceeds cap");
    m = kron(m, ops[i].matrix());
  }
  return UnitaryOp(std::move(m));
}

// ---------------------------------------------------------------- partial trace

HermitianOp partial_trace(const HermitianOp& rho, const Tps& tps, std::span<const int> keep) {
  const int n = tps.factor_count();
  if (rho.dim() != tps.total_dim()) throw ArgumentError("partial_trace: dimension mismatch");
  std::vector<int> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  if (kept.empty() || static_cast<int>(kept.size()) >= n ||
      std::adjacent_find(kept.begin(), kept.end()) != kept.end() || kept.front() < 0 || kept.back() >= n)
    throw ArgumentError("partial_trace: keep must be a non-empty proper subset of factor indices");

  const auto& dims = tps.factor_dims();
  const Matrix frame = tps.iso().matrix().adjoint() * rho.matrix() * tps.iso().matrix();

  std::vector<bool> is_kept(n, false);
  for (int k : kept) is_kept[k] = true;

  int dim_keep = 1;
  for (int k : kept) dim_keep *= dims[k];
  const int dim_total = tps.total_dim();

  // Split each full index into (kept index, traced index).
  std::vector<int> keep_idx(dim_total), trace_idx(dim_total);
  std::vector<int> digits(n);
  for (int i = 0; i < dim_total; ++i) {
    int rem = i;
    for (int f = n - 1; f >= 0; --f) {
      digits[f] = rem % dims[f];
      rem /= dims[f];
    }
    int ki = 0, ti = 0;
    for (int f = 0; f < n; ++f) {
      if (is_kept[f])
        ki = ki * dims[f] + digits[f];
      else
        ti = ti * dims[f] + digits[f];
    }
    keep_idx[i] = ki;
    trace_idx[i] = ti;
  }

  Matrix out = Matrix::Zero(dim_keep, dim_keep);
  for (int i = 0; i < dim_total; ++i)
    for (int j = 0; j < dim_total; ++j)
      if (trace_idx[i] == trace_idx[j]) out(keep_idx[i], keep_idx[j]) += frame(i, j);
  return HermitianOp::from_hermitian_part(out);
}

// ---------------------------------------------------------------- spectra

SpectralDecomp spectral_decompose(const HermitianOp& a, double cluster_tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix());
  if (es.info() != Eigen::Success) throw ConsistencyError("spectral_decompose: eigensolver failed");
  const auto& vals = es.eigenvalues();
  const Matrix& vecs = es.eigenvectors();

  SpectralDecomp out;
  const int n = a.dim();
  int start = 0;
  while (start < n) {
    int end = start + 1;
    while (end < n && vals(end) - vals(end - 1) <= cluster_tol) ++end;
    const int m = end - start;
    double mean = 0.0;
    for (int i = start; i < end; ++i) mean += vals(i);
    Matrix basis = vecs.middleCols(start, m);
    out.eigenvalues.push_back(mean / m);
    out.multiplicities.push_back(m);
    out.projectors.push_back(HermitianOp::from_hermitian_part(basis * basis.adjoint()));
    out.eigenbases.push_back(std::move(basis));
    start = end;
  }
  return out;
}

RealVector eigenvalues(const HermitianOp& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix(), Eigen::EigenvaluesOnly);
  const auto& v = es.eigenvalues();
  return RealVector(v.data(), v.data() + v.size());
}

HermitianOp conjugate(const HermitianOp& a, const UnitaryOp& s) {
  if (a.dim() != s.dim()) throw ArgumentError("conjugate: dimension mismatch");
  return HermitianOp::from_hermitian_part(s.matrix() * a.matrix() * s.matrix().adjoint());
}

UnitaryOp evolve(const HermitianOp& h, double t, double hbar) {
  if (!(hbar > 0.0)) throw ArgumentError("evolve: hbar must be positive");
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
  const Matrix& v = es.eigenvectors();
  Vector phases(h.dim());
  for (int i = 0; i < h.dim(); ++i) phases(i) = std::polar(1.0, -es.eigenvalues()(i) * t / hbar);
  return UnitaryOp(v * phases.asDiagonal() * v.adjoint());
}

cplx expectation(const HermitianOp& a, const Ket& psi) {
  if (a.dim() != psi.dim()) throw ArgumentError("expectation: dimension mismatch");
  return psi.amplitudes().dot(a.matrix() * psi.amplitudes());
}

cplx inner(const Ket& a, const Ket& b) {
  if (a.dim() != b.dim()) throw ArgumentError("inner: dimension mismatch");
  return a.amplitudes().dot(b.amplitudes());
}

double frobenius(const Matrix& m) { return m.norm(); }

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

namespace pauli {

Matrix I() { return Matrix::Identity(2, 2); }

Matrix X() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix Y() {
  Matrix m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}

Matrix Z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Matrix single(const Matrix& p, int site, int n) {
  Matrix m = Matrix::Identity(1, 1);
  for (int i = 0; i < n; ++i) m = kron(m, i == site ? p : I());
  return m;
}

}  // namespace pauli

}  // namespace qslab
